#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace nlsfem {

using Complex = std::complex<double>;

inline constexpr Complex kImag{0.0, 1.0};

/// Coefficient vector of a finite element function on the free (interior)
/// DOFs of a space. Length must equal the owning space's n_dof.
struct FieldVector {
  std::vector<Complex> coeffs;

  FieldVector() = default;
  explicit FieldVector(std::size_t n) : coeffs(n, Complex{0.0, 0.0}) {}

  std::size_t size() const { return coeffs.size(); }
  Complex& operator[](std::size_t i) { return coeffs[i]; }
  const Complex& operator[](std::size_t i) const { return coeffs[i]; }

  auto begin() { return coeffs.begin(); }
  auto end() { return coeffs.end(); }
  auto begin() const { return coeffs.begin(); }
  auto end() const { return coeffs.end(); }
};

/// Euclidean inner product (x, y) = sum_i x_i * conj(y_i), matching the
/// convention (u, v) = integral of u * conj(v).
inline Complex dot(const FieldVector& x, const FieldVector& y) {
  Complex s{0.0, 0.0};
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * std::conj(y[i]);
  return s;
}

inline double norm2(const FieldVector& x) {
  double s = 0.0;
  for (const Complex& c : x.coeffs) s += std::norm(c);
  return std::sqrt(s);
}

inline FieldVector operator+(const FieldVector& x, const FieldVector& y) {
  FieldVector r(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) r[i] = x[i] + y[i];
  return r;
}

inline FieldVector operator-(const FieldVector& x, const FieldVector& y) {
  FieldVector r(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) r[i] = x[i] - y[i];
  return r;
}

inline FieldVector operator*(Complex a, const FieldVector& x) {
  FieldVector r(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) r[i] = a * x[i];
  return r;
}

}  // namespace nlsfem
