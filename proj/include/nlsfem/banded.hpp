#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "nlsfem/errors.hpp"
#include "nlsfem/types.hpp"

namespace nlsfem {

namespace stats {
// Instrumentation for the linearly-implicit contract: a time step must cost
// exactly two factorizations and two solves.
inline std::atomic<std::uint64_t> lu_factorizations{0};
inline std::atomic<std::uint64_t> lu_solves{0};
}  // namespace stats

/// Square complex matrix with kl sub- and ku super-diagonals, stored
/// column-major in (kl+ku+1) x n band layout: entry (i,j) lives at row
/// i-j+ku of column j. Entries outside the band are identically zero.
class BandedComplexMatrix {
 public:
  BandedComplexMatrix(int n, int kl, int ku)
      : n_(n), kl_(kl), ku_(ku), entries_((kl + ku + 1) * static_cast<std::size_t>(n)) {
    if (n < 1 || kl < 0 || ku < 0) throw InvalidArgument("BandedComplexMatrix: bad shape");
  }

  int n() const { return n_; }
  int kl() const { return kl_; }
  int ku() const { return ku_; }

  bool in_band(int i, int j) const {
    return i >= 0 && i < n_ && j >= 0 && j < n_ && i - j <= kl_ && j - i <= ku_;
  }

  Complex at(int i, int j) const {
    return in_band(i, j) ? entries_[index(i, j)] : Complex{0.0, 0.0};
  }

  Complex& ref(int i, int j) {
    if (!in_band(i, j)) throw InvalidArgument("BandedComplexMatrix: entry outside band");
    return entries_[index(i, j)];
  }

  /// this + other entrywise, same shape required.
  void check_same_shape(const BandedComplexMatrix& o) const {
    if (n_ != o.n_ || kl_ != o.kl_ || ku_ != o.ku_) {
      throw DimensionMismatch("banded matrices have different shapes");
    }
  }

 private:
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(i - j + ku_) + static_cast<std::size_t>(j) * (kl_ + ku_ + 1);
  }

  int n_, kl_, ku_;
  std::vector<Complex> entries_;

  friend BandedComplexMatrix combine(Complex, const BandedComplexMatrix&, Complex,
                                     const BandedComplexMatrix&);
  friend class BandedLU;
};

/// a*A + b*B over the shared band.
inline BandedComplexMatrix combine(Complex a, const BandedComplexMatrix& A, Complex b,
                                   const BandedComplexMatrix& B) {
  A.check_same_shape(B);
  BandedComplexMatrix C(A.n(), A.kl(), A.ku());
  for (std::size_t k = 0; k < C.entries_.size(); ++k) {
    C.entries_[k] = a * A.entries_[k] + b * B.entries_[k];
  }
  return C;
}

inline FieldVector matvec(const BandedComplexMatrix& A, const FieldVector& x) {
  if (static_cast<int>(x.size()) != A.n()) {
    throw DimensionMismatch("matvec: vector length " + std::to_string(x.size()) +
                            " vs matrix dimension " + std::to_string(A.n()));
  }
  FieldVector y(x.size());
  const int n = A.n();
  for (int j = 0; j < n; ++j) {
    const int ilo = std::max(0, j - A.ku());
    const int ihi = std::min(n - 1, j + A.kl());
    for (int i = ilo; i <= ihi; ++i) y[i] += A.at(i, j) * x[j];
  }
  return y;
}

/// Banded LU with partial pivoting. Factor storage follows the LAPACK band
/// convention: 2kl+ku+1 rows per column, the extra kl super-diagonals absorb
/// pivoting fill-in. Row interchanges are recorded, L stays implicitly
/// permuted.
class BandedLU {
 public:
  explicit BandedLU(const BandedComplexMatrix& A)
      : n_(A.n()),
        kl_(A.kl()),
        ku_(A.ku()),
        rows_(2 * A.kl() + A.ku() + 1),
        f_(static_cast<std::size_t>(rows_) * A.n()),
        piv_(A.n()) {
    for (int j = 0; j < n_; ++j) {
      const int ilo = std::max(0, j - ku_);
      const int ihi = std::min(n_ - 1, j + kl_);
      for (int i = ilo; i <= ihi; ++i) fac(i, j) = A.at(i, j);
    }
    factorize();
  }

  int n() const { return n_; }

  /// Solves A x = b for the matrix this factorization was built from.
  FieldVector solve(const FieldVector& b) const {
    if (static_cast<int>(b.size()) != n_) {
      throw DimensionMismatch("band_solve: right-hand side length mismatch");
    }
    stats::lu_solves.fetch_add(1, std::memory_order_relaxed);
    FieldVector x = b;
    const int kd = kl_ + ku_;
    // forward elimination with the recorded interchanges
    for (int j = 0; j < n_; ++j) {
      if (piv_[j] != j) std::swap(x[j], x[piv_[j]]);
      const int ihi = std::min(n_ - 1, j + kl_);
      for (int i = j + 1; i <= ihi; ++i) x[i] -= fac(i, j) * x[j];
    }
    // back substitution; U has upper bandwidth kl+ku after pivoting
    for (int j = n_ - 1; j >= 0; --j) {
      x[j] /= fac(j, j);
      const int ilo = std::max(0, j - kd);
      for (int i = ilo; i < j; ++i) x[i] -= fac(i, j) * x[j];
    }
    return x;
  }

 private:
  Complex& fac(int i, int j) {
    return f_[static_cast<std::size_t>(i - j + kl_ + ku_) + static_cast<std::size_t>(j) * rows_];
  }
  const Complex& fac(int i, int j) const {
    return f_[static_cast<std::size_t>(i - j + kl_ + ku_) + static_cast<std::size_t>(j) * rows_];
  }

  void factorize() {
    stats::lu_factorizations.fetch_add(1, std::memory_order_relaxed);
    const int kd = kl_ + ku_;
    for (int j = 0; j < n_; ++j) {
      const int ihi = std::min(n_ - 1, j + kl_);
      int p = j;
      double amax = std::abs(fac(j, j));
      for (int i = j + 1; i <= ihi; ++i) {
        double a = std::abs(fac(i, j));
        if (a > amax) {
          amax = a;
          p = i;
        }
      }
      piv_[j] = p;
      if (!(amax >= 1e-300)) {
        throw SingularMatrix("band_lu: pivot " + std::to_string(j) + " is numerically zero");
      }
      const int jhi = std::min(n_ - 1, j + kd);
      if (p != j) {
        for (int c = j; c <= jhi; ++c) std::swap(fac(j, c), fac(p, c));
      }
      for (int i = j + 1; i <= ihi; ++i) {
        Complex m = fac(i, j) / fac(j, j);
        fac(i, j) = m;
        if (m != Complex{0.0, 0.0}) {
          for (int c = j + 1; c <= jhi; ++c) fac(i, c) -= m * fac(j, c);
        }
      }
    }
  }

  int n_, kl_, ku_, rows_;
  std::vector<Complex> f_;
  std::vector<int> piv_;
};

inline BandedLU band_lu(const BandedComplexMatrix& A) { return BandedLU(A); }

inline FieldVector band_solve(const BandedLU& lu, const FieldVector& b) { return lu.solve(b); }

}  // namespace nlsfem
