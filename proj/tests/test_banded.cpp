#include <doctest.h>

#include <cmath>
#include <vector>

#include "nlsfem/banded.hpp"
#include "support/oracles.hpp"

using namespace nlsfem;
using testsupport::DenseMatrix;

namespace {

BandedComplexMatrix random_banded(int n, int kl, int ku, testsupport::Rng& rng) {
  BandedComplexMatrix A(n, kl, ku);
  for (int j = 0; j < n; ++j) {
    for (int i = std::max(0, j - ku); i <= std::min(n - 1, j + kl); ++i) {
      A.ref(i, j) = rng.complex_box();
    }
  }
  return A;
}

DenseMatrix densify(const BandedComplexMatrix& A) {
  DenseMatrix D(A.n());
  for (int i = 0; i < A.n(); ++i) {
    for (int j = 0; j < A.n(); ++j) D.at(i, j) = A.at(i, j);
  }
  return D;
}

double rel_residual(const BandedComplexMatrix& A, const FieldVector& x, const FieldVector& b) {
  return norm2(matvec(A, x) - b) / norm2(b);
}

}  // namespace

TEST_CASE("matvec: identity and hand-checked tridiagonal") {
  BandedComplexMatrix I(3, 1, 1);
  for (int i = 0; i < 3; ++i) I.ref(i, i) = 1.0;
  FieldVector x(3);
  x[0] = {1.0, 2.0};
  x[1] = {-0.5, 0.0};
  x[2] = {0.0, 3.0};
  FieldVector y = matvec(I, x);
  for (int i = 0; i < 3; ++i) CHECK(y[i] == x[i]);

  BandedComplexMatrix T(3, 1, 1);
  for (int i = 0; i < 3; ++i) {
    T.ref(i, i) = 2.0;
    if (i > 0) T.ref(i, i - 1) = -1.0;
    if (i < 2) T.ref(i, i + 1) = -1.0;
  }
  FieldVector e1(3);
  e1[0] = 1.0;
  FieldVector t = matvec(T, e1);
  CHECK(t[0] == Complex{2.0, 0.0});
  CHECK(t[1] == Complex{-1.0, 0.0});
  CHECK(t[2] == Complex{0.0, 0.0});

  FieldVector wrong(4);
  CHECK_THROWS_AS(matvec(T, wrong), DimensionMismatch);
}

TEST_CASE("matvec agrees with a dense multiply") {
  testsupport::Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = rng.integer(2, 40);
    const int kl = rng.integer(0, 3), ku = rng.integer(0, 3);
    BandedComplexMatrix A = random_banded(n, kl, ku, rng);
    FieldVector x(n);
    for (int i = 0; i < n; ++i) x[i] = rng.complex_box();
    FieldVector y = matvec(A, x);
    auto yd = testsupport::dense_matvec(densify(A), x.coeffs);
    for (int i = 0; i < n; ++i) CHECK(std::abs(y[i] - yd[i]) < 1e-14);
  }
}

TEST_CASE("band lu: diagonal, complex tridiagonal, singular") {
  BandedComplexMatrix D(2, 0, 0);
  D.ref(0, 0) = 2.0;
  D.ref(1, 1) = 3.0;
  FieldVector b(2);
  b[0] = 2.0;
  b[1] = 3.0;
  FieldVector x = band_solve(band_lu(D), b);
  CHECK(std::abs(x[0] - Complex{1.0, 0.0}) < 1e-15);
  CHECK(std::abs(x[1] - Complex{1.0, 0.0}) < 1e-15);

  BandedComplexMatrix T(3, 1, 1);
  for (int i = 0; i < 3; ++i) {
    T.ref(i, i) = kImag;
    if (i > 0) T.ref(i, i - 1) = 1.0;
    if (i < 2) T.ref(i, i + 1) = 1.0;
  }
  testsupport::Rng rng(5);
  FieldVector x0(3);
  for (int i = 0; i < 3; ++i) x0[i] = rng.complex_box();
  FieldVector sol = band_solve(band_lu(T), matvec(T, x0));
  CHECK(norm2(sol - x0) < 1e-12);

  BandedComplexMatrix Z(3, 1, 1);
  CHECK_THROWS_AS(band_lu(Z), SingularMatrix);
}

TEST_CASE("band lu: pivoting handles a zero leading diagonal") {
  // without row interchange the first pivot is exactly zero
  BandedComplexMatrix A(3, 1, 1);
  A.ref(0, 0) = 0.0;
  A.ref(0, 1) = 1.0;
  A.ref(1, 0) = 2.0;
  A.ref(1, 1) = 1.0;
  A.ref(1, 2) = -1.0;
  A.ref(2, 1) = 4.0;
  A.ref(2, 2) = 1.0;
  FieldVector x0(3);
  x0[0] = {1.0, -1.0};
  x0[1] = {0.5, 2.0};
  x0[2] = {-3.0, 0.25};
  FieldVector x = band_solve(band_lu(A), matvec(A, x0));
  CHECK(norm2(x - x0) < 1e-13);
}

TEST_CASE("round-trip residual stays small for random banded systems") {
  testsupport::Rng rng(77);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = rng.integer(2, 200);
    const int kw = rng.integer(0, 3);
    BandedComplexMatrix A = random_banded(n, kw, kw, rng);
    for (int i = 0; i < n; ++i) A.ref(i, i) += 4.0;  // keep trials well-posed
    FieldVector b(n);
    for (int i = 0; i < n; ++i) b[i] = rng.complex_box();
    FieldVector x = band_solve(band_lu(A), b);
    CHECK(rel_residual(A, x, b) <= 1e-11);
  }
}

TEST_CASE("band solve agrees with dense elimination") {
  testsupport::Rng rng(78);
  for (int trial = 0; trial < 25; ++trial) {
    const int n = rng.integer(2, 50);
    const int kl = rng.integer(0, 3), ku = rng.integer(0, 3);
    BandedComplexMatrix A = random_banded(n, kl, ku, rng);
    for (int i = 0; i < n; ++i) A.ref(i, i) += 4.0;
    FieldVector b(n);
    for (int i = 0; i < n; ++i) b[i] = rng.complex_box();
    FieldVector x = band_solve(band_lu(A), b);
    auto xd = testsupport::dense_solve(densify(A), b.coeffs);
    double diff = 0.0, scale = 0.0;
    for (int i = 0; i < n; ++i) {
      diff += std::norm(x[i] - xd[i]);
      scale += std::norm(xd[i]);
    }
    CHECK(std::sqrt(diff / scale) <= 1e-11);
  }
}

TEST_CASE("solve is linear in the right-hand side") {
  testsupport::Rng rng(79);
  const int n = 60;
  BandedComplexMatrix A = random_banded(n, 2, 2, rng);
  for (int i = 0; i < n; ++i) A.ref(i, i) += 4.0;
  BandedLU lu = band_lu(A);
  FieldVector b1(n), b2(n);
  for (int i = 0; i < n; ++i) {
    b1[i] = rng.complex_box();
    b2[i] = rng.complex_box();
  }
  const Complex alpha{0.3, -1.2}, beta{-0.7, 0.4};
  FieldVector combined = lu.solve(alpha * b1 + beta * b2);
  FieldVector split = alpha * lu.solve(b1) + beta * lu.solve(b2);
  CHECK(norm2(combined - split) <= 1e-11 * norm2(split));
}

TEST_CASE("combine forms the linear pencil entrywise") {
  testsupport::Rng rng(80);
  BandedComplexMatrix A = random_banded(10, 1, 1, rng);
  BandedComplexMatrix B = random_banded(10, 1, 1, rng);
  const Complex a{2.0, 1.0}, b{0.0, -3.0};
  BandedComplexMatrix C = combine(a, A, b, B);
  for (int i = 0; i < 10; ++i) {
    for (int j = 0; j < 10; ++j) {
      CHECK(std::abs(C.at(i, j) - (a * A.at(i, j) + b * B.at(i, j))) < 1e-15);
    }
  }
  BandedComplexMatrix other(10, 2, 1);
  CHECK_THROWS_AS(combine(a, A, b, other), DimensionMismatch);
}
