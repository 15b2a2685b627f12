#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "support.hpp"
#include "wnv/linalg.hpp"
#include "wnv/rng.hpp"

using namespace wnv;
using test::random_matrix;

namespace {

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  REQUIRE(a.same_shape(b));
  double m = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m = std::max(m, std::abs(a(i, j) - b(i, j)));
  return m;
}

// Independent reference: textbook triple loop.
ComplexMatrix matmul_reference(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) {
      cxd s = 0.0;
      for (std::size_t k = 0; k < a.cols(); ++k) s += a(i, k) * b(k, j);
      c(i, j) = s;
    }
  return c;
}

// Independent least-squares oracle: plain gradient descent on ||Hx - d||^2.
ComplexMatrix lsq_gradient_descent(const ComplexMatrix& h, const ComplexMatrix& d) {
  ComplexMatrix x(h.cols(), d.cols());
  const ComplexMatrix hh = hermitian(h);
  const double step = 0.45 / fro_norm_sq(h);
  for (int it = 0; it < 200000; ++it) {
    const ComplexMatrix grad = matmul(hh, sub(matmul(h, x), d));
    if (fro_norm(grad) < 1e-12) break;
    x = sub(x, scale(grad, 2.0 * step));
  }
  return x;
}

}  // namespace

TEST_CASE("matmul identity and annihilator") {
  RandomStream rng(11);
  const ComplexMatrix a = random_matrix(rng, 2, 5);
  CHECK(max_abs_diff(matmul(ComplexMatrix::identity(2), a), a) == 0.0);
  const ComplexMatrix zero(5, 3);
  const ComplexMatrix prod = matmul(a, zero);
  CHECK(prod.rows() == 2);
  CHECK(prod.cols() == 3);
  CHECK(fro_norm_sq(prod) == 0.0);
}

TEST_CASE("matmul matches triple-loop reference") {
  RandomStream rng(12);
  const ComplexMatrix a = random_matrix(rng, 3, 4);
  const ComplexMatrix b = random_matrix(rng, 4, 2);
  CHECK(max_abs_diff(matmul(a, b), matmul_reference(a, b)) < 1e-13);
}

TEST_CASE("matmul shape mismatch names both shapes") {
  const ComplexMatrix a(3, 4), b(5, 2);
  CHECK_THROWS_WITH_AS(matmul(a, b), doctest::Contains("3x4"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(matmul(a, b), doctest::Contains("5x2"), std::invalid_argument);
}

TEST_CASE("hermitian basics") {
  ComplexMatrix d(2, 2);
  d(0, 0) = 3.0;
  d(1, 1) = -1.0;
  CHECK(max_abs_diff(hermitian(d), d) == 0.0);

  ComplexMatrix i1(1, 1);
  i1(0, 0) = cxd(0.0, 1.0);
  CHECK(hermitian(i1)(0, 0) == cxd(0.0, -1.0));

  RandomStream rng(13);
  const ComplexMatrix a = random_matrix(rng, 4, 3);
  CHECK(max_abs_diff(hermitian(hermitian(a)), a) == 0.0);  // involution, bit exact
}

TEST_CASE("frobenius norm basics and trace identity") {
  CHECK(fro_norm_sq(ComplexMatrix(3, 2)) == 0.0);
  CHECK(fro_norm_sq(ComplexMatrix::identity(5)) == doctest::Approx(5.0));

  RandomStream rng(14);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t r = 1 + static_cast<std::size_t>(rng.uniform() * 6);
    const std::size_t c = 1 + static_cast<std::size_t>(rng.uniform() * 6);
    const ComplexMatrix a = random_matrix(rng, r, c);
    const double via_trace = trace(matmul(a, hermitian(a))).real();
    CHECK(test::rel_diff(fro_norm_sq(a), via_trace) < 1e-12);
  }
}

TEST_CASE("hermitian reverses products") {
  RandomStream rng(15);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t m = 1 + static_cast<std::size_t>(rng.uniform() * 5);
    const std::size_t k = 1 + static_cast<std::size_t>(rng.uniform() * 5);
    const std::size_t n = 1 + static_cast<std::size_t>(rng.uniform() * 5);
    const ComplexMatrix a = random_matrix(rng, m, k);
    const ComplexMatrix b = random_matrix(rng, k, n);
    const ComplexMatrix lhs = hermitian(matmul(a, b));
    const ComplexMatrix rhs = matmul(hermitian(b), hermitian(a));
    CHECK(max_abs_diff(lhs, rhs) < 1e-12 * std::max(1.0, fro_norm(lhs)));
  }
}

TEST_CASE("solve_hpd trivial cases") {
  RandomStream rng(16);
  const ComplexMatrix b = random_matrix(rng, 4, 2);
  CHECK(max_abs_diff(solve_hpd(ComplexMatrix::identity(4), b, 0.0), b) < 1e-14);

  const ComplexMatrix zero(3, 3);
  const ComplexMatrix rhs = scale(ComplexMatrix::identity(3), 2.0);
  CHECK(max_abs_diff(solve_hpd(zero, rhs, 2.0), ComplexMatrix::identity(3)) < 1e-14);
}

TEST_CASE("solve_hpd residual contract") {
  RandomStream rng(17);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(rng.uniform() * 7);
    const ComplexMatrix a = random_matrix(rng, n, n);
    const ComplexMatrix gram = matmul(hermitian(a), a);
    const ComplexMatrix b = random_matrix(rng, n, 3);
    const double ridge = 0.1;
    const ComplexMatrix x = solve_hpd(gram, b, ridge);
    const ComplexMatrix lhs = add(matmul(gram, x), scale(x, ridge));
    CHECK(fro_norm(sub(lhs, b)) <= 1e-10 * fro_norm(b));
  }
}

TEST_CASE("solve_hpd error paths") {
  RandomStream rng(18);
  ComplexMatrix not_herm = random_matrix(rng, 3, 3);
  not_herm(0, 1) = not_herm(1, 0) + cxd(1.0, 0.0);
  const ComplexMatrix b(3, 1);
  CHECK_THROWS_WITH_AS(solve_hpd(not_herm, b, 0.0), doctest::Contains("Hermitian"),
                       std::invalid_argument);

  // Negative definite: the first pivot is already negative.
  const ComplexMatrix neg = scale(ComplexMatrix::identity(3), -1.0);
  CHECK_THROWS_WITH_AS(solve_hpd(neg, b, 0.0), doctest::Contains("pivot"), std::runtime_error);
}

TEST_CASE("pinv_apply identity and wide consistency") {
  RandomStream rng(19);
  const ComplexMatrix d = random_matrix(rng, 4, 2);
  CHECK(max_abs_diff(pinv_apply(ComplexMatrix::identity(4), d), d) < 1e-13);

  const ComplexMatrix h = random_matrix(rng, 3, 8);
  const ComplexMatrix x0 = random_matrix(rng, 8, 2);
  const ComplexMatrix rhs = matmul(h, x0);
  const ComplexMatrix y = pinv_apply(h, rhs);
  CHECK(fro_norm(sub(matmul(h, y), rhs)) < 1e-9 * fro_norm(rhs));
}

TEST_CASE("pinv_apply tall matches gradient-descent oracle") {
  RandomStream rng(20);
  const ComplexMatrix h = random_matrix(rng, 7, 4);
  const ComplexMatrix d = random_matrix(rng, 7, 2);
  const ComplexMatrix fast = pinv_apply(h, d);
  const ComplexMatrix slow = lsq_gradient_descent(h, d);
  CHECK(max_abs_diff(fast, slow) < 1e-6);
}

TEST_CASE("pinv_apply wide result is minimum norm") {
  RandomStream rng(21);
  for (int trial = 0; trial < 10; ++trial) {
    const ComplexMatrix h = random_matrix(rng, 3, 7);
    const ComplexMatrix d = random_matrix(rng, 3, 2);
    const ComplexMatrix v = pinv_apply(h, d);
    // Any null-space shift keeps H*Y = D but cannot reduce the norm.
    const ComplexMatrix z = random_matrix(rng, 7, 2);
    const ComplexMatrix z_range = pinv_apply(h, matmul(h, z));
    const ComplexMatrix y = add(v, sub(z, z_range));
    REQUIRE(fro_norm(sub(matmul(h, y), d)) < 1e-9);
    CHECK(fro_norm_sq(v) <= fro_norm_sq(y) + 1e-9);
  }
}

TEST_CASE("pinv_apply flags singular gram matrices") {
  ComplexMatrix h(2, 4);
  for (int j = 0; j < 4; ++j) {
    h(0, j) = 1.0;
    h(1, j) = 1.0 + 1e-7 * j;  // nearly dependent rows
  }
  const ComplexMatrix d(2, 1);
  CHECK_THROWS_WITH_AS(pinv_apply(h, d), doctest::Contains("ridge"), std::runtime_error);
}

TEST_CASE("block_diag layout") {
  RandomStream rng(22);
  const ComplexMatrix a = random_matrix(rng, 2, 3);
  CHECK(max_abs_diff(block_diag({a}), a) == 0.0);

  CHECK(max_abs_diff(block_diag({ComplexMatrix::identity(1), ComplexMatrix::identity(2)}),
                     ComplexMatrix::identity(3)) == 0.0);

  const ComplexMatrix b = random_matrix(rng, 3, 2);
  const ComplexMatrix full = block_diag({a, b});
  REQUIRE(full.rows() == 5);
  REQUIRE(full.cols() == 5);
  CHECK(max_abs_diff(full.block(0, 0, 2, 3), a) == 0.0);
  CHECK(max_abs_diff(full.block(2, 3, 3, 2), b) == 0.0);
  CHECK(fro_norm_sq(full.block(0, 3, 2, 2)) == 0.0);
  CHECK(fro_norm_sq(full.block(2, 0, 3, 3)) == 0.0);
}

TEST_CASE("construction rejects bad input") {
  CHECK_THROWS_AS(ComplexMatrix(2, 2, {cxd(1.0, 0.0)}), std::invalid_argument);
  CHECK_THROWS_WITH_AS(
      ComplexMatrix(1, 1, {cxd(std::numeric_limits<double>::quiet_NaN(), 0.0)}),
      doctest::Contains("non-finite"), std::invalid_argument);
}
