#include "wnv/linalg.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace wnv {

namespace {

std::string shape_str(const ComplexMatrix& a) {
  std::ostringstream os;
  os << a.rows() << "x" << a.cols();
  return os.str();
}

std::string num_str(double v) {
  std::ostringstream os;
  os.precision(6);
  os << std::scientific << v;
  return os.str();
}

struct Cholesky {
  ComplexMatrix l;   // lower triangular, a + ridge*I = L L^H
  double min_pivot;  // smallest diagonal of L before sqrt
  double max_pivot;
};

// Factors a + ridge*I = L L^H. Throws if a pivot is non-positive.
Cholesky cholesky(const ComplexMatrix& a, double ridge, const char* who) {
  const std::size_t n = a.rows();
  Cholesky f{ComplexMatrix(n, n), 0.0, 0.0};
  for (std::size_t j = 0; j < n; ++j) {
    double s = a(j, j).real() + ridge;
    for (std::size_t k = 0; k < j; ++k) s -= std::norm(f.l(j, k));
    if (!(s > 0.0) || !std::isfinite(s)) {
      throw std::runtime_error(std::string(who) +
                               ": factorization failed, matrix not positive definite "
                               "(smallest pivot " +
                               num_str(s) + ")");
    }
    if (j == 0) {
      f.min_pivot = f.max_pivot = s;
    } else {
      f.min_pivot = std::min(f.min_pivot, s);
      f.max_pivot = std::max(f.max_pivot, s);
    }
    f.l(j, j) = std::sqrt(s);
    for (std::size_t i = j + 1; i < n; ++i) {
      cxd v = a(i, j);
      for (std::size_t k = 0; k < j; ++k) v -= f.l(i, k) * std::conj(f.l(j, k));
      f.l(i, j) = v / f.l(j, j).real();
    }
  }
  return f;
}

// Solves L L^H X = b given the factor.
ComplexMatrix cholesky_solve(const Cholesky& f, const ComplexMatrix& b) {
  const std::size_t n = f.l.rows();
  ComplexMatrix x = b;
  // Forward: L y = b.
  for (std::size_t col = 0; col < b.cols(); ++col) {
    for (std::size_t i = 0; i < n; ++i) {
      cxd v = x(i, col);
      for (std::size_t k = 0; k < i; ++k) v -= f.l(i, k) * x(k, col);
      x(i, col) = v / f.l(i, i).real();
    }
    // Backward: L^H x = y.
    for (std::size_t ii = n; ii-- > 0;) {
      cxd v = x(ii, col);
      for (std::size_t k = ii + 1; k < n; ++k) v -= std::conj(f.l(k, ii)) * x(k, col);
      x(ii, col) = v / f.l(ii, ii).real();
    }
  }
  return x;
}

void check_hermitian(const ComplexMatrix& a, const char* who) {
  if (a.rows() != a.cols()) {
    throw std::invalid_argument(std::string(who) + ": matrix not square (" + shape_str(a) + ")");
  }
  double max_abs = 1.0;
  for (const cxd& v : a.entries()) max_abs = std::max(max_abs, std::abs(v));
  double max_asym = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = i; j < a.cols(); ++j)
      max_asym = std::max(max_asym, std::abs(a(i, j) - std::conj(a(j, i))));
  if (max_asym > 1e-12 * max_abs) {
    throw std::invalid_argument(std::string(who) + ": matrix not Hermitian (max asymmetry " +
                                num_str(max_asym) + ")");
  }
}

}  // namespace

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cxd> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (entries_.size() != rows_ * cols_) {
    throw std::invalid_argument("ComplexMatrix: entry count " + std::to_string(entries_.size()) +
                                " does not match shape " + shape_str(*this));
  }
  for (const cxd& v : entries_) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      throw std::invalid_argument("ComplexMatrix: non-finite entry on construction");
    }
  }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

void ComplexMatrix::set_block(std::size_t row0, std::size_t col0, const ComplexMatrix& src) {
  if (row0 + src.rows() > rows_ || col0 + src.cols() > cols_) {
    throw std::invalid_argument("set_block: block " + shape_str(src) + " at (" +
                                std::to_string(row0) + "," + std::to_string(col0) +
                                ") exceeds " + shape_str(*this));
  }
  for (std::size_t i = 0; i < src.rows(); ++i)
    for (std::size_t j = 0; j < src.cols(); ++j) (*this)(row0 + i, col0 + j) = src(i, j);
}

ComplexMatrix ComplexMatrix::block(std::size_t row0, std::size_t col0, std::size_t nrows,
                                   std::size_t ncols) const {
  if (row0 + nrows > rows_ || col0 + ncols > cols_) {
    throw std::invalid_argument("block: range exceeds " + shape_str(*this));
  }
  ComplexMatrix out(nrows, ncols);
  for (std::size_t i = 0; i < nrows; ++i)
    for (std::size_t j = 0; j < ncols; ++j) out(i, j) = (*this)(row0 + i, col0 + j);
  return out;
}

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) {
    throw std::invalid_argument("matmul: dimension mismatch (" + shape_str(a) + ")·(" +
                                shape_str(b) + ")");
  }
  ComplexMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const cxd aik = a(i, k);
      if (aik == cxd(0.0, 0.0)) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  }
  return c;
}

ComplexMatrix hermitian(const ComplexMatrix& a) {
  ComplexMatrix out(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = std::conj(a(i, j));
  return out;
}

double fro_norm_sq(const ComplexMatrix& a) {
  double s = 0.0;
  for (const cxd& v : a.entries()) s += std::norm(v);
  return s;
}

double fro_norm(const ComplexMatrix& a) { return std::sqrt(fro_norm_sq(a)); }

cxd trace(const ComplexMatrix& a) {
  cxd t = 0.0;
  for (std::size_t i = 0; i < std::min(a.rows(), a.cols()); ++i) t += a(i, i);
  return t;
}

ComplexMatrix add(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (!a.same_shape(b)) {
    throw std::invalid_argument("add: shape mismatch (" + shape_str(a) + ") vs (" + shape_str(b) +
                                ")");
  }
  ComplexMatrix c = a;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) += b(i, j);
  return c;
}

ComplexMatrix sub(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (!a.same_shape(b)) {
    throw std::invalid_argument("sub: shape mismatch (" + shape_str(a) + ") vs (" + shape_str(b) +
                                ")");
  }
  ComplexMatrix c = a;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) -= b(i, j);
  return c;
}

ComplexMatrix scale(const ComplexMatrix& a, cxd s) {
  ComplexMatrix c = a;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) *= s;
  return c;
}

ComplexMatrix solve_hpd(const ComplexMatrix& a, const ComplexMatrix& b, double ridge) {
  check_hermitian(a, "solve_hpd");
  if (a.rows() != b.rows()) {
    throw std::invalid_argument("solve_hpd: rhs rows " + std::to_string(b.rows()) +
                                " do not match matrix " + shape_str(a));
  }
  if (ridge < 0.0) throw std::invalid_argument("solve_hpd: negative ridge");
  Cholesky f = cholesky(a, ridge, "solve_hpd");
  return cholesky_solve(f, b);
}

ComplexMatrix pinv_apply(const ComplexMatrix& h, const ComplexMatrix& d) {
  if (h.rows() != d.rows()) {
    throw std::invalid_argument("pinv_apply: h is " + shape_str(h) + " but d is " + shape_str(d));
  }
  constexpr double kCondLimit = 1e12;
  const ComplexMatrix hh = hermitian(h);
  if (h.rows() <= h.cols()) {
    // Wide/square: H^H (H H^H)^{-1} D, the minimum-norm solution.
    ComplexMatrix gram = matmul(h, hh);
    Cholesky f = cholesky(gram, 0.0, "pinv_apply");
    const double cond_est = (f.max_pivot / f.min_pivot);
    if (cond_est > kCondLimit) {
      throw std::runtime_error("pinv_apply: gram matrix near singular (condition estimate " +
                               num_str(cond_est) + "); use the ridge path");
    }
    return matmul(hh, cholesky_solve(f, d));
  }
  // Tall: (H^H H)^{-1} H^H D, the least-squares solution.
  ComplexMatrix gram = matmul(hh, h);
  Cholesky f = cholesky(gram, 0.0, "pinv_apply");
  const double cond_est = (f.max_pivot / f.min_pivot);
  if (cond_est > kCondLimit) {
    throw std::runtime_error("pinv_apply: gram matrix near singular (condition estimate " +
                             num_str(cond_est) + "); use the ridge path");
  }
  return cholesky_solve(f, matmul(hh, d));
}

ComplexMatrix block_diag(const std::vector<ComplexMatrix>& blocks) {
  if (blocks.empty()) throw std::invalid_argument("block_diag: empty block list");
  std::size_t rows = 0, cols = 0;
  for (const ComplexMatrix& b : blocks) {
    rows += b.rows();
    cols += b.cols();
  }
  ComplexMatrix out(rows, cols);
  std::size_t r = 0, c = 0;
  for (const ComplexMatrix& b : blocks) {
    out.set_block(r, c, b);
    r += b.rows();
    c += b.cols();
  }
  return out;
}

}  // namespace wnv
