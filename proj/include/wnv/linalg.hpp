#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace wnv {

using cxd = std::complex<double>;

/// Dense complex matrix, row-major, 64-bit components.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), entries_(rows * cols) {}
  // Validates length and rejects non-finite entries.
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cxd> entries);

  static ComplexMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  cxd& operator()(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
  const cxd& operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }

  const std::vector<cxd>& entries() const { return entries_; }

  // Copies `src` into this matrix with its (0,0) entry at (row0, col0).
  void set_block(std::size_t row0, std::size_t col0, const ComplexMatrix& src);
  ComplexMatrix block(std::size_t row0, std::size_t col0, std::size_t nrows,
                      std::size_t ncols) const;

  bool same_shape(const ComplexMatrix& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cxd> entries_;
};

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix hermitian(const ComplexMatrix& a);
double fro_norm_sq(const ComplexMatrix& a);
double fro_norm(const ComplexMatrix& a);
cxd trace(const ComplexMatrix& a);

ComplexMatrix add(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix sub(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix scale(const ComplexMatrix& a, cxd s);

/// Solves (a + ridge*I) X = b for Hermitian positive definite a + ridge*I.
ComplexMatrix solve_hpd(const ComplexMatrix& a, const ComplexMatrix& b, double ridge);

/// Applies the Moore-Penrose inverse of a full-rank h to d.
/// Wide or square h: returns H^H (H H^H)^{-1} D (minimum-norm solution).
/// Tall h: returns (H^H H)^{-1} H^H D (least-squares solution).
ComplexMatrix pinv_apply(const ComplexMatrix& h, const ComplexMatrix& d);

ComplexMatrix block_diag(const std::vector<ComplexMatrix>& blocks);

}  // namespace wnv
