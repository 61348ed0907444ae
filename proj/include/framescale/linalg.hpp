#pragma once

#include <cstddef>
#include <vector>

namespace framescale {

/// Dense row-major matrix of doubles. Everything in this library is
/// desk-scale (a few hundred rows at most), so plain contiguous storage
/// without blocking is the right tool.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::vector<double> column(std::size_t j) const;
  const std::vector<double>& data() const { return data_; }
  std::vector<double>& data() { return data_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix operator*(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);
Matrix transpose(const Matrix& a);
std::vector<double> matvec(const Matrix& a, const std::vector<double>& x);

double frobenius_norm(const Matrix& a);
double max_abs(const Matrix& a);

double dot(const std::vector<double>& a, const std::vector<double>& b);
double norm2(const std::vector<double>& v);
std::vector<double> scaled(const std::vector<double>& v, double factor);

/// Symmetric vectorization. Upper triangle in row-major order with
/// off-diagonal entries multiplied by sqrt(2), so that
/// dot(svec(A), svec(B)) equals the Frobenius inner product <A, B>.
std::size_t svec_length(std::size_t n);
std::vector<double> svec(const Matrix& symmetric);
Matrix svec_inverse(const std::vector<double>& v, std::size_t n);

struct EigenDecomposition {
  std::vector<double> eigenvalues;  // sorted descending
  Matrix eigenvectors;              // column k pairs with eigenvalues[k]
};

/// Cyclic Jacobi eigensolver for symmetric matrices. Sweeps the upper
/// triangle in row-major order and stops once the off-diagonal Frobenius
/// norm falls below 1e-12 * ||A||_F, which makes results reproducible for
/// identical inputs.
EigenDecomposition jacobi_eigen(const Matrix& symmetric);

/// Householder QR with column pivoting. rank counts leading diagonal
/// entries of R above rank_tol * |R(0,0)|.
struct PivotedQr {
  std::size_t m = 0;
  std::size_t n = 0;
  std::vector<std::vector<double>> householders;
  std::vector<double> betas;
  Matrix r;
  std::vector<std::size_t> perm;
  std::size_t rank = 0;
};

PivotedQr pivoted_qr(const Matrix& a, double rank_tol = 1e-10);

/// Minimizes ||A x - b||_2 using a pivoted factorization; variables outside
/// the leading rank block are set to zero.
std::vector<double> qr_solve(const PivotedQr& f, std::vector<double> b);

std::size_t matrix_rank(const Matrix& a, double rank_tol = 1e-10);

/// |det| of a square matrix via LU with partial pivoting.
double abs_determinant(Matrix a);

}  // namespace framescale
