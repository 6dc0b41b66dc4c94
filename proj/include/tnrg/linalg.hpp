#pragma once
// Dense linear algebra helpers on row-major Eigen matrices.

#include <Eigen/Dense>

#include "tnrg/tensor.hpp"

namespace tnrg {

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

/// exp(b) by scaling and squaring of a truncated Taylor series, accurate to
/// machine precision. The inverse of exp(b) is obtained as matrix_exp(-b).
Matrix matrix_exp(const Matrix& b);

/// a = u * diag(s) * v^T with s descending. Each column of u has its largest
/// entry (first among ties) positive; v is flipped accordingly.
struct Svd {
  Matrix u;
  Vector s;
  Matrix v;
};
Svd svd(const Matrix& a);

/// Symmetric eigendecomposition with eigenvalues descending; eigenvector sign
/// fixed like Svd::u. Ties keep the lower original index first.
struct SymEig {
  Vector values;
  Matrix vectors;
};
SymEig sym_eig(const Matrix& a);

/// Unfolds t into a matrix: the first `row_legs` legs index rows.
Matrix unfold(const Tensor& t, std::size_t row_legs);
/// Refolds a matrix with the given row-then-column leg structure.
Tensor fold(const Matrix& m, std::vector<Leg> legs);

}  // namespace tnrg
