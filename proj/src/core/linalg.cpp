#include "tnrg/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "tnrg/errors.hpp"

namespace tnrg {

Matrix matrix_exp(const Matrix& b) {
  if (b.rows() != b.cols()) throw Error(ErrorCategory::invalid_input, "matrix_exp needs a square matrix");
  const Eigen::Index n = b.rows();
  // Scale so that the 1-norm is at most 1/2; the Taylor remainder after 20
  // terms is then below 2^-20 / 20! ~ 4e-25 relative.
  const double norm1 = n == 0 ? 0.0 : b.cwiseAbs().colwise().sum().maxCoeff();
  int squarings = 0;
  if (norm1 > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm1 / 0.5)));
  const Matrix scaled = b / std::ldexp(1.0, squarings);

  Matrix result = Matrix::Identity(n, n);
  Matrix term = Matrix::Identity(n, n);
  for (int k = 1; k <= 30; ++k) {
    term = (term * scaled) / static_cast<double>(k);
    result += term;
    if (term.cwiseAbs().maxCoeff() <= 1e-18 * result.cwiseAbs().maxCoeff()) break;
  }
  for (int s = 0; s < squarings; ++s) result = (result * result).eval();
  return result;
}

namespace {

std::size_t dominant_index(const Eigen::Ref<const Eigen::VectorXd>& v) {
  std::size_t best = 0;
  double best_abs = -1.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v[i]) > best_abs) {
      best_abs = std::abs(v[i]);
      best = static_cast<std::size_t>(i);
    }
  }
  return best;
}

bool svd_is_sane(const Svd& f) {
  if (!f.u.allFinite() || !f.s.allFinite() || !f.v.allFinite()) return false;
  for (Eigen::Index i = 1; i < f.s.size(); ++i)
    if (f.s[i] > f.s[i - 1]) return false;
  return true;
}

}  // namespace

Svd svd(const Matrix& a) {
  const Eigen::MatrixXd col_major = a;
  Svd out;
  {
    Eigen::BDCSVD<Eigen::MatrixXd> solver(col_major, Eigen::ComputeThinU | Eigen::ComputeThinV);
    out = {solver.matrixU(), solver.singularValues(), solver.matrixV()};
    if (solver.info() != Eigen::Success) out.s.setConstant(std::numeric_limits<double>::quiet_NaN());
  }
  // Divide and conquer occasionally breaks down on highly degenerate
  // spectra (non-finite or unsorted output); redo those with Jacobi.
  if (!svd_is_sane(out)) {
    Eigen::JacobiSVD<Eigen::MatrixXd> solver(col_major, Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (solver.info() != Eigen::Success) throw Error(ErrorCategory::numerical, "SVD did not converge");
    out = {solver.matrixU(), solver.singularValues(), solver.matrixV()};
    if (!svd_is_sane(out)) throw Error(ErrorCategory::numerical, "SVD produced non-finite output");
  }
  for (Eigen::Index c = 0; c < out.u.cols(); ++c) {
    const Eigen::VectorXd col = out.u.col(c);
    if (col[static_cast<Eigen::Index>(dominant_index(col))] < 0.0) {
      out.u.col(c) *= -1.0;
      out.v.col(c) *= -1.0;
    }
  }
  return out;
}

SymEig sym_eig(const Matrix& a) {
  Eigen::MatrixXd col_major = a;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(col_major);
  if (solver.info() != Eigen::Success)
    throw Error(ErrorCategory::numerical, "eigendecomposition did not converge");
  const Eigen::Index n = a.rows();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  const auto& values = solver.eigenvalues();
  // Eigen returns ascending values; sort descending, lower index first on ties.
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index x, Eigen::Index y) { return values[x] > values[y]; });
  SymEig out{Vector(n), Matrix(n, n)};
  for (Eigen::Index c = 0; c < n; ++c) {
    out.values[c] = values[order[static_cast<std::size_t>(c)]];
    Eigen::VectorXd col = solver.eigenvectors().col(order[static_cast<std::size_t>(c)]);
    if (col[static_cast<Eigen::Index>(dominant_index(col))] < 0.0) col *= -1.0;
    out.vectors.col(c) = col;
  }
  return out;
}

Matrix unfold(const Tensor& t, std::size_t row_legs) {
  if (row_legs > t.rank()) throw Error(ErrorCategory::invalid_input, "unfold: too many row legs");
  std::size_t rows = 1;
  for (std::size_t i = 0; i < row_legs; ++i) rows *= t.dim(i);
  const std::size_t cols = t.size() / rows;
  Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  std::copy(t.data().begin(), t.data().end(), m.data());
  return m;
}

Tensor fold(const Matrix& m, std::vector<Leg> legs) {
  std::vector<double> data(m.data(), m.data() + m.size());
  return Tensor(std::move(legs), std::move(data));
}

}  // namespace tnrg
