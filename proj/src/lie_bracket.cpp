#include "rpinch/lie_bracket.hpp"

#include <Eigen/SVD>
#include <cmath>

namespace rpinch {

LieBracket::LieBracket(int dim) : dim_(dim) {
  if (dim <= 0) throw InputError("LieBracket: dimension must be positive");
  c_.assign(static_cast<size_t>(dim), Matrix::Zero(dim, dim));
}

void LieBracket::set_coeff(int i, int j, int k, double value) {
  if (i < 0 || j < 0 || k < 0 || i >= dim_ || j >= dim_ || k >= dim_)
    throw InputError("LieBracket::set_coeff: index out of range");
  if (i == j && value != 0.0)
    throw StructureError("LieBracket::set_coeff: [e_i,e_i] must vanish");
  c_[static_cast<size_t>(k)](i, j) = value;
  c_[static_cast<size_t>(k)](j, i) = -value;
}

Vector LieBracket::eval(const Vector& x, const Vector& y) const {
  if (x.size() != dim_ || y.size() != dim_)
    throw InputError("LieBracket::eval: dimension mismatch");
  Vector out(dim_);
  for (int k = 0; k < dim_; ++k) out(k) = x.dot(c_[static_cast<size_t>(k)] * y);
  return out;
}

Matrix LieBracket::ad(const Vector& x) const {
  if (x.size() != dim_) throw InputError("LieBracket::ad: dimension mismatch");
  Matrix out(dim_, dim_);
  for (int k = 0; k < dim_; ++k) out.row(k) = (x.transpose() * c_[static_cast<size_t>(k)]);
  return out;
}

Matrix LieBracket::ad_basis(int i) const {
  Matrix out(dim_, dim_);
  for (int k = 0; k < dim_; ++k) out.row(k) = c_[static_cast<size_t>(k)].row(i);
  return out;
}

double LieBracket::norm() const {
  double sum = 0.0;
  for (const Matrix& ck : c_) sum += ck.squaredNorm();
  return std::sqrt(sum);
}

LieBracket LieBracket::scaled(double factor) const {
  LieBracket out(dim_);
  for (int k = 0; k < dim_; ++k) out.c_[static_cast<size_t>(k)] = factor * c_[static_cast<size_t>(k)];
  return out;
}

double jacobi_residual(const LieBracket& bracket) {
  const int n = bracket.dim();
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    const Vector ei = Vector::Unit(n, i);
    for (int j = i + 1; j < n; ++j) {
      const Vector ej = Vector::Unit(n, j);
      const Vector bij = bracket.eval(ei, ej);
      for (int k = j + 1; k < n; ++k) {
        const Vector ek = Vector::Unit(n, k);
        const Vector term = bracket.eval(bij, ek) +
                            bracket.eval(bracket.eval(ej, ek), ei) +
                            bracket.eval(bracket.eval(ek, ei), ej);
        worst = std::max(worst, term.norm());
      }
    }
  }
  return worst;
}

double is_derivation(const LieBracket& bracket, const Matrix& op) {
  const int n = bracket.dim();
  if (op.rows() != n || op.cols() != n)
    throw InputError("is_derivation: operator dimension mismatch");
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    const Vector ei = Vector::Unit(n, i);
    const Vector dei = op.col(i);
    for (int j = i + 1; j < n; ++j) {
      const Vector ej = Vector::Unit(n, j);
      const Vector defect =
          op * bracket.eval(ei, ej) - bracket.eval(dei, ej) - bracket.eval(ei, op.col(j));
      worst = std::max(worst, defect.norm());
    }
  }
  return worst;
}

LieBracket act_on_bracket(const Matrix& h, const LieBracket& bracket) {
  const int n = bracket.dim();
  if (h.rows() != n || h.cols() != n)
    throw InputError("act_on_bracket: dimension mismatch");
  Eigen::FullPivLU<Matrix> lu(h);
  if (!lu.isInvertible()) throw InputError("act_on_bracket: h is singular");
  const Matrix hinv = lu.inverse();
  LieBracket out(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const Vector moved = h * bracket.eval(hinv.col(i), hinv.col(j));
      for (int k = 0; k < n; ++k) out.set_coeff(i, j, k, moved(k));
    }
  }
  return out;
}

double bracket_norm(const LieBracket& bracket) { return bracket.norm(); }

NormalizedBracket normalize_bracket(const LieBracket& bracket, double target) {
  if (target <= 0.0) throw InputError("normalize_bracket: target must be positive");
  const double norm = bracket.norm();
  if (norm == 0.0) throw InputError("normalize_bracket: zero bracket is degenerate");
  const double scale = target / norm;
  return NormalizedBracket{bracket.scaled(scale), scale};
}

namespace {

// Orthonormal basis (as columns) of the column space of m.  The rank cut is
// relative to the largest singular value, with an absolute floor so that a
// numerically-zero image (pure roundoff noise) has rank zero.
Matrix column_space(const Matrix& m, double rel_tol, double scale_floor) {
  if (m.cols() == 0) return Matrix(m.rows(), 0);
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) <= 0.0) return Matrix(m.rows(), 0);
  const double cut = rel_tol * std::max(sv(0), scale_floor);
  int rank = 0;
  while (rank < sv.size() && sv(rank) > cut) ++rank;
  return svd.matrixU().leftCols(rank);
}

// span of [n, V] where V is given by orthonormal columns
Matrix bracket_image(const LieBracket& bracket, const Matrix& v, double rel_tol,
                     double scale_floor) {
  const int n = bracket.dim();
  Matrix stacked(n, n * v.cols());
  for (int i = 0; i < n; ++i)
    for (int c = 0; c < v.cols(); ++c)
      stacked.col(i * v.cols() + c) = bracket.eval(Vector::Unit(n, i), v.col(c));
  return column_space(stacked, rel_tol, scale_floor);
}

constexpr double kRankTol = 1e-9;

}  // namespace

CentralSeriesBlocks descending_central_decomposition(const LieBracket& bracket) {
  const int n = bracket.dim();
  const double scale = std::max(bracket.norm(), 1.0);
  // terms[i] = orthonormal basis of the (i+1)-st term of the descending central series
  std::vector<Matrix> terms;
  terms.push_back(Matrix::Identity(n, n));
  while (terms.back().cols() > 0) {
    Matrix next = bracket_image(bracket, terms.back(), kRankTol, scale);
    if (next.cols() >= terms.back().cols())
      throw NotNilpotentError("descending_central_decomposition: series stabilized at dimension " +
                              std::to_string(next.cols()));
    terms.push_back(next);
  }
  CentralSeriesBlocks out;
  for (size_t i = 0; i + 1 < terms.size(); ++i) {
    // block_i = terms[i] intersect orthogonal complement of terms[i+1]
    const Matrix& deep = terms[i + 1];
    Matrix proj = terms[i] - deep * (deep.transpose() * terms[i]);
    Matrix block = column_space(proj, kRankTol, 1.0);
    out.blocks.push_back(block);
    out.dims.push_back(static_cast<int>(block.cols()));
  }
  return out;
}

bool is_nilpotent(const LieBracket& bracket) {
  try {
    descending_central_decomposition(bracket);
    return true;
  } catch (const NotNilpotentError&) {
    return false;
  }
}

std::vector<Matrix> derivation_basis(const LieBracket& bracket, double rank_tol) {
  const int n = bracket.dim();
  const int pairs = n * (n - 1) / 2;
  if (pairs == 0) {
    std::vector<Matrix> all;
    all.push_back(Matrix::Identity(1, 1));
    return all;
  }
  // rows: defect vector components per basis pair; cols: entries of D (column-major)
  Matrix system = Matrix::Zero(pairs * n, n * n);
  int row_block = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j, ++row_block) {
      const Vector bij = bracket.eval(Vector::Unit(n, i), Vector::Unit(n, j));
      for (int p = 0; p < n; ++p) {
        for (int q = 0; q < n; ++q) {
          // coefficient of D(p,q) in D[e_i,e_j] - [De_i,e_j] - [e_i,De_j]
          Vector contrib = Vector::Zero(n);
          contrib(p) += bij(q);
          if (q == i) contrib -= bracket.eval(Vector::Unit(n, p), Vector::Unit(n, j));
          if (q == j) contrib -= bracket.eval(Vector::Unit(n, i), Vector::Unit(n, p));
          system.block(row_block * n, q * n + p, n, 1) += contrib;
        }
      }
    }
  }
  Eigen::JacobiSVD<Matrix> svd(system, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double top = sv.size() > 0 ? sv(0) : 0.0;
  int rank = 0;
  while (rank < sv.size() && sv(rank) > rank_tol * std::max(top, 1.0)) ++rank;
  std::vector<Matrix> basis;
  for (int c = rank; c < n * n; ++c) {
    Matrix d(n, n);
    for (int q = 0; q < n; ++q) d.col(q) = svd.matrixV().block(q * n, c, n, 1);
    basis.push_back(d);
  }
  return basis;
}

void validate_lie_structure(const LieBracket& bracket, bool require_nilpotent, double tol) {
  const double norm = bracket.norm();
  if (norm > 0.0) {
    const double residual = jacobi_residual(bracket.scaled(1.0 / norm));
    if (residual > tol)
      throw StructureError("Jacobi identity fails: residual " + std::to_string(residual));
  }
  if (require_nilpotent && !is_nilpotent(bracket))
    throw NotNilpotentError("bracket is not nilpotent");
}

}  // namespace rpinch
