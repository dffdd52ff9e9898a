#pragma once

#include <Eigen/Dense>
#include <vector>

#include "rpinch/errors.hpp"

namespace rpinch {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Structure constants of an n-dimensional real Lie algebra with respect to a
// fixed orthonormal basis: coeff(i,j,k) = <[e_i, e_j], e_k>.
//
// Norm convention: |lambda|^2 sums coeff^2 over ordered pairs (i,j), so a
// single relation [e_1,e_2] = c e_3 contributes 2c^2.  Under this convention
// tr Ric_lambda = -|lambda|^2 / 4, and |lambda| = 2 gives tr Ric = -1.
class LieBracket {
 public:
  explicit LieBracket(int dim);

  int dim() const { return dim_; }

  double coeff(int i, int j, int k) const { return c_[static_cast<size_t>(k)](i, j); }

  // Sets <[e_i,e_j],e_k>; the antisymmetric counterpart (j,i,k) is kept in sync.
  void set_coeff(int i, int j, int k, double value);

  // Matrix C_k with (C_k)(i,j) = coeff(i,j,k).
  const Matrix& component(int k) const { return c_[static_cast<size_t>(k)]; }

  // [x, y]
  Vector eval(const Vector& x, const Vector& y) const;

  // Matrix of ad(x): y -> [x, y].
  Matrix ad(const Vector& x) const;
  Matrix ad_basis(int i) const;

  double norm() const;
  bool is_zero(double tol = 0.0) const { return norm() <= tol; }
  LieBracket scaled(double factor) const;

 private:
  int dim_;
  std::vector<Matrix> c_;
};

// Orthogonal decomposition n = n_1 + ... + n_k with
// n_i + n_{i+1} + ... equal to the i-th term of the descending central
// series; blocks[i] holds an orthonormal basis of n_{i+1} as columns.
struct CentralSeriesBlocks {
  std::vector<Matrix> blocks;
  std::vector<int> dims;
  int depth() const { return static_cast<int>(blocks.size()); }
};

// Max norm of [[e_i,e_j],e_k] + [[e_j,e_k],e_i] + [[e_k,e_i],e_j] over basis triples.
double jacobi_residual(const LieBracket& bracket);

// Max over basis pairs of |D[e_i,e_j] - [D e_i, e_j] - [e_i, D e_j]|;
// zero exactly when op is a derivation.
double is_derivation(const LieBracket& bracket, const Matrix& op);

// (h . lambda)(x, y) = h lambda(h^{-1} x, h^{-1} y).  Throws on singular h.
LieBracket act_on_bracket(const Matrix& h, const LieBracket& bracket);

double bracket_norm(const LieBracket& bracket);

struct NormalizedBracket {
  LieBracket bracket;
  double scale;  // bracket == scale * input
};

// Rescales so that |result| == target.  Throws on the zero bracket.
NormalizedBracket normalize_bracket(const LieBracket& bracket, double target);

// Throws NotNilpotentError if the series stabilizes above zero.
CentralSeriesBlocks descending_central_decomposition(const LieBracket& bracket);

bool is_nilpotent(const LieBracket& bracket);

// Basis of Der(bracket) inside gl(n), computed as the null space of
// D -> D[e_i,e_j] - [D e_i, e_j] - [e_i, D e_j].
std::vector<Matrix> derivation_basis(const LieBracket& bracket, double rank_tol = 1e-9);

// Ingestion gate: Jacobi residual (measured on the bracket rescaled to norm 1,
// so the tolerance is scale-free) and, when requested, nilpotency.
void validate_lie_structure(const LieBracket& bracket, bool require_nilpotent,
                            double tol = 1e-10);

}  // namespace rpinch
