#pragma once

#include <limits>
#include <optional>
#include <vector>

#include "rpinch/lie_bracket.hpp"

namespace rpinch {

// Solvable metric Lie algebra s = RY + n with codimension-one nilradical,
// presented by the pair (A, bracket) = (ad Y|_n, Lie bracket of n) relative
// to an orthonormal basis with Y orthogonal to n and |Y| = 1.
struct RankOneData {
  Matrix A;
  LieBracket bracket;
};

// Solvable metric Lie algebra with abelian nilradical: a commuting tuple
// (A_1, ..., A_r) of operators on n = R^{dim_n}, A_i = ad Y_i|_n, with the
// orthonormal a-basis {Y_i} orthogonal to n.
struct AbelianNilData {
  std::vector<Matrix> ops;
  int dim_a() const { return static_cast<int>(ops.size()); }
  int dim_n() const { return ops.empty() ? 0 : static_cast<int>(ops.front().rows()); }
};

// Ingestion checks: A must be a derivation of the (nilpotent) bracket, the
// tuple must commute pairwise and be linearly independent.
void validate_rank_one(const RankOneData& data, double tol = 1e-9);
void validate_abelian(const AbelianNilData& data, double tol = 1e-9);

struct RicciReport {
  Matrix ric;
  double scal = 0.0;
  double ric_norm_sq = 0.0;
  double F = std::numeric_limits<double>::quiet_NaN();
  bool flat = false;
  // Remainder of the rank-one denominator decomposition
  //   |Ric|^2 = trS(A)^2 (trS(A)^2 + (tr A)^2) + |Ric_n|^2 + |[A,A^t]|^2/4 + G;
  // only set for rank-one inputs.
  std::optional<double> G;
};

inline Matrix sym_part(const Matrix& a) { return 0.5 * (a + a.transpose()); }
inline Matrix commutator(const Matrix& a, const Matrix& b) { return a * b - b * a; }

// Ricci operator of the nilmanifold defined by a nilpotent bracket:
//   <Ric x, y> = -1/2 sum <[x,e_i],e_j><[y,e_i],e_j>
//                +1/4 sum <[e_i,e_j],x><[e_i,e_j],y>.
// tr(nil_ricci(lambda)) = -|lambda|^2 / 4.
Matrix nil_ricci(const LieBracket& bracket);

struct RankOneRicciBlocks {
  double corner;  // -tr S(A)^2
  Matrix nblock;  // Ric_n + [A,A^t]/2 - (tr A) S(A)
};
RankOneRicciBlocks rank_one_ricci_blocks(const RankOneData& data);

// Block diagonal: a-block R_ij = -tr S(A_i)S(A_j);
// n-block sum([A_i,A_i^t])/2 - sum((tr A_i) S(A_i)).
Matrix abelian_ricci(const AbelianNilData& data);

// Full structure constants of the solvable metric algebra, a-part first.
struct SolvableAlgebra {
  LieBracket full;
  int dim_a;
  int dim_n() const { return full.dim() - dim_a; }
};
SolvableAlgebra assemble(const RankOneData& data);
SolvableAlgebra assemble(const AbelianNilData& data);

// Independent full-matrix Ricci oracle: Ric = M - B/2 - S(ad_H), where M is
// the nil_ricci-style double sum over the whole algebra, B the Killing-form
// operator B_xy = tr(ad e_x ad e_y), and H the mean-curvature vector
// <H, x> = tr ad x.  Supplies the off-diagonal entries the block formulas
// leave unnamed.
RicciReport generic_ricci(const SolvableAlgebra& algebra);
RicciReport generic_ricci(const RankOneData& data);   // also fills G
RicciReport generic_ricci(const AbelianNilData& data);

// (tr ric)^2 / tr(ric^2); throws FlatMetricError when ric vanishes.
double pinching_F(const Matrix& ric);

}  // namespace rpinch
