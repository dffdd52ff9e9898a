#pragma once

#include <cstdint>
#include <vector>

#include "rpinch/curvature.hpp"

namespace rpinch {

// Residuals of the solvsoliton conditions.  For rank-one data:
//   normality  |[A, A^t]|,
//   trace      |tr S(A)^2 - |Ric_n|^2|,
//   derivation |Ric_n + |Ric_n|^2 I| as a derivation of the nilradical,
//   data       |A| as a derivation of the nilradical (validity of the pair).
// For abelian tuples the analogues are max_i |[A_i, A_i^t]|, the Gram-matrix
// defect max |tr S(A_i)S(A_j) - delta_ij| after one global rescaling, and the
// pairwise commutators as the data residual.
struct SolitonCertificate {
  double normality_residual = 0.0;
  double trace_residual = 0.0;
  double derivation_residual = 0.0;
  double data_residual = 0.0;
  double tol = 1e-7;
  bool soliton = false;
  double max_residual() const;
};

// [A, A^t] / |A|^2; vanishes exactly on normal operators (minimal vectors of
// the conjugation action).
Matrix moment_map(const Matrix& a);

// Certifies against the rank-one soliton conditions; the bracket is
// renormalized to norm 2 first (with the metric-compensating rescale of A).
SolitonCertificate certify_rank_one(const RankOneData& data, double tol = 1e-7);

SolitonCertificate certify_abelian(const AbelianNilData& data, double tol = 1e-7);

// Nilsoliton test for a bare nilpotent bracket: the derivation residual of
// Ric + |Ric|^2 I at |bracket| = 2.  The zero bracket is flat and certifies.
SolitonCertificate certify_nilsoliton(const LieBracket& bracket, double tol = 1e-7);

struct NilsolitonSearchOptions {
  int max_iters = 400;
  double fd_step = 1e-6;       // finite-difference step on orbit generators
  double target_residual = 1e-6;
  std::uint64_t seed = 0;      // restart jiggle when the line search stalls
  int max_restarts = 3;
};

struct NilsolitonSearchResult {
  Matrix h;               // accumulated group element, bracket = normalize(h . start)
  LieBracket bracket{1};  // best iterate, |bracket| = 2
  double residual;     // derivation residual of Ric + |Ric|^2 I
  double ric_norm_sq;
  bool converged;
  bool flat;           // abelian input: Ric == 0, every point is fixed
  std::vector<double> energy_trace;  // |Ric|^2/|bracket|^4 after each accepted step
};

// Gradient descent of the scale-invariant energy |Ric|^2 / |bracket|^4 over
// the GL(n)-orbit of the starting bracket, renormalizing to norm 2 each step.
NilsolitonSearchResult nilsoliton_search(const LieBracket& start,
                                         const NilsolitonSearchOptions& options = {});

// Builds the rank-one solvsoliton over a certified nilsoliton: A = t * direction
// with t > 0 chosen so that tr S(A)^2 = |Ric|^2.  The direction must be a
// normal derivation with tr S(direction)^2 > 0.
RankOneData rank_one_extension(const LieBracket& nilsoliton, const Matrix& direction);

// Canonical direction Ric + |Ric|^2 I.
RankOneData rank_one_extension(const LieBracket& nilsoliton);

}  // namespace rpinch
