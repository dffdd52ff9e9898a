#pragma once

#include <cstdint>
#include <vector>

#include "rpinch/curvature.hpp"
#include "rpinch/moves.hpp"

namespace rpinch {

// F evaluated through the closed rank-one form
//   (trS(A)^2 + (tr A)^2 + 1)^2 / (trS(A)^2(trS(A)^2 + (tr A)^2)
//     + |Ric_n|^2 + |[A,A^t]|^2/4 + G),
// with G taken from the full-matrix oracle.  The pair is renormalized to
// |bracket| = 2 first (a metric rescaling, so F is unchanged).
double F_rank_one(const RankOneData& data);

// F through the abelian closed form, after rotating the a-basis so that
// tr A_i = 0 for i >= 2.
double F_abelian(const AbelianNilData& data);

// Scalar parameters of a soliton operator:
//   x0 = |A|^2/2, b = tr(A^2)/2, a = b + (tr A)^2.
struct RankOneParams {
  double x0;
  double a;
  double b;
};
RankOneParams rank_one_params(const Matrix& a);

// The scalars of the one-variable reduction of a moved metric.  T = x + b
// identically, and x >= x0 by the orbit-closure inequality.
struct RankOneReduction {
  double x0, a, b;
  double x;  // |h(A - ad(h^{-1}X))h^{-1}|^2 / 2, h rescaled so |h.bracket| = 2
  double T;  // tr S(h(A - ad(h^{-1}X))h^{-1})^2
  double c;  // move scalar after the bracket renormalization
};
RankOneReduction reduce_rank_one(const RankOneData& soliton, const RankOneMove& move);

// f(x, c) = (c^2(x+a) + 1)^2 / (c^4(x+b)(x+a) + x0 + b).
double f_rank_one(double x, double c, const RankOneParams& params);

enum class CertificateVerdict { PositiveOnHalfline, EqualityAtX0, Violated };

// Quadratic certificate p(x) = r x^2 + s x + t >= 0 for x >= x0, equivalent
// to f(x, c) <= f(x0, 1).  Case split: p(x0) >= 0 with p'(x0) >= 0 settles
// the half-line; otherwise the discriminant must be negative (it vanishes
// identically when a == b).
struct PolynomialCertificate {
  double r, s, t;
  double disc;      // s^2 - 4 r t
  double p_at_x0;   // equals (x0+a)(x0+b)(c^2-1)^2
  double dp_at_x0;  // 2 r x0 + s
  CertificateVerdict verdict;
};
PolynomialCertificate lemma_fAn_certificate(const RankOneParams& params, double c);

// f(x_1,...,x_r) = (sum x_i + a)^2 / (sum x_i^2 + a x_1).
double f_abelian(const Vector& xs, double a);

// The three-term decomposition of (r+a)(sum x^2 + a x1) - (sum x + a)^2:
//   t1 = (r-1) sum x_i^2 - sum_{i != j} x_i x_j   (Cauchy-Schwarz)
//   t2 = a^2 (x_1 - 1)
//   t3 = a (sum x_i^2 - 2 sum x_i + r x_1) >= a sum (x_i - 1)^2
// Requires x_1 >= 1 and x_i > 0.
struct FAiDecomposition {
  double t1, t2, t3;
  double total;        // t1 + t2 + t3
  double f_value;
  double bound;        // r + a
  double t3_floor;     // a sum (x_i - 1)^2
  bool holds;
  bool equality;
};
FAiDecomposition lemma_fAi_check(const Vector& xs, double a);

// Scalars of the abelian reduction of a moved tuple, normalized so the
// mixing matrix has first row (1, 0, ..., 0); then x_1 >= 1.
struct AbelianReduction {
  Vector xs;
  double a;
};
AbelianReduction reduce_abelian(const AbelianNilData& soliton, const AbelianMove& move);

// The curve c^2(x + b) = x0 + b where the c-partial of f vanishes.  Along it
// f equals (c^2(x+a)+1)/(x0+b), is non-increasing in x (the x-partial is
// proportional to b - a), and tops out at f(x0, 1) at the boundary points
// (x0, +-1).
struct CriticalCurveReport {
  double d;  // x0 + b
  std::vector<double> xs, cs, values;
  double max_abs_df_dc;  // along the curve, finite differences
  double max_df_dx;      // along the curve; <= 0 up to tolerance
  double max_value;
  double f_at_soliton;   // f(x0, 1)
};
CriticalCurveReport critical_set_fAn(const RankOneParams& params, int samples = 64,
                                     double x_span = 50.0);

// Grid sweep backing the fAn lemma verification.
struct Range {
  double lo;
  double hi;
};

struct LemmaFAnSweep {
  long total_points = 0;       // (x0, a, b, c) tuples visited
  long violations = 0;         // f(x, c) > f(x0,1) + tol on the x-grid
  long verdict_mismatches = 0; // certificate verdict disagrees with grid minimum
  long disc_failures = 0;      // p'(x0) < 0 with a > b but disc not negative
  double min_margin = 0.0;     // min over sweep of f(x0,1) - max_x f(x,c)
  double min_p = 0.0;          // min over sweep of min_x p(x)
  long equality_points = 0;    // |f - f(x0,1)| <= tol at some grid x
};
LemmaFAnSweep sweep_lemma_fAn(Range x0_range, Range a_range, Range b_range, Range c_range,
                              int grid, double x_span = 100.0, int x_grid = 50,
                              double tol = 1e-9);

struct LemmaFAiSweep {
  long samples = 0;
  long violations = 0;         // f > r + a + tol
  long term_failures = 0;      // some decomposition term negative beyond roundoff
  double min_margin = 0.0;     // min of (r + a) - f
  double min_term = 0.0;       // min over terms and samples
};
LemmaFAiSweep sweep_lemma_fAi(int r_max, Range a_range, long samples, std::uint64_t seed,
                              double tol = 1e-12);

}  // namespace rpinch
