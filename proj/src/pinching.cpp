#include "rpinch/pinching.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rpinch/rng.hpp"

namespace rpinch {

namespace {

// metric rescaling (A, bracket) -> (t A, t bracket) with |t bracket| = 2;
// leaves F unchanged.
RankOneData normalized_pair(const RankOneData& data) {
  const double norm = data.bracket.norm();
  if (norm == 0.0)
    throw InputError("rank-one form requires a non-abelian nilradical");
  const double t = 2.0 / norm;
  return RankOneData{t * data.A, data.bracket.scaled(t)};
}

// Orthogonal matrix whose first column is v/|v|.
Matrix rotation_from_first_column(const Vector& v) {
  const int n = static_cast<int>(v.size());
  Matrix q = Eigen::HouseholderQR<Matrix>(v).householderQ();
  if (q.col(0).dot(v) < 0.0) q.col(0) *= -1.0;
  return q;
}

// Rotates the tuple so that tr A_i = 0 for i >= 2 (an isometry of the
// metric); returns the rotated operators.
std::vector<Matrix> trace_normalized_ops(const std::vector<Matrix>& ops) {
  const int r = static_cast<int>(ops.size());
  Vector traces(r);
  for (int i = 0; i < r; ++i) traces(i) = ops[static_cast<size_t>(i)].trace();
  if (traces.norm() <= 1e-14) return ops;
  const Matrix q = rotation_from_first_column(traces);
  std::vector<Matrix> rotated(static_cast<size_t>(r));
  for (int i = 0; i < r; ++i) {
    Matrix b = Matrix::Zero(ops.front().rows(), ops.front().cols());
    for (int j = 0; j < r; ++j) b += q(j, i) * ops[static_cast<size_t>(j)];
    rotated[static_cast<size_t>(i)] = b;
  }
  return rotated;
}

void check_params(const RankOneParams& params) {
  if (!(params.x0 > 0.0) || !(params.b > 0.0) || params.a < params.b - 1e-12)
    throw InputError("rank-one reduction parameters must satisfy x0 > 0, a >= b > 0");
}

}  // namespace

double F_rank_one(const RankOneData& data) {
  const RankOneData unit = normalized_pair(data);
  const Matrix s = sym_part(unit.A);
  const double tr_s2 = (s * s).trace();
  const double tr_a = unit.A.trace();
  const double ric_n_sq = nil_ricci(unit.bracket).squaredNorm();
  const double comm_sq = commutator(unit.A, unit.A.transpose()).squaredNorm();
  const double remainder = generic_ricci(unit).G.value();
  const double num = tr_s2 + tr_a * tr_a + 1.0;
  const double den = tr_s2 * (tr_s2 + tr_a * tr_a) + ric_n_sq + 0.25 * comm_sq + remainder;
  if (den <= 0.0) throw FlatMetricError("F_rank_one: flat metric, F undefined");
  return num * num / den;
}

double F_abelian(const AbelianNilData& data) {
  validate_abelian(data);
  const std::vector<Matrix> ops = trace_normalized_ops(data.ops);
  const int r = static_cast<int>(ops.size());
  std::vector<Matrix> syms;
  syms.reserve(ops.size());
  for (const Matrix& op : ops) syms.push_back(sym_part(op));

  double sum_tr_s2 = 0.0;
  double gram_sq = 0.0;
  for (int i = 0; i < r; ++i) {
    sum_tr_s2 += (syms[static_cast<size_t>(i)] * syms[static_cast<size_t>(i)]).trace();
    for (int j = 0; j < r; ++j) {
      const double gij = (syms[static_cast<size_t>(i)] * syms[static_cast<size_t>(j)]).trace();
      gram_sq += gij * gij;
    }
  }
  const double tr1_sq = ops.front().trace() * ops.front().trace();
  Matrix comm_sum = Matrix::Zero(data.dim_n(), data.dim_n());
  for (const Matrix& op : ops) comm_sum += commutator(op, op.transpose());
  const double num = sum_tr_s2 + tr1_sq;
  const double den = gram_sq + tr1_sq * (syms.front() * syms.front()).trace() +
                     0.25 * comm_sum.squaredNorm();
  if (den <= 0.0) throw FlatMetricError("F_abelian: flat metric, F undefined");
  return num * num / den;
}

RankOneParams rank_one_params(const Matrix& a) {
  RankOneParams params;
  params.x0 = 0.5 * a.squaredNorm();
  params.b = 0.5 * (a * a).trace();
  params.a = params.b + a.trace() * a.trace();
  return params;
}

RankOneReduction reduce_rank_one(const RankOneData& soliton, const RankOneMove& move) {
  const int n = soliton.bracket.dim();
  if (std::abs(soliton.bracket.norm() - 2.0) > 1e-8)
    throw InputError("reduce_rank_one: soliton bracket must be normalized to norm 2");
  if (move.X.size() != n || move.h.rows() != n || move.h.cols() != n)
    throw InputError("reduce_rank_one: move dimension mismatch");
  if (move.c == 0.0) throw InputError("reduce_rank_one: move scalar must be nonzero");
  // lightweight soliton precondition (full certificates live in the soliton module)
  const double ric_n_sq = nil_ricci(soliton.bracket).squaredNorm();
  const Matrix s = sym_part(soliton.A);
  if (commutator(soliton.A, soliton.A.transpose()).norm() > 1e-6 ||
      std::abs((s * s).trace() - ric_n_sq) > 1e-6)
    throw PreconditionError("reduce_rank_one: input does not satisfy the soliton conditions");

  Eigen::FullPivLU<Matrix> lu(move.h);
  if (!lu.isInvertible()) throw InputError("reduce_rank_one: singular move");
  const Matrix hinv = lu.inverse();
  const Matrix moved = move.h * (soliton.A - soliton.bracket.ad(hinv * move.X)) * hinv;
  const LieBracket moved_bracket = act_on_bracket(move.h, soliton.bracket);

  RankOneReduction red;
  const RankOneParams params = rank_one_params(soliton.A);
  red.x0 = params.x0;
  red.a = params.a;
  red.b = params.b;
  red.x = 0.5 * moved.squaredNorm();
  red.T = (sym_part(moved) * sym_part(moved)).trace();
  red.c = move.c * (2.0 / moved_bracket.norm());
  return red;
}

double f_rank_one(double x, double c, const RankOneParams& params) {
  check_params(params);
  const double c2 = c * c;
  const double num = c2 * (x + params.a) + 1.0;
  const double den = c2 * c2 * (x + params.b) * (x + params.a) + params.x0 + params.b;
  return num * num / den;
}

PolynomialCertificate lemma_fAn_certificate(const RankOneParams& params, double c) {
  check_params(params);
  const double x0 = params.x0, a = params.a, b = params.b;
  const double c2 = c * c;
  const double c4 = c2 * c2;

  PolynomialCertificate cert;
  cert.r = c4 * (a - b + 1.0);
  cert.s = c4 * (a * (a - b + 1.0) - x0 * (a - b) + b) - 2.0 * c2 * (x0 + b);
  cert.t = a * c4 * (x0 * (b - a) + b) - 2.0 * a * c2 * (x0 + b) + (x0 + a) * (x0 + b);
  cert.disc = cert.s * cert.s - 4.0 * cert.r * cert.t;
  cert.p_at_x0 = (cert.r * x0 + cert.s) * x0 + cert.t;
  cert.dp_at_x0 = 2.0 * cert.r * x0 + cert.s;

  const double scale = std::max(1.0, std::abs(cert.r) * x0 * x0 + std::abs(cert.s) * x0 +
                                         std::abs(cert.t));
  const double tol = 1e-9 * scale;
  if (cert.p_at_x0 < -tol) {
    cert.verdict = CertificateVerdict::Violated;
  } else if (cert.dp_at_x0 >= 0.0) {
    cert.verdict = (cert.p_at_x0 <= tol) ? CertificateVerdict::EqualityAtX0
                                         : CertificateVerdict::PositiveOnHalfline;
  } else {
    // vertex lies right of x0; nonnegativity is equivalent to disc <= 0
    const double disc_scale = std::max(1.0, cert.s * cert.s + std::abs(4.0 * cert.r * cert.t));
    cert.verdict = (cert.disc <= 1e-9 * disc_scale) ? CertificateVerdict::PositiveOnHalfline
                                                    : CertificateVerdict::Violated;
  }
  return cert;
}

double f_abelian(const Vector& xs, double a) {
  if (xs.size() == 0) throw InputError("f_abelian: empty tuple");
  if (a < 0.0) throw InputError("f_abelian: a must be nonnegative");
  double s1 = 0.0, s2 = 0.0;
  for (int i = 0; i < xs.size(); ++i) {
    if (!(xs(i) > 0.0)) throw InputError("f_abelian: entries must be positive");
    s1 += xs(i);
    s2 += xs(i) * xs(i);
  }
  return (s1 + a) * (s1 + a) / (s2 + a * xs(0));
}

FAiDecomposition lemma_fAi_check(const Vector& xs, double a) {
  const int r = static_cast<int>(xs.size());
  if (r == 0) throw InputError("lemma_fAi_check: empty tuple");
  if (a < 0.0) throw InputError("lemma_fAi_check: a must be nonnegative");
  if (xs(0) < 1.0 - 1e-12)
    throw InputError("lemma_fAi_check: x_1 >= 1 required (outside the lemma hypothesis)");
  double s1 = 0.0, s2 = 0.0, floor3 = 0.0;
  for (int i = 0; i < r; ++i) {
    if (!(xs(i) > 0.0)) throw InputError("lemma_fAi_check: entries must be positive");
    s1 += xs(i);
    s2 += xs(i) * xs(i);
    floor3 += (xs(i) - 1.0) * (xs(i) - 1.0);
  }
  FAiDecomposition out;
  out.t1 = r * s2 - s1 * s1;
  out.t2 = a * a * (xs(0) - 1.0);
  out.t3 = a * (s2 - 2.0 * s1 + r * xs(0));
  out.total = out.t1 + out.t2 + out.t3;
  out.t3_floor = a * floor3;
  out.f_value = (s1 + a) * (s1 + a) / (s2 + a * xs(0));
  out.bound = static_cast<double>(r) + a;
  const double tol = 1e-12 * std::max(1.0, out.bound);
  out.holds = out.f_value <= out.bound + tol;
  out.equality = std::abs(out.f_value - out.bound) <= 1e-9 * std::max(1.0, out.bound);
  return out;
}

AbelianReduction reduce_abelian(const AbelianNilData& soliton, const AbelianMove& move) {
  validate_abelian(soliton);
  const int r = soliton.dim_a();
  const int n = soliton.dim_n();
  if (move.h1.rows() != r || move.h1.cols() != r || move.h2.rows() != n || move.h2.cols() != n)
    throw InputError("reduce_abelian: move dimension mismatch");

  // Gram-normalize the base tuple (one global scale).
  std::vector<Matrix> base = soliton.ops;
  {
    double mean_diag = 0.0;
    for (const Matrix& op : base) {
      const Matrix s = sym_part(op);
      mean_diag += (s * s).trace();
    }
    mean_diag /= static_cast<double>(r);
    if (mean_diag <= 0.0) throw PreconditionError("reduce_abelian: degenerate tuple");
    const double scale = 1.0 / std::sqrt(mean_diag);
    for (Matrix& op : base) op *= scale;
  }
  // soliton precondition: Gram == I and normality
  for (int i = 0; i < r; ++i) {
    if (commutator(base[static_cast<size_t>(i)], base[static_cast<size_t>(i)].transpose()).norm() >
        1e-6)
      throw PreconditionError("reduce_abelian: tuple operator is not normal");
    for (int j = 0; j < r; ++j) {
      const double gij = (sym_part(base[static_cast<size_t>(i)]) *
                          sym_part(base[static_cast<size_t>(j)]))
                             .trace();
      if (std::abs(gij - (i == j ? 1.0 : 0.0)) > 1e-6)
        throw PreconditionError("reduce_abelian: tuple Gram matrix is not orthonormal");
    }
  }

  // Rotate the base so its trace vector is (tau, 0, ..., 0).
  Vector traces(r);
  for (int i = 0; i < r; ++i) traces(i) = base[static_cast<size_t>(i)].trace();
  Matrix base_rot = Matrix::Identity(r, r);
  double tau = 0.0;
  if (traces.norm() > 1e-12) {
    base_rot = rotation_from_first_column(traces);
    tau = (base_rot.transpose() * traces)(0);
  }
  std::vector<Matrix> rotated(static_cast<size_t>(r));
  for (int i = 0; i < r; ++i) {
    Matrix b = Matrix::Zero(n, n);
    for (int j = 0; j < r; ++j) b += base_rot(j, i) * base[static_cast<size_t>(j)];
    rotated[static_cast<size_t>(i)] = b;
  }

  // Mixing matrix of the move relative to the rotated base.
  Eigen::FullPivLU<Matrix> lu1(move.h1);
  if (!lu1.isInvertible()) throw InputError("reduce_abelian: singular h1");
  const Matrix mix = base_rot.transpose() * lu1.inverse();

  // Normalize the mixing matrix to first row (1, 0, ..., 0).  Right-multiplying
  // by an orthogonal O recombines the moved tuple orthonormally (an isometry),
  // and a global scalar is a metric rescaling; both leave F unchanged.
  Matrix mix_fin = mix;
  if (traces.norm() > 1e-12) {
    const Matrix o = rotation_from_first_column(mix.row(0).transpose());
    mix_fin = mix * o;
    const double gamma = mix_fin(0, 0);  // = |first row of mix| > 0
    if (gamma <= 1e-14) throw InputError("reduce_abelian: degenerate mixing normalization");
    mix_fin /= gamma;
  } else {
    const double gamma = mix.col(0).norm();
    if (gamma <= 1e-14) throw InputError("reduce_abelian: singular mixing matrix");
    mix_fin /= gamma;
  }

  Eigen::FullPivLU<Matrix> lu2(move.h2);
  if (!lu2.isInvertible()) throw InputError("reduce_abelian: singular h2");
  const Matrix h2inv = lu2.inverse();

  AbelianReduction red;
  red.a = tau * tau;
  red.xs = Vector(r);
  for (int i = 0; i < r; ++i) {
    Matrix mixed = Matrix::Zero(n, n);
    for (int k = 0; k < r; ++k) mixed += mix_fin(k, i) * rotated[static_cast<size_t>(k)];
    const Matrix conj = move.h2 * mixed * h2inv;
    const Matrix s = sym_part(conj);
    red.xs(i) = (s * s).trace();
  }
  return red;
}

namespace {

double fd_partial_x(const RankOneParams& params, double x, double c, double step) {
  return (f_rank_one(x + step, c, params) - f_rank_one(x - step, c, params)) / (2.0 * step);
}

double fd_partial_c(const RankOneParams& params, double x, double c, double step) {
  return (f_rank_one(x, c + step, params) - f_rank_one(x, c - step, params)) / (2.0 * step);
}

}  // namespace

CriticalCurveReport critical_set_fAn(const RankOneParams& params, int samples, double x_span) {
  check_params(params);
  if (samples < 2) throw InputError("critical_set_fAn: need at least two samples");
  CriticalCurveReport report;
  report.d = params.x0 + params.b;
  report.f_at_soliton = f_rank_one(params.x0, 1.0, params);
  report.max_abs_df_dc = 0.0;
  report.max_df_dx = -std::numeric_limits<double>::infinity();
  report.max_value = -std::numeric_limits<double>::infinity();
  const double step = 1e-6;  // keeps central-difference truncation under 1e-9
  for (int k = 0; k < samples; ++k) {
    const double x = params.x0 + x_span * static_cast<double>(k) / (samples - 1);
    const double c = std::sqrt(report.d / (x + params.b));
    for (const double sign : {1.0, -1.0}) {
      const double ck = sign * c;
      report.xs.push_back(x);
      report.cs.push_back(ck);
      report.values.push_back(f_rank_one(x, ck, params));
      report.max_abs_df_dc =
          std::max(report.max_abs_df_dc, std::abs(fd_partial_c(params, x, ck, step)));
      report.max_df_dx = std::max(report.max_df_dx, fd_partial_x(params, x, ck, step));
      report.max_value = std::max(report.max_value, report.values.back());
    }
  }
  return report;
}

namespace {

inline double grid_value(const Range& range, int index, int grid) {
  if (grid == 1) return range.lo;
  return range.lo + (range.hi - range.lo) * static_cast<double>(index) / (grid - 1);
}

}  // namespace

LemmaFAnSweep sweep_lemma_fAn(Range x0_range, Range a_range, Range b_range, Range c_range,
                              int grid, double x_span, int x_grid, double tol) {
  if (grid < 1 || x_grid < 2) throw InputError("sweep_lemma_fAn: grid sizes too small");
  if (x0_range.lo > x0_range.hi || a_range.lo > a_range.hi || b_range.lo > b_range.hi ||
      c_range.lo > c_range.hi)
    throw InputError("sweep_lemma_fAn: inverted parameter range");
  if (x0_range.lo <= 0.0 || b_range.lo <= 0.0 || a_range.lo <= 0.0)
    throw InputError("sweep_lemma_fAn: parameters must be positive");

  LemmaFAnSweep sweep;
  sweep.min_margin = std::numeric_limits<double>::infinity();
  sweep.min_p = std::numeric_limits<double>::infinity();
  for (int i0 = 0; i0 < grid; ++i0) {
    const double x0 = grid_value(x0_range, i0, grid);
    for (int ia = 0; ia < grid; ++ia) {
      const double a = grid_value(a_range, ia, grid);
      for (int ib = 0; ib < grid; ++ib) {
        const double b = grid_value(b_range, ib, grid);
        if (b > a) continue;
        const RankOneParams params{x0, a, b};
        const double fmax = (x0 + a + 1.0) / (x0 + b);
        for (int ic = 0; ic < grid; ++ic) {
          const double c = grid_value(c_range, ic, grid);
          ++sweep.total_points;
          const PolynomialCertificate cert = lemma_fAn_certificate(params, c);
          if (cert.dp_at_x0 < 0.0) {
            const double disc_scale =
                std::max(1.0, cert.s * cert.s + std::abs(4.0 * cert.r * cert.t));
            const bool nonpositive = cert.disc <= 1e-9 * disc_scale;
            const bool strictly_negative = cert.disc < 0.0;
            if (!nonpositive || (a - b > 1e-12 && !strictly_negative)) ++sweep.disc_failures;
          }
          const double c2 = c * c, c4 = c2 * c2;
          double max_f = -std::numeric_limits<double>::infinity();
          double min_p = std::numeric_limits<double>::infinity();
          bool equality_seen = false;
          for (int ix = 0; ix < x_grid; ++ix) {
            const double x = x0 + x_span * static_cast<double>(ix) / (x_grid - 1);
            const double num = c2 * (x + a) + 1.0;
            const double fx = num * num / (c4 * (x + b) * (x + a) + x0 + b);
            const double px = (cert.r * x + cert.s) * x + cert.t;
            max_f = std::max(max_f, fx);
            min_p = std::min(min_p, px);
            if (std::abs(fx - fmax) <= tol * std::max(1.0, fmax)) equality_seen = true;
          }
          const double margin = fmax - max_f;
          sweep.min_margin = std::min(sweep.min_margin, margin);
          sweep.min_p = std::min(sweep.min_p, min_p);
          if (margin < -tol * std::max(1.0, fmax)) ++sweep.violations;
          if (equality_seen) ++sweep.equality_points;
          const double p_scale = std::max(
              1.0, std::abs(cert.r) * (x0 + x_span) * (x0 + x_span) +
                       std::abs(cert.s) * (x0 + x_span) + std::abs(cert.t));
          const bool grid_nonneg = min_p >= -tol * p_scale;
          const bool cert_ok = cert.verdict != CertificateVerdict::Violated;
          if (grid_nonneg != cert_ok) ++sweep.verdict_mismatches;
        }
      }
    }
  }
  return sweep;
}

LemmaFAiSweep sweep_lemma_fAi(int r_max, Range a_range, long samples, std::uint64_t seed,
                              double tol) {
  if (r_max < 1) throw InputError("sweep_lemma_fAi: r_max must be positive");
  if (samples < 1) throw InputError("sweep_lemma_fAi: need at least one sample");
  if (a_range.lo > a_range.hi || a_range.lo < 0.0)
    throw InputError("sweep_lemma_fAi: invalid a range");

  LemmaFAiSweep sweep;
  sweep.min_margin = std::numeric_limits<double>::infinity();
  sweep.min_term = std::numeric_limits<double>::infinity();
  Rng rng(seed);
  for (long k = 0; k < samples; ++k) {
    const int r = rng.uniform_int(1, r_max);
    const double a = rng.uniform(a_range.lo, a_range.hi);
    Vector xs(r);
    if (k % 997 == 0) {
      xs.setOnes();  // exercise the equality locus
    } else {
      const double u = rng.uniform();
      xs(0) = 1.0 + 19.0 * u * u;
      for (int i = 1; i < r; ++i) xs(i) = rng.uniform(1e-6, 20.0);
    }
    const FAiDecomposition dec = lemma_fAi_check(xs, a);
    ++sweep.samples;
    const double margin = dec.bound - dec.f_value;
    sweep.min_margin = std::min(sweep.min_margin, margin);
    if (dec.f_value > dec.bound + tol) ++sweep.violations;
    const double scale = std::max({1.0, std::abs(dec.t1), std::abs(dec.t3)});
    const double term_tol = 1e-9 * scale;
    sweep.min_term = std::min({sweep.min_term, dec.t1, dec.t2, dec.t3});
    if (dec.t1 < -term_tol || dec.t2 < 0.0 || dec.t3 < -term_tol ||
        dec.t3 < dec.t3_floor - term_tol)
      ++sweep.term_failures;
  }
  return sweep;
}

}  // namespace rpinch
