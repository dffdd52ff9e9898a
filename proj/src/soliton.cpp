#include "rpinch/soliton.hpp"

#include <algorithm>
#include <cmath>
#include <unsupported/Eigen/MatrixFunctions>

#include "rpinch/rng.hpp"

namespace rpinch {

double SolitonCertificate::max_residual() const {
  return std::max({normality_residual, trace_residual, derivation_residual, data_residual});
}

Matrix moment_map(const Matrix& a) {
  if (a.rows() != a.cols()) throw InputError("moment_map: operator must be square");
  const double norm_sq = a.squaredNorm();
  if (norm_sq == 0.0) throw InputError("moment_map: zero operator is degenerate");
  return commutator(a, a.transpose()) / norm_sq;
}

SolitonCertificate certify_rank_one(const RankOneData& data, double tol) {
  const double bracket_norm = data.bracket.norm();
  if (bracket_norm == 0.0)
    throw InputError("certify_rank_one: abelian nilradical; use the abelian certifier");
  const double t = 2.0 / bracket_norm;
  const RankOneData unit{t * data.A, data.bracket.scaled(t)};

  SolitonCertificate cert;
  cert.tol = tol;
  const Matrix ric_n = nil_ricci(unit.bracket);
  const double ric_n_sq = ric_n.squaredNorm();
  const Matrix s = sym_part(unit.A);
  cert.normality_residual = commutator(unit.A, unit.A.transpose()).norm();
  cert.trace_residual = std::abs((s * s).trace() - ric_n_sq);
  cert.derivation_residual =
      is_derivation(unit.bracket, ric_n + ric_n_sq * Matrix::Identity(unit.bracket.dim(),
                                                                      unit.bracket.dim()));
  cert.data_residual = is_derivation(unit.bracket, unit.A);
  cert.soliton = cert.max_residual() <= tol;
  return cert;
}

SolitonCertificate certify_abelian(const AbelianNilData& data, double tol) {
  if (data.ops.empty()) throw InputError("certify_abelian: empty tuple");
  const int r = data.dim_a();

  SolitonCertificate cert;
  cert.tol = tol;

  double mean_diag = 0.0;
  std::vector<Matrix> syms;
  syms.reserve(data.ops.size());
  for (const Matrix& op : data.ops) {
    syms.push_back(sym_part(op));
    mean_diag += (syms.back() * syms.back()).trace();
  }
  mean_diag /= static_cast<double>(r);
  if (mean_diag <= 0.0) {
    // every operator skew: tr S(A_i)S(A_j) == 0 cannot match delta_ij
    cert.trace_residual = 1.0;
    cert.soliton = false;
    return cert;
  }
  const double scale_sq = 1.0 / mean_diag;
  for (int i = 0; i < r; ++i) {
    cert.normality_residual = std::max(
        cert.normality_residual,
        scale_sq * commutator(data.ops[static_cast<size_t>(i)],
                              data.ops[static_cast<size_t>(i)].transpose())
                       .norm());
    for (int j = 0; j < r; ++j) {
      const double gij =
          scale_sq * (syms[static_cast<size_t>(i)] * syms[static_cast<size_t>(j)]).trace();
      cert.trace_residual =
          std::max(cert.trace_residual, std::abs(gij - (i == j ? 1.0 : 0.0)));
      if (i < j)
        cert.data_residual =
            std::max(cert.data_residual,
                     scale_sq * commutator(data.ops[static_cast<size_t>(i)],
                                           data.ops[static_cast<size_t>(j)])
                                    .norm());
    }
  }
  cert.soliton = cert.max_residual() <= tol;
  return cert;
}

SolitonCertificate certify_nilsoliton(const LieBracket& bracket, double tol) {
  SolitonCertificate cert;
  cert.tol = tol;
  if (bracket.norm() == 0.0) {
    cert.soliton = true;  // flat
    return cert;
  }
  const LieBracket unit = bracket.scaled(2.0 / bracket.norm());
  const Matrix ric = nil_ricci(unit);
  const int n = unit.dim();
  cert.derivation_residual =
      is_derivation(unit, ric + ric.squaredNorm() * Matrix::Identity(n, n));
  cert.soliton = cert.max_residual() <= tol;
  return cert;
}

namespace {

double orbit_energy(const LieBracket& bracket) {
  const double norm_sq = bracket.norm() * bracket.norm();
  return nil_ricci(bracket).squaredNorm() / (norm_sq * norm_sq);
}

double soliton_residual(const LieBracket& unit_bracket) {
  const Matrix ric = nil_ricci(unit_bracket);
  const int n = unit_bracket.dim();
  return is_derivation(unit_bracket, ric + ric.squaredNorm() * Matrix::Identity(n, n));
}

}  // namespace

NilsolitonSearchResult nilsoliton_search(const LieBracket& start,
                                         const NilsolitonSearchOptions& options) {
  if (!is_nilpotent(start))
    throw NotNilpotentError("nilsoliton_search: starting bracket is not nilpotent");

  const int n = start.dim();
  NilsolitonSearchResult result;
  result.h = Matrix::Identity(n, n);

  if (start.norm() == 0.0) {
    result.bracket = start;
    result.residual = 0.0;
    result.ric_norm_sq = 0.0;
    result.converged = true;
    result.flat = true;
    return result;
  }

  LieBracket current = normalize_bracket(start, 2.0).bracket;
  result.flat = false;
  result.energy_trace.push_back(orbit_energy(current));

  Rng rng(options.seed);
  int restarts = 0;
  for (int iter = 0; iter < options.max_iters; ++iter) {
    result.residual = soliton_residual(current);
    if (result.residual < options.target_residual) break;

    // finite-difference gradient over orbit generators exp(t E_pq)
    const double energy = orbit_energy(current);
    Matrix grad(n, n);
    for (int p = 0; p < n; ++p) {
      for (int q = 0; q < n; ++q) {
        Matrix gen = Matrix::Zero(n, n);
        gen(p, q) = options.fd_step;
        const double plus = orbit_energy(act_on_bracket(gen.exp(), current));
        gen(p, q) = -options.fd_step;
        const double minus = orbit_energy(act_on_bracket(gen.exp(), current));
        grad(p, q) = (plus - minus) / (2.0 * options.fd_step);
      }
    }
    const double grad_sq = grad.squaredNorm();
    if (grad_sq == 0.0) break;

    // Armijo backtracking on the step exp(-t grad)
    double step = 1.0 / std::max(1.0, std::sqrt(grad_sq));
    bool accepted = false;
    for (int halving = 0; halving < 50; ++halving) {
      const Matrix mover = (-step * grad).exp();
      LieBracket candidate = normalize_bracket(act_on_bracket(mover, current), 2.0).bracket;
      const double cand_energy = orbit_energy(candidate);
      if (cand_energy <= energy - 1e-4 * step * grad_sq) {
        current = candidate;
        result.h = mover * result.h;
        result.energy_trace.push_back(cand_energy);
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      if (restarts >= options.max_restarts) break;
      ++restarts;
      Matrix jiggle(n, n);
      for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q) jiggle(p, q) = 1e-4 * rng.normal();
      const Matrix mover = jiggle.exp();
      current = normalize_bracket(act_on_bracket(mover, current), 2.0).bracket;
      result.h = mover * result.h;
      result.energy_trace.push_back(orbit_energy(current));
    }
  }

  result.bracket = current;
  result.residual = soliton_residual(current);
  result.ric_norm_sq = nil_ricci(current).squaredNorm();
  result.converged = result.residual < options.target_residual;
  return result;
}

RankOneData rank_one_extension(const LieBracket& nilsoliton, const Matrix& direction) {
  const double norm = nilsoliton.norm();
  if (norm == 0.0)
    throw InputError(
        "rank_one_extension: abelian nilradical has no rank-one soliton extension; "
        "use the abelian-nilradical construction");
  const LieBracket unit = nilsoliton.scaled(2.0 / norm);
  const double nilsoliton_residual = soliton_residual(unit);
  if (nilsoliton_residual > 1e-6)
    throw PreconditionError("rank_one_extension: bracket is not a nilsoliton (residual " +
                            std::to_string(nilsoliton_residual) + ")");
  if (is_derivation(unit, direction) > 1e-7 * std::max(1.0, direction.norm()))
    throw InputError("rank_one_extension: direction is not a derivation");
  if (commutator(direction, direction.transpose()).norm() >
      1e-7 * std::max(1.0, direction.squaredNorm()))
    throw InputError("rank_one_extension: direction is not normal");
  const Matrix s = sym_part(direction);
  const double tr_s2 = (s * s).trace();
  if (tr_s2 <= 1e-12)
    throw InputError("rank_one_extension: skew direction cannot match tr S(A)^2 = |Ric|^2 > 0");
  const double ric_sq = nil_ricci(unit).squaredNorm();
  const double t = std::sqrt(ric_sq / tr_s2);
  return RankOneData{t * direction, unit};
}

RankOneData rank_one_extension(const LieBracket& nilsoliton) {
  const double norm = nilsoliton.norm();
  if (norm == 0.0)
    throw InputError(
        "rank_one_extension: abelian nilradical has no rank-one soliton extension; "
        "use the abelian-nilradical construction");
  const LieBracket unit = nilsoliton.scaled(2.0 / norm);
  const Matrix ric = nil_ricci(unit);
  const int n = unit.dim();
  return rank_one_extension(unit, ric + ric.squaredNorm() * Matrix::Identity(n, n));
}

}  // namespace rpinch
