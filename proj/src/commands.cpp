#include "rpinch/commands.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "rpinch/io.hpp"
#include "rpinch/orbit.hpp"
#include "rpinch/soliton.hpp"

namespace rpinch::cli {

namespace {

using nlohmann::ordered_json;

ordered_json matrix_json(const Matrix& m) {
  ordered_json rows = ordered_json::array();
  for (int r = 0; r < m.rows(); ++r) {
    ordered_json row = ordered_json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(row);
  }
  return rows;
}

ordered_json vector_json(const Vector& v) {
  ordered_json out = ordered_json::array();
  for (int i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

void print_matrix(std::ostream& out, const Matrix& m) {
  const Eigen::IOFormat fmt(10, 0, "  ", "\n", "  [", "]");
  out << m.format(fmt) << "\n";
}

ordered_json certificate_json(const SolitonCertificate& cert) {
  ordered_json j;
  j["verdict"] = cert.soliton ? "soliton" : "not-soliton";
  j["tol"] = cert.tol;
  j["normality_residual"] = cert.normality_residual;
  j["trace_residual"] = cert.trace_residual;
  j["derivation_residual"] = cert.derivation_residual;
  j["data_residual"] = cert.data_residual;
  return j;
}

void print_certificate(std::ostream& out, const SolitonCertificate& cert) {
  std::ostringstream line;
  line << std::setprecision(3) << std::scientific
       << "normality " << cert.normality_residual
       << "  trace " << cert.trace_residual
       << "  derivation " << cert.derivation_residual
       << "  data " << cert.data_residual;
  out << "residuals: " << line.str() << "\n";
  out << "verdict: " << (cert.soliton ? "soliton" : "not-soliton")
      << " (tolerance " << cert.tol << ")\n";
}

struct RicciForms {
  Matrix blocks;
  RicciReport generic;
  double cross_residual;
  bool has_G;
};

RicciForms compute_forms(const AlgebraData& data) {
  RicciForms forms;
  forms.has_G = false;
  if (std::holds_alternative<LieBracket>(data)) {
    const auto& bracket = std::get<LieBracket>(data);
    forms.blocks = nil_ricci(bracket);
    forms.generic = generic_ricci(SolvableAlgebra{bracket, 0});
    forms.cross_residual = (forms.blocks - forms.generic.ric).cwiseAbs().maxCoeff();
  } else if (std::holds_alternative<RankOneData>(data)) {
    const auto& d = std::get<RankOneData>(data);
    const RankOneRicciBlocks blocks = rank_one_ricci_blocks(d);
    const int n = d.bracket.dim();
    Matrix full = Matrix::Zero(n + 1, n + 1);
    full(0, 0) = blocks.corner;
    full.bottomRightCorner(n, n) = blocks.nblock;
    forms.blocks = full;
    forms.generic = generic_ricci(d);
    forms.has_G = true;
    const double corner_diff = std::abs(forms.generic.ric(0, 0) - blocks.corner);
    const double nblock_diff =
        (forms.generic.ric.bottomRightCorner(n, n) - blocks.nblock).cwiseAbs().maxCoeff();
    forms.cross_residual = std::max(corner_diff, nblock_diff);
  } else {
    const auto& d = std::get<AbelianNilData>(data);
    forms.blocks = abelian_ricci(d);
    forms.generic = generic_ricci(d);
    const int r = d.dim_a();
    const int n = d.dim_n();
    const double a_diff =
        (forms.generic.ric.topLeftCorner(r, r) - forms.blocks.topLeftCorner(r, r))
            .cwiseAbs()
            .maxCoeff();
    const double n_diff = (forms.generic.ric.bottomRightCorner(n, n) -
                           forms.blocks.bottomRightCorner(n, n))
                              .cwiseAbs()
                              .maxCoeff();
    forms.cross_residual = std::max(a_diff, n_diff);
  }
  return forms;
}

int run_guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const FlatMetricError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const PreconditionError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const NotNilpotentError& e) {
    err << "ingestion error: " << e.what() << "\n";
    return kInputError;
  } catch (const StructureError& e) {
    err << "ingestion error: " << e.what() << "\n";
    return kInputError;
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }
}

}  // namespace

int cmd_ricci(const RicciOptions& options, std::ostream& out, std::ostream& err) {
  return run_guarded(err, [&]() -> int {
    if (options.form != "blocks" && options.form != "generic" && options.form != "both")
      throw InputError("--form must be blocks, generic, or both");
    const AlgebraFile file = load_algebra_file(options.file);
    const AlgebraData data = ingest(file);
    const RicciForms forms = compute_forms(data);

    if (forms.generic.flat) {
      if (options.format == "json") {
        ordered_json j;
        j["schema"] = "rpinch-report/1";
        j["command"] = "ricci";
        j["kind"] = to_string(file.kind);
        j["flat"] = true;
        out << j.dump(2) << "\n";
      } else {
        out << "flat metric: F undefined\n";
      }
      return kInputError;
    }

    if (options.format == "json") {
      ordered_json j;
      j["schema"] = "rpinch-report/1";
      j["command"] = "ricci";
      j["kind"] = to_string(file.kind);
      if (!file.label.empty()) j["label"] = file.label;
      j["form"] = options.form;
      if (options.form != "generic") j["ricci_blocks"] = matrix_json(forms.blocks);
      if (options.form != "blocks") j["ricci_generic"] = matrix_json(forms.generic.ric);
      j["scal"] = forms.generic.scal;
      j["ric_norm_sq"] = forms.generic.ric_norm_sq;
      j["F"] = forms.generic.F;
      if (forms.has_G) j["G"] = *forms.generic.G;
      if (options.form == "both") j["cross_residual"] = forms.cross_residual;
      out << j.dump(2) << "\n";
    } else {
      out << "kind: " << to_string(file.kind);
      if (!file.label.empty()) out << "  label: " << file.label;
      out << "\n";
      if (options.form != "generic") {
        out << "Ricci (block formulas):\n";
        print_matrix(out, forms.blocks);
      }
      if (options.form != "blocks") {
        out << "Ricci (generic oracle):\n";
        print_matrix(out, forms.generic.ric);
      }
      out << "scal = " << forms.generic.scal << "\n";
      out << "|Ric|^2 = " << forms.generic.ric_norm_sq << "\n";
      out << "F = " << forms.generic.F << "\n";
      if (forms.has_G) out << "G = " << *forms.generic.G << "\n";
      if (options.form == "both")
        out << "cross-check residual = " << forms.cross_residual << "\n";
    }
    return kOk;
  });
}

int cmd_certify(const CertifyOptions& options, std::ostream& out, std::ostream& err) {
  return run_guarded(err, [&]() -> int {
    const AlgebraFile file = load_algebra_file(options.file);
    const AlgebraData data = ingest(file);
    SolitonCertificate cert;
    if (std::holds_alternative<LieBracket>(data)) {
      cert = certify_nilsoliton(std::get<LieBracket>(data), options.tol);
    } else if (std::holds_alternative<RankOneData>(data)) {
      cert = certify_rank_one(std::get<RankOneData>(data), options.tol);
    } else {
      cert = certify_abelian(std::get<AbelianNilData>(data), options.tol);
    }
    if (options.format == "json") {
      ordered_json j;
      j["schema"] = "rpinch-report/1";
      j["command"] = "certify";
      j["kind"] = to_string(file.kind);
      if (!file.label.empty()) j["label"] = file.label;
      j["certificate"] = certificate_json(cert);
      out << j.dump(2) << "\n";
    } else {
      out << "kind: " << to_string(file.kind);
      if (!file.label.empty()) out << "  label: " << file.label;
      out << "\n";
      print_certificate(out, cert);
    }
    return cert.soliton ? kOk : kNegative;
  });
}

namespace {

ordered_json move_json(const RankOneMove& move) {
  ordered_json j;
  j["c"] = move.c;
  j["X"] = vector_json(move.X);
  j["h"] = matrix_json(move.h);
  return j;
}

ordered_json move_json(const AbelianMove& move) {
  ordered_json j;
  j["h1"] = matrix_json(move.h1);
  j["h2"] = matrix_json(move.h2);
  return j;
}

ordered_json report_json(const SearchReport& report, const AlgebraFile& file) {
  ordered_json j;
  j["schema"] = "rpinch-report/1";
  j["command"] = "maximize";
  j["kind"] = to_string(file.kind);
  if (!file.label.empty()) j["label"] = file.label;
  j["strategy"] = to_string(report.strategy);
  j["trials"] = report.trials;
  j["starts"] = report.starts;
  j["iters"] = report.iters;
  j["seed"] = report.seed;
  j["soliton_F"] = report.soliton_F;
  j["best_F"] = report.best_F;
  j["gap"] = report.gap;
  j["theorem_violation"] = report.theorem_violation;
  j["converged_to_soliton"] = report.converged_to_soliton;
  if (std::holds_alternative<RankOneMove>(report.best_move))
    j["best_move"] = move_json(std::get<RankOneMove>(report.best_move));
  else
    j["best_move"] = move_json(std::get<AbelianMove>(report.best_move));
  ordered_json eq;
  eq["checked"] = report.equality.checked;
  eq["moved_F"] = report.equality.moved_F;
  if (report.equality.checked) eq["certificate"] = certificate_json(report.equality.certificate);
  j["equality_case"] = eq;
  return j;
}

}  // namespace

int cmd_maximize(const MaximizeOptions& options, std::ostream& out, std::ostream& err) {
  return run_guarded(err, [&]() -> int {
    const AlgebraFile file = load_algebra_file(options.file);
    const AlgebraData data = ingest(file);
    if (std::holds_alternative<LieBracket>(data))
      throw InputError("maximize expects rank-one or abelian-nilradical data");

    SearchOptions search;
    search.strategy = strategy_from_string(options.strategy);
    search.trials = options.trials;
    search.starts = options.starts;
    search.iters = options.iters;
    search.seed = options.seed;
    search.threads = options.threads;

    SearchReport report;
    if (std::holds_alternative<RankOneData>(data))
      report = maximize_F(std::get<RankOneData>(data), search);
    else
      report = maximize_F(std::get<AbelianNilData>(data), search);

    const ordered_json j = report_json(report, file);
    if (!options.out.empty()) {
      std::ofstream file_out(options.out);
      if (!file_out) throw InputError("cannot write '" + options.out + "'");
      file_out << j.dump(2) << "\n";
    }
    if (options.format == "json") {
      out << j.dump(2) << "\n";
    } else {
      out << "kind: " << to_string(file.kind) << "  strategy: " << to_string(report.strategy)
          << "  trials: " << report.trials << "  starts: " << report.starts
          << "  seed: " << report.seed << "\n";
      out << "soliton F = " << std::setprecision(17) << report.soliton_F << "\n";
      out << "best F    = " << report.best_F << "\n";
      out << "gap       = " << report.gap << "\n";
      out << "equality case: "
          << (report.equality.checked
                  ? (report.equality.certificate.soliton ? "certified soliton" : "NOT a soliton")
                  : "not reached")
          << "\n";
      if (report.theorem_violation)
        out << "ALERT: gap below -1e-7 contradicts the global-maximum theorem\n";
    }
    return report.theorem_violation ? kTheoremViolation : kOk;
  });
}

int cmd_lemma(const LemmaOptions& options, std::ostream& out, std::ostream& err) {
  return run_guarded(err, [&]() -> int {
    if (options.which == "fAn") {
      const LemmaFAnSweep sweep =
          sweep_lemma_fAn(options.x0, options.a, options.b, options.c, options.grid,
                          options.x_span, options.x_grid);
      // equality locus c = +-1, x = x0: certificate verdicts on a coarse grid
      long locus_failures = 0;
      const int locus_grid = 5;
      for (int i0 = 0; i0 < locus_grid; ++i0)
        for (int ia = 0; ia < locus_grid; ++ia)
          for (int ib = 0; ib <= ia; ++ib) {
            const double x0 =
                options.x0.lo + (options.x0.hi - options.x0.lo) * i0 / (locus_grid - 1);
            const double a =
                options.a.lo + (options.a.hi - options.a.lo) * ia / (locus_grid - 1);
            const double b =
                options.b.lo + (options.b.hi - options.b.lo) * ib / (locus_grid - 1);
            if (b > a) continue;
            for (const double c : {1.0, -1.0}) {
              const PolynomialCertificate cert =
                  lemma_fAn_certificate(RankOneParams{x0, a, b}, c);
              if (cert.verdict != CertificateVerdict::EqualityAtX0) ++locus_failures;
            }
          }
      if (options.format == "json") {
        ordered_json j;
        j["schema"] = "rpinch-report/1";
        j["command"] = "lemma";
        j["which"] = "fAn";
        j["grid"] = options.grid;
        j["total_points"] = sweep.total_points;
        j["violations"] = sweep.violations;
        j["verdict_mismatches"] = sweep.verdict_mismatches;
        j["disc_failures"] = sweep.disc_failures;
        j["min_margin"] = sweep.min_margin;
        j["min_p"] = sweep.min_p;
        j["equality_locus_failures"] = locus_failures;
        out << j.dump(2) << "\n";
      } else {
        out << "lemma fAn sweep: " << sweep.total_points << " parameter points, grid "
            << options.grid << "\n";
        out << "violations of f(x,c) <= f(x0,1): " << sweep.violations << "\n";
        out << "certificate/grid mismatches:     " << sweep.verdict_mismatches << "\n";
        out << "discriminant failures:           " << sweep.disc_failures << "\n";
        out << "min margin f(x0,1) - max f:      " << sweep.min_margin << "\n";
        out << "min of certificate polynomial:   " << sweep.min_p << "\n";
        out << "equality locus at c = +-1, x = x0: "
            << (locus_failures == 0 ? "confirmed" : "FAILED") << "\n";
      }
      const bool ok = sweep.violations == 0 && sweep.verdict_mismatches == 0 &&
                      sweep.disc_failures == 0 && locus_failures == 0;
      return ok ? kOk : kTheoremViolation;
    }
    if (options.which == "fAi") {
      const LemmaFAiSweep sweep =
          sweep_lemma_fAi(options.rmax, options.a_mc, options.samples, options.seed);
      if (options.format == "json") {
        ordered_json j;
        j["schema"] = "rpinch-report/1";
        j["command"] = "lemma";
        j["which"] = "fAi";
        j["samples"] = sweep.samples;
        j["violations"] = sweep.violations;
        j["term_failures"] = sweep.term_failures;
        j["min_margin"] = sweep.min_margin;
        j["min_term"] = sweep.min_term;
        out << j.dump(2) << "\n";
      } else {
        out << "lemma fAi sweep: " << sweep.samples << " Monte-Carlo samples, r <= "
            << options.rmax << "\n";
        out << "violations of f <= r + a: " << sweep.violations << "\n";
        out << "decomposition term failures: " << sweep.term_failures << "\n";
        out << "min margin (r + a) - f: " << sweep.min_margin << "\n";
        out << "min decomposition term: " << sweep.min_term << "\n";
      }
      return (sweep.violations == 0 && sweep.term_failures == 0) ? kOk : kTheoremViolation;
    }
    throw InputError("--which must be fAn or fAi");
  });
}

}  // namespace rpinch::cli
