#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "rpinch/commands.hpp"
#include "rpinch/errors.hpp"

namespace {

// "lo:hi" -> Range
rpinch::Range parse_range(const std::string& text) {
  const auto sep = text.find(':');
  if (sep == std::string::npos)
    throw rpinch::InputError("range must be 'lo:hi', got '" + text + "'");
  const double lo = std::stod(text.substr(0, sep));
  const double hi = std::stod(text.substr(sep + 1));
  if (lo > hi) throw rpinch::InputError("inverted range '" + text + "'");
  return rpinch::Range{lo, hi};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"curvature, soliton certification, and Ricci-pinching experiments "
               "on solvable Lie groups"};
  app.require_subcommand(1);

  rpinch::cli::RicciOptions ricci;
  CLI::App* ricci_cmd = app.add_subcommand("ricci", "Ricci operator and pinching functional");
  ricci_cmd->add_option("file", ricci.file, "algebra JSON file")->required();
  ricci_cmd->add_option("--form", ricci.form, "blocks | generic | both")
      ->check(CLI::IsMember({"blocks", "generic", "both"}));
  ricci_cmd->add_option("--format", ricci.format, "text | json")
      ->check(CLI::IsMember({"text", "json"}));

  rpinch::cli::CertifyOptions certify;
  CLI::App* certify_cmd = app.add_subcommand("certify", "solvsoliton certificate");
  certify_cmd->add_option("file", certify.file, "algebra JSON file")->required();
  certify_cmd->add_option("--format", certify.format, "text | json")
      ->check(CLI::IsMember({"text", "json"}));
  certify_cmd->add_option("--tol", certify.tol, "residual tolerance");

  rpinch::cli::MaximizeOptions maximize;
  CLI::App* maximize_cmd =
      app.add_subcommand("maximize", "search for moves beating the soliton F");
  maximize_cmd->add_option("file", maximize.file, "algebra JSON file")->required();
  maximize_cmd->add_option("--trials", maximize.trials, "random moves");
  maximize_cmd->add_option("--starts", maximize.starts, "gradient-ascent starts");
  maximize_cmd->add_option("--iters", maximize.iters, "ascent iterations per start");
  maximize_cmd->add_option("--seed", maximize.seed, "RNG seed");
  maximize_cmd->add_option("--strategy", maximize.strategy, "random | gradient | hybrid")
      ->check(CLI::IsMember({"random", "gradient", "hybrid"}));
  maximize_cmd->add_option("--format", maximize.format, "text | json")
      ->check(CLI::IsMember({"text", "json"}));
  maximize_cmd->add_option("--out", maximize.out, "write the JSON report to this path");
  maximize_cmd->add_option("--threads", maximize.threads,
                           "parallel trial evaluation (default: RP_THREADS or 1)");

  rpinch::cli::LemmaOptions lemma;
  std::string x0_range = "0.1:10", a_range = "0.1:10", b_range = "0.1:10", c_range = "-5:5";
  std::string a_mc_range = "0:10";
  CLI::App* lemma_cmd = app.add_subcommand("lemma", "scalar-lemma sweeps and certificates");
  lemma_cmd->add_option("--which", lemma.which, "fAn | fAi")
      ->required()
      ->check(CLI::IsMember({"fAn", "fAi"}));
  lemma_cmd->add_option("--x0", x0_range, "x0 range lo:hi (fAn)");
  lemma_cmd->add_option("--a", a_range, "a range lo:hi (fAn)");
  lemma_cmd->add_option("--b", b_range, "b range lo:hi (fAn)");
  lemma_cmd->add_option("--c", c_range, "c range lo:hi (fAn)");
  lemma_cmd->add_option("--grid", lemma.grid, "points per parameter axis (fAn)");
  lemma_cmd->add_option("--xspan", lemma.x_span, "length of the x sweep beyond x0 (fAn)");
  lemma_cmd->add_option("--arange", a_mc_range, "a range lo:hi (fAi)");
  lemma_cmd->add_option("--samples", lemma.samples, "Monte-Carlo samples (fAi)");
  lemma_cmd->add_option("--rmax", lemma.rmax, "max tuple length (fAi)");
  lemma_cmd->add_option("--seed", lemma.seed, "RNG seed (fAi)");
  lemma_cmd->add_option("--format", lemma.format, "text | json")
      ->check(CLI::IsMember({"text", "json"}));

  CLI11_PARSE(app, argc, argv);

  try {
    if (*ricci_cmd) return rpinch::cli::cmd_ricci(ricci, std::cout, std::cerr);
    if (*certify_cmd) return rpinch::cli::cmd_certify(certify, std::cout, std::cerr);
    if (*maximize_cmd) return rpinch::cli::cmd_maximize(maximize, std::cout, std::cerr);
    if (*lemma_cmd) {
      lemma.x0 = parse_range(x0_range);
      lemma.a = parse_range(a_range);
      lemma.b = parse_range(b_range);
      lemma.c = parse_range(c_range);
      lemma.a_mc = parse_range(a_mc_range);
      return rpinch::cli::cmd_lemma(lemma, std::cout, std::cerr);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return rpinch::cli::kInputError;
  }
  return rpinch::cli::kInputError;
}
