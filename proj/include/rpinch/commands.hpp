#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "rpinch/pinching.hpp"

namespace rpinch::cli {

// 0 success/verified, 1 negative certification, 2 input error,
// 3 theorem-violation alert.
enum ExitCode : int {
  kOk = 0,
  kNegative = 1,
  kInputError = 2,
  kTheoremViolation = 3,
};

struct RicciOptions {
  std::string file;
  std::string form = "both";  // blocks | generic | both
  std::string format = "text";
};

struct CertifyOptions {
  std::string file;
  std::string format = "text";
  double tol = 1e-7;
};

struct MaximizeOptions {
  std::string file;
  long trials = 1000;
  int starts = 20;
  int iters = 200;
  std::uint64_t seed = 0;
  std::string strategy = "hybrid";
  std::string format = "json";
  std::string out;  // also write the JSON report to this path
  int threads = 0;  // 0: RP_THREADS or 1
};

struct LemmaOptions {
  std::string which;  // fAn | fAi
  Range x0{0.1, 10.0};
  Range a{0.1, 10.0};
  Range b{0.1, 10.0};
  Range c{-5.0, 5.0};
  int grid = 50;
  double x_span = 100.0;
  int x_grid = 50;
  // fAi
  Range a_mc{0.0, 10.0};
  long samples = 100000;
  int rmax = 6;
  std::uint64_t seed = 0;
  std::string format = "text";
};

int cmd_ricci(const RicciOptions& options, std::ostream& out, std::ostream& err);
int cmd_certify(const CertifyOptions& options, std::ostream& out, std::ostream& err);
int cmd_maximize(const MaximizeOptions& options, std::ostream& out, std::ostream& err);
int cmd_lemma(const LemmaOptions& options, std::ostream& out, std::ostream& err);

}  // namespace rpinch::cli
