#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "rpinch/curvature.hpp"
#include "rpinch/moves.hpp"
#include "rpinch/soliton.hpp"

namespace rpinch {

// Moved pair (c h (A - ad(h^{-1}X)) h^{-1}, h . bracket), then rescaled so the
// bracket has norm 2 again (the compensating factor multiplies the operator).
RankOneData apply_move_rank_one(const RankOneData& data, const RankOneMove& move);

// Moved tuple h2 (sum_j c_ji A_j) h2^{-1} with [c_ij] the matrix of h1^{-1}.
AbelianNilData apply_move_abelian(const AbelianNilData& data, const AbelianMove& move);

// Block-matrix composition: applying `first` then `second` equals applying
// compose(second, first).
RankOneMove compose(const RankOneMove& second, const RankOneMove& first);
AbelianMove compose(const AbelianMove& second, const AbelianMove& first);

enum class SearchStrategy { RandomSearch, GradientAscent, Hybrid };

std::string to_string(SearchStrategy strategy);
SearchStrategy strategy_from_string(const std::string& name);

struct SearchOptions {
  SearchStrategy strategy = SearchStrategy::Hybrid;
  long trials = 1000;   // random moves (mixed radii)
  int starts = 20;      // gradient-ascent starts
  int iters = 200;      // ascent iterations per start
  std::uint64_t seed = 0;
  int threads = 0;      // 0: consult RP_THREADS, default 1
  bool polish = true;   // drive near-maximal ascent outputs onto the soliton set
  double soliton_tol = 1e-7;
};

struct EqualityCase {
  bool checked = false;  // the move reached soliton F within tolerance
  double moved_F = 0.0;
  SolitonCertificate certificate;
};

struct SearchReport {
  double soliton_F = 0.0;
  double best_F = 0.0;
  double gap = 0.0;  // soliton_F - best_F; negative beyond -1e-7 contradicts the theorems
  long trials = 0;
  int starts = 0;
  int iters = 0;
  std::uint64_t seed = 0;
  int threads = 1;
  SearchStrategy strategy = SearchStrategy::Hybrid;
  bool theorem_violation = false;
  bool converged_to_soliton = false;
  std::variant<RankOneMove, AbelianMove> best_move;
  EqualityCase equality;
};

// Multi-start maximization of F over metric moves; requires the input to
// certify as a soliton (the theorems only speak about soliton base points).
SearchReport maximize_F(const RankOneData& soliton, const SearchOptions& options);
SearchReport maximize_F(const AbelianNilData& soliton, const SearchOptions& options);

// Certifies the moved data when its F reaches the soliton value within tol;
// returns checked = false otherwise (skipped case).
EqualityCase verify_equality_case(const RankOneData& soliton, const RankOneMove& move,
                                  double tol = 1e-7);
EqualityCase verify_equality_case(const AbelianNilData& soliton, const AbelianMove& move,
                                  double tol = 1e-7);

// threads argument if positive, else RP_THREADS, else 1
int resolve_thread_count(int requested);

}  // namespace rpinch
