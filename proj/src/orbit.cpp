#include "rpinch/orbit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <thread>
#include <unsupported/Eigen/MatrixFunctions>

#include "rpinch/rng.hpp"

namespace rpinch {

RankOneData apply_move_rank_one(const RankOneData& data, const RankOneMove& move) {
  const int n = data.bracket.dim();
  if (move.X.size() != n || move.h.rows() != n || move.h.cols() != n)
    throw InputError("apply_move_rank_one: move dimension mismatch");
  if (move.c == 0.0) throw InputError("apply_move_rank_one: move scalar must be nonzero");
  Eigen::FullPivLU<Matrix> lu(move.h);
  if (!lu.isInvertible()) throw InputError("apply_move_rank_one: singular move");
  const Matrix hinv = lu.inverse();
  const Matrix moved_op = move.h * (data.A - data.bracket.ad(hinv * move.X)) * hinv;
  const LieBracket moved_bracket = act_on_bracket(move.h, data.bracket);
  const double norm = moved_bracket.norm();
  if (norm == 0.0) throw InputError("apply_move_rank_one: degenerate bracket");
  const double rescale = 2.0 / norm;
  RankOneData out{rescale * move.c * moved_op, moved_bracket.scaled(rescale)};
  const double residual = is_derivation(out.bracket, out.A);
  if (residual > 1e-6 * std::max(1.0, out.A.norm()))
    throw StructureError("apply_move_rank_one: moved operator is not a derivation (residual " +
                         std::to_string(residual) + ")");
  return out;
}

AbelianNilData apply_move_abelian(const AbelianNilData& data, const AbelianMove& move) {
  const int r = data.dim_a();
  const int n = data.dim_n();
  if (move.h1.rows() != r || move.h1.cols() != r || move.h2.rows() != n || move.h2.cols() != n)
    throw InputError("apply_move_abelian: move dimension mismatch");
  Eigen::FullPivLU<Matrix> lu1(move.h1);
  Eigen::FullPivLU<Matrix> lu2(move.h2);
  if (!lu1.isInvertible()) throw InputError("apply_move_abelian: singular h1");
  if (!lu2.isInvertible()) throw InputError("apply_move_abelian: singular h2");
  const Matrix mix = lu1.inverse();
  const Matrix h2inv = lu2.inverse();
  AbelianNilData out;
  out.ops.reserve(data.ops.size());
  double scale = 1.0;
  for (int i = 0; i < r; ++i) {
    Matrix mixed = Matrix::Zero(n, n);
    for (int j = 0; j < r; ++j) mixed += mix(j, i) * data.ops[static_cast<size_t>(j)];
    out.ops.push_back(move.h2 * mixed * h2inv);
    scale = std::max(scale, out.ops.back().squaredNorm());
  }
  for (int i = 0; i < r; ++i)
    for (int j = i + 1; j < r; ++j)
      if (commutator(out.ops[static_cast<size_t>(i)], out.ops[static_cast<size_t>(j)]).norm() >
          1e-9 * scale)
        throw StructureError("apply_move_abelian: moved tuple does not commute");
  return out;
}

RankOneMove compose(const RankOneMove& second, const RankOneMove& first) {
  RankOneMove out;
  out.c = first.c * second.c;
  out.X = second.X / first.c + second.h * first.X;
  out.h = second.h * first.h;
  return out;
}

AbelianMove compose(const AbelianMove& second, const AbelianMove& first) {
  return AbelianMove{second.h1 * first.h1, second.h2 * first.h2};
}

std::string to_string(SearchStrategy strategy) {
  switch (strategy) {
    case SearchStrategy::RandomSearch: return "random";
    case SearchStrategy::GradientAscent: return "gradient";
    case SearchStrategy::Hybrid: return "hybrid";
  }
  return "hybrid";
}

SearchStrategy strategy_from_string(const std::string& name) {
  if (name == "random") return SearchStrategy::RandomSearch;
  if (name == "gradient") return SearchStrategy::GradientAscent;
  if (name == "hybrid") return SearchStrategy::Hybrid;
  throw InputError("unknown search strategy: " + name);
}

int resolve_thread_count(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("RP_THREADS")) {
    const int parsed = std::atoi(env);
    if (parsed > 0) return parsed;
  }
  return 1;
}

namespace {

constexpr double kRadii[3] = {0.1, 0.5, 2.0};

// Runs fn(index) for index in [0, total); chunked across threads.  Each index
// is evaluated independently of thread layout, so results are deterministic.
void parallel_indices(long total, int threads, const std::function<void(long)>& fn) {
  threads = std::min<long>(std::max(threads, 1), std::max<long>(total, 1));
  if (threads <= 1) {
    for (long i = 0; i < total; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  const long chunk = (total + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) {
    const long begin = t * chunk;
    const long end = std::min(total, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([begin, end, &fn] {
      for (long i = begin; i < end; ++i) fn(i);
    });
  }
  for (std::thread& worker : pool) worker.join();
}

Matrix random_matrix(Rng& rng, int rows, int cols, double sigma) {
  Matrix out(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) out(i, j) = sigma * rng.normal();
  return out;
}

// ---------------------------------------------------------------------------
// move parametrizations for gradient ascent
// ---------------------------------------------------------------------------

struct RankOneChart {
  int dim_n;
  double sign;  // sign of c, fixed per start

  int size() const { return 1 + dim_n + dim_n * dim_n; }

  RankOneMove move(const Vector& theta) const {
    RankOneMove out;
    out.c = sign * std::exp(theta(0));
    out.X = theta.segment(1, dim_n);
    Matrix gen(dim_n, dim_n);
    for (int j = 0; j < dim_n; ++j)
      gen.col(j) = theta.segment(1 + dim_n + j * dim_n, dim_n);
    out.h = gen.exp();
    return out;
  }
};

struct AbelianChart {
  int dim_a;
  int dim_n;

  int size() const { return dim_a * dim_a + dim_n * dim_n; }

  AbelianMove move(const Vector& theta) const {
    Matrix g1(dim_a, dim_a), g2(dim_n, dim_n);
    for (int j = 0; j < dim_a; ++j) g1.col(j) = theta.segment(j * dim_a, dim_a);
    for (int j = 0; j < dim_n; ++j)
      g2.col(j) = theta.segment(dim_a * dim_a + j * dim_n, dim_n);
    return AbelianMove{g1.exp(), g2.exp()};
  }
};

struct AscentResult {
  Vector theta;
  double value;
};

// Backtracking gradient ascent with finite-difference gradients; stops when
// the relative improvement drops below 1e-12 or iterations are exhausted.
AscentResult gradient_ascent(const std::function<double(const Vector&)>& objective,
                             Vector theta, int iters) {
  const double fd_step = 1e-6;
  double value = objective(theta);
  double step = 0.25;
  for (int iter = 0; iter < iters; ++iter) {
    Vector grad(theta.size());
    for (int k = 0; k < theta.size(); ++k) {
      Vector probe = theta;
      probe(k) = theta(k) + fd_step;
      const double plus = objective(probe);
      probe(k) = theta(k) - fd_step;
      const double minus = objective(probe);
      grad(k) = (plus - minus) / (2.0 * fd_step);
    }
    const double grad_sq = grad.squaredNorm();
    if (grad_sq == 0.0) break;
    bool accepted = false;
    double t = step;
    for (int halving = 0; halving < 50; ++halving) {
      const Vector candidate = theta + t * grad;
      const double cand_value = objective(candidate);
      if (cand_value >= value + 1e-4 * t * grad_sq) {
        const double improvement = cand_value - value;
        theta = candidate;
        value = cand_value;
        step = std::min(4.0 * t, 1.0);
        accepted = true;
        if (improvement < 1e-12 * std::max(1.0, std::abs(value))) iter = iters;  // converged
        break;
      }
      t *= 0.5;
    }
    if (!accepted) break;
  }
  return AscentResult{theta, value};
}

// Descent on a nonnegative objective (sum of squared soliton residuals) under
// the constraint that the pinching value may not drop below floor_value.
Vector residual_polish(const std::function<double(const Vector&)>& residual_sq,
                       const std::function<double(const Vector&)>& pinching,
                       Vector theta, double floor_value, int iters) {
  const double fd_step = 1e-7;
  double value = residual_sq(theta);
  double step = 0.1;
  for (int iter = 0; iter < iters; ++iter) {
    Vector grad(theta.size());
    for (int k = 0; k < theta.size(); ++k) {
      Vector probe = theta;
      probe(k) = theta(k) + fd_step;
      const double plus = residual_sq(probe);
      probe(k) = theta(k) - fd_step;
      const double minus = residual_sq(probe);
      grad(k) = (plus - minus) / (2.0 * fd_step);
    }
    const double grad_sq = grad.squaredNorm();
    if (grad_sq == 0.0 || value == 0.0) break;
    bool accepted = false;
    double t = step;
    for (int halving = 0; halving < 60; ++halving) {
      const Vector candidate = theta - t * grad;
      const double cand_value = residual_sq(candidate);
      if (cand_value <= value - 1e-4 * t * grad_sq && pinching(candidate) >= floor_value) {
        theta = candidate;
        value = cand_value;
        step = std::min(4.0 * t, 1.0);
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) break;
    if (value < 1e-22) break;
  }
  return theta;
}

double certificate_residual_sq(const SolitonCertificate& cert) {
  return cert.normality_residual * cert.normality_residual +
         cert.trace_residual * cert.trace_residual +
         cert.derivation_residual * cert.derivation_residual +
         cert.data_residual * cert.data_residual;
}

}  // namespace

EqualityCase verify_equality_case(const RankOneData& soliton, const RankOneMove& move,
                                  double tol) {
  EqualityCase out;
  const double soliton_F = generic_ricci(soliton).F;
  const RankOneData moved = apply_move_rank_one(soliton, move);
  out.moved_F = generic_ricci(moved).F;
  if (out.moved_F < soliton_F - tol) return out;  // skipped case
  out.checked = true;
  out.certificate = certify_rank_one(moved, tol);
  return out;
}

EqualityCase verify_equality_case(const AbelianNilData& soliton, const AbelianMove& move,
                                  double tol) {
  EqualityCase out;
  const double soliton_F = generic_ricci(soliton).F;
  const AbelianNilData moved = apply_move_abelian(soliton, move);
  out.moved_F = generic_ricci(moved).F;
  if (out.moved_F < soliton_F - tol) return out;
  out.checked = true;
  out.certificate = certify_abelian(moved, tol);
  return out;
}

SearchReport maximize_F(const RankOneData& soliton, const SearchOptions& options) {
  const SolitonCertificate cert = certify_rank_one(soliton);
  if (!cert.soliton)
    throw PreconditionError("maximize_F: input does not certify as a solvsoliton (residual " +
                            std::to_string(cert.max_residual()) + ")");
  const bool use_random = options.strategy != SearchStrategy::GradientAscent;
  const bool use_ascent = options.strategy != SearchStrategy::RandomSearch;
  if (use_random && options.trials < 1)
    throw InputError("maximize_F: need at least one trial");
  if (use_ascent && options.starts < 1)
    throw InputError("maximize_F: need at least one gradient-ascent start");

  const int n = soliton.bracket.dim();
  const double a_norm = std::max(soliton.A.norm(), 1.0);
  const int threads = resolve_thread_count(options.threads);

  SearchReport report;
  report.soliton_F = generic_ricci(soliton).F;
  report.trials = use_random ? options.trials : 0;
  report.starts = use_ascent ? options.starts : 0;
  report.iters = options.iters;
  report.seed = options.seed;
  report.threads = threads;
  report.strategy = options.strategy;

  const auto sample_move = [&](long index) {
    Rng rng = Rng::stream(options.seed, static_cast<std::uint64_t>(index));
    const double sigma = kRadii[index % 3];
    RankOneMove move;
    move.c = rng.sign() * std::exp(sigma * rng.normal());
    move.X = random_matrix(rng, n, 1, sigma * a_norm);
    move.h = random_matrix(rng, n, n, sigma).exp();
    return move;
  };
  const auto move_value = [&](const RankOneMove& move) {
    return generic_ricci(apply_move_rank_one(soliton, move)).F;
  };

  double best_F = -std::numeric_limits<double>::infinity();
  RankOneMove best_move = RankOneMove::identity(n);

  if (use_random) {
    std::vector<double> values(static_cast<size_t>(options.trials));
    parallel_indices(options.trials, threads, [&](long index) {
      values[static_cast<size_t>(index)] = move_value(sample_move(index));
    });
    for (long index = 0; index < options.trials; ++index) {
      if (values[static_cast<size_t>(index)] > best_F) {
        best_F = values[static_cast<size_t>(index)];
        best_move = sample_move(index);
      }
    }
  }

  if (use_ascent) {
    struct StartOutcome {
      double value = 0.0;
      RankOneMove move;
    };
    std::vector<StartOutcome> outcomes(static_cast<size_t>(options.starts));
    parallel_indices(options.starts, threads, [&](long index) {
      Rng rng = Rng::stream(options.seed ^ 0x5851f42d4c957f2dull,
                            static_cast<std::uint64_t>(index));
      RankOneChart chart{n, index % 2 == 0 ? 1.0 : -1.0};
      Vector theta(chart.size());
      for (int k = 0; k < theta.size(); ++k) theta(k) = 0.2 * rng.normal();
      const auto objective = [&](const Vector& params) {
        return move_value(chart.move(params));
      };
      AscentResult ascent = gradient_ascent(objective, theta, options.iters);
      if (options.polish && ascent.value >= report.soliton_F - 1e-5) {
        const auto residual_sq = [&](const Vector& params) {
          const RankOneData moved = apply_move_rank_one(soliton, chart.move(params));
          return certificate_residual_sq(certify_rank_one(moved));
        };
        const double floor_value = std::min(ascent.value, report.soliton_F - 1e-9);
        const Vector polished =
            residual_polish(residual_sq, objective, ascent.theta, floor_value, 200);
        const double polished_value = objective(polished);
        if (polished_value >= floor_value) {
          ascent.theta = polished;
          ascent.value = polished_value;
        }
      }
      outcomes[static_cast<size_t>(index)] =
          StartOutcome{ascent.value, chart.move(ascent.theta)};
    });
    for (const StartOutcome& outcome : outcomes) {
      if (outcome.value > best_F) {
        best_F = outcome.value;
        best_move = outcome.move;
      }
    }
  }

  report.best_F = best_F;
  report.gap = report.soliton_F - best_F;
  report.theorem_violation = report.gap < -options.soliton_tol;
  report.best_move = best_move;
  report.equality = verify_equality_case(soliton, best_move, options.soliton_tol);
  report.converged_to_soliton = report.equality.checked && report.equality.certificate.soliton;
  return report;
}

SearchReport maximize_F(const AbelianNilData& soliton, const SearchOptions& options) {
  const SolitonCertificate cert = certify_abelian(soliton);
  if (!cert.soliton)
    throw PreconditionError("maximize_F: input does not certify as a solvsoliton (residual " +
                            std::to_string(cert.max_residual()) + ")");
  const bool use_random = options.strategy != SearchStrategy::GradientAscent;
  const bool use_ascent = options.strategy != SearchStrategy::RandomSearch;
  if (use_random && options.trials < 1)
    throw InputError("maximize_F: need at least one trial");
  if (use_ascent && options.starts < 1)
    throw InputError("maximize_F: need at least one gradient-ascent start");

  const int r = soliton.dim_a();
  const int n = soliton.dim_n();
  const int threads = resolve_thread_count(options.threads);

  SearchReport report;
  report.soliton_F = generic_ricci(soliton).F;
  report.trials = use_random ? options.trials : 0;
  report.starts = use_ascent ? options.starts : 0;
  report.iters = options.iters;
  report.seed = options.seed;
  report.threads = threads;
  report.strategy = options.strategy;

  const auto sample_move = [&](long index) {
    Rng rng = Rng::stream(options.seed, static_cast<std::uint64_t>(index));
    const double sigma = kRadii[index % 3];
    AbelianMove move;
    move.h1 = random_matrix(rng, r, r, sigma).exp();
    move.h2 = random_matrix(rng, n, n, sigma).exp();
    return move;
  };
  const auto move_value = [&](const AbelianMove& move) {
    return generic_ricci(apply_move_abelian(soliton, move)).F;
  };

  double best_F = -std::numeric_limits<double>::infinity();
  AbelianMove best_move = AbelianMove::identity(r, n);

  if (use_random) {
    std::vector<double> values(static_cast<size_t>(options.trials));
    parallel_indices(options.trials, threads, [&](long index) {
      values[static_cast<size_t>(index)] = move_value(sample_move(index));
    });
    for (long index = 0; index < options.trials; ++index) {
      if (values[static_cast<size_t>(index)] > best_F) {
        best_F = values[static_cast<size_t>(index)];
        best_move = sample_move(index);
      }
    }
  }

  if (use_ascent) {
    struct StartOutcome {
      double value = 0.0;
      AbelianMove move;
    };
    std::vector<StartOutcome> outcomes(static_cast<size_t>(options.starts));
    parallel_indices(options.starts, threads, [&](long index) {
      Rng rng = Rng::stream(options.seed ^ 0x5851f42d4c957f2dull,
                            static_cast<std::uint64_t>(index));
      AbelianChart chart{r, n};
      Vector theta(chart.size());
      for (int k = 0; k < theta.size(); ++k) theta(k) = 0.2 * rng.normal();
      const auto objective = [&](const Vector& params) {
        return move_value(chart.move(params));
      };
      AscentResult ascent = gradient_ascent(objective, theta, options.iters);
      if (options.polish && ascent.value >= report.soliton_F - 1e-5) {
        const auto residual_sq = [&](const Vector& params) {
          const AbelianNilData moved = apply_move_abelian(soliton, chart.move(params));
          return certificate_residual_sq(certify_abelian(moved));
        };
        const double floor_value = std::min(ascent.value, report.soliton_F - 1e-9);
        const Vector polished =
            residual_polish(residual_sq, objective, ascent.theta, floor_value, 200);
        const double polished_value = objective(polished);
        if (polished_value >= floor_value) {
          ascent.theta = polished;
          ascent.value = polished_value;
        }
      }
      outcomes[static_cast<size_t>(index)] =
          StartOutcome{ascent.value, chart.move(ascent.theta)};
    });
    for (const StartOutcome& outcome : outcomes) {
      if (outcome.value > best_F) {
        best_F = outcome.value;
        best_move = outcome.move;
      }
    }
  }

  report.best_F = best_F;
  report.gap = report.soliton_F - best_F;
  report.theorem_violation = report.gap < -options.soliton_tol;
  report.best_move = best_move;
  report.equality = verify_equality_case(soliton, best_move, options.soliton_tol);
  report.converged_to_soliton = report.equality.checked && report.equality.certificate.soliton;
  return report;
}

}  // namespace rpinch
