#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "rpinch/catalog.hpp"
#include "rpinch/orbit.hpp"
#include "rpinch/pinching.hpp"

using namespace rpinch;

namespace {

RankOneMove random_move(Rng& rng, int n, double sigma) {
  RankOneMove move;
  move.c = rng.sign() * std::exp(sigma * rng.normal());
  move.X = testutil::random_vector(rng, n, sigma);
  move.h = testutil::random_gl(rng, n, sigma);
  return move;
}

}  // namespace

TEST_CASE("F_rank_one fixtures and oracle equivalence") {
  CHECK(F_rank_one(heisenberg_solvsoliton()) == doctest::Approx(4.0).epsilon(1e-10));
  CHECK(F_rank_one(heisenberg5_solvsoliton()) == doctest::Approx(6.0).epsilon(1e-10));

  const RankOneData no_op{Matrix::Zero(3, 3), heisenberg3()};
  CHECK(F_rank_one(no_op) == doctest::Approx(1.0 / 3.0));

  Rng rng(307);
  for (int trial = 0; trial < 100; ++trial) {
    const RankOneData data = rng.uniform() < 0.5 ? testutil::random_rank_one(rng)
                                                 : testutil::random_normal_rank_one(rng);
    const double via_form = F_rank_one(data);
    const double via_oracle = generic_ricci(data).F;
    CHECK(std::abs(via_form - via_oracle) < 1e-9 * std::max(1.0, std::abs(via_oracle)));
  }
}

TEST_CASE("rank_one_params on the Heisenberg soliton") {
  const RankOneParams params = rank_one_params(heisenberg_solvsoliton().A);
  CHECK(params.x0 == doctest::Approx(1.5));
  CHECK(params.b == doctest::Approx(1.5));
  CHECK(params.a == doctest::Approx(9.5));
  CHECK(f_rank_one(params.x0, 1.0, params) == doctest::Approx(4.0));
}

TEST_CASE("reduce_rank_one: identity move reproduces the soliton scalars") {
  const RankOneData soliton = heisenberg_solvsoliton();
  const RankOneReduction red = reduce_rank_one(soliton, RankOneMove::identity(3));
  CHECK(red.x == doctest::Approx(red.x0));
  CHECK(red.T == doctest::Approx(red.x0 + red.b));
  CHECK(red.c == doctest::Approx(1.0));
  const RankOneParams params{red.x0, red.a, red.b};
  CHECK(f_rank_one(red.x, red.c, params) ==
        doctest::Approx((red.x0 + red.a + 1.0) / (red.x0 + red.b)));
}

TEST_CASE("reduce_rank_one bounds F of the moved metric") {
  Rng rng(311);
  for (const RankOneData& soliton :
       {heisenberg_solvsoliton(), heisenberg5_solvsoliton()}) {
    const RankOneParams params = rank_one_params(soliton.A);
    const double f_max = f_rank_one(params.x0, 1.0, params);
    for (int trial = 0; trial < 60; ++trial) {
      const RankOneMove move = random_move(rng, soliton.bracket.dim(), trial % 2 ? 0.8 : 0.2);
      const RankOneReduction red = reduce_rank_one(soliton, move);
      CHECK(red.x >= red.x0 - 1e-9);
      CHECK(red.T == doctest::Approx(red.x + red.b).epsilon(1e-9));
      const double bound = f_rank_one(red.x, red.c, params);
      const double moved_F = generic_ricci(apply_move_rank_one(soliton, move)).F;
      CHECK(moved_F <= bound + 1e-9 * std::max(1.0, std::abs(bound)));
      CHECK(bound <= f_max + 1e-9 * std::max(1.0, f_max));
    }
  }
}

TEST_CASE("f_rank_one limits") {
  const RankOneParams params{1.5, 9.5, 1.5};
  CHECK(f_rank_one(params.x0, 1.0, params) == doctest::Approx(4.0));
  // c = 0: constant in x
  CHECK(f_rank_one(params.x0, 0.0, params) == doctest::Approx(1.0 / 3.0));
  CHECK(f_rank_one(params.x0 + 57.0, 0.0, params) == doctest::Approx(1.0 / 3.0));
  // x -> infinity at fixed c
  CHECK(f_rank_one(1e9, 0.7, params) == doctest::Approx(1.0).epsilon(1e-6));
  // c -> infinity: (x+a)/(x+b), and that limit stays under f(x0, 1)
  Rng rng(313);
  for (int trial = 0; trial < 20; ++trial) {
    const double x = params.x0 + 20.0 * rng.uniform();
    const double big_c = f_rank_one(x, 1e6, params);
    const double limit = (x + params.a) / (x + params.b);
    CHECK(big_c == doctest::Approx(limit).epsilon(1e-6));
    CHECK(limit <= 1.0 + (params.a - params.b) / (params.x0 + params.b) + 1e-12);
    CHECK(limit < f_rank_one(params.x0, 1.0, params));
  }
}

TEST_CASE("lemma_fAn_certificate matches a direct polynomial expansion") {
  Rng rng(317);
  for (int trial = 0; trial < 200; ++trial) {
    const double x0 = rng.uniform(0.1, 10.0);
    const double b = rng.uniform(0.1, 10.0);
    const double a = b + rng.uniform(0.0, 10.0);
    const double c = rng.uniform(-5.0, 5.0);
    const RankOneParams params{x0, a, b};
    const PolynomialCertificate cert = lemma_fAn_certificate(params, c);

    // independent oracle: p(x) = (x0+a+1) q(x) - (x0+b) N(x)^2
    for (int k = 0; k < 8; ++k) {
      const double x = x0 + 12.0 * rng.uniform();
      const double c2 = c * c;
      const double n_of_x = c2 * (x + a) + 1.0;
      const double q_of_x = c2 * c2 * (x + b) * (x + a) + x0 + b;
      const double direct = (x0 + a + 1.0) * q_of_x - (x0 + b) * n_of_x * n_of_x;
      const double via_cert = (cert.r * x + cert.s) * x + cert.t;
      CHECK(via_cert == doctest::Approx(direct).epsilon(1e-9));
    }

    // paper's factored forms for p(x0) and the discriminant
    const double p0_factored = (x0 + a) * (x0 + b) * (c * c - 1.0) * (c * c - 1.0);
    CHECK(cert.p_at_x0 == doctest::Approx(p0_factored).epsilon(1e-7));
    const double lead = c * c * c * c * (a - b) * (x0 + a + 1.0);
    const double disc_factored =
        lead * (lead + 4.0 * (c * c - 1.0) * (x0 + b));
    const double disc_scale = std::max({1.0, std::abs(cert.disc), std::abs(disc_factored)});
    CHECK(std::abs(cert.disc - disc_factored) < 1e-7 * disc_scale);
    CHECK(cert.verdict != CertificateVerdict::Violated);
  }
}

TEST_CASE("lemma_fAn_certificate equality and degenerate cases") {
  const RankOneParams params{1.5, 9.5, 1.5};
  CHECK(lemma_fAn_certificate(params, 1.0).verdict == CertificateVerdict::EqualityAtX0);
  CHECK(lemma_fAn_certificate(params, -1.0).verdict == CertificateVerdict::EqualityAtX0);

  const PolynomialCertificate at_zero = lemma_fAn_certificate(params, 0.0);
  CHECK(at_zero.r == doctest::Approx(0.0));
  CHECK(at_zero.s == doctest::Approx(0.0));
  CHECK(at_zero.t ==
        doctest::Approx((params.x0 + params.a) * (params.x0 + params.b)));
  CHECK(at_zero.verdict == CertificateVerdict::PositiveOnHalfline);

  CHECK_THROWS_AS(lemma_fAn_certificate(RankOneParams{-1.0, 2.0, 1.0}, 0.5), InputError);
  CHECK_THROWS_AS(lemma_fAn_certificate(RankOneParams{1.0, 1.0, 2.0}, 0.5), InputError);
}

TEST_CASE("lemma_fAn grid sweep stays clean on a coarse grid") {
  const LemmaFAnSweep sweep = sweep_lemma_fAn(Range{0.1, 10.0}, Range{0.1, 10.0},
                                              Range{0.1, 10.0}, Range{-5.0, 5.0},
                                              /*grid=*/12, /*x_span=*/100.0, /*x_grid=*/50);
  CHECK(sweep.total_points > 0);
  CHECK(sweep.violations == 0);
  CHECK(sweep.verdict_mismatches == 0);
  CHECK(sweep.disc_failures == 0);
  CHECK(sweep.min_p > -1e-6);
}

TEST_CASE("f_abelian fixtures") {
  Vector ones = Vector::Ones(4);
  CHECK(f_abelian(ones, 2.5) == doctest::Approx(6.5));  // r + a
  Vector two_one(2);
  two_one << 2.0, 1.0;
  CHECK(f_abelian(two_one, 1.0) == doctest::Approx(16.0 / 7.0));
  Vector single(1);
  single << 3.7;
  CHECK(f_abelian(single, 0.0) == doctest::Approx(1.0));
  CHECK_THROWS_AS(f_abelian(Vector::Zero(2), 1.0), InputError);
}

TEST_CASE("lemma_fAi_check: decomposition, equality, and domain") {
  const FAiDecomposition ones = lemma_fAi_check(Vector::Ones(3), 2.0);
  CHECK(ones.t1 == doctest::Approx(0.0));
  CHECK(ones.t2 == doctest::Approx(0.0));
  CHECK(ones.t3 == doctest::Approx(0.0));
  CHECK(ones.equality);
  CHECK(ones.f_value == doctest::Approx(5.0));

  Vector two_one(2);
  two_one << 2.0, 1.0;
  const FAiDecomposition mid = lemma_fAi_check(two_one, 1.0);
  CHECK(mid.holds);
  CHECK_FALSE(mid.equality);
  CHECK(mid.f_value == doctest::Approx(16.0 / 7.0));

  Vector low(2);
  low << 0.5, 1.0;
  CHECK_THROWS_AS(lemma_fAi_check(low, 1.0), InputError);
}

TEST_CASE("lemma_fAi Monte-Carlo sweep") {
  const LemmaFAiSweep sweep = sweep_lemma_fAi(6, Range{0.0, 10.0}, 20000, 12345);
  CHECK(sweep.samples == 20000);
  CHECK(sweep.violations == 0);
  CHECK(sweep.term_failures == 0);
  CHECK(sweep.min_margin > -1e-12);
}

TEST_CASE("F_abelian fixtures and oracle equivalence") {
  CHECK(F_abelian(hyperbolic_plane()) == doctest::Approx(2.0));
  CHECK(F_abelian(hyperbolic_space(3)) == doctest::Approx(4.0));
  // soliton tuple with Gram = I and normal operators: F = r + a with a = 2
  CHECK(F_abelian(diagonal_r2()) == doctest::Approx(4.0));

  Rng rng(331);
  for (int trial = 0; trial < 100; ++trial) {
    const AbelianNilData data = testutil::random_abelian(rng);
    double via_form = 0.0, via_oracle = 0.0;
    bool flat_form = false, flat_oracle = false;
    try {
      via_form = F_abelian(data);
    } catch (const FlatMetricError&) {
      flat_form = true;
    }
    const RicciReport report = generic_ricci(data);
    flat_oracle = report.flat;
    if (!flat_oracle) via_oracle = report.F;
    CHECK(flat_form == flat_oracle);
    if (!flat_form)
      CHECK(std::abs(via_form - via_oracle) < 1e-9 * std::max(1.0, std::abs(via_oracle)));
  }
}

TEST_CASE("F_abelian is invariant under orthogonal conjugation and tuple rotation") {
  Rng rng(337);
  for (int trial = 0; trial < 30; ++trial) {
    const AbelianNilData data = testutil::random_abelian(rng, 3, 5);
    double base = 0.0;
    try {
      base = F_abelian(data);
    } catch (const FlatMetricError&) {
      continue;
    }
    const int n = data.dim_n();
    const int r = data.dim_a();
    const Matrix q2 = testutil::random_orthogonal(rng, n);
    AbelianNilData conj;
    for (const Matrix& op : data.ops) conj.ops.push_back(q2 * op * q2.transpose());
    CHECK(F_abelian(conj) == doctest::Approx(base).epsilon(1e-9));

    const Matrix q1 = testutil::random_orthogonal(rng, r);
    AbelianNilData mixed;
    for (int i = 0; i < r; ++i) {
      Matrix combo = Matrix::Zero(n, n);
      for (int j = 0; j < r; ++j) combo += q1(j, i) * data.ops[static_cast<size_t>(j)];
      mixed.ops.push_back(combo);
    }
    CHECK(F_abelian(mixed) == doctest::Approx(base).epsilon(1e-9));
  }
}

TEST_CASE("reduce_abelian: x1 >= 1 and the f-chain bounds moved F") {
  Rng rng(347);
  for (const AbelianNilData& soliton :
       {hyperbolic_plane(), hyperbolic_space(3), diagonal_r2()}) {
    const double f_sol = F_abelian(soliton);
    for (int trial = 0; trial < 60; ++trial) {
      AbelianMove move;
      const double sigma = trial % 2 ? 0.7 : 0.2;
      move.h1 = testutil::random_gl(rng, soliton.dim_a(), sigma);
      move.h2 = testutil::random_gl(rng, soliton.dim_n(), sigma);
      const AbelianReduction red = reduce_abelian(soliton, move);
      CHECK(red.xs(0) >= 1.0 - 1e-9);
      const double bound = f_abelian(red.xs, red.a);
      const double moved_F = generic_ricci(apply_move_abelian(soliton, move)).F;
      CHECK(moved_F <= bound + 1e-9 * std::max(1.0, bound));
      CHECK(bound <= static_cast<double>(soliton.dim_a()) + red.a + 1e-9);
      CHECK(f_sol == doctest::Approx(soliton.dim_a() + red.a).epsilon(1e-9));
    }
  }
}

TEST_CASE("critical curve of f: c-criticality, monotone decrease, boundary maximum") {
  const RankOneParams heis{1.5, 9.5, 1.5};
  const CriticalCurveReport report = critical_set_fAn(heis);
  CHECK(report.d == doctest::Approx(3.0));
  // (x0, +-1) lies on the curve
  CHECK(report.cs.front() == doctest::Approx(1.0));
  CHECK(report.xs.front() == doctest::Approx(heis.x0));
  // the c-partial vanishes along the whole curve
  CHECK(report.max_abs_df_dc < 1e-8);
  // f does not increase along the curve, and tops out at f(x0, 1)
  CHECK(report.max_df_dx < 1e-10);
  // boundary maximum at (x0, 1), finite differences with step 1e-5:
  // the c-partial vanishes; the x-partial equals -(x0+a+1)(a-b)/q(x0)^2 < 0,
  // so (x0, 1) maximizes f on {x >= x0} as a boundary point
  {
    const double h = 1e-5;
    const double dfdc =
        (f_rank_one(heis.x0, 1.0 + h, heis) - f_rank_one(heis.x0, 1.0 - h, heis)) / (2.0 * h);
    CHECK(std::abs(dfdc) < 1e-8);
    const double dfdx =
        (f_rank_one(heis.x0 + h, 1.0, heis) - f_rank_one(heis.x0 - h, 1.0, heis)) / (2.0 * h);
    const double expected_dfdx =
        (heis.b - heis.a) / ((heis.x0 + heis.b) * (heis.x0 + heis.b));
    CHECK(dfdx == doctest::Approx(expected_dfdx).epsilon(1e-5));
    CHECK(dfdx < 0.0);
  }
  CHECK(report.max_value == doctest::Approx(report.f_at_soliton).epsilon(1e-12));
  for (size_t k = 0; k + 2 < report.values.size(); k += 2)
    CHECK(report.values[k] >= report.values[k + 2] - 1e-12);

  // off the curve (and away from c = 0) the c-partial is nonzero
  Rng rng(353);
  for (int trial = 0; trial < 30; ++trial) {
    const double x = heis.x0 + 10.0 * rng.uniform();
    const double c_on = std::sqrt(report.d / (x + heis.b));
    const double c = c_on + rng.sign() * rng.uniform(0.1, 0.5);
    if (std::abs(c) < 0.05) continue;
    const double step = 1e-5;
    const double dfdc =
        (f_rank_one(x, c + step, heis) - f_rank_one(x, c - step, heis)) / (2.0 * step);
    CHECK(std::abs(dfdc) > 1e-6);
  }

  // for a == b the curve is genuinely critical in both variables
  const RankOneParams balanced{2.0, 1.0, 1.0};
  const CriticalCurveReport flat_curve = critical_set_fAn(balanced);
  CHECK(flat_curve.max_abs_df_dc < 1e-8);
  CHECK(std::abs(flat_curve.max_df_dx) < 1e-8);
}

TEST_CASE("denominator positivity of f on the half-line") {
  Rng rng(359);
  for (int trial = 0; trial < 50; ++trial) {
    const double x0 = rng.uniform(0.1, 10.0);
    const double b = rng.uniform(0.1, 10.0);
    const double a = b + rng.uniform(0.0, 10.0);
    const double c = rng.uniform(-5.0, 5.0);
    const double c4 = c * c * c * c;
    const double q0 = c4 * (x0 + b) * (x0 + a) + x0 + b;
    const double dq0 = c4 * (2.0 * x0 + a + b);
    CHECK(q0 > 0.0);
    CHECK(dq0 >= 0.0);
    for (int k = 0; k < 10; ++k) {
      const double x = x0 + 100.0 * rng.uniform();
      CHECK(c4 * (x + b) * (x + a) + x0 + b > 0.0);
    }
  }
}
