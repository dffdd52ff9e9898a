#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <unsupported/Eigen/MatrixFunctions>

#include "oracles.hpp"
#include "rpinch/catalog.hpp"
#include "rpinch/soliton.hpp"

using namespace rpinch;

TEST_CASE("moment_map fixtures and equivariance") {
  Rng rng(401);
  Matrix sym = testutil::random_matrix(rng, 3, 3);
  sym = Matrix(0.5 * (sym + sym.transpose().eval()));
  CHECK(moment_map(sym).norm() == doctest::Approx(0.0));

  Matrix nil = Matrix::Zero(2, 2);
  nil(0, 1) = 1.0;
  const Matrix m = moment_map(nil);
  CHECK(m(0, 0) == doctest::Approx(1.0));
  CHECK(m(1, 1) == doctest::Approx(-1.0));
  CHECK(m(0, 1) == doctest::Approx(0.0));

  Matrix diag = Matrix::Zero(3, 3);
  diag.diagonal() << 2.0, -1.0, 0.5;
  CHECK(moment_map(diag).norm() == doctest::Approx(0.0));

  CHECK_THROWS_AS(moment_map(Matrix::Zero(2, 2)), InputError);

  for (int trial = 0; trial < 30; ++trial) {
    const Matrix a = testutil::random_matrix(rng, 4, 4);
    const Matrix q = testutil::random_orthogonal(rng, 4);
    const Matrix lhs = moment_map(Matrix(q * a * q.transpose()));
    const Matrix rhs = q * moment_map(a) * q.transpose();
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("normal operators are minimal vectors of their conjugation orbits") {
  Rng rng(409);
  for (int trial = 0; trial < 1000; ++trial) {
    Matrix normal;
    if (trial % 2) {
      Vector d = testutil::random_vector(rng, 4, 1.5);
      const Matrix q = testutil::random_orthogonal(rng, 4);
      normal = q * d.asDiagonal() * q.transpose();
    } else {
      Matrix skew = testutil::random_matrix(rng, 4, 4);
      skew = Matrix(0.5 * (skew - skew.transpose().eval()));
      normal = skew + rng.normal() * Matrix::Identity(4, 4);
    }
    const Matrix h = testutil::random_gl(rng, 4, 0.6);
    CHECK((h * normal * h.inverse()).norm() >= normal.norm() - 1e-9);
  }
}

TEST_CASE("orbit inequality with translations for the graded soliton operator") {
  Rng rng(419);
  const RankOneData soliton = heisenberg_solvsoliton();
  const double base_norm = soliton.A.norm();
  int equality_cases = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 3;
    Matrix h;
    Vector x;
    if (trial % 10 == 0) {
      // deliberate equality samples: orthogonal conjugation, no translation
      h = testutil::random_orthogonal(rng, n);
      x = Vector::Zero(n);
    } else {
      h = testutil::random_gl(rng, n, trial % 3 ? 0.5 : 1.5);
      x = testutil::random_vector(rng, n, 1.0);
    }
    const Matrix moved =
        h * (soliton.A - soliton.bracket.ad(h.inverse() * x)) * h.inverse();
    CHECK(moved.norm() >= base_norm - 1e-9);
    if (moved.norm() <= base_norm + 1e-9) {
      ++equality_cases;
      CHECK(moment_map(moved).norm() < 1e-6);
    }
  }
  CHECK(equality_cases >= 100);  // the injected orthogonal samples
}

TEST_CASE("certify_rank_one fixtures") {
  const SolitonCertificate good = certify_rank_one(heisenberg_solvsoliton());
  CHECK(good.soliton);
  CHECK(good.max_residual() < 1e-12);

  const SolitonCertificate h5 = certify_rank_one(heisenberg5_solvsoliton());
  CHECK(h5.soliton);
  CHECK(h5.max_residual() < 1e-12);

  // A = I is not a derivation of the Heisenberg bracket
  const SolitonCertificate not_deriv =
      certify_rank_one(RankOneData{Matrix::Identity(3, 3), heisenberg3()});
  CHECK_FALSE(not_deriv.soliton);
  CHECK(not_deriv.data_residual == doctest::Approx(std::sqrt(2.0)));
  CHECK(not_deriv.normality_residual == doctest::Approx(0.0));

  // A = 0: trace condition fails by |Ric|^2 = 3
  const SolitonCertificate zero =
      certify_rank_one(RankOneData{Matrix::Zero(3, 3), heisenberg3()});
  CHECK_FALSE(zero.soliton);
  CHECK(zero.trace_residual == doctest::Approx(3.0));
}

TEST_CASE("certify_abelian fixtures") {
  CHECK(certify_abelian(hyperbolic_plane()).soliton);
  CHECK(certify_abelian(hyperbolic_space(4)).soliton);
  CHECK(certify_abelian(diagonal_r2()).soliton);

  AbelianNilData shear;
  Matrix nil = Matrix::Zero(2, 2);
  nil(0, 1) = 1.0;
  shear.ops = {nil};
  const SolitonCertificate bad = certify_abelian(shear);
  CHECK_FALSE(bad.soliton);
  // |[A, A^t]| = |diag(1,-1)| = sqrt(2), after Gram rescale tr S^2 = 1 -> scale 2
  CHECK(bad.normality_residual > 1.0);
}

TEST_CASE("nilsoliton_search: fixed points and flat input") {
  const NilsolitonSearchResult heis = nilsoliton_search(heisenberg3());
  CHECK(heis.converged);
  CHECK(heis.residual < 1e-10);
  CHECK(heis.ric_norm_sq == doctest::Approx(3.0));

  const NilsolitonSearchResult flat = nilsoliton_search(abelian_bracket(3));
  CHECK(flat.converged);
  CHECK(flat.flat);

  LieBracket solvable(2);
  solvable.set_coeff(0, 1, 1, 1.0);
  CHECK_THROWS_AS(nilsoliton_search(solvable), NotNilpotentError);
}

TEST_CASE("nilsoliton_search recovers the Heisenberg soliton from perturbations") {
  Rng rng(431);
  for (int trial = 0; trial < 6; ++trial) {
    Matrix jiggle = testutil::random_matrix(rng, 3, 3, 0.12);
    if (jiggle.norm() > 0.3) jiggle *= 0.3 / jiggle.norm();
    const Matrix h = Matrix::Identity(3, 3) + jiggle;
    const LieBracket start = act_on_bracket(h, heisenberg3());
    const NilsolitonSearchResult result = nilsoliton_search(start);
    CHECK(result.converged);
    CHECK(result.residual < 1e-6);
    CHECK(std::abs(result.ric_norm_sq - 3.0) < 1e-6);
    for (size_t k = 0; k + 1 < result.energy_trace.size(); ++k)
      CHECK(result.energy_trace[k + 1] <= result.energy_trace[k] + 1e-15);
    CHECK(std::abs(result.bracket.norm() - 2.0) < 1e-12);
  }
}

TEST_CASE("rank_one_extension fixtures and failure modes") {
  const RankOneData ext = rank_one_extension(heisenberg3());
  const Matrix expected = heisenberg_solvsoliton().A;
  CHECK((ext.A - expected).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(certify_rank_one(ext).soliton);

  const RankOneData ext5 = rank_one_extension(heisenberg5());
  CHECK((ext5.A - heisenberg5_solvsoliton().A).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(certify_rank_one(ext5).soliton);

  // abelian nilradical is routed to the abelian construction
  CHECK_THROWS_AS(rank_one_extension(abelian_bracket(3)), InputError);

  // skew directions cannot match tr S(A)^2 = |Ric|^2 > 0
  Matrix skew = Matrix::Zero(3, 3);
  skew(0, 1) = 1.0;
  skew(1, 0) = -1.0;
  CHECK_THROWS_AS(rank_one_extension(heisenberg3(), skew), InputError);

  // non-derivation direction
  CHECK_THROWS_AS(rank_one_extension(heisenberg3(), Matrix::Identity(3, 3)), InputError);

  // non-nilsoliton base
  CHECK_THROWS_AS(rank_one_extension(filiform(4)), PreconditionError);
}

TEST_CASE("extensions over searched nilsolitons certify") {
  Rng rng(433);
  Matrix jiggle = testutil::random_matrix(rng, 3, 3, 0.1);
  const LieBracket start = act_on_bracket(Matrix(Matrix::Identity(3, 3) + jiggle),
                                          heisenberg3());
  const NilsolitonSearchResult found = nilsoliton_search(start, {.target_residual = 1e-9});
  REQUIRE(found.converged);
  const RankOneData ext = rank_one_extension(found.bracket);
  const SolitonCertificate cert = certify_rank_one(ext);
  CHECK(cert.soliton);
}

TEST_CASE("certify_nilsoliton") {
  CHECK(certify_nilsoliton(heisenberg3()).soliton);
  CHECK(certify_nilsoliton(heisenberg5()).soliton);
  CHECK(certify_nilsoliton(abelian_bracket(2)).soliton);  // flat
  CHECK_FALSE(certify_nilsoliton(filiform(4)).soliton);
}
