#pragma once

// Test-only helpers: independent naive implementations of the formulas under
// test, plus random data generators.  Kept free of the library's computation
// paths so cross-checks stay meaningful.

#include <unsupported/Eigen/MatrixFunctions>
#include <vector>

#include "rpinch/catalog.hpp"
#include "rpinch/curvature.hpp"
#include "rpinch/lie_bracket.hpp"
#include "rpinch/rng.hpp"

namespace testutil {

using rpinch::LieBracket;
using rpinch::Matrix;
using rpinch::Rng;
using rpinch::Vector;

inline Matrix random_matrix(Rng& rng, int rows, int cols, double sigma = 1.0) {
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = sigma * rng.normal();
  return m;
}

inline Vector random_vector(Rng& rng, int n, double sigma = 1.0) {
  Vector v(n);
  for (int i = 0; i < n; ++i) v(i) = sigma * rng.normal();
  return v;
}

inline Matrix random_gl(Rng& rng, int n, double sigma = 0.4) {
  return random_matrix(rng, n, n, sigma).exp();
}

inline Matrix random_orthogonal(Rng& rng, int n) {
  Matrix skew = random_matrix(rng, n, n, 0.7);
  skew = 0.5 * (skew - skew.transpose().eval());
  return skew.exp();
}

// --- independent oracles -----------------------------------------------------

inline Vector naive_bracket_eval(const LieBracket& b, const Vector& x, const Vector& y) {
  Vector out = Vector::Zero(b.dim());
  for (int i = 0; i < b.dim(); ++i)
    for (int j = 0; j < b.dim(); ++j)
      for (int k = 0; k < b.dim(); ++k) out(k) += x(i) * y(j) * b.coeff(i, j, k);
  return out;
}

inline Matrix naive_nil_ricci(const LieBracket& b) {
  const int n = b.dim();
  Matrix ric(n, n);
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) {
      double first = 0.0, second = 0.0;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          first += b.coeff(x, i, j) * b.coeff(y, i, j);
          second += b.coeff(i, j, x) * b.coeff(i, j, y);
        }
      ric(x, y) = -0.5 * first + 0.25 * second;
    }
  }
  return ric;
}

inline double naive_derivation_residual(const LieBracket& b, const Matrix& d) {
  double worst = 0.0;
  const int n = b.dim();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Vector defect = Vector::Zero(n);
      defect += d * naive_bracket_eval(b, Vector::Unit(n, i), Vector::Unit(n, j));
      defect -= naive_bracket_eval(b, d.col(i), Vector::Unit(n, j));
      defect -= naive_bracket_eval(b, Vector::Unit(n, i), d.col(j));
      worst = std::max(worst, defect.norm());
    }
  return worst;
}

// --- random structured data --------------------------------------------------

inline LieBracket catalog_bracket(Rng& rng, int max_dim = 6) {
  for (;;) {
    switch (rng.uniform_int(0, 4)) {
      case 0: return rpinch::heisenberg3();
      case 1:
        if (max_dim >= 5) return rpinch::heisenberg5();
        break;
      case 2: {
        const int dim = rng.uniform_int(3, max_dim);
        return rpinch::filiform(dim);
      }
      case 3:
        if (max_dim >= 6) return rpinch::free_two_step3();
        break;
      default: return rpinch::heisenberg3_unit();
    }
  }
}

inline LieBracket random_nilpotent(Rng& rng, int max_dim = 6) {
  const LieBracket base = catalog_bracket(rng, max_dim);
  const Matrix h = random_gl(rng, base.dim(), 0.3);
  return rpinch::normalize_bracket(rpinch::act_on_bracket(h, base), 2.0).bracket;
}

// Rank-one data over a random moved catalog bracket, with A a random element
// of its derivation algebra, |A| clipped to <= 10.
inline rpinch::RankOneData random_rank_one(Rng& rng, int max_dim = 6) {
  const LieBracket bracket = random_nilpotent(rng, max_dim);
  const std::vector<Matrix> basis = rpinch::derivation_basis(bracket);
  Matrix a = Matrix::Zero(bracket.dim(), bracket.dim());
  for (const Matrix& d : basis) a += rng.normal() * d;
  const double norm = a.norm();
  if (norm > 10.0) a *= 10.0 / norm;
  return rpinch::RankOneData{a, bracket};
}

// Rank-one data with a normal operator: orthogonal conjugate of a graded
// bracket with a commuting diagonal + in-block-rotation derivation.
inline rpinch::RankOneData random_normal_rank_one(Rng& rng) {
  const bool big = rng.uniform() < 0.5;
  LieBracket base = big ? rpinch::heisenberg5() : rpinch::heisenberg3();
  Matrix d;
  if (big) {
    const double s = rng.uniform(0.2, 2.0);
    d = Matrix::Zero(5, 5);
    d.diagonal() << s, s, s, s, 2.0 * s;
    // rotation inside the weight-s eigenspace commutes with d
    Matrix skew = Matrix::Zero(5, 5);
    const double t = rng.normal();
    skew(0, 1) = t;
    skew(1, 0) = -t;
    d += skew;
  } else {
    const double s = rng.uniform(0.2, 2.0);
    d = Matrix::Zero(3, 3);
    d.diagonal() << s, s, 2.0 * s;
    Matrix skew = Matrix::Zero(3, 3);
    const double t = rng.normal();
    skew(0, 1) = t;
    skew(1, 0) = -t;
    d += skew;
  }
  const Matrix q = random_orthogonal(rng, base.dim());
  const LieBracket moved = rpinch::normalize_bracket(rpinch::act_on_bracket(q, base), 2.0).bracket;
  return rpinch::RankOneData{q * d * q.transpose(), moved};
}

// Commuting tuple: either simultaneously diagonalizable (P D_i P^-1) or
// polynomials in a nilpotent shift, occasionally an orthogonal-normal family.
inline rpinch::AbelianNilData random_abelian(Rng& rng, int max_r = 4, int max_n = 6) {
  const int n = rng.uniform_int(1, max_n);
  // commuting families below span at most n dimensions
  const int r = rng.uniform_int(1, std::min(max_r, n));
  rpinch::AbelianNilData data;
  for (;;) {
    const int family = rng.uniform_int(0, 2);
    data.ops.clear();
    if (family == 0 || n == 1) {
      const Matrix p = random_gl(rng, n, 0.3);
      const Matrix pinv = p.inverse();
      for (int i = 0; i < r; ++i) {
        Vector diag = random_vector(rng, n, 1.5);
        data.ops.push_back(p * diag.asDiagonal() * pinv);
      }
    } else if (family == 1) {
      Matrix shift = Matrix::Zero(n, n);
      for (int i = 0; i + 1 < n; ++i) shift(i, i + 1) = 1.0;
      for (int i = 0; i < r; ++i) {
        Matrix op = rng.normal() * Matrix::Identity(n, n);
        Matrix power = Matrix::Identity(n, n);
        for (int k = 1; k < n; ++k) {
          power = power * shift;
          op += rng.normal() * power;
        }
        data.ops.push_back(op);
      }
    } else {
      const Matrix q = random_orthogonal(rng, n);
      for (int i = 0; i < r; ++i) {
        Vector diag = random_vector(rng, n, 1.5);
        data.ops.push_back(q * diag.asDiagonal() * q.transpose());
      }
    }
    for (Matrix& op : data.ops) {
      const double norm = op.norm();
      if (norm > 10.0) op *= 10.0 / norm;
    }
    try {
      rpinch::validate_abelian(data);
      return data;
    } catch (const rpinch::StructureError&) {
      continue;  // linearly dependent draw; resample
    }
  }
}

}  // namespace testutil
