#pragma once

#include "rpinch/curvature.hpp"

namespace rpinch {

// Metric move on rank-one data, i.e. the block matrix
//   [ 1/c  0 ]
//   [  X   h ]
// acting on s = RY + n.  The moved pair is
//   (c h (A - ad_n(h^{-1}X)) h^{-1},  h . bracket),
// renormalized afterwards so the bracket has norm 2.
struct RankOneMove {
  double c = 1.0;
  Vector X;
  Matrix h;

  static RankOneMove identity(int dim_n) {
    return RankOneMove{1.0, Vector::Zero(dim_n), Matrix::Identity(dim_n, dim_n)};
  }
};

// Metric move on abelian-nilradical data: h1 mixes the tuple through
// ad(h1^{-1} Y_i) and h2 conjugates on n.
struct AbelianMove {
  Matrix h1;
  Matrix h2;

  static AbelianMove identity(int dim_a, int dim_n) {
    return AbelianMove{Matrix::Identity(dim_a, dim_a), Matrix::Identity(dim_n, dim_n)};
  }
};

}  // namespace rpinch
