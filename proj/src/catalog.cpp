#include "rpinch/catalog.hpp"

#include <cmath>

namespace rpinch {

LieBracket abelian_bracket(int dim) { return LieBracket(dim); }

LieBracket heisenberg3_unit() {
  LieBracket b(3);
  b.set_coeff(0, 1, 2, 1.0);
  return b;
}

LieBracket heisenberg3() {
  LieBracket b(3);
  b.set_coeff(0, 1, 2, std::sqrt(2.0));
  return b;
}

LieBracket heisenberg5() {
  LieBracket b(5);
  b.set_coeff(0, 1, 4, 1.0);
  b.set_coeff(2, 3, 4, 1.0);
  return b;
}

LieBracket filiform(int dim) {
  if (dim < 3) throw InputError("filiform: dimension must be at least 3");
  LieBracket b(dim);
  for (int i = 1; i + 1 < dim; ++i) b.set_coeff(0, i, i + 1, 1.0);
  return b;
}

LieBracket free_two_step3() {
  LieBracket b(6);
  b.set_coeff(0, 1, 3, 1.0);
  b.set_coeff(0, 2, 4, 1.0);
  b.set_coeff(1, 2, 5, 1.0);
  return b;
}

RankOneData heisenberg_solvsoliton() {
  Matrix a = Matrix::Zero(3, 3);
  const double scale = 1.0 / std::sqrt(2.0);
  a.diagonal() << scale, scale, 2.0 * scale;
  return RankOneData{a, heisenberg3()};
}

RankOneData heisenberg5_solvsoliton() {
  Matrix a = Matrix::Zero(5, 5);
  a.diagonal() << 0.5, 0.5, 0.5, 0.5, 1.0;
  return RankOneData{a, heisenberg5()};
}

AbelianNilData hyperbolic_plane() {
  AbelianNilData data;
  data.ops.push_back(Matrix::Identity(1, 1));
  return data;
}

AbelianNilData hyperbolic_space(int dim_n) {
  if (dim_n < 1) throw InputError("hyperbolic_space: dimension must be positive");
  AbelianNilData data;
  data.ops.push_back(Matrix::Identity(dim_n, dim_n));
  return data;
}

AbelianNilData diagonal_r2() {
  AbelianNilData data;
  Matrix a1 = Matrix::Zero(2, 2);
  Matrix a2 = Matrix::Zero(2, 2);
  a1(0, 0) = 1.0;
  a2(1, 1) = 1.0;
  data.ops = {a1, a2};
  return data;
}

}  // namespace rpinch
