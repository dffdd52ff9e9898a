#pragma once

#include "rpinch/curvature.hpp"
#include "rpinch/lie_bracket.hpp"

namespace rpinch {

// Small library of nilpotent brackets and soliton fixtures used by tests,
// fixture generation, and the search experiments.

LieBracket abelian_bracket(int dim);

// [e1,e2] = e3
LieBracket heisenberg3_unit();

// Heisenberg scaled to |lambda| = 2; Ric = diag(-1,-1,1).
LieBracket heisenberg3();

// dim 5, [e1,e2] = e5, [e3,e4] = e5; already |lambda| = 2 and a nilsoliton.
LieBracket heisenberg5();

// [e1,e_i] = e_{i+1} for i = 2..dim-1 (unit coefficients), dim >= 3.
LieBracket filiform(int dim);

// free 2-step algebra on three generators: [e1,e2]=e4, [e1,e3]=e5, [e2,e3]=e6.
LieBracket free_two_step3();

// Heisenberg rank-one solvsoliton: A = diag(1,1,2)/sqrt(2), |lambda| = 2; F = 4.
RankOneData heisenberg_solvsoliton();

// Rank-one solvsoliton over heisenberg5: A = diag(1,1,1,1,2)/2; F = 6.
RankOneData heisenberg5_solvsoliton();

// r = 1, n = R, A1 = (1); F = 2.
AbelianNilData hyperbolic_plane();

// r = 1, A1 = I_n; F = n + 1.
AbelianNilData hyperbolic_space(int dim_n);

// r = 2, n = R^2, A1 = diag(1,0), A2 = diag(0,1); F = 4.
AbelianNilData diagonal_r2();

}  // namespace rpinch
