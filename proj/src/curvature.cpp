#include "rpinch/curvature.hpp"

#include <cmath>

namespace rpinch {

namespace {

constexpr double kFlatTol = 1e-13;

// The M-operator of the double-sum formula; equals the full Ricci operator
// when the algebra is nilpotent (Killing form and mean curvature vanish).
Matrix m_operator(const LieBracket& bracket) {
  const int n = bracket.dim();
  std::vector<Matrix> ads(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) ads[static_cast<size_t>(i)] = bracket.ad_basis(i);
  Matrix out(n, n);
  for (int x = 0; x < n; ++x) {
    for (int y = x; y < n; ++y) {
      double first = (ads[static_cast<size_t>(x)].array() * ads[static_cast<size_t>(y)].array()).sum();
      double second =
          (bracket.component(x).array() * bracket.component(y).array()).sum();
      out(x, y) = out(y, x) = -0.5 * first + 0.25 * second;
    }
  }
  return out;
}

}  // namespace

void validate_rank_one(const RankOneData& data, double tol) {
  const int n = data.bracket.dim();
  if (data.A.rows() != n || data.A.cols() != n)
    throw InputError("rank-one data: operator dimension mismatch");
  if (!data.A.allFinite()) throw InputError("rank-one data: non-finite operator entries");
  validate_lie_structure(data.bracket, /*require_nilpotent=*/true);
  const double residual = is_derivation(data.bracket, data.A);
  const double scale = std::max(1.0, data.A.norm() * std::max(1.0, data.bracket.norm()));
  if (residual > tol * scale)
    throw StructureError("rank-one data: A is not a derivation of the nilradical (residual " +
                         std::to_string(residual) + ")");
}

void validate_abelian(const AbelianNilData& data, double tol) {
  if (data.ops.empty()) throw InputError("abelian data: empty operator tuple");
  const int n = data.dim_n();
  double scale = 1.0;
  for (const Matrix& op : data.ops) {
    if (op.rows() != n || op.cols() != n)
      throw InputError("abelian data: operator dimension mismatch");
    if (!op.allFinite()) throw InputError("abelian data: non-finite operator entries");
    scale = std::max(scale, op.squaredNorm());
  }
  for (size_t i = 0; i < data.ops.size(); ++i)
    for (size_t j = i + 1; j < data.ops.size(); ++j)
      if (commutator(data.ops[i], data.ops[j]).norm() > tol * scale)
        throw StructureError("abelian data: operators A_" + std::to_string(i + 1) + " and A_" +
                             std::to_string(j + 1) + " do not commute");
  // linear independence of the tuple
  const int r = data.dim_a();
  Matrix stacked(n * n, r);
  for (int i = 0; i < r; ++i)
    stacked.col(i) = Eigen::Map<const Vector>(data.ops[static_cast<size_t>(i)].data(), n * n);
  Eigen::JacobiSVD<Matrix> svd(stacked);
  const auto& sv = svd.singularValues();
  if (sv.size() < r || sv(r - 1) <= 1e-12 * std::max(sv(0), 1.0))
    throw StructureError("abelian data: operators are linearly dependent");
}

Matrix nil_ricci(const LieBracket& bracket) { return m_operator(bracket); }

RankOneRicciBlocks rank_one_ricci_blocks(const RankOneData& data) {
  const Matrix s = sym_part(data.A);
  RankOneRicciBlocks out;
  out.corner = -(s * s).trace();
  out.nblock = nil_ricci(data.bracket) +
               0.5 * commutator(data.A, data.A.transpose()) - data.A.trace() * s;
  return out;
}

Matrix abelian_ricci(const AbelianNilData& data) {
  const int r = data.dim_a();
  const int n = data.dim_n();
  Matrix ric = Matrix::Zero(r + n, r + n);
  std::vector<Matrix> syms;
  syms.reserve(data.ops.size());
  for (const Matrix& op : data.ops) syms.push_back(sym_part(op));
  for (int i = 0; i < r; ++i)
    for (int j = i; j < r; ++j)
      ric(i, j) = ric(j, i) = -(syms[static_cast<size_t>(i)] * syms[static_cast<size_t>(j)]).trace();
  Matrix nblock = Matrix::Zero(n, n);
  for (int i = 0; i < r; ++i) {
    const Matrix& op = data.ops[static_cast<size_t>(i)];
    nblock += 0.5 * commutator(op, op.transpose()) - op.trace() * syms[static_cast<size_t>(i)];
  }
  ric.bottomRightCorner(n, n) = nblock;
  return ric;
}

SolvableAlgebra assemble(const RankOneData& data) {
  const int n = data.bracket.dim();
  LieBracket full(n + 1);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k)
      if (data.A(k, i) != 0.0) full.set_coeff(0, 1 + i, 1 + k, data.A(k, i));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        const double value = data.bracket.coeff(i, j, k);
        if (value != 0.0) full.set_coeff(1 + i, 1 + j, 1 + k, value);
      }
  return SolvableAlgebra{full, 1};
}

SolvableAlgebra assemble(const AbelianNilData& data) {
  const int r = data.dim_a();
  const int n = data.dim_n();
  LieBracket full(r + n);
  for (int a = 0; a < r; ++a) {
    const Matrix& op = data.ops[static_cast<size_t>(a)];
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k)
        if (op(k, i) != 0.0) full.set_coeff(a, r + i, r + k, op(k, i));
  }
  return SolvableAlgebra{full, r};
}

RicciReport generic_ricci(const SolvableAlgebra& algebra) {
  const LieBracket& mu = algebra.full;
  const int m = mu.dim();
  std::vector<Matrix> ads(static_cast<size_t>(m));
  Vector mean_curvature(m);
  for (int i = 0; i < m; ++i) {
    ads[static_cast<size_t>(i)] = mu.ad_basis(i);
    mean_curvature(i) = ads[static_cast<size_t>(i)].trace();
  }
  Matrix killing(m, m);
  for (int x = 0; x < m; ++x)
    for (int y = x; y < m; ++y)
      killing(x, y) = killing(y, x) =
          (ads[static_cast<size_t>(x)] * ads[static_cast<size_t>(y)]).trace();
  const Matrix ad_h = mu.ad(mean_curvature);

  RicciReport report;
  report.ric = m_operator(mu) - 0.5 * killing - sym_part(ad_h);
  report.scal = report.ric.trace();
  report.ric_norm_sq = report.ric.squaredNorm();
  if (report.ric.norm() <= kFlatTol) {
    report.flat = true;
  } else {
    report.F = report.scal * report.scal / report.ric_norm_sq;
  }
  return report;
}

RicciReport generic_ricci(const RankOneData& data) {
  RicciReport report = generic_ricci(assemble(data));
  const Matrix s = sym_part(data.A);
  const double tr_s2 = (s * s).trace();
  const double tr_a = data.A.trace();
  const double ric_n_sq = nil_ricci(data.bracket).squaredNorm();
  const double comm_sq = commutator(data.A, data.A.transpose()).squaredNorm();
  report.G = report.ric_norm_sq -
             (tr_s2 * (tr_s2 + tr_a * tr_a) + ric_n_sq + 0.25 * comm_sq);
  return report;
}

RicciReport generic_ricci(const AbelianNilData& data) { return generic_ricci(assemble(data)); }

double pinching_F(const Matrix& ric) {
  const double norm_sq = ric.squaredNorm();
  if (std::sqrt(norm_sq) <= kFlatTol)
    throw FlatMetricError("pinching_F: flat metric, F undefined");
  const double scal = ric.trace();
  return scal * scal / norm_sq;
}

}  // namespace rpinch
