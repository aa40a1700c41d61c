#include "z2kit/error.hpp"
#include "z2kit/frames.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>

namespace z2kit::frames {

Matrix phase_fixed_frame(const Matrix& eigenvectors) {
  Matrix out = eigenvectors;
  for (Eigen::Index c = 0; c < out.cols(); ++c) {
    Eigen::Index best = 0;
    double mag = std::abs(out(0, c));
    for (Eigen::Index r = 1; r < out.rows(); ++r) {
      if (std::abs(out(r, c)) > mag + 1e-12) {
        mag = std::abs(out(r, c));
        best = r;
      }
    }
    const cplx z = out(best, c);
    if (std::abs(z) > 0) out.col(c) *= std::conj(z) / std::abs(z);
  }
  return out;
}

namespace {

struct ProjectorAtK {
  Matrix p;
  double gap;
};

ProjectorAtK projector_with_gap(const ProjectorFamily& family, const KVec& k) {
  const auto s = family.spectrum(k);
  if (!(s.gap > family.gap_threshold()))
    throw GapClosedError({k.data(), k.data() + k.size()}, s.gap, family.name());
  const Matrix v = s.vectors.leftCols(family.rank());
  return {v * v.adjoint(), s.gap};
}

using Sink = std::function<void(int i, int j, const Matrix& psi)>;

void transport_core(const ProjectorFamily& family, const EffectiveCell& cell, const ComputeOptions& opts,
                    const Sink& sink, TransportStats* stats) {
  if (family.dimension() != 2) throw Error(ErrorKind::InvalidArgument, "transport over the half cell needs a 2d family");
  const int n1 = cell.n1(), ny = cell.ny(), top = ny - 1;
  const double tol_rank = opts.tol.rank;

  std::vector<Matrix> column(ny);
  double min_gap = std::numeric_limits<double>::infinity();
  double range = 0.0;
  {
    const auto s = family.spectrum(cell.k(0, 0));
    if (!(s.gap > family.gap_threshold()))
      throw GapClosedError({0.0, -0.5}, s.gap, family.name());
    min_gap = s.gap;
    column[0] = phase_fixed_frame(s.vectors.leftCols(family.rank()));
  }
  for (int j = 1; j <= top; ++j) {
    const auto pk = projector_with_gap(family, cell.k(0, j));
    min_gap = std::min(min_gap, pk.gap);
    column[j] = linalg::loewdin_unitarize(pk.p * column[j - 1], tol_rank);
    range = std::max(range, (pk.p * column[j] - column[j]).norm());
  }
  // Spread the holonomy of the column over k2 so that the top end equals
  // tau(e2) times the bottom end.
  LVec e2(2);
  e2 << 0, 1;
  const Matrix t2 = family.tau(e2);
  const Matrix target = t2 * column[0];
  const Matrix hol = linalg::loewdin_unitarize(target.adjoint() * column[top], tol_rank);
  const Matrix id = Matrix::Identity(hol.rows(), hol.cols());
  const Matrix hol_inv = hol.adjoint();
  for (int j = 1; j < top; ++j) column[j] = column[j] * linalg::geodesic_unitary_path(id, hol_inv, static_cast<double>(j) / top);
  column[top] = target;

  std::vector<double> row_gap(top, std::numeric_limits<double>::infinity());
  std::vector<double> row_range(top, 0.0);
  std::vector<Matrix> bottom(n1 + 1);
  run_parallel(top, opts.jobs, [&](int j) {
    Matrix cur = column[j];
    sink(0, j, cur);
    if (j == 0) bottom[0] = cur;
    for (int i = 1; i <= n1; ++i) {
      const auto pk = projector_with_gap(family, cell.k(i, j));
      row_gap[j] = std::min(row_gap[j], pk.gap);
      cur = linalg::loewdin_unitarize(pk.p * cur, tol_rank);
      row_range[j] = std::max(row_range[j], (pk.p * cur - cur).norm());
      sink(i, j, cur);
      if (j == 0) bottom[i] = cur;
    }
  });
  for (int i = 0; i <= n1; ++i) sink(i, top, i == 0 ? column[top] : Matrix(t2 * bottom[i]));

  if (stats) {
    for (int j = 0; j < top; ++j) {
      min_gap = std::min(min_gap, row_gap[j]);
      range = std::max(range, row_range[j]);
    }
    stats->min_gap = min_gap;
    stats->range_residual = range;
  }
}

}  // namespace

FrameField transport_input_frame(const ProjectorFamily& family, const EffectiveCell& cell, const ComputeOptions& opts,
                                 TransportStats* stats) {
  FrameField f;
  f.dimension = 2;
  f.nx = cell.nx();
  f.ny = cell.ny();
  f.x0 = 0.0;
  f.y0 = -0.5;
  f.hx = 0.5 / cell.n1();
  f.hy = 0.5 / cell.n2();
  f.values.resize(static_cast<std::size_t>(f.nx) * f.ny);
  transport_core(family, cell, opts, [&](int i, int j, const Matrix& psi) { f.at(i, j) = psi; }, stats);
  if (stats) {
    double orth = 0.0;
    for (const auto& v : f.values) orth = std::max(orth, linalg::unitarity_defect(v));
    stats->orthonormality = orth;
  }
  return f;
}

BoundaryField transport_boundary_frame(const ProjectorFamily& family, const EffectiveCell& cell,
                                       const ComputeOptions& opts, TransportStats* stats) {
  BoundaryField b(cell.boundary_size());
  transport_core(family, cell, opts,
                 [&](int i, int j, const Matrix& psi) {
                   const int p = cell.boundary_index({i, j});
                   if (p < 0) return;
                   b[p] = psi;
                 },
                 stats);
  if (stats) {
    double orth = 0.0;
    for (const auto& v : b) orth = std::max(orth, linalg::unitarity_defect(v));
    stats->orthonormality = orth;
  }
  return b;
}

BoundaryField restrict_to_boundary(const FrameField& field, const EffectiveCell& cell) {
  BoundaryField b(cell.boundary_size());
  for (int p = 0; p < cell.boundary_size(); ++p) {
    const GridIndex g = cell.boundary_point(p);
    b[p] = field.at(g.i, g.j);
  }
  return b;
}

std::vector<Matrix> boundary_column(const BoundaryField& field, const EffectiveCell& cell, int i) {
  std::vector<Matrix> out(cell.ny());
  for (int j = 0; j < cell.ny(); ++j) out[j] = field[cell.boundary_index({i, j})];
  return out;
}

}  // namespace z2kit::frames
