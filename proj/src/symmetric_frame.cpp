#include "z2kit/error.hpp"
#include "z2kit/frames.hpp"

#include <cmath>

namespace z2kit::frames {

namespace {

LVec unit_lattice(int d, int j) {
  LVec e = LVec::Zero(d);
  e(j) = 1;
  return e;
}

}  // namespace

FrameResiduals frame_residuals(const FrameField& full, const ProjectorFamily& family, const EpsilonForm& eps) {
  FrameResiduals r;
  const int nx = full.nx, ny = full.ny, d = full.dimension;
  const Matrix& ep = eps.matrix();
  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < ny; ++j) {
      const Matrix& f = full.at(i, j);
      r.orthonormality = std::max(r.orthonormality, linalg::unitarity_defect(f));
      const Matrix p = family.projector(full.k(i, j));
      r.range = std::max(r.range, (p * f - f).norm());
      const Matrix& mirror = full.at(nx - 1 - i, ny - 1 - j);
      r.time_reversal = std::max(r.time_reversal, (mirror - family.apply_theta(f) * ep).norm());
      if (i + 1 < nx) r.max_adjacent_distance = std::max(r.max_adjacent_distance, (full.at(i + 1, j) - f).norm());
      if (j + 1 < ny) r.max_adjacent_distance = std::max(r.max_adjacent_distance, (full.at(i, j + 1) - f).norm());
    }
  }
  const Matrix t1 = family.tau(unit_lattice(d, 0));
  for (int j = 0; j < ny; ++j)
    r.tau_equivariance = std::max(r.tau_equivariance, (full.at(nx - 1, j) - t1 * full.at(0, j)).norm());
  if (d > 1) {
    const Matrix t2 = family.tau(unit_lattice(d, 1));
    for (int i = 0; i < nx; ++i)
      r.tau_equivariance = std::max(r.tau_equivariance, (full.at(i, ny - 1) - t2 * full.at(i, 0)).norm());
  }
  return r;
}

SymmetricFrame2d symmetric_frame_2d(const ProjectorFamily& family, const ComputeOptions& opts) {
  if (family.dimension() != 2) throw Error(ErrorKind::InvalidArgument, "symmetric_frame_2d needs a 2d family");
  const auto eps = EpsilonForm::block_diagonal(family.rank());
  SymmetricFrame2d out;
  out.cell = EffectiveCell(opts.n1, opts.n2);
  const EffectiveCell& cell = out.cell;
  const FrameField psi = transport_input_frame(family, cell, opts);
  const BoundaryPipeline pipe = run_boundary_pipeline(family, cell, restrict_to_boundary(psi, cell), eps, opts.tol);
  out.winding = linalg::winding_number(det_loop(pipe.u_hat), opts.tol.winding_margin);
  if (out.winding % 2 != 0)
    throw ObstructedError({1}, "delta = 1 (det winding " + std::to_string(out.winding) + "); no symmetric frame exists");

  const TransitionLoop x = unwind_X(out.winding / 2, cell, eps);
  TransitionLoop loop;
  loop.samples.resize(x.samples.size());
  for (std::size_t p = 0; p < loop.samples.size(); ++p) loop.samples[p] = pipe.u_hat.samples[p] * x.samples[p];
  const std::vector<Matrix> u = fill_disc(loop, cell, opts.tol.winding_margin);

  out.effective = psi;
  for (std::size_t q = 0; q < psi.values.size(); ++q) out.effective.values[q] = psi.values[q] * u[q];

  const int n1 = cell.n1(), n2 = cell.n2();
  FrameField& full = out.full;
  full.dimension = 2;
  full.nx = 2 * n1 + 1;
  full.ny = 2 * n2 + 1;
  full.x0 = -0.5;
  full.y0 = -0.5;
  full.hx = 0.5 / n1;
  full.hy = 0.5 / n2;
  full.values.resize(static_cast<std::size_t>(full.nx) * full.ny);
  for (int i = 0; i < full.nx; ++i)
    for (int j = 0; j < full.ny; ++j)
      full.at(i, j) = i >= n1 ? out.effective.at(i - n1, j)
                              : Matrix(family.apply_theta(out.effective.at(n1 - i, 2 * n2 - j)) * eps.matrix());
  out.residuals = frame_residuals(full, family, eps);
  return out;
}

Matrix SymmetricFrame2d::at(const ProjectorFamily& family, int i, int j, const LVec& lambda) const {
  return family.tau(lambda) * full.at(i, j);
}

SymmetricFrame1d symmetric_frame_1d(const ProjectorFamily& family, int n, const Tolerances& tol) {
  if (family.dimension() != 1) throw Error(ErrorKind::InvalidArgument, "symmetric_frame_1d needs a 1d family");
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "need at least one interval");
  const auto eps = EpsilonForm::block_diagonal(family.rank());
  auto kv = [](double x) {
    KVec k(1);
    k << x;
    return k;
  };
  std::vector<Matrix> psi(n + 1);
  psi[0] = phase_fixed_frame(family.occupied_frame(kv(0.0)));
  for (int i = 1; i <= n; ++i)
    psi[i] = linalg::loewdin_unitarize(family.projector(kv(0.5 * i / n)) * psi[i - 1], tol.rank);

  LVec zero = LVec::Zero(1), one = LVec::Ones(1);
  const Matrix u0 = linalg::symplectic_square_root(obstruction_unitary(family, psi[0], zero, eps, tol), eps, tol.sym);
  const Matrix uh = linalg::symplectic_square_root(obstruction_unitary(family, psi[n], one, eps, tol), eps, tol.sym);

  SymmetricFrame1d out;
  FrameField& full = out.full;
  full.dimension = 1;
  full.nx = 2 * n + 1;
  full.ny = 1;
  full.x0 = -0.5;
  full.hx = 0.5 / n;
  full.values.resize(full.nx);
  std::vector<Matrix> half(n + 1);
  for (int i = 0; i <= n; ++i) half[i] = psi[i] * linalg::geodesic_unitary_path(u0, uh, static_cast<double>(i) / n);
  for (int i = 0; i < full.nx; ++i)
    full.at(i, 0) = i >= n ? half[i - n] : Matrix(family.apply_theta(half[n - i]) * eps.matrix());
  out.residuals = frame_residuals(full, family, eps);
  return out;
}

Matrix SymmetricFrame1d::at(const ProjectorFamily& family, int i, const LVec& lambda) const {
  return family.tau(lambda) * full.at(i, 0);
}

}  // namespace z2kit::frames
