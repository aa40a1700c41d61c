#include "z2kit/error.hpp"
#include "z2kit/frames.hpp"

#include <cmath>
#include <sstream>

namespace z2kit::frames {

Matrix obstruction_unitary(const ProjectorFamily& family, const Matrix& psi, const LVec& lambda,
                           const EpsilonForm& eps, const Tolerances& tol) {
  const Matrix u = psi.adjoint() * family.tau(lambda) * family.apply_theta(psi) * eps.matrix();
  const double unit = linalg::unitarity_defect(u);
  if (unit > tol.sym) {
    std::ostringstream os;
    os << "obstruction unitary has unitarity defect " << unit << "; the frame does not span Ran P";
    throw Error(ErrorKind::CompatibilityViolated, os.str());
  }
  const double compat = (u.transpose() * eps.matrix() - eps.matrix() * u).norm();
  if (compat > tol.sym) {
    std::ostringstream os;
    os << "||U_obs^T eps - eps U_obs|| = " << compat;
    throw Error(ErrorKind::CompatibilityViolated, os.str());
  }
  return u;
}

namespace {

// Geodesic from a to b with the eigen-decomposition of a^dagger b done once.
class Geodesic {
 public:
  Geodesic(const Matrix& a, const Matrix& b) : a_(a), b_(b) {
    const auto eig = linalg::unitary_eigen(a.adjoint() * b);
    q_ = eig.vectors;
    mu_.resize(eig.values.size());
    for (Eigen::Index j = 0; j < mu_.size(); ++j) mu_(j) = std::arg(eig.values(j));
  }
  Matrix operator()(double t) const {
    if (t == 0.0) return a_;
    if (t == 1.0) return b_;
    Vector d(mu_.size());
    for (Eigen::Index j = 0; j < mu_.size(); ++j) d(j) = std::exp(kI * (t * mu_(j)));
    return a_ * q_ * d.asDiagonal() * q_.adjoint();
  }

 private:
  Matrix a_, b_, q_;
  Eigen::VectorXd mu_;
};

}  // namespace

EdgeUnitaries interpolate_edges(const std::array<Matrix, 4>& u, const EffectiveCell& cell, const EdgeTwist& twist) {
  EdgeUnitaries out;
  auto run = [&](int edge, const Matrix& a, const Matrix& b, int n, std::vector<Matrix>& dst) {
    const Geodesic g(a, b);
    dst.resize(n + 1);
    for (int q = 0; q <= n; ++q) {
      const double s = static_cast<double>(q) / n;
      dst[q] = g(s);
      if (twist && q > 0 && q < n) dst[q] = dst[q] * twist(edge, s);
    }
  };
  run(1, u[0], u[1], cell.n2(), out.e1);
  run(2, u[1], u[2], cell.n1(), out.e2);
  run(3, u[2], u[3], cell.n2(), out.e3);
  return out;
}

BoundaryField assemble_boundary_frame(const BoundaryField& psi, const EdgeUnitaries& edges,
                                      const ProjectorFamily& family, const EffectiveCell& cell,
                                      const EpsilonForm& eps) {
  const int n1 = cell.n1(), n2 = cell.n2();
  auto psi_at = [&](int i, int j) -> const Matrix& { return psi[cell.boundary_index({i, j})]; };
  // Frame on E1, E2, E3 (the edges where the interpolation is chosen freely).
  auto tilde = [&](int i, int j) -> Matrix {
    if (j == 0) return psi_at(i, 0) * edges.e2[i];
    if (i == 0) return psi_at(0, j) * edges.e1[n2 - j];
    return psi_at(n1, j) * edges.e3[j];
  };
  LVec e1(2), e2(2);
  e1 << 1, 0;
  e2 << 0, 1;
  const Matrix t1 = family.tau(e1);
  const Matrix t2 = family.tau(e2);
  const Matrix& ep = eps.matrix();

  BoundaryField phi(cell.boundary_size());
  for (int p = 0; p < cell.boundary_size(); ++p) {
    const GridIndex g = cell.boundary_point(p);
    switch (cell.boundary_edge(p)) {
      case Edge::E1:
      case Edge::E2:
      case Edge::E3: phi[p] = tilde(g.i, g.j); break;
      case Edge::E4: phi[p] = t1 * family.apply_theta(tilde(n1, 2 * n2 - g.j)) * ep; break;
      case Edge::E5: phi[p] = t2 * tilde(g.i, 0); break;
      case Edge::E6: phi[p] = family.apply_theta(tilde(0, 2 * n2 - g.j)) * ep; break;
    }
  }
  return phi;
}

TransitionLoop boundary_transition(const BoundaryField& psi, const BoundaryField& phi_hat) {
  if (psi.size() != phi_hat.size()) throw Error(ErrorKind::InvalidArgument, "boundary fields differ in length");
  TransitionLoop out;
  out.samples.resize(psi.size());
  for (std::size_t p = 0; p < psi.size(); ++p) out.samples[p] = psi[p].adjoint() * phi_hat[p];
  return out;
}

TransitionLoop unwind_X(int s, const EffectiveCell& cell, const EpsilonForm& eps) {
  if (eps.layout() != linalg::EpsilonLayout::BlockDiagonal)
    throw Error(ErrorKind::InvalidArgument, "unwinding matrix needs the block-diagonal epsilon layout");
  const int m = eps.size();
  TransitionLoop out;
  out.samples.assign(cell.boundary_size(), Matrix::Identity(m, m));
  if (s == 0) return out;
  for (int p = 0; p < cell.boundary_size(); ++p) {
    const GridIndex g = cell.boundary_point(p);
    if (g.i != cell.n1()) continue;
    const double k2 = cell.k2(g.j);
    const cplx ph = std::exp(kI * (-kTwoPi * s * (k2 + 0.5)));
    out.samples[p](0, 0) = ph;
    out.samples[p](1, 1) = ph;
  }
  return out;
}

double EdgeSymmetryResiduals::max() const { return std::max({e1e6, e2e5, e3e4, vertices}); }

EdgeSymmetryResiduals boundary_symmetry_residuals(const BoundaryField& phi, const ProjectorFamily& family,
                                                  const EffectiveCell& cell, const EpsilonForm& eps) {
  const int n1 = cell.n1(), top = cell.ny() - 1;
  auto at = [&](int i, int j) -> const Matrix& { return phi[cell.boundary_index({i, j})]; };
  LVec e1(2), e2(2);
  e1 << 1, 0;
  e2 << 0, 1;
  const Matrix t1 = family.tau(e1), t2 = family.tau(e2);
  const Matrix& ep = eps.matrix();
  EdgeSymmetryResiduals r;
  for (int j = 0; j <= top; ++j) {
    r.e1e6 = std::max(r.e1e6, (at(0, top - j) - family.apply_theta(at(0, j)) * ep).norm());
    r.e3e4 = std::max(r.e3e4, (at(n1, top - j) - t1 * family.apply_theta(at(n1, j)) * ep).norm());
  }
  for (int i = 0; i <= n1; ++i) r.e2e5 = std::max(r.e2e5, (at(i, top) - t2 * at(i, 0)).norm());
  for (int v = 1; v <= 6; ++v) {
    const GridIndex g = cell.vertex(v);
    const Matrix& f = at(g.i, g.j);
    r.vertices = std::max(r.vertices, (f - family.tau(cell.vertex_lambda(v)) * family.apply_theta(f) * ep).norm());
  }
  return r;
}

EdgeSymmetryResiduals transition_symmetry_residuals(const TransitionLoop& g, const EffectiveCell& cell,
                                                    const EpsilonForm& eps) {
  const int n1 = cell.n1(), top = cell.ny() - 1;
  auto at = [&](int i, int j) -> const Matrix& { return g.samples[cell.boundary_index({i, j})]; };
  const Matrix& ep = eps.matrix();
  EdgeSymmetryResiduals r;
  for (int j = 0; j <= top; ++j) {
    r.e1e6 = std::max(r.e1e6, (ep * at(0, top - j) - at(0, j).conjugate() * ep).norm());
    r.e3e4 = std::max(r.e3e4, (ep * at(n1, top - j) - at(n1, j).conjugate() * ep).norm());
  }
  for (int i = 0; i <= n1; ++i) r.e2e5 = std::max(r.e2e5, (at(i, top) - at(i, 0)).norm());
  for (int v = 1; v <= 6; ++v) {
    const GridIndex gi = cell.vertex(v);
    const Matrix& x = at(gi.i, gi.j);
    r.vertices = std::max(r.vertices, (ep * x - x.conjugate() * ep).norm());
  }
  return r;
}

BoundaryPipeline run_boundary_pipeline(const ProjectorFamily& family, const EffectiveCell& cell,
                                       const BoundaryField& psi, const EpsilonForm& eps, const Tolerances& tol,
                                       const EdgeTwist& twist) {
  if (static_cast<int>(psi.size()) != cell.boundary_size())
    throw Error(ErrorKind::InvalidArgument, "boundary frame does not match the cell");
  BoundaryPipeline out;
  std::array<Matrix, 4> us;
  for (int v = 1; v <= 4; ++v) {
    VertexSolve& vs = out.vertices[v - 1];
    const GridIndex g = cell.vertex(v);
    vs.vertex = v;
    vs.k = cell.k(g);
    vs.lambda = cell.vertex_lambda(v);
    vs.u_obs = obstruction_unitary(family, psi[cell.boundary_index(g)], vs.lambda, eps, tol);
    vs.compatibility = (vs.u_obs.transpose() * eps.matrix() - eps.matrix() * vs.u_obs).norm();
    vs.eigenphases = linalg::normalized_eigenphases(vs.u_obs);
    vs.u = linalg::symplectic_square_root(vs.u_obs, eps, tol.sym);
    us[v - 1] = vs.u;
  }
  out.edges = interpolate_edges(us, cell, twist);
  out.phi_hat = assemble_boundary_frame(psi, out.edges, family, cell, eps);
  out.u_hat = boundary_transition(psi, out.phi_hat);
  for (const auto& u : out.u_hat.samples) out.unitarity = std::max(out.unitarity, linalg::unitarity_defect(u));
  out.symmetry = boundary_symmetry_residuals(out.phi_hat, family, cell, eps);
  return out;
}

}  // namespace z2kit::frames
