#pragma once

#include "z2kit/linalg.hpp"
#include "z2kit/models.hpp"

#include <array>
#include <functional>
#include <optional>
#include <vector>

namespace z2kit::frames {

using models::KVec;
using models::LVec;
using models::ProjectorFamily;
using linalg::EpsilonForm;

struct ComputeOptions {
  int n1 = 256;  // samples along k1 in [0, 1/2]
  int n2 = 256;  // samples along k2 in [0, 1/2]; the k2 column has 2 n2 + 1 points
  Tolerances tol;
  int jobs = 1;
  int refinement_cap = 1 << 14;
};

enum class Edge { E1 = 1, E2, E3, E4, E5, E6 };

struct GridIndex {
  int i = 0;
  int j = 0;
};

// Discretized half cell [0, 1/2] x [-1/2, 1/2]. Grid point (i, j) sits at
// k = (i / (2 n1), -1/2 + j / (2 n2)). The boundary is walked v1 -> v2 -> ... -> v6
// -> v1 (counterclockwise), sample p = 0 at v1.
class EffectiveCell {
 public:
  EffectiveCell(int n1, int n2);

  int n1() const { return n1_; }
  int n2() const { return n2_; }
  int nx() const { return n1_ + 1; }
  int ny() const { return 2 * n2_ + 1; }
  double k1(int i) const { return 0.5 * i / n1_; }
  double k2(int j) const { return -0.5 + 0.5 * j / n2_; }
  KVec k(int i, int j) const;
  KVec k(GridIndex g) const { return k(g.i, g.j); }

  // Vertices are numbered 1..6.
  GridIndex vertex(int v) const;
  LVec vertex_lambda(int v) const;  // 2 v_i, the lattice vector with -v = v - lambda

  int boundary_size() const { return 2 * n1_ + 4 * n2_; }
  GridIndex boundary_point(int p) const;
  int boundary_index(GridIndex g) const;  // -1 if g is interior
  Edge boundary_edge(int p) const;        // edge whose half-open range [start, end) contains p
  int edge_start(Edge e) const;
  int edge_intervals(Edge e) const;
  // Continuous boundary coordinate in [0, L) for a point of the boundary
  // square written in normalized coordinates x, y in [-1, 1].
  double boundary_coordinate(double x, double y) const;

 private:
  int n1_;
  int n2_;
};

// Orthonormal N x m frames on a rectangular grid k = (x0 + i hx, y0 + j hy).
// One-dimensional fields use ny = 1.
struct FrameField {
  int dimension = 2;
  int nx = 0;
  int ny = 0;
  double x0 = 0, y0 = 0, hx = 0, hy = 0;
  std::vector<Matrix> values;

  Matrix& at(int i, int j) { return values[static_cast<std::size_t>(i) * ny + j]; }
  const Matrix& at(int i, int j) const { return values[static_cast<std::size_t>(i) * ny + j]; }
  KVec k(int i, int j) const;
};

// Unitary samples indexed by boundary position p = 0..L-1 (closure implied).
struct TransitionLoop {
  std::vector<Matrix> samples;
};

using BoundaryField = std::vector<Matrix>;

linalg::PhaseLoop det_loop(const TransitionLoop& loop);

struct TransportStats {
  double min_gap = 0.0;
  double range_residual = 0.0;
  double orthonormality = 0.0;
};

// Phase-fixed eigenvectors: largest-magnitude entry of each column made real
// positive, ties going to the lowest index.
Matrix phase_fixed_frame(const Matrix& eigenvectors);

FrameField transport_input_frame(const ProjectorFamily& family, const EffectiveCell& cell,
                                 const ComputeOptions& opts, TransportStats* stats = nullptr);
// Same transport, keeping only the values on the boundary of the cell.
BoundaryField transport_boundary_frame(const ProjectorFamily& family, const EffectiveCell& cell,
                                       const ComputeOptions& opts, TransportStats* stats = nullptr);
BoundaryField restrict_to_boundary(const FrameField& field, const EffectiveCell& cell);
// Values at grid column i (0 or n1) for j = 0..2 n2, read from a boundary field.
std::vector<Matrix> boundary_column(const BoundaryField& field, const EffectiveCell& cell, int i);

Matrix obstruction_unitary(const ProjectorFamily& family, const Matrix& psi_at_vertex, const LVec& lambda,
                           const EpsilonForm& eps, const Tolerances& tol = {});

struct EdgeUnitaries {
  std::vector<Matrix> e1;  // q = 0..n2, from v1 to v2
  std::vector<Matrix> e2;  // q = 0..n1, from v2 to v3
  std::vector<Matrix> e3;  // q = 0..n2, from v3 to v4
};

// Optional right factor L(edge, s) applied to the geodesic W_edge(s); it must
// equal the identity at s = 0 and s = 1.
using EdgeTwist = std::function<Matrix(int edge, double s)>;

EdgeUnitaries interpolate_edges(const std::array<Matrix, 4>& vertex_unitaries, const EffectiveCell& cell,
                                const EdgeTwist& twist = nullptr);

BoundaryField assemble_boundary_frame(const BoundaryField& psi, const EdgeUnitaries& edges,
                                      const ProjectorFamily& family, const EffectiveCell& cell,
                                      const EpsilonForm& eps);

TransitionLoop boundary_transition(const BoundaryField& psi, const BoundaryField& phi_hat);

TransitionLoop unwind_X(int s, const EffectiveCell& cell, const EpsilonForm& eps);

struct EdgeSymmetryResiduals {
  double e1e6 = 0.0;  // Phi(0,-k2) = Theta Phi(0,k2) eps
  double e2e5 = 0.0;  // Phi(k1,1/2) = tau(e2) Phi(k1,-1/2)
  double e3e4 = 0.0;  // Phi(1/2,-k2) = tau(e1) Theta Phi(1/2,k2) eps
  double vertices = 0.0;
  double max() const;
};

EdgeSymmetryResiduals boundary_symmetry_residuals(const BoundaryField& phi, const ProjectorFamily& family,
                                                  const EffectiveCell& cell, const EpsilonForm& eps);
// Same relations for a transition loop G, in the form they take for a right
// factor of a symmetric frame (e.g. eps X(0,-k2) = conj(X(0,k2)) eps).
EdgeSymmetryResiduals transition_symmetry_residuals(const TransitionLoop& g, const EffectiveCell& cell,
                                                    const EpsilonForm& eps);

struct VertexSolve {
  int vertex = 0;
  KVec k;
  LVec lambda;
  Matrix u_obs;
  Matrix u;
  std::vector<double> eigenphases;  // of u_obs, normalized to [0, 2 pi)
  double compatibility = 0.0;
};

// The whole boundary construction from one input boundary frame.
struct BoundaryPipeline {
  std::array<VertexSolve, 4> vertices;
  EdgeUnitaries edges;
  BoundaryField phi_hat;
  TransitionLoop u_hat;
  EdgeSymmetryResiduals symmetry;
  double unitarity = 0.0;  // max unitarity defect of u_hat
};

BoundaryPipeline run_boundary_pipeline(const ProjectorFamily& family, const EffectiveCell& cell,
                                       const BoundaryField& psi, const EpsilonForm& eps, const Tolerances& tol,
                                       const EdgeTwist& twist = nullptr);

// Unitary field on the cell grid (index i * ny + j) extending a loop of
// det-winding zero.
std::vector<Matrix> fill_disc(const TransitionLoop& loop, const EffectiveCell& cell, double margin = kPi / 2);

struct FrameResiduals {
  double orthonormality = 0.0;
  double range = 0.0;
  double tau_equivariance = 0.0;  // (F3')
  double time_reversal = 0.0;     // (F4')
  double max_adjacent_distance = 0.0;
};

struct SymmetricFrame2d {
  EffectiveCell cell{8, 8};
  FrameField effective;  // on B_eff
  FrameField full;       // on B = [-1/2, 1/2]^2, grid (2 n1 + 1) x (2 n2 + 1)
  int winding = 0;
  FrameResiduals residuals;
  // Frame at grid point (i, j) of `full` translated by lambda.
  Matrix at(const ProjectorFamily& family, int i, int j, const LVec& lambda) const;
};

SymmetricFrame2d symmetric_frame_2d(const ProjectorFamily& family, const ComputeOptions& opts);

struct SymmetricFrame1d {
  FrameField full;  // k in [-1/2, 1/2], 2 n + 1 points
  FrameResiduals residuals;
  Matrix at(const ProjectorFamily& family, int i, const LVec& lambda) const;
};

SymmetricFrame1d symmetric_frame_1d(const ProjectorFamily& family, int n, const Tolerances& tol = {});

FrameResiduals frame_residuals(const FrameField& full, const ProjectorFamily& family, const EpsilonForm& eps);

// M(Phi, Psi) = Phi exp(1/2 log(Phi^dagger Psi)).
Matrix midpoint_frame(const Matrix& phi, const Matrix& psi, double log_margin);

// Field must sit on a grid symmetric under k -> -k.
FrameField midpoint_symmetrize(const FrameField& field, const ProjectorFamily& family, const EpsilonForm& eps,
                               const Tolerances& tol = {});

void run_parallel(int count, int jobs, const std::function<void(int)>& body);

}  // namespace z2kit::frames
