#pragma once

#include "z2kit/frames.hpp"

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace z2kit::invariants {

using frames::BoundaryField;
using frames::ComputeOptions;
using frames::EffectiveCell;
using models::KVec;
using models::LVec;
using models::ProjectorFamily;

enum class Route { Degree, Trim, FuKane };
std::string_view to_string(Route route);
std::optional<Route> parse_route(std::string_view name);

struct ReportResiduals {
  double unitary = 0.0;
  double symmetry = 0.0;
  double range = 0.0;
};

struct GridInfo {
  int n1 = 0;
  int n2 = 0;
  int boundary_samples = 0;
  int refinements = 0;
};

struct TrimVertex {
  int vertex = 0;
  std::vector<double> eigenphases;  // of U_obs in [0, 2 pi)
  double phase_sum = 0.0;
  int factor = 1;              // sqrt(det U_obs) / det U, principal branch
  double gauge_phase = 0.0;    // U(1) phase applied to the first column before the recipe
  int ungauged_factor = 1;     // same recipe on the frame before that phase
};

struct PThetaLine {
  double k_star = 0.0;
  int value = 0;                     // P_theta(k*) mod 2
  int raw = 0;                       // the integer before reduction
  double log_det_increment = 0.0;    // continuous arg increment of det w over k2 in [0, 1/2]
  cplx pf_start{1.0, 0.0};           // Pf w(k*, 0)
  cplx pf_end{1.0, 0.0};             // Pf w(k*, 1/2)
  int sqrt_ratio_start = 1;          // sqrt(det w) / Pf w with the branch tracked from k2 = 0
  int sqrt_ratio_end = 1;
  double unitarity = 0.0;            // max unitarity defect of w on the line
  double antisymmetry = 0.0;         // max ||w(k*, -k2) + w(k*, k2)^T||
};

struct Z2Report {
  int value = 0;
  Route route = Route::Degree;
  std::optional<int> winding;          // degree route
  ReportResiduals residuals;
  GridInfo grid;
  std::vector<TrimVertex> per_vertex;  // trim route
  std::vector<PThetaLine> p_theta;     // fu_kane route
  std::optional<int> trim_product;     // fu_kane route: product of the four sqrt ratios, +1 or -1
  std::optional<int> ungauged_recipe;  // trim route: principal-branch recipe on the raw transported frame
  double min_gap = 0.0;
  double seconds = 0.0;
};

struct Z2Bundle {
  Z2Report degree;
  Z2Report trim;
  Z2Report fu_kane;
  bool agree() const;
  // The continuous-branch TRIM product of the Fu-Kane route matches (-1)^value.
  bool trim_product_consistent() const;
};

// Gauge applied to the transported input frame: Psi(k) -> Psi(k) G(k). G has
// to be continuous and periodic in k2.
using FrameGauge = std::function<Matrix(const KVec&)>;

struct Variation {
  FrameGauge gauge;
  frames::EdgeTwist twist;
};

// Sewing matrix w(k) at grid point (i, j) of the cell, i in {0, n1}, from a
// boundary frame that is tau-equivariant in k2.
Matrix sewing_matrix(const BoundaryField& psi, const ProjectorFamily& family, const EffectiveCell& cell, int i, int j);

PThetaLine time_reversal_polarization(const BoundaryField& psi, const ProjectorFamily& family,
                                      const EffectiveCell& cell, int i, double skew_tol);

Z2Report delta_2d(const ProjectorFamily& family, const ComputeOptions& opts, const Variation& variation = {});
Z2Report fu_kane_delta(const ProjectorFamily& family, const ComputeOptions& opts);
Z2Report delta_trim(const ProjectorFamily& family, const ComputeOptions& opts);
// sqrt(exp(i S)) / exp(i S / 2) for S the sum of the normalized eigenphases.
int trim_factor(const std::vector<double>& eigenphases);
// The recipe itself on four given vertex frames (v1..v4).
Z2Report delta_trim(const ProjectorFamily& family, const std::array<Matrix, 4>& vertex_frames,
                    const Tolerances& tol = {});
// All three routes from one transported frame.
Z2Bundle z2_all_routes(const ProjectorFamily& family, const ComputeOptions& opts);

// Phases theta(v) that make det w identically 1 along both TRIM lines when
// the first frame column is multiplied by exp(i theta).
std::array<double, 4> trim_line_gauge(const BoundaryField& psi, const ProjectorFamily& family,
                                      const EffectiveCell& cell, double margin);

// Boundary data of the degree route, exposed for identity checks.
struct BoundaryData {
  EffectiveCell cell{8, 8};
  BoundaryField psi;
  frames::BoundaryPipeline pipeline;
  frames::TransportStats stats;
};
BoundaryData boundary_data(const ProjectorFamily& family, const ComputeOptions& opts,
                           const Variation& variation = {});

// 3d.
using Quadruple = std::array<int, 4>;  // (d_{1,0}, d_{1,+}, d_{2,+}, d_{3,+})

struct FaceReport {
  std::string name;
  KVec origin;
  std::vector<LVec> directions;
  Z2Bundle routes;
};

struct Z2Quadruple {
  Quadruple values{};
  int delta2_minus = 0;
  int delta3_minus = 0;
  std::vector<FaceReport> faces;  // F1,0 F1,+ F2,+ F3,+ F2,- F3,-
  bool minus_faces_consistent() const;
};

Z2Quadruple z2_quadruple_3d(const ProjectorFamily& family, const ComputeOptions& opts);

struct FkmIndices {
  int nu0 = 0;
  std::array<int, 3> nu{};
};
FkmIndices fkm_indices(const Quadruple& q);

enum class Gl3z { S1, S2, T };
Quadruple gl3z_transform(const Quadruple& q, Gl3z g);

enum class Orbit { O1, O2, O3 };
std::string_view to_string(Orbit orbit);

struct OrbitReport {
  Orbit orbit = Orbit::O1;
  int nu0 = 0;
  int nu_tot = 1;
  int omega_hat = 1;
};
OrbitReport classify_orbit(const Quadruple& q);

// Homotopy check along a parameter path t in [0, 1].
struct HomotopyStep {
  double t = 0.0;
  int value = 0;
  int winding = 0;
  double min_gap = 0.0;
  double step_norm = 0.0;          // max_k ||P_t(k) - P_next(k)||, 0 on the last step
  double intertwiner_residual = 0.0;
};

struct HomotopyReport {
  std::vector<HomotopyStep> steps;
  bool constant = true;
  double max_step_norm = 0.0;
};

HomotopyReport homotopy_invariance_check(const std::function<ProjectorFamily(double)>& path, int steps,
                                         const ComputeOptions& opts, int kato_samples = 16);

}  // namespace z2kit::invariants
