#include "z2kit/error.hpp"
#include "z2kit/invariants.hpp"

#include <chrono>
#include <cmath>

namespace z2kit::invariants {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Runs body(options) and doubles the grid along the aliased edge until it
// succeeds or the cap is reached.
template <class Body>
auto with_refinement(const ComputeOptions& opts, Body&& body) {
  ComputeOptions o = opts;
  int refinements = 0;
  for (;;) {
    try {
      auto out = body(o);
      return std::make_pair(std::move(out), refinements);
    } catch (const AliasingError& e) {
      const EffectiveCell cell(o.n1, o.n2);
      const int p = static_cast<int>(e.index() % static_cast<std::size_t>(cell.boundary_size()));
      const frames::Edge edge = cell.boundary_edge(p);
      int& n = (edge == frames::Edge::E2 || edge == frames::Edge::E5) ? o.n1 : o.n2;
      if (2 * n > o.refinement_cap) throw;
      n *= 2;
      ++refinements;
    }
  }
}

GridInfo grid_info(const EffectiveCell& cell, int refinements) {
  return {cell.n1(), cell.n2(), cell.boundary_size(), refinements};
}

struct Transported {
  EffectiveCell cell{8, 8};
  BoundaryField psi;
  frames::TransportStats stats;
  double seconds = 0.0;
};

Transported transport(const ProjectorFamily& family, const ComputeOptions& o, const FrameGauge& gauge) {
  const auto t0 = Clock::now();
  Transported t;
  t.cell = EffectiveCell(o.n1, o.n2);
  t.psi = frames::transport_boundary_frame(family, t.cell, o, &t.stats);
  if (gauge) {
    for (int p = 0; p < t.cell.boundary_size(); ++p) t.psi[p] = t.psi[p] * gauge(t.cell.k(t.cell.boundary_point(p)));
  }
  t.seconds = seconds_since(t0);
  return t;
}

Z2Report degree_from(const ProjectorFamily& family, const Transported& t, const ComputeOptions& o,
                     const frames::EdgeTwist& twist) {
  const auto t0 = Clock::now();
  const auto eps = linalg::EpsilonForm::block_diagonal(family.rank());
  const auto pipe = frames::run_boundary_pipeline(family, t.cell, t.psi, eps, o.tol, twist);
  Z2Report r;
  r.route = Route::Degree;
  const int w = linalg::winding_number(frames::det_loop(pipe.u_hat), o.tol.winding_margin);
  r.winding = w;
  r.value = ((w % 2) + 2) % 2;
  r.residuals = {pipe.unitarity, pipe.symmetry.max(), t.stats.range_residual};
  r.min_gap = t.stats.min_gap;
  r.seconds = t.seconds + seconds_since(t0);
  return r;
}

Z2Report fu_kane_from(const ProjectorFamily& family, const Transported& t, const ComputeOptions& o) {
  const auto t0 = Clock::now();
  Z2Report r;
  r.route = Route::FuKane;
  const PThetaLine zero = time_reversal_polarization(t.psi, family, t.cell, 0, o.tol.skew);
  const PThetaLine half = time_reversal_polarization(t.psi, family, t.cell, t.cell.n1(), o.tol.skew);
  r.value = (((half.raw - zero.raw) % 2) + 2) % 2;
  r.trim_product = zero.sqrt_ratio_start * zero.sqrt_ratio_end * half.sqrt_ratio_start * half.sqrt_ratio_end;
  r.residuals = {std::max(zero.unitarity, half.unitarity), std::max(zero.antisymmetry, half.antisymmetry),
                 t.stats.range_residual};
  r.p_theta = {zero, half};
  r.min_gap = t.stats.min_gap;
  r.seconds = t.seconds + seconds_since(t0);
  return r;
}

std::array<Matrix, 4> vertex_frames(const Transported& t) {
  std::array<Matrix, 4> out;
  for (int v = 1; v <= 4; ++v) out[v - 1] = t.psi[t.cell.boundary_index(t.cell.vertex(v))];
  return out;
}

Z2Report trim_from(const ProjectorFamily& family, const Transported& t, const ComputeOptions& o) {
  const auto t0 = Clock::now();
  const auto raw_frames = vertex_frames(t);
  const auto theta = trim_line_gauge(t.psi, family, t.cell, o.tol.winding_margin);
  std::array<Matrix, 4> gauged = raw_frames;
  for (int v = 0; v < 4; ++v) gauged[v].col(0) *= std::exp(kI * theta[v]);

  Z2Report r = delta_trim(family, gauged, o.tol);
  const Z2Report ungauged = delta_trim(family, raw_frames, o.tol);
  for (int v = 0; v < 4; ++v) {
    r.per_vertex[v].gauge_phase = theta[v];
    r.per_vertex[v].ungauged_factor = ungauged.per_vertex[v].factor;
  }
  r.ungauged_recipe = ungauged.value;
  r.residuals.range = t.stats.range_residual;
  r.min_gap = t.stats.min_gap;
  r.seconds = t.seconds + seconds_since(t0);
  return r;
}

}  // namespace

std::string_view to_string(Route route) {
  switch (route) {
    case Route::Degree: return "degree";
    case Route::Trim: return "trim";
    case Route::FuKane: return "fu_kane";
  }
  return "unknown";
}

std::optional<Route> parse_route(std::string_view name) {
  if (name == "degree") return Route::Degree;
  if (name == "trim") return Route::Trim;
  if (name == "fukane" || name == "fu_kane") return Route::FuKane;
  return std::nullopt;
}

bool Z2Bundle::agree() const { return degree.value == trim.value && trim.value == fu_kane.value; }

bool Z2Bundle::trim_product_consistent() const {
  return fu_kane.trim_product && *fu_kane.trim_product == (fu_kane.value ? -1 : 1);
}

int trim_factor(const std::vector<double>& eigenphases) {
  double sum = 0.0;
  for (double x : eigenphases) sum += x;
  const cplx ratio = std::sqrt(std::exp(kI * sum)) / std::exp(kI * (0.5 * sum));
  return ratio.real() > 0 ? 1 : -1;
}

Z2Report delta_trim(const ProjectorFamily& family, const std::array<Matrix, 4>& frames_at_vertices,
                    const Tolerances& tol) {
  if (family.dimension() != 2) throw Error(ErrorKind::InvalidArgument, "delta_trim needs a 2d family");
  const auto eps = linalg::EpsilonForm::block_diagonal(family.rank());
  // Any cell works for the vertex data; only the lambda labels are read.
  const EffectiveCell cell(2, 2);
  Z2Report r;
  r.route = Route::Trim;
  int minus = 0;
  for (int v = 1; v <= 4; ++v) {
    const Matrix u_obs = frames::obstruction_unitary(family, frames_at_vertices[v - 1], cell.vertex_lambda(v), eps, tol);
    r.residuals.unitary = std::max(r.residuals.unitary, linalg::unitarity_defect(u_obs));
    r.residuals.symmetry =
        std::max(r.residuals.symmetry, (u_obs.transpose() * eps.matrix() - eps.matrix() * u_obs).norm());
    TrimVertex tv;
    tv.vertex = v;
    tv.eigenphases = linalg::normalized_eigenphases(u_obs);
    for (double x : tv.eigenphases) tv.phase_sum += x;
    tv.factor = trim_factor(tv.eigenphases);
    tv.ungauged_factor = tv.factor;
    if (tv.factor < 0) ++minus;
    r.per_vertex.push_back(std::move(tv));
  }
  r.value = minus % 2;
  return r;
}

BoundaryData boundary_data(const ProjectorFamily& family, const ComputeOptions& opts, const Variation& variation) {
  const Transported t = transport(family, opts, variation.gauge);
  BoundaryData out;
  out.cell = t.cell;
  out.psi = t.psi;
  out.stats = t.stats;
  const auto eps = linalg::EpsilonForm::block_diagonal(family.rank());
  out.pipeline = frames::run_boundary_pipeline(family, t.cell, t.psi, eps, opts.tol, variation.twist);
  return out;
}

Z2Report delta_2d(const ProjectorFamily& family, const ComputeOptions& opts, const Variation& variation) {
  auto [r, refinements] = with_refinement(opts, [&](const ComputeOptions& o) {
    const Transported t = transport(family, o, variation.gauge);
    Z2Report out = degree_from(family, t, o, variation.twist);
    out.grid = grid_info(t.cell, 0);
    return out;
  });
  r.grid.refinements = refinements;
  return r;
}

Z2Report fu_kane_delta(const ProjectorFamily& family, const ComputeOptions& opts) {
  auto [r, refinements] = with_refinement(opts, [&](const ComputeOptions& o) {
    const Transported t = transport(family, o, nullptr);
    Z2Report out = fu_kane_from(family, t, o);
    out.grid = grid_info(t.cell, 0);
    return out;
  });
  r.grid.refinements = refinements;
  return r;
}

Z2Report delta_trim(const ProjectorFamily& family, const ComputeOptions& opts) {
  auto [r, refinements] = with_refinement(opts, [&](const ComputeOptions& o) {
    const Transported t = transport(family, o, nullptr);
    Z2Report out = trim_from(family, t, o);
    out.grid = grid_info(t.cell, 0);
    return out;
  });
  r.grid.refinements = refinements;
  return r;
}

Z2Bundle z2_all_routes(const ProjectorFamily& family, const ComputeOptions& opts) {
  auto [b, refinements] = with_refinement(opts, [&](const ComputeOptions& o) {
    const Transported t = transport(family, o, nullptr);
    Z2Bundle out{degree_from(family, t, o, nullptr), trim_from(family, t, o), fu_kane_from(family, t, o)};
    for (Z2Report* r : {&out.degree, &out.trim, &out.fu_kane}) r->grid = grid_info(t.cell, 0);
    return out;
  });
  for (Z2Report* r : {&b.degree, &b.trim, &b.fu_kane}) r->grid.refinements = refinements;
  return b;
}

}  // namespace z2kit::invariants
