#include "z2kit/report_json.hpp"

#include <cmath>

namespace z2kit::io {

Json number(double x) {
  if (!std::isfinite(x)) return nullptr;
  return x;
}

Json complex_pair(cplx z) { return Json::array({number(z.real()), number(z.imag())}); }

Json to_json(const invariants::Z2Report& r, bool timing) {
  Json j;
  j["value"] = r.value;
  j["route"] = std::string(invariants::to_string(r.route));
  j["winding"] = r.winding ? Json(*r.winding) : Json(nullptr);
  j["residuals"] = {{"unitary", number(r.residuals.unitary)},
                    {"symmetry", number(r.residuals.symmetry)},
                    {"range", number(r.residuals.range)}};
  j["grid"] = {{"n1", r.grid.n1},
               {"n2", r.grid.n2},
               {"boundary_samples", r.grid.boundary_samples},
               {"refinements", r.grid.refinements}};
  if (r.route == invariants::Route::Trim) {
    Json pv = Json::array();
    for (const auto& v : r.per_vertex) {
      Json phases = Json::array();
      for (double x : v.eigenphases) phases.push_back(number(x));
      pv.push_back({{"vertex", v.vertex},
                    {"eigenphases", phases},
                    {"phase_sum", number(v.phase_sum)},
                    {"factor", v.factor},
                    {"gauge_phase", number(v.gauge_phase)},
                    {"ungauged_factor", v.ungauged_factor}});
    }
    j["per_vertex"] = pv;
    j["ungauged_recipe"] = r.ungauged_recipe ? Json(*r.ungauged_recipe) : Json(nullptr);
  }
  if (r.route == invariants::Route::FuKane) {
    Json pt = Json::array();
    for (const auto& l : r.p_theta) {
      pt.push_back({{"k_star", l.k_star},
                    {"value", l.value},
                    {"raw", l.raw},
                    {"log_det_increment", number(l.log_det_increment)},
                    {"pf_start", complex_pair(l.pf_start)},
                    {"pf_end", complex_pair(l.pf_end)},
                    {"sqrt_ratio_start", l.sqrt_ratio_start},
                    {"sqrt_ratio_end", l.sqrt_ratio_end}});
    }
    j["p_theta"] = pt;
    j["trim_product"] = r.trim_product ? Json(*r.trim_product) : Json(nullptr);
  }
  j["min_gap"] = number(r.min_gap);
  j["seconds"] = timing ? number(r.seconds) : Json(0);
  return j;
}

Json to_json(const invariants::Z2Bundle& b, bool timing) {
  Json j;
  j["value"] = b.degree.value;
  j["agree"] = b.agree();
  j["trim_product_consistent"] = b.trim_product_consistent();
  j["routes"] = {{"degree", to_json(b.degree, timing)},
                 {"trim", to_json(b.trim, timing)},
                 {"fu_kane", to_json(b.fu_kane, timing)}};
  return j;
}

Json orbit_json(const invariants::Quadruple& q) {
  using namespace invariants;
  const auto o = classify_orbit(q);
  const auto fkm = fkm_indices(q);
  auto arr = [](const Quadruple& x) { return Json::array({x[0], x[1], x[2], x[3]}); };
  Json j;
  j["quadruple"] = arr(q);
  j["orbit"] = std::string(to_string(o.orbit));
  j["nu0"] = o.nu0;
  j["nu"] = Json::array({fkm.nu[0], fkm.nu[1], fkm.nu[2]});
  j["nu_tot"] = o.nu_tot;
  j["omega_hat"] = o.omega_hat;
  j["images"] = {{"s1", arr(gl3z_transform(q, Gl3z::S1))},
                 {"s2", arr(gl3z_transform(q, Gl3z::S2))},
                 {"t", arr(gl3z_transform(q, Gl3z::T))}};
  return j;
}

Json to_json(const invariants::Z2Quadruple& q, bool timing) {
  Json j = orbit_json(q.values);
  j["delta2_minus"] = q.delta2_minus;
  j["delta3_minus"] = q.delta3_minus;
  j["minus_faces_consistent"] = q.minus_faces_consistent();
  Json faces = Json::array();
  bool agree = true;
  for (const auto& f : q.faces) {
    agree = agree && f.routes.agree();
    Json fj = to_json(f.routes, timing);
    fj["face"] = f.name;
    faces.push_back(fj);
  }
  j["routes_agree"] = agree;
  j["faces"] = faces;
  return j;
}

Json to_json(const invariants::HomotopyReport& h) {
  Json steps = Json::array();
  for (const auto& s : h.steps) {
    steps.push_back({{"t", s.t},
                     {"value", s.value},
                     {"winding", s.winding},
                     {"min_gap", number(s.min_gap)},
                     {"step_norm", number(s.step_norm)},
                     {"intertwiner_residual", number(s.intertwiner_residual)}});
  }
  return {{"constant", h.constant}, {"max_step_norm", number(h.max_step_norm)}, {"steps", steps}};
}

Json to_json(const models::AssumptionReport& a) {
  Json axioms = Json::array();
  for (const auto& x : a.axioms) axioms.push_back({{"axiom", x.axiom}, {"max_residual", number(x.max_residual)}, {"pass", x.pass}});
  return {{"pass", a.all_pass()},
          {"samples", a.samples},
          {"continuity_bound", number(a.continuity_bound)},
          {"axioms", axioms}};
}

Json residuals_json(const frames::FrameResiduals& r) {
  return {{"orthonormality", number(r.orthonormality)},
          {"range", number(r.range)},
          {"tau_equivariance", number(r.tau_equivariance)},
          {"time_reversal", number(r.time_reversal)},
          {"max_adjacent_distance", number(r.max_adjacent_distance)}};
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace z2kit::io
