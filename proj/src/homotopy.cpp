#include "z2kit/error.hpp"
#include "z2kit/invariants.hpp"

#include <cmath>
#include <sstream>

namespace z2kit::invariants {

namespace {

// Uniform grid over [-1/2, 1/2)^d.
std::vector<KVec> torus_grid(int d, int n) {
  std::vector<KVec> out;
  int total = 1;
  for (int c = 0; c < d; ++c) total *= n;
  out.reserve(total);
  for (int idx = 0; idx < total; ++idx) {
    KVec k(d);
    int rest = idx;
    for (int c = 0; c < d; ++c) {
      k(c) = -0.5 + static_cast<double>(rest % n) / n;
      rest /= n;
    }
    out.push_back(k);
  }
  return out;
}

std::string step_label(int s, double t) {
  std::ostringstream os;
  os << "homotopy step " << s << " (t = " << t << ")";
  return os.str();
}

}  // namespace

HomotopyReport homotopy_invariance_check(const std::function<ProjectorFamily(double)>& path, int steps,
                                         const ComputeOptions& opts, int kato_samples) {
  if (steps < 1) throw Error(ErrorKind::InvalidArgument, "homotopy path needs at least one step");
  HomotopyReport out;
  std::vector<ProjectorFamily> families;
  families.reserve(steps + 1);
  for (int s = 0; s <= steps; ++s) families.push_back(path(static_cast<double>(s) / steps));
  const int d = families.front().dimension();
  const auto grid = torus_grid(d, kato_samples);

  for (int s = 0; s <= steps; ++s) {
    const double t = static_cast<double>(s) / steps;
    HomotopyStep step;
    step.t = t;
    try {
      if (d == 2) {
        const Z2Report r = delta_2d(families[s], opts);
        step.value = r.value;
        step.winding = r.winding.value_or(0);
        step.min_gap = r.min_gap;
      } else if (d == 3) {
        const Z2Quadruple q = z2_quadruple_3d(families[s], opts);
        // Encode the quadruple so that constancy means constancy of all four entries.
        step.value = q.values[0] | (q.values[1] << 1) | (q.values[2] << 2) | (q.values[3] << 3);
      } else {
        throw Error(ErrorKind::InvalidArgument, "homotopy check supports d = 2 and d = 3");
      }
      if (s < steps) {
        for (const KVec& k : grid) {
          const Matrix p0 = families[s].projector(k);
          const Matrix p1 = families[s + 1].projector(k);
          step.step_norm = std::max(step.step_norm, linalg::operator_norm(p0 - p1));
          const Matrix w = linalg::kato_nagy_intertwiner(p0, p1, 1e-8);
          step.intertwiner_residual = std::max(step.intertwiner_residual, (w * p0 * w.adjoint() - p1).norm());
        }
      }
    } catch (const GapClosedError& e) {
      throw GapClosedError(e.k(), e.gap(), step_label(s, t));
    } catch (const Error& e) {
      throw Error(e.kind(), step_label(s, t) + ": " + e.what());
    }
    out.max_step_norm = std::max(out.max_step_norm, step.step_norm);
    out.steps.push_back(step);
  }
  for (const auto& st : out.steps) out.constant = out.constant && st.value == out.steps.front().value;
  return out;
}

}  // namespace z2kit::invariants
