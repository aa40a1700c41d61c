#include "z2kit/error.hpp"
#include "z2kit/invariants.hpp"

#include <cmath>
#include <sstream>

namespace z2kit::invariants {

namespace {

LVec line_shift(const EffectiveCell& cell, int i) {
  LVec lambda = LVec::Zero(2);
  if (i == cell.n1()) lambda(0) = 1;
  return lambda;
}

void check_line(const EffectiveCell& cell, int i) {
  if (i != 0 && i != cell.n1()) throw Error(ErrorKind::InvalidArgument, "sewing matrix needs a TRIM line (i = 0 or n1)");
}

int sign_of(cplx ratio, const char* what) {
  if (std::abs(std::abs(ratio.real()) - 1.0) > 1e-6) {
    std::ostringstream os;
    os << what << " is not +-1: " << ratio;
    throw Error(ErrorKind::NumericalFailure, os.str());
  }
  return ratio.real() > 0 ? 1 : -1;
}

}  // namespace

// w(k)_ab = <psi_a(-k) | Theta psi_b(k)>. On the line k1 = 1/2 the point -k is
// (1/2, -k2) - e1, and psi(-1/2, .) = tau(-e1) psi(1/2, .).
Matrix sewing_matrix(const BoundaryField& psi, const ProjectorFamily& family, const EffectiveCell& cell, int i, int j) {
  check_line(cell, i);
  const int mirror = cell.ny() - 1 - j;
  const Matrix& a = psi[cell.boundary_index({i, mirror})];
  const Matrix& b = psi[cell.boundary_index({i, j})];
  return a.adjoint() * family.tau(line_shift(cell, i)) * family.apply_theta(b);
}

PThetaLine time_reversal_polarization(const BoundaryField& psi, const ProjectorFamily& family,
                                      const EffectiveCell& cell, int i, double skew_tol) {
  check_line(cell, i);
  const int n2 = cell.n2(), top = cell.ny() - 1;
  PThetaLine out;
  out.k_star = cell.k1(i);

  std::vector<Matrix> w(n2 + 1);
  for (int q = 0; q <= n2; ++q) {
    w[q] = sewing_matrix(psi, family, cell, i, n2 + q);
    out.unitarity = std::max(out.unitarity, linalg::unitarity_defect(w[q]));
    const Matrix partner = sewing_matrix(psi, family, cell, i, top - (n2 + q));
    out.antisymmetry = std::max(out.antisymmetry, (partner + w[q].transpose()).norm());
  }

  const double margin = kPi / 2;
  double increment = 0.0;
  cplx prev = w[0].determinant();
  cplx root = std::sqrt(prev);
  out.pf_start = linalg::pfaffian(w[0], skew_tol);
  out.sqrt_ratio_start = sign_of(root / out.pf_start, "sqrt(det w) / Pf w at k2 = 0");
  for (int q = 1; q <= n2; ++q) {
    const cplx cur = w[q].determinant();
    const double step = std::arg(cur / prev);
    if (std::abs(step) >= kPi - margin) throw AliasingError(cell.boundary_index({i, n2 + q - 1}), step);
    increment += step;
    // Continue the square root along the line: pick the root closest to the previous one.
    cplx r = std::sqrt(cur);
    if (std::abs(r - root) > std::abs(r + root)) r = -r;
    root = r;
    prev = cur;
  }
  out.pf_end = linalg::pfaffian(w[n2], skew_tol);
  out.sqrt_ratio_end = sign_of(root / out.pf_end, "sqrt(det w) / Pf w at k2 = 1/2");
  out.log_det_increment = increment;

  const double p = increment / kTwoPi - (std::arg(out.pf_end) - std::arg(out.pf_start)) / kPi;
  const double rounded = std::round(p);
  if (std::abs(p - rounded) > 1e-6) {
    std::ostringstream os;
    os << "P_theta(" << out.k_star << ") = " << p << " is not an integer";
    throw Error(ErrorKind::NonInteger, os.str());
  }
  out.raw = static_cast<int>(rounded);
  out.value = ((out.raw % 2) + 2) % 2;
  return out;
}

std::array<double, 4> trim_line_gauge(const BoundaryField& psi, const ProjectorFamily& family,
                                      const EffectiveCell& cell, double margin) {
  const int n2 = cell.n2();
  // Lift of arg det w from k2 = 0 to k2 = 1/2 on each TRIM line.
  auto lift = [&](int i) -> std::pair<double, double> {
    cplx prev = sewing_matrix(psi, family, cell, i, n2).determinant();
    const double start = std::arg(prev);
    double f = start;
    for (int q = 1; q <= n2; ++q) {
      const cplx cur = sewing_matrix(psi, family, cell, i, n2 + q).determinant();
      const double step = std::arg(cur / prev);
      if (std::abs(step) >= kPi - margin) throw AliasingError(cell.boundary_index({i, n2 + q - 1}), step);
      f += step;
      prev = cur;
    }
    return {start, f};
  };
  // theta(k2) = f(|k2|) / 2 on each line makes det w = 1 there; interpolating
  // linearly in k1 between the lines extends it continuously over the cell.
  const auto [a0, a1] = lift(0);
  const auto [b0, b1] = lift(cell.n1());
  return {0.5 * a0, 0.5 * a1, 0.5 * b1, 0.5 * b0};
}

}  // namespace z2kit::invariants
