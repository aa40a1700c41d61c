#include "z2kit/invariants.hpp"

namespace z2kit::invariants {

namespace {

int mod2(int x) { return ((x % 2) + 2) % 2; }

}  // namespace

FkmIndices fkm_indices(const Quadruple& q) {
  FkmIndices out;
  out.nu0 = mod2(q[0] + q[1]);
  out.nu = {mod2(q[1]), mod2(q[2]), mod2(q[3])};
  return out;
}

Quadruple gl3z_transform(const Quadruple& q, Gl3z g) {
  const auto [a, b, c, d] = q;
  switch (g) {
    case Gl3z::S1: return {mod2(a + b + c), mod2(c), mod2(d), mod2(b)};
    case Gl3z::S2: return {mod2(a + c), mod2(b + c), mod2(c), mod2(d)};
    case Gl3z::T: return {mod2(b), mod2(a), mod2(c), mod2(d)};
  }
  return q;
}

std::string_view to_string(Orbit orbit) {
  switch (orbit) {
    case Orbit::O1: return "O1";
    case Orbit::O2: return "O2";
    case Orbit::O3: return "O3";
  }
  return "unknown";
}

OrbitReport classify_orbit(const Quadruple& q) {
  OrbitReport r;
  const bool zero = q[0] == 0 && q[1] == 0 && q[2] == 0 && q[3] == 0;
  r.nu0 = mod2(q[0] + q[1]);
  r.orbit = zero ? Orbit::O1 : (r.nu0 == 1 ? Orbit::O3 : Orbit::O2);
  // Factorized sums over monomials, with 0^0 = 1.
  r.nu_tot = 1;
  for (int x : q) r.nu_tot = mod2(r.nu_tot * (1 + x));
  r.omega_hat = 1;
  for (int i = 1; i < 4; ++i) r.omega_hat = mod2(r.omega_hat * (1 + q[i]));
  return r;
}

}  // namespace z2kit::invariants
