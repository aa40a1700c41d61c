#include "doctest.h"
#include "z2kit/invariants.hpp"

#include <set>

using namespace z2kit::invariants;

namespace {

std::vector<Quadruple> all_quadruples() {
  std::vector<Quadruple> out;
  for (int b = 0; b < 16; ++b) out.push_back({b & 1, (b >> 1) & 1, (b >> 2) & 1, (b >> 3) & 1});
  return out;
}

// The three generators as 4x4 matrices over Z2 acting on column vectors.
Quadruple apply(const int (&m)[4][4], const Quadruple& q) {
  Quadruple r{};
  for (int i = 0; i < 4; ++i) {
    int s = 0;
    for (int j = 0; j < 4; ++j) s += m[i][j] * q[j];
    r[i] = s % 2;
  }
  return r;
}

constexpr int kS1[4][4] = {{1, 1, 1, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}, {0, 1, 0, 0}};
constexpr int kS2[4][4] = {{1, 0, 1, 0}, {0, 1, 1, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}};
constexpr int kT[4][4] = {{0, 1, 0, 0}, {1, 0, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}};

// Orbits by closure under the generators.
std::vector<std::set<int>> orbits() {
  auto code = [](const Quadruple& q) { return q[0] | q[1] << 1 | q[2] << 2 | q[3] << 3; };
  std::vector<std::set<int>> out;
  std::set<int> seen;
  for (const Quadruple& q : all_quadruples()) {
    if (seen.count(code(q))) continue;
    std::set<int> orbit{code(q)};
    std::vector<Quadruple> todo{q};
    while (!todo.empty()) {
      const Quadruple cur = todo.back();
      todo.pop_back();
      for (Gl3z g : {Gl3z::S1, Gl3z::S2, Gl3z::T}) {
        const Quadruple nxt = gl3z_transform(cur, g);
        if (orbit.insert(code(nxt)).second) todo.push_back(nxt);
      }
    }
    seen.insert(orbit.begin(), orbit.end());
    out.push_back(orbit);
  }
  return out;
}

}  // namespace

TEST_CASE("generator formulas") {
  CHECK(gl3z_transform({1, 0, 1, 0}, Gl3z::S2) == Quadruple{0, 1, 1, 0});
  CHECK(gl3z_transform({1, 0, 0, 1}, Gl3z::T) == Quadruple{0, 1, 0, 1});
  CHECK(gl3z_transform({0, 1, 1, 0}, Gl3z::S1) == Quadruple{0, 1, 0, 1});
  for (const Quadruple& q : all_quadruples()) {
    CHECK(gl3z_transform(q, Gl3z::S1) == apply(kS1, q));
    CHECK(gl3z_transform(q, Gl3z::S2) == apply(kS2, q));
    CHECK(gl3z_transform(q, Gl3z::T) == apply(kT, q));
  }
}

TEST_CASE("orbit invariants") {
  for (const Quadruple& q : all_quadruples()) {
    const OrbitReport r = classify_orbit(q);
    for (Gl3z g : {Gl3z::S1, Gl3z::S2, Gl3z::T}) {
      const OrbitReport s = classify_orbit(gl3z_transform(q, g));
      CHECK(s.nu0 == r.nu0);
      CHECK(s.nu_tot == r.nu_tot);
      CHECK(s.orbit == r.orbit);
      if (r.nu0 == 0) CHECK(s.omega_hat == r.omega_hat);
    }
  }
}

TEST_CASE("three-orbit partition") {
  const auto parts = orbits();
  REQUIRE(parts.size() == 3);
  std::vector<std::size_t> sizes;
  for (const auto& o : parts) sizes.push_back(o.size());
  std::sort(sizes.begin(), sizes.end());
  CHECK(sizes == std::vector<std::size_t>{1, 7, 8});
  for (const auto& o : parts) {
    std::set<Orbit> labels;
    for (int c : o) labels.insert(classify_orbit({c & 1, (c >> 1) & 1, (c >> 2) & 1, (c >> 3) & 1}).orbit);
    CHECK(labels.size() == 1);
  }
}

TEST_CASE("orbit examples") {
  const OrbitReport a = classify_orbit({0, 0, 0, 0});
  CHECK(a.orbit == Orbit::O1);
  CHECK(a.nu0 == 0);
  CHECK(a.nu_tot == 1);
  CHECK(a.omega_hat == 1);
  const OrbitReport b = classify_orbit({1, 1, 0, 0});
  CHECK(b.orbit == Orbit::O2);
  CHECK(b.nu0 == 0);
  CHECK(b.nu_tot == 0);
  CHECK(b.omega_hat == 0);
  const OrbitReport c = classify_orbit({1, 0, 0, 0});
  CHECK(c.orbit == Orbit::O3);
  CHECK(c.nu0 == 1);
  CHECK(c.nu_tot == 0);
  CHECK(c.omega_hat == 1);
  CHECK(to_string(Orbit::O2) == "O2");
}
