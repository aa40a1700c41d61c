#include "doctest.h"
#include "z2kit/error.hpp"
#include "z2kit/frames.hpp"

#include <cmath>

using namespace z2kit;
using namespace z2kit::frames;

namespace {

ComputeOptions grid(int n) {
  ComputeOptions o;
  o.n1 = n;
  o.n2 = n;
  return o;
}

ProjectorFamily km(double lambda_v) { return models::builtin_family("kane_mele", {{"lambda_v", lambda_v}}, 2); }

Matrix diag2(cplx a, cplx b) {
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = a;
  d(1, 1) = b;
  return d;
}

double frame_distance(const FrameField& a, const FrameField& b) {
  double out = 0.0;
  for (std::size_t p = 0; p < a.values.size(); ++p) out = std::max(out, (a.values[p] - b.values[p]).norm());
  return out;
}

}  // namespace

TEST_CASE("effective cell geometry") {
  const EffectiveCell cell(4, 6);
  const double expect[6][2] = {{0.0, 0.0}, {0.0, -0.5}, {0.5, -0.5}, {0.5, 0.0}, {0.5, 0.5}, {0.0, 0.5}};
  for (int v = 1; v <= 6; ++v) {
    const KVec k = cell.k(cell.vertex(v));
    CHECK(k(0) == doctest::Approx(expect[v - 1][0]));
    CHECK(k(1) == doctest::Approx(expect[v - 1][1]));
    const LVec lam = cell.vertex_lambda(v);
    CHECK(lam(0) == static_cast<int>(std::lround(2 * k(0))));
    CHECK(lam(1) == static_cast<int>(std::lround(2 * k(1))));
  }
  CHECK(cell.boundary_size() == 2 * 4 + 4 * 6);
  for (int p = 0; p < cell.boundary_size(); ++p) CHECK(cell.boundary_index(cell.boundary_point(p)) == p);
  CHECK(cell.boundary_index({1, 1}) == -1);
  CHECK(cell.boundary_point(0).i == cell.vertex(1).i);
  CHECK(cell.boundary_point(0).j == cell.vertex(1).j);
  // Edge ranges tile the boundary in order.
  int total = 0;
  for (int e = 1; e <= 6; ++e) {
    const Edge edge = static_cast<Edge>(e);
    CHECK(cell.edge_start(edge) == total);
    total += cell.edge_intervals(edge);
    CHECK(cell.boundary_edge(cell.edge_start(edge)) == edge);
  }
  CHECK(total == cell.boundary_size());
}

TEST_CASE("input frame transport") {
  SUBCASE("constant family gives a constant frame") {
    const auto fam = models::builtin_family("constant", {}, 2);
    const EffectiveCell cell(8, 8);
    const FrameField f = transport_input_frame(fam, cell, grid(8));
    for (const Matrix& m : f.values) CHECK((m - f.values.front()).norm() < 1e-12);
  }
  SUBCASE("Kane-Mele frame is in range and tau-equivariant along k2") {
    const auto fam = km(0.1);
    const EffectiveCell cell(16, 32);
    ComputeOptions o = grid(16);
    o.n2 = 32;
    TransportStats stats;
    const FrameField f = transport_input_frame(fam, cell, o, &stats);
    CHECK(stats.range_residual <= 1e-8);
    CHECK(stats.orthonormality <= 1e-10);
    LVec e2(2);
    e2 << 0, 1;
    for (int i = 0; i <= cell.n1(); ++i)
      CHECK((f.at(i, cell.ny() - 1) - fam.tau(e2) * f.at(i, 0)).norm() <= 1e-8);
    for (int i = 0; i < cell.nx(); ++i)
      for (int j = 0; j < cell.ny(); ++j) {
        const Matrix& psi = f.at(i, j);
        CHECK((fam.projector(cell.k(i, j)) * psi - psi).norm() <= 1e-8);
      }
  }
}

TEST_CASE("obstruction unitary") {
  const auto eps = EpsilonForm::block_diagonal(2);
  const auto fam = models::builtin_family("constant", {}, 2);
  const KVec k0 = KVec::Zero(2);
  const LVec lam0 = LVec::Zero(2);

  // A Kramers basis (phi, Theta phi) satisfies the vertex condition.
  const Matrix occ = fam.occupied_frame(k0);
  Matrix kramers(fam.ambient_dim(), 2);
  kramers.col(0) = occ.col(0);
  kramers.col(1) = fam.apply_theta(occ.col(0));
  const Matrix u_obs = obstruction_unitary(fam, kramers, lam0, eps);
  CHECK(linalg::unitarity_defect(u_obs) < 1e-10);
  const bool vertex_condition = (kramers - fam.apply_theta(kramers) * eps.matrix()).norm() < 1e-10;
  CHECK(vertex_condition);
  CHECK((u_obs - Matrix::Identity(2, 2)).norm() < 1e-10);

  // Gauge law for a general basis.
  std::mt19937_64 rng(4);
  const auto kmf = km(0.1);
  KVec kv(2);
  kv << 0.5, 0.0;
  LVec lv(2);
  lv << 1, 0;
  const Matrix psi = kmf.occupied_frame(kv);
  const Matrix g = linalg::random_unitary(2, rng);
  const Matrix u1 = obstruction_unitary(kmf, psi, lv, eps);
  const Matrix u2 = obstruction_unitary(kmf, psi * g, lv, eps);
  CHECK((u2 - g.adjoint() * u1 * eps.inverse() * g.conjugate() * eps.matrix()).norm() < 1e-10);
  CHECK((u1.transpose() * eps.matrix() - eps.matrix() * u1).norm() < 1e-8);
}

TEST_CASE("edge interpolation") {
  const EffectiveCell cell(8, 8);
  std::mt19937_64 rng(2);
  const Matrix u = linalg::random_unitary(2, rng);
  const EdgeUnitaries flat = interpolate_edges({u, u, u, u}, cell);
  for (const auto* edge : {&flat.e1, &flat.e2, &flat.e3})
    for (const Matrix& m : *edge) CHECK((m - u).norm() < 1e-12);

  const Matrix one = Matrix::Identity(2, 2);
  const EdgeUnitaries e = interpolate_edges({one, diag2(kI, -kI), one, one}, cell);
  REQUIRE(static_cast<int>(e.e1.size()) == cell.n2() + 1);
  CHECK((e.e1.front() - one).norm() < 1e-12);
  CHECK((e.e1.back() - diag2(kI, -kI)).norm() < 1e-12);
  CHECK((e.e1[cell.n2() / 2] - diag2(std::exp(kI * kPi / 4.0), std::exp(-kI * kPi / 4.0))).norm() < 1e-12);

  const std::array<Matrix, 4> vs = {linalg::random_unitary(2, rng), linalg::random_unitary(2, rng),
                                    linalg::random_unitary(2, rng), linalg::random_unitary(2, rng)};
  const EdgeUnitaries r = interpolate_edges(vs, cell);
  CHECK((r.e1.front() - vs[0]).norm() < 1e-10);
  CHECK((r.e1.back() - vs[1]).norm() < 1e-10);
  CHECK((r.e2.front() - vs[1]).norm() < 1e-10);
  CHECK((r.e2.back() - vs[2]).norm() < 1e-10);
  CHECK((r.e3.front() - vs[2]).norm() < 1e-10);
  CHECK((r.e3.back() - vs[3]).norm() < 1e-10);
}

TEST_CASE("boundary pipeline on Kane-Mele") {
  for (double lv : {0.1, 0.4}) {
    CAPTURE(lv);
    const auto fam = km(lv);
    const EffectiveCell cell(32, 32);
    const auto eps = EpsilonForm::block_diagonal(2);
    const BoundaryField psi = transport_boundary_frame(fam, cell, grid(32));
    const BoundaryPipeline bp = run_boundary_pipeline(fam, cell, psi, eps, Tolerances{});
    CHECK(bp.symmetry.max() <= 1e-8);
    CHECK(bp.unitarity <= 1e-10);
    for (const auto& v : bp.vertices) {
      CHECK((v.u * eps.inverse() * v.u.transpose() * eps.matrix() - v.u_obs).norm() <= 1e-8);
      CHECK(v.compatibility <= 1e-8);
    }
    const int w = linalg::winding_number(det_loop(bp.u_hat));
    CHECK(((w % 2) + 2) % 2 == (lv < 0.3 ? 1 : 0));

    // Trivial cases of the frame change.
    const TransitionLoop same = boundary_transition(psi, psi);
    for (const Matrix& m : same.samples) CHECK((m - Matrix::Identity(2, 2)).norm() < 1e-10);
    std::mt19937_64 rng(6);
    const Matrix c = linalg::random_unitary(2, rng);
    BoundaryField rotated = psi;
    for (Matrix& m : rotated) m = m * c;
    for (const Matrix& m : boundary_transition(psi, rotated).samples) CHECK((m - c).norm() < 1e-10);
  }
}

TEST_CASE("unwinding matrix") {
  const EffectiveCell cell(16, 16);
  const auto eps = EpsilonForm::block_diagonal(2);
  for (const Matrix& m : unwind_X(0, cell, eps).samples) CHECK((m - Matrix::Identity(2, 2)).norm() < 1e-14);
  for (int s : {1, 2, -1}) {
    const TransitionLoop x = unwind_X(s, cell, eps);
    CHECK(linalg::winding_number(det_loop(x)) == -2 * s);
    for (int v = 1; v <= 6; ++v) CHECK(std::abs(x.samples[cell.boundary_index(cell.vertex(v))].determinant() - 1.0) < 1e-12);
    CHECK(transition_symmetry_residuals(x, cell, eps).max() < 1e-12);
  }
  const auto eps4 = EpsilonForm::block_diagonal(4);
  CHECK(linalg::winding_number(det_loop(unwind_X(1, cell, eps4))) == -2);
}

TEST_CASE("disc filling") {
  const EffectiveCell cell(12, 12);
  const int L = cell.boundary_size();
  auto check_restriction = [&](const TransitionLoop& loop, const std::vector<Matrix>& field) {
    double worst = 0.0;
    for (int p = 0; p < L; ++p) {
      const GridIndex g = cell.boundary_point(p);
      worst = std::max(worst, (field[static_cast<std::size_t>(g.i) * cell.ny() + g.j] - loop.samples[p]).norm());
    }
    return worst;
  };

  std::mt19937_64 rng(12);
  const Matrix c = linalg::random_unitary(2, rng);
  TransitionLoop flat;
  flat.samples.assign(L, c);
  const auto ff = fill_disc(flat, cell);
  for (const Matrix& m : ff) CHECK((m - c).norm() < 1e-10);

  // Constant determinant, nontrivial loop in SU(2) times a phase.
  TransitionLoop su;
  for (int p = 0; p < L; ++p) {
    const double th = kTwoPi * p / L;
    su.samples.push_back(std::exp(0.3 * kI) * diag2(std::exp(kI * th), std::exp(-kI * th)));
  }
  const auto fs = fill_disc(su, cell);
  CHECK(check_restriction(su, fs) <= 1e-6);
  for (const Matrix& m : fs) CHECK(linalg::unitarity_defect(m) < 1e-10);

  // A generic winding-zero loop: a random unitary conjugated along the boundary.
  const Matrix h1 = linalg::random_hermitian(3, rng), h2 = linalg::random_hermitian(3, rng);
  TransitionLoop gen;
  for (int p = 0; p < L; ++p) {
    const double th = kTwoPi * p / L;
    gen.samples.push_back(linalg::expi_hermitian(std::cos(th) * h1 + std::sin(th) * h2) *
                          linalg::expi_hermitian(std::sin(2 * th) * h2));
  }
  CHECK(check_restriction(gen, fill_disc(gen, cell)) <= 1e-6);

  TransitionLoop odd;
  for (int p = 0; p < L; ++p) odd.samples.push_back(diag2(std::exp(kI * (kTwoPi * p / L)), 1.0));
  try {
    fill_disc(odd, cell);
    FAIL("winding loop filled");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DegreeNonzero);
  }
}

TEST_CASE("symmetric frame in 2d") {
  const auto eps = EpsilonForm::block_diagonal(2);
  SUBCASE("constant family") {
    const auto fam = models::builtin_family("constant", {}, 2);
    const SymmetricFrame2d f = symmetric_frame_2d(fam, grid(8));
    CHECK(f.residuals.orthonormality <= 1e-10);
    CHECK(f.residuals.range <= 1e-10);
    CHECK(f.residuals.time_reversal <= 1e-10);
    CHECK(f.residuals.tau_equivariance <= 1e-10);
    for (const Matrix& m : f.full.values) CHECK((m - f.full.values.front()).norm() < 1e-10);
  }
  SUBCASE("trivial Kane-Mele") {
    const auto fam = km(0.4);
    const SymmetricFrame2d f = symmetric_frame_2d(fam, grid(32));
    CHECK(f.winding % 2 == 0);
    CHECK(f.residuals.orthonormality <= 1e-6);
    CHECK(f.residuals.range <= 1e-6);
    CHECK(f.residuals.time_reversal <= 1e-6);
    CHECK(f.residuals.tau_equivariance <= 1e-6);
    // Recomputing residuals from the exported field agrees with the report.
    const FrameResiduals again = frame_residuals(f.full, fam, eps);
    CHECK(again.time_reversal == doctest::Approx(f.residuals.time_reversal).epsilon(1e-6));
    // Restricting the extension back to the effective cell reproduces it.
    const int n1 = f.cell.n1();
    double round_trip = 0.0;
    for (int i = 0; i <= n1; ++i)
      for (int j = 0; j < f.cell.ny(); ++j) round_trip = std::max(round_trip, (f.full.at(n1 + i, j) - f.effective.at(i, j)).norm());
    CHECK(round_trip == 0.0);
    // Translates follow tau.
    LVec e1(2);
    e1 << 1, 0;
    CHECK((f.at(fam, 3, 5, e1) - fam.tau(e1) * f.full.at(3, 5)).norm() < 1e-14);
  }
  SUBCASE("QSH Kane-Mele is obstructed") {
    try {
      symmetric_frame_2d(km(0.1), grid(32));
      FAIL("no obstruction");
    } catch (const ObstructedError& e) {
      CHECK(e.kind() == ErrorKind::Obstructed);
      REQUIRE(e.invariants().size() == 1);
      CHECK(e.invariants()[0] == 1);
    }
  }
}

TEST_CASE("symmetric frame in 1d") {
  const auto eps = EpsilonForm::block_diagonal(2);
  const auto konst = models::builtin_family("constant", {}, 1);
  const SymmetricFrame1d c = symmetric_frame_1d(konst, 16);
  for (const Matrix& m : c.full.values) CHECK((m - c.full.values.front()).norm() < 1e-10);

  LVec e1(2);
  e1 << 1, 0;
  for (double lv : {0.1, 0.4}) {
    const auto line = km(lv).restrict(KVec::Zero(2), {e1});
    REQUIRE(line.dimension() == 1);
    const SymmetricFrame1d f = symmetric_frame_1d(line, 64);
    CHECK(f.residuals.orthonormality <= 1e-8);
    CHECK(f.residuals.range <= 1e-8);
    CHECK(f.residuals.time_reversal <= 1e-8);
    CHECK(f.residuals.tau_equivariance <= 1e-8);
    const int n = f.full.nx;
    for (int i = 0; i < n; ++i)
      CHECK((f.full.at(n - 1 - i, 0) - line.apply_theta(f.full.at(i, 0)) * eps.matrix()).norm() <= 1e-8);
  }
}

TEST_CASE("midpoint symmetrization") {
  const auto eps = EpsilonForm::block_diagonal(2);
  const auto fam = km(0.4);
  const SymmetricFrame2d sym = symmetric_frame_2d(fam, grid(16));

  const FrameField same = midpoint_symmetrize(sym.full, fam, eps);
  CHECK(frame_distance(same, sym.full) < 1e-10);

  std::mt19937_64 rng(21);
  FrameField noisy = sym.full;
  for (Matrix& m : noisy.values) m = m * linalg::expi_hermitian(linalg::random_hermitian(2, rng, 1e-3));
  const double defect = frame_residuals(noisy, fam, eps).time_reversal;
  const FrameField fixed = midpoint_symmetrize(noisy, fam, eps);
  const FrameResiduals r = frame_residuals(fixed, fam, eps);
  CHECK(r.time_reversal <= 1e-10);
  CHECK(r.range <= 1e-10);
  const double moved = frame_distance(fixed, noisy);
  CHECK(moved <= 2e-3 * 2.0);
  CHECK(moved <= 2.0 * defect);

  FrameField shifted = sym.full;
  shifted.x0 += 0.01;
  CHECK_THROWS_AS(midpoint_symmetrize(shifted, fam, eps), Error);

  // M(phi, psi eps) = M(phi eps^-1, psi) eps on close pairs.
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix phi = linalg::random_unitary(4, rng).leftCols(2);
    const Matrix psi = phi * linalg::expi_hermitian(linalg::random_hermitian(2, rng, 0.3)) * eps.inverse();
    const Matrix lhs = midpoint_frame(phi, psi * eps.matrix(), 1e-3);
    const Matrix rhs = midpoint_frame(phi * eps.inverse(), psi, 1e-3) * eps.matrix();
    CHECK((lhs - rhs).norm() <= 1e-9);
  }
}

TEST_CASE("parallel runner covers every index once") {
  std::vector<int> hits(97, 0);
  run_parallel(97, 4, [&](int i) { hits[i] += 1; });
  for (int h : hits) CHECK(h == 1);
}
