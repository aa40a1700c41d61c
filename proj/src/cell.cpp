#include "z2kit/error.hpp"
#include "z2kit/frames.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

namespace z2kit::frames {

EffectiveCell::EffectiveCell(int n1, int n2) : n1_(n1), n2_(n2) {
  if (n1 < 1 || n2 < 1) throw Error(ErrorKind::InvalidArgument, "cell needs at least one sample per direction");
}

KVec EffectiveCell::k(int i, int j) const {
  KVec v(2);
  v << k1(i), k2(j);
  return v;
}

GridIndex EffectiveCell::vertex(int v) const {
  switch (v) {
    case 1: return {0, n2_};
    case 2: return {0, 0};
    case 3: return {n1_, 0};
    case 4: return {n1_, n2_};
    case 5: return {n1_, 2 * n2_};
    case 6: return {0, 2 * n2_};
  }
  throw Error(ErrorKind::InvalidArgument, "vertex index must be 1..6");
}

LVec EffectiveCell::vertex_lambda(int v) const {
  const GridIndex g = vertex(v);
  LVec l(2);
  l << (g.i == 0 ? 0 : 1), g.j / n2_ - 1;
  return l;
}

int EffectiveCell::edge_start(Edge e) const {
  switch (e) {
    case Edge::E1: return 0;
    case Edge::E2: return n2_;
    case Edge::E3: return n1_ + n2_;
    case Edge::E4: return n1_ + 2 * n2_;
    case Edge::E5: return n1_ + 3 * n2_;
    case Edge::E6: return 2 * n1_ + 3 * n2_;
  }
  return 0;
}

int EffectiveCell::edge_intervals(Edge e) const { return (e == Edge::E2 || e == Edge::E5) ? n1_ : n2_; }

Edge EffectiveCell::boundary_edge(int p) const {
  const int L = boundary_size();
  p = ((p % L) + L) % L;
  for (int e = 6; e >= 1; --e)
    if (p >= edge_start(static_cast<Edge>(e))) return static_cast<Edge>(e);
  return Edge::E1;
}

GridIndex EffectiveCell::boundary_point(int p) const {
  const int L = boundary_size();
  p = ((p % L) + L) % L;
  const Edge e = boundary_edge(p);
  const int q = p - edge_start(e);
  switch (e) {
    case Edge::E1: return {0, n2_ - q};
    case Edge::E2: return {q, 0};
    case Edge::E3: return {n1_, q};
    case Edge::E4: return {n1_, n2_ + q};
    case Edge::E5: return {n1_ - q, 2 * n2_};
    case Edge::E6: return {0, 2 * n2_ - q};
  }
  return {};
}

int EffectiveCell::boundary_index(GridIndex g) const {
  if (g.i == 0) return g.j <= n2_ ? n2_ - g.j : edge_start(Edge::E6) + (2 * n2_ - g.j);
  if (g.j == 0) return n2_ + g.i;
  if (g.i == n1_) return edge_start(Edge::E3) + g.j;
  if (g.j == 2 * n2_) return edge_start(Edge::E5) + (n1_ - g.i);
  return -1;
}

double EffectiveCell::boundary_coordinate(double x, double y) const {
  double p;
  if (std::abs(x) >= std::abs(y)) {
    const double Y = y / std::abs(x);
    if (x < 0) {
      p = Y <= 0 ? -Y * n2_ : edge_start(Edge::E6) + (1.0 - Y) * n2_;
    } else {
      p = edge_start(Edge::E3) + (Y + 1.0) * n2_;
    }
  } else {
    const double X = x / std::abs(y);
    p = y < 0 ? n2_ + 0.5 * (X + 1.0) * n1_ : edge_start(Edge::E5) + 0.5 * (1.0 - X) * n1_;
  }
  const double L = boundary_size();
  p = std::fmod(p, L);
  if (p < 0) p += L;
  return p;
}

KVec FrameField::k(int i, int j) const {
  KVec v(dimension);
  v(0) = x0 + i * hx;
  if (dimension > 1) v(1) = y0 + j * hy;
  return v;
}

linalg::PhaseLoop det_loop(const TransitionLoop& loop) {
  linalg::PhaseLoop out;
  out.samples.reserve(loop.samples.size() + 1);
  for (const auto& u : loop.samples) out.samples.push_back(u.determinant());
  if (!loop.samples.empty()) out.samples.push_back(out.samples.front());
  return out;
}

void run_parallel(int count, int jobs, const std::function<void(int)>& body) {
  if (jobs <= 1 || count <= 1) {
    for (int t = 0; t < count; ++t) body(t);
    return;
  }
  std::atomic<int> next{0};
  std::mutex mu;
  int failed_index = -1;
  std::exception_ptr failure;
  auto worker = [&] {
    for (;;) {
      const int t = next.fetch_add(1);
      if (t >= count) return;
      try {
        body(t);
      } catch (...) {
        // Keep the failure of the lowest task index so errors are reproducible.
        std::lock_guard<std::mutex> lock(mu);
        if (failed_index < 0 || t < failed_index) {
          failed_index = t;
          failure = std::current_exception();
        }
      }
    }
  };
  std::vector<std::thread> pool;
  const int n = std::min(jobs, count);
  for (int w = 0; w < n; ++w) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace z2kit::frames
