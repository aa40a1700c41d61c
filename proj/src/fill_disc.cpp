#include "z2kit/error.hpp"
#include "z2kit/frames.hpp"

#include <cmath>
#include <sstream>

namespace z2kit::frames {

namespace {

constexpr int kStepsPerLeg = 32;

// Minimal unitary taking unit vector x to unit vector y: a phase on x followed
// by a real rotation in the plane of e^{i alpha} x and y. Needs Re <x, y> > -1.
Matrix minimal_rotation(const Vector& x, const Vector& y) {
  const Eigen::Index n = x.size();
  const cplx c = x.dot(y);  // x^dagger y
  const double ac = std::min(std::abs(c), 1.0);
  const cplx phase = ac > 0 ? c / std::abs(c) : cplx(1.0);
  const Vector xp = phase * x;
  const Vector r = y - ac * xp;
  Matrix id = Matrix::Identity(n, n);
  Matrix ph = id + (phase - 1.0) * x * x.adjoint();
  Matrix rot = id + (ac - 1.0) * xp * xp.adjoint() - r * r.adjoint() / (1.0 + ac) + r * xp.adjoint() - xp * r.adjoint();
  return rot * ph;
}

// Point at parameter tau in [0, 1] on the real great circle from u to a.
Vector slerp(const Vector& u, const Vector& a, double tau) {
  const double cosw = std::max(-1.0, std::min(1.0, u.dot(a).real()));
  const double w = std::acos(cosw);
  Vector v;
  if (w < 1e-12) {
    v = (1.0 - tau) * u + tau * a;
  } else {
    v = (std::sin((1.0 - tau) * w) * u + std::sin(tau * w) * a) / std::sin(w);
  }
  return v / v.norm();
}

class DiscFiller {
 public:
  DiscFiller(const TransitionLoop& loop, const EffectiveCell& cell, double margin)
      : loop_(loop), L_(cell.boundary_size()) {
    if (static_cast<int>(loop.samples.size()) != L_) throw Error(ErrorKind::InvalidArgument, "loop does not match cell");
    m_ = static_cast<int>(loop.samples.front().rows());
    const int w = linalg::winding_number(det_loop(loop), margin);
    if (w != 0) throw Error(ErrorKind::DegreeNonzero, "det winding of the loop is " + std::to_string(w));

    phi_.resize(L_);
    phi_[0] = std::arg(loop.samples[0].determinant());
    for (int p = 1; p < L_; ++p)
      phi_[p] = phi_[p - 1] + std::arg(loop.samples[p].determinant() * std::exp(-kI * phi_[p - 1]));
    double sum = 0.0;
    for (double x : phi_) sum += x;
    phi_mean_ = sum / L_;

    std::vector<Matrix> v(L_);
    for (int p = 0; p < L_; ++p) v[p] = std::exp(-kI * (phi_[p] / m_)) * loop.samples[p];
    choose_axes(v);
    psi_.resize(L_);
    for (int p = 0; p < L_; ++p) {
      for (int level = 0; level + 1 < m_; ++level) apply_level(v[p], level, 1.0);
      const cplx z = v[p](0, 0);
      psi_[p] = p == 0 ? std::arg(z) : psi_[p - 1] + std::arg(z * std::exp(-kI * psi_[p - 1]));
    }
    const double close = psi_[L_ - 1] + std::arg(v[0](0, 0) * std::exp(-kI * psi_[L_ - 1])) - psi_[0];
    if (std::abs(close) > 1e-6) throw Error(ErrorKind::NumericalFailure, "scalar remainder of the loop winds");
  }

  // s = 0 is the loop itself, s = 1 the constant e^{i mean(phi)/m}.
  Matrix evaluate(double s, double pos) const {
    if (s >= 1.0) return std::exp(kI * (phi_mean_ / m_)) * Matrix::Identity(m_, m_);
    const int p0 = static_cast<int>(std::floor(pos)) % L_;
    const double frac = pos - std::floor(pos);
    const int p1 = (p0 + 1) % L_;
    const Matrix u = frac == 0.0 ? loop_.samples[p0] : linalg::geodesic_unitary_path(loop_.samples[p0], loop_.samples[p1], frac);
    const double phi = phi_[p0] + std::arg(u.determinant() * std::exp(-kI * phi_[p0]));
    Matrix v = std::exp(-kI * (phi / m_)) * u;

    const double sigma = s * m_;
    int stage = static_cast<int>(std::floor(sigma));
    if (stage > m_ - 1) stage = m_ - 1;
    const double local = sigma - stage;
    for (int level = 0; level < std::min(stage, m_ - 1); ++level) apply_level(v, level, 1.0);
    if (stage < m_ - 1) {
      apply_level(v, stage, local);
    } else {
      const double psi = psi_[p0] + std::arg(v(0, 0) * std::exp(-kI * psi_[p0]));
      v.row(0) *= std::exp(-kI * (local * psi));
    }
    const double phi_s = phi + s * (phi_mean_ - phi);
    return std::exp(kI * (phi_s / m_)) * v;
  }

 private:
  const TransitionLoop& loop_;
  int L_;
  int m_ = 0;
  std::vector<double> phi_;
  double phi_mean_ = 0.0;
  std::vector<Vector> axes_;
  std::vector<double> psi_;

  // Rotates column b-1 of the leading b x b block (b = m - level) along
  // u -> axis -> e_{b-1}, stopping at fraction `t` of the path.
  void apply_level(Matrix& v, int level, double t) const {
    if (t <= 0.0) return;
    const int b = m_ - level;
    const Vector& a = axes_[level];
    const Vector target = Vector::Unit(b, b - 1);
    Vector cur = v.block(0, b - 1, b, 1);
    const double stop = t * 2 * kStepsPerLeg;
    // Path positions are computed from the starting column, so the sequence
    // of intermediate points is a fixed function of u.
    const Vector u0 = cur;
    auto point = [&](double x) -> Vector {
      if (x <= kStepsPerLeg) return slerp(u0, a, x / kStepsPerLeg);
      return slerp(a, target, (x - kStepsPerLeg) / kStepsPerLeg);
    };
    Matrix g = Matrix::Identity(b, b);
    double x = 0.0;
    while (x < stop) {
      const double xn = std::min(std::floor(x) + 1.0, stop);
      const Vector nxt = point(xn);
      g = minimal_rotation(cur, nxt) * g;
      cur = nxt;
      x = xn;
    }
    v.topRows(b) = g * v.topRows(b);
    if (t >= 1.0) {
      // Column is on the axis up to rounding; pin it so the next level works
      // on an exactly block-diagonal matrix.
      v.col(b - 1).setZero();
      v.row(b - 1).setZero();
      v(b - 1, b - 1) = 1.0;
    }
  }

  void choose_axes(std::vector<Matrix> v) {
    std::mt19937_64 rng(0x5eedULL);
    for (int level = 0; level + 1 < m_; ++level) {
      const int b = m_ - level;
      const Vector target = Vector::Unit(b, b - 1);
      auto score = [&](const Vector& a) {
        double s = (a + target).norm();
        for (const auto& mat : v) s = std::min(s, (Vector(mat.block(0, b - 1, b, 1)) + a).norm());
        return s;
      };
      Vector best = target;
      double best_score = score(target);
      for (int trial = 0; trial < 64 && best_score < 0.5; ++trial) {
        Vector cand = linalg::random_complex(b, 1, rng);
        cand /= cand.norm();
        const double sc = score(cand);
        if (sc > best_score) {
          best_score = sc;
          best = cand;
        }
      }
      if (best_score < 1e-3) {
        std::ostringstream os;
        os << "no axis avoids the antipode of column " << b - 1 << " (best distance " << best_score << ")";
        throw Error(ErrorKind::ContractionFailure, os.str());
      }
      axes_.push_back(best);
      for (auto& mat : v) apply_level(mat, level, 1.0);
    }
  }
};

}  // namespace

std::vector<Matrix> fill_disc(const TransitionLoop& loop, const EffectiveCell& cell, double margin) {
  // Fill base^-1 U so that the disc centre is the base sample; a constant loop
  // then gives a constant field.
  const Matrix base = loop.samples.front();
  TransitionLoop rel;
  rel.samples.reserve(loop.samples.size());
  for (const Matrix& u : loop.samples) rel.samples.push_back(base.adjoint() * u);
  const DiscFiller filler(rel, cell, margin);
  const int nx = cell.nx(), ny = cell.ny();
  const double h1 = 0.5 * cell.n1(), n2 = cell.n2();
  std::vector<Matrix> out(static_cast<std::size_t>(nx) * ny);
  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < ny; ++j) {
      const int p = cell.boundary_index({i, j});
      Matrix& dst = out[static_cast<std::size_t>(i) * ny + j];
      if (p >= 0) {
        dst = loop.samples[p];
        continue;
      }
      const double x = (i - h1) / h1, y = (j - n2) / n2;
      const double r = std::max(std::abs(x), std::abs(y));
      dst = base * (r == 0.0 ? filler.evaluate(1.0, 0.0) : filler.evaluate(1.0 - r, cell.boundary_coordinate(x, y)));
    }
  }
  return out;
}

}  // namespace z2kit::frames
