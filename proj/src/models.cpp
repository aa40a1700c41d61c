#include "z2kit/models.hpp"

#include "z2kit/error.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>
#include <sstream>
#include <tuple>

namespace z2kit::models {

LatticeSpec LatticeSpec::standard(int dimension) {
  LatticeSpec l;
  l.dimension = dimension;
  for (int j = 0; j < dimension; ++j) l.basis.push_back(Eigen::VectorXd::Unit(dimension, j));
  return l;
}

ProjectorFamily::ProjectorFamily(int dimension, int ambient_dim, int rank, HamiltonianFn hamiltonian,
                                 TauFn tau, Matrix theta_u, double gap_threshold, std::string name)
    : dimension_(dimension),
      ambient_dim_(ambient_dim),
      rank_(rank),
      hamiltonian_(std::move(hamiltonian)),
      tau_(std::move(tau)),
      theta_u_(std::move(theta_u)),
      gap_threshold_(gap_threshold),
      name_(std::move(name)) {
  if (!tau_) {
    const int n = ambient_dim_;
    tau_ = [n](const LVec&) { return Matrix::Identity(n, n); };
    tau_trivial_ = true;
  }
}

Spectrum ProjectorFamily::spectrum(const KVec& k) const {
  const Matrix h = hamiltonian_(k);
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (h + h.adjoint()));
  if (es.info() != Eigen::Success) throw Error(ErrorKind::NumericalFailure, "Hermitian eigensolver failed");
  Spectrum s;
  s.energies = es.eigenvalues();
  s.vectors = es.eigenvectors();
  s.gap = rank_ < ambient_dim_ ? s.energies(rank_) - s.energies(rank_ - 1)
                               : std::numeric_limits<double>::infinity();
  return s;
}

namespace {
std::vector<double> to_std(const KVec& k) { return {k.data(), k.data() + k.size()}; }
}  // namespace

Matrix ProjectorFamily::occupied_frame(const KVec& k) const {
  Spectrum s = spectrum(k);
  if (!(s.gap > gap_threshold_)) throw GapClosedError(to_std(k), s.gap, name_);
  return s.vectors.leftCols(rank_);
}

Matrix ProjectorFamily::projector(const KVec& k) const {
  const Matrix v = occupied_frame(k);
  return v * v.adjoint();
}

ProjectorFamily ProjectorFamily::restrict(const KVec& origin, const std::vector<LVec>& directions) const {
  if (origin.size() != dimension_) throw Error(ErrorKind::InvalidArgument, "restriction origin has wrong dimension");
  LVec two_o(dimension_);
  for (int j = 0; j < dimension_; ++j) {
    const double v = 2.0 * origin(j);
    if (std::abs(v - std::round(v)) > 1e-12)
      throw Error(ErrorKind::InvalidArgument, "restriction origin must have half-integer coordinates");
    two_o(j) = static_cast<int>(std::round(v));
  }
  const int sub = static_cast<int>(directions.size());
  Eigen::MatrixXd f(dimension_, sub);
  Eigen::MatrixXi fi(dimension_, sub);
  for (int c = 0; c < sub; ++c) {
    if (directions[c].size() != dimension_) throw Error(ErrorKind::InvalidArgument, "restriction direction has wrong dimension");
    fi.col(c) = directions[c];
    f.col(c) = directions[c].cast<double>();
  }
  auto h = hamiltonian_;
  auto tau = tau_;
  KVec o = origin;
  ProjectorFamily out(
      sub, ambient_dim_, rank_, [h, o, f](const KVec& k) { return h(o + f * k); },
      [tau, fi](const LVec& l) { return tau(fi * l); }, tau_(two_o) * theta_u_, gap_threshold_, name_);
  out.tau_trivial_ = tau_trivial_;
  return out;
}

ProjectorFamily ProjectorFamily::with_name(std::string name) const {
  ProjectorFamily out = *this;
  out.name_ = std::move(name);
  return out;
}

ProjectorFamily ProjectorFamily::with_gap_threshold(double threshold) const {
  ProjectorFamily out = *this;
  out.gap_threshold_ = threshold;
  return out;
}

namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw Error(ErrorKind::InvalidSpec, msg);
}

struct HoppingKey {
  std::vector<int> lambda;
  int i, j;
  bool operator<(const HoppingKey& o) const { return std::tie(lambda, i, j) < std::tie(o.lambda, o.i, o.j); }
};

std::vector<int> negate(std::vector<int> v) {
  for (auto& x : v) x = -x;
  return v;
}

}  // namespace

ProjectorFamily build_model(const ModelSpec& spec) {
  const int d = spec.lattice.dimension;
  const int n = spec.ambient_dim;
  require(d >= 1 && d <= 3, "dimension must be 1, 2 or 3");
  require(static_cast<int>(spec.lattice.basis.size()) == d, "lattice basis must have `dimension` vectors");
  {
    Eigen::MatrixXd b(d, d);
    for (int c = 0; c < d; ++c) {
      require(spec.lattice.basis[c].size() == d, "lattice basis vector has wrong length");
      b.col(c) = spec.lattice.basis[c];
    }
    require(std::abs(b.determinant()) > 1e-12, "lattice basis vectors are linearly dependent");
  }
  require(n >= 1, "ambient_dim must be positive");
  require(spec.rank > 0 && spec.rank <= n, "rank must be in 1..ambient_dim");
  require(spec.rank % 2 == 0, "rank must be even for fermionic time reversal");
  require(spec.theta.rows() == n && spec.theta.cols() == n, "theta must be ambient_dim x ambient_dim");
  require(linalg::unitarity_defect(spec.theta) <= 1e-8, "theta is not unitary");
  {
    const double fermionic = (spec.theta * spec.theta.conjugate() + Matrix::Identity(n, n)).norm();
    require(fermionic <= 1e-8, "theta * conj(theta) must equal -1 (fermionic time reversal)");
  }

  std::map<HoppingKey, cplx> terms;
  for (const auto& hop : spec.hoppings) {
    require(static_cast<int>(hop.displacement.size()) == d, "hopping displacement has wrong length");
    require(hop.i >= 0 && hop.i < n && hop.j >= 0 && hop.j < n, "hopping orbital index out of range");
    terms[{hop.displacement, hop.i, hop.j}] += hop.amplitude;
  }
  double scale = 0.0;
  for (const auto& [key, t] : terms) scale = std::max(scale, std::abs(t));
  const double herm_tol = 1e-12 * std::max(1.0, scale);
  std::map<HoppingKey, cplx> closed = terms;
  for (const auto& [key, t] : terms) {
    HoppingKey partner{negate(key.lambda), key.j, key.i};
    auto it = terms.find(partner);
    if (it == terms.end()) {
      closed[partner] = std::conj(t);
    } else if (std::abs(it->second - std::conj(t)) > herm_tol) {
      std::ostringstream os;
      os << "hopping (" << key.i << "," << key.j << ") and its Hermitian partner disagree";
      throw Error(ErrorKind::InvalidSpec, os.str());
    }
  }

  // Group by displacement: H(k) = sum_lambda exp(2 pi i k.lambda) h_lambda.
  std::map<std::vector<int>, Matrix> blocks;
  for (const auto& [key, t] : closed) {
    auto& m = blocks[key.lambda];
    if (m.size() == 0) m = Matrix::Zero(n, n);
    m(key.i, key.j) += t;
  }
  auto lambdas = std::make_shared<std::vector<Eigen::VectorXd>>();
  auto mats = std::make_shared<std::vector<Matrix>>();
  for (auto& [lam, m] : blocks) {
    Eigen::VectorXd l(d);
    for (int c = 0; c < d; ++c) l(c) = lam[c];
    lambdas->push_back(l);
    mats->push_back(m);
  }
  auto periodic = [lambdas, mats, n](const KVec& k) {
    Matrix h = Matrix::Zero(n, n);
    for (std::size_t s = 0; s < lambdas->size(); ++s)
      h += std::exp(kI * (kTwoPi * k.dot((*lambdas)[s]))) * (*mats)[s];
    return h;
  };

  const double threshold = spec.gap_threshold * (scale > 0 ? scale : 1.0);
  if (spec.tau_convention == TauConvention::Periodic) {
    return ProjectorFamily(d, n, spec.rank, periodic, nullptr, spec.theta, threshold);
  }

  require(static_cast<int>(spec.positions.size()) == n, "canonical convention needs one position per orbital");
  Eigen::MatrixXd r(d, n);
  for (int o = 0; o < n; ++o) {
    require(static_cast<int>(spec.positions[o].size()) == d, "orbital position has wrong length");
    for (int c = 0; c < d; ++c) r(c, o) = spec.positions[o][c];
  }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (std::abs(spec.theta(a, b)) > 1e-12)
        require((r.col(a) - r.col(b)).norm() < 1e-12, "theta must not mix orbitals at different positions");
  auto phases = [r](const Eigen::VectorXd& x) {
    Vector p(r.cols());
    for (Eigen::Index o = 0; o < r.cols(); ++o) p(o) = std::exp(kI * (kTwoPi * x.dot(r.col(o))));
    return p;
  };
  auto canonical = [periodic, phases](const KVec& k) {
    const Vector dk = phases(k);
    return Matrix(dk.conjugate().asDiagonal() * periodic(k) * dk.asDiagonal());
  };
  auto tau = [phases](const LVec& l) {
    return Matrix(phases(l.cast<double>()).conjugate().asDiagonal());
  };
  return ProjectorFamily(d, n, spec.rank, canonical, tau, spec.theta, threshold);
}

Matrix bloch_hamiltonian(const ProjectorFamily& family, const KVec& k) { return family.hamiltonian(k); }

Matrix spectral_projector(const ProjectorFamily& family, const KVec& k) { return family.projector(k); }

bool AssumptionReport::all_pass() const {
  for (const auto& a : axioms)
    if (!a.pass) return false;
  return true;
}

std::vector<KVec> random_k_points(int dimension, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  std::vector<KVec> out;
  for (int s = 0; s < count; ++s) {
    KVec k(dimension);
    for (int j = 0; j < dimension; ++j) k(j) = u(rng);
    out.push_back(k);
  }
  return out;
}

AssumptionReport verify_assumptions(const ProjectorFamily& family, const std::vector<KVec>& samples,
                                    double tol) {
  const int d = family.dimension();
  const int n = family.ambient_dim();
  const double h = 1e-4;
  const double inf = std::numeric_limits<double>::infinity();
  const Matrix& tu = family.theta_unitary();
  double r1 = 0.0, r2 = 0.0, r3 = 0.0, r4 = 0.0, cont = 0.0;

  r3 = (tu * tu.conjugate() + Matrix::Identity(n, n)).norm();
  for (int j = 0; j < d; ++j) {
    const LVec e = LVec::Unit(d, j);
    const Matrix t = family.tau(e);
    r4 = std::max(r4, (tu * t.conjugate() - t.adjoint() * tu).norm());
    r2 = std::max(r2, linalg::unitarity_defect(t));
  }

  for (const auto& k : samples) {
    try {
      const Matrix p = family.projector(k);
      r1 = std::max({r1, linalg::projector_defect(p), std::abs(p.trace().real() - family.rank())});
      for (int j = 0; j < d; ++j) {
        const KVec kh = k + h * KVec::Unit(d, j);
        cont = std::max(cont, (family.projector(kh) - p).norm() / h);
        const LVec e = LVec::Unit(d, j);
        const Matrix t = family.tau(e);
        const Matrix shifted = family.projector(k + KVec::Unit(d, j));
        r2 = std::max(r2, (shifted - t * p * t.adjoint()).norm());
      }
      const Matrix pm = family.projector(-k);
      r3 = std::max(r3, (pm - tu * p.conjugate() * tu.adjoint()).norm());
    } catch (const GapClosedError&) {
      r1 = inf;
      cont = inf;
    }
  }

  AssumptionReport rep;
  rep.samples = samples.size();
  rep.continuity_bound = cont;
  rep.axioms.push_back({"P1", r1, r1 <= tol && cont * h < 0.5});
  rep.axioms.push_back({"P2", r2, r2 <= tol});
  rep.axioms.push_back({"P3", r3, r3 <= tol});
  rep.axioms.push_back({"P4", r4, r4 <= tol});
  return rep;
}

}  // namespace z2kit::models
