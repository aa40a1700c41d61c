#include "z2kit/error.hpp"
#include "z2kit/models.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <set>

namespace z2kit::models {

namespace {

Matrix pauli(int which) {
  Matrix s = Matrix::Zero(2, 2);
  switch (which) {
    case 0: s << 1, 0, 0, 1; break;
    case 1: s << 0, 1, 1, 0; break;
    case 2: s << 0, cplx(0, -1), cplx(0, 1), 0; break;
    case 3: s << 1, 0, 0, -1; break;
  }
  return s;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

void add_matrix_hopping(ModelSpec& spec, const std::vector<int>& lambda, const Matrix& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      if (std::abs(m(i, j)) > 0.0) spec.hoppings.push_back({lambda, static_cast<int>(i), static_cast<int>(j), m(i, j)});
}

// Adds c * cos(2 pi k.lambda) * M or c * sin(2 pi k.lambda) * M.
void add_cos(ModelSpec& spec, const std::vector<int>& lambda, double c, const Matrix& m) {
  std::vector<int> neg = lambda;
  for (auto& x : neg) x = -x;
  add_matrix_hopping(spec, lambda, 0.5 * c * m);
  add_matrix_hopping(spec, neg, 0.5 * c * m);
}

void add_sin(ModelSpec& spec, const std::vector<int>& lambda, double c, const Matrix& m) {
  std::vector<int> neg = lambda;
  for (auto& x : neg) x = -x;
  const cplx f = c / cplx(0.0, 2.0);
  add_matrix_hopping(spec, lambda, f * m);
  add_matrix_hopping(spec, neg, -f * m);
}

double param(const Parameters& p, const std::string& key, double fallback) {
  auto it = p.find(key);
  return it == p.end() ? fallback : it->second;
}

void check_known(const Parameters& p, std::initializer_list<const char*> known, const std::string& model) {
  std::set<std::string> ok(known.begin(), known.end());
  for (const auto& [k, v] : p)
    if (!ok.count(k)) throw Error(ErrorKind::InvalidSpec, "unknown parameter '" + k + "' for model " + model);
}

}  // namespace

Matrix spin_theta(int orbitals) {
  Matrix isy(2, 2);
  isy << 0, 1, -1, 0;
  return kron(Matrix::Identity(orbitals, orbitals), isy);
}

ModelSpec kane_mele_spec(double t, double lambda_so, double lambda_v, double lambda_r) {
  ModelSpec spec;
  spec.lattice = LatticeSpec::standard(2);
  spec.ambient_dim = 4;
  spec.rank = 2;
  spec.theta = spin_theta(2);

  const Eigen::Vector2d a1(1.0, 0.0);
  const Eigen::Vector2d a2(0.5, std::sqrt(3.0) / 2.0);
  const std::array<Eigen::Vector2d, 2> basis{Eigen::Vector2d(0.0, 0.0), Eigen::Vector2d((a1 + a2) / 3.0)};
  const double nn = 1.0 / std::sqrt(3.0);
  auto site = [&](int orb, int l1, int l2) -> Eigen::Vector2d { return basis[orb] + l1 * a1 + l2 * a2; };
  auto near = [](double x, double y) { return std::abs(x - y) < 1e-9; };
  const Matrix sx = pauli(1), sy = pauli(2), sz = pauli(3), s0 = pauli(0);

  for (int i = 0; i < 2; ++i) {
    Matrix onsite = (i == 0 ? lambda_v : -lambda_v) * s0;
    for (int s = 0; s < 2; ++s) spec.hoppings.push_back({{0, 0}, 2 * i + s, 2 * i + s, onsite(s, s)});
    for (int j = 0; j < 2; ++j) {
      for (int l1 = -2; l1 <= 2; ++l1) {
        for (int l2 = -2; l2 <= 2; ++l2) {
          const Eigen::Vector2d ri = site(i, 0, 0);
          const Eigen::Vector2d rj = site(j, l1, l2);
          const Eigen::Vector2d d = ri - rj;
          const double dist = d.norm();
          Matrix block = Matrix::Zero(2, 2);
          if (near(dist, nn)) {
            const Eigen::Vector2d dh = d / dist;
            block = t * s0 + kI * lambda_r * (sx * dh.y() - sy * dh.x());
          } else if (near(dist, 1.0)) {
            // Next-nearest neighbours share exactly one nearest neighbour;
            // the turn direction through it fixes the spin-orbit sign.
            double nu = 0.0;
            for (int o = 0; o < 2 && nu == 0.0; ++o)
              for (int m1 = -3; m1 <= 3 && nu == 0.0; ++m1)
                for (int m2 = -3; m2 <= 3 && nu == 0.0; ++m2) {
                  const Eigen::Vector2d rm = site(o, m1, m2);
                  if (near((ri - rm).norm(), nn) && near((rm - rj).norm(), nn)) {
                    const Eigen::Vector2d d1 = rm - rj, d2 = ri - rm;
                    nu = (d1.x() * d2.y() - d1.y() * d2.x()) > 0 ? 1.0 : -1.0;
                  }
                }
            block = kI * lambda_so * nu * sz;
          } else {
            continue;
          }
          for (int s = 0; s < 2; ++s)
            for (int sp = 0; sp < 2; ++sp)
              if (std::abs(block(s, sp)) > 0.0) spec.hoppings.push_back({{l1, l2}, 2 * i + s, 2 * j + sp, block(s, sp)});
        }
      }
    }
  }
  return spec;
}

ModelSpec stacked_kane_mele_spec(double t, double lambda_so, double lambda_v, double lambda_r) {
  ModelSpec spec = kane_mele_spec(t, lambda_so, lambda_v, lambda_r);
  spec.lattice = LatticeSpec::standard(3);
  for (auto& h : spec.hoppings) h.displacement.push_back(0);
  return spec;
}

ModelSpec fkm_diamond_spec(double t, double lambda_so, double dt1) {
  ModelSpec spec;
  spec.lattice = LatticeSpec::standard(3);
  spec.ambient_dim = 4;
  spec.rank = 2;
  spec.theta = spin_theta(2);
  const Matrix g1 = kron(pauli(1), pauli(0));
  const Matrix g2 = kron(pauli(2), pauli(0));
  const std::array<Matrix, 3> gso{kron(pauli(3), pauli(1)), kron(pauli(3), pauli(2)), kron(pauli(3), pauli(3))};

  add_matrix_hopping(spec, {0, 0, 0}, (t + dt1) * g1);
  const std::array<std::vector<int>, 3> e{std::vector<int>{1, 0, 0}, std::vector<int>{0, 1, 0}, std::vector<int>{0, 0, 1}};
  for (int j = 0; j < 3; ++j) {
    add_cos(spec, e[j], t, g1);
    add_sin(spec, e[j], t, g2);
  }
  auto diff = [&](int a, int b) {
    std::vector<int> v(3);
    for (int c = 0; c < 3; ++c) v[c] = e[a][c] - e[b][c];
    return v;
  };
  // Cyclic in (1,2,3): d_{3+c} = lso [sin(a2) - sin(a3) - sin(a2 - a1) + sin(a3 - a1)] shifted by c.
  for (int c = 0; c < 3; ++c) {
    const int i1 = c, i2 = (c + 1) % 3, i3 = (c + 2) % 3;
    add_sin(spec, e[i2], lambda_so, gso[c]);
    add_sin(spec, e[i3], -lambda_so, gso[c]);
    add_sin(spec, diff(i2, i1), -lambda_so, gso[c]);
    add_sin(spec, diff(i3, i1), lambda_so, gso[c]);
  }
  return spec;
}

ModelSpec constant_spec(int dimension) {
  ModelSpec spec;
  spec.lattice = LatticeSpec::standard(dimension);
  spec.ambient_dim = 4;
  spec.rank = 2;
  spec.theta = spin_theta(2);
  const std::vector<int> zero(dimension, 0);
  for (int o = 0; o < 4; ++o) spec.hoppings.push_back({zero, o, o, o < 2 ? -1.0 : 1.0});
  return spec;
}

namespace {

std::vector<std::vector<int>> harmonic_set(int d, int harmonics) {
  std::vector<std::vector<int>> base;
  for (int j = 0; j < d; ++j) {
    std::vector<int> v(d, 0);
    v[j] = 1;
    base.push_back(v);
  }
  if (d >= 2) {
    std::vector<int> p(d, 0), m(d, 0);
    p[0] = 1, p[1] = 1;
    m[0] = 1, m[1] = -1;
    base.push_back(p);
    base.push_back(m);
  }
  std::vector<std::vector<int>> out;
  for (int h = 1; h <= harmonics; ++h)
    for (auto v : base) {
      for (auto& x : v) x *= h;
      out.push_back(v);
    }
  return out;
}

Matrix theta_conjugate(const Matrix& tu, const Matrix& a) { return tu * a.conjugate() * tu.adjoint(); }

double min_gap_on_grid(const ProjectorFamily& f, int per_dim) {
  const int d = f.dimension();
  double g = std::numeric_limits<double>::infinity();
  int total = 1;
  for (int j = 0; j < d; ++j) total *= per_dim;
  KVec k(d);
  for (int idx = 0; idx < total; ++idx) {
    int r = idx;
    for (int j = 0; j < d; ++j) {
      k(j) = -0.5 + static_cast<double>(r % per_dim) / per_dim;
      r /= per_dim;
    }
    g = std::min(g, f.spectrum(k).gap);
  }
  return g;
}

}  // namespace

ModelSpec random_trs_spec(int dimension, std::uint64_t seed, double min_gap) {
  const Matrix tu = spin_theta(2);
  const auto lambdas = harmonic_set(dimension, 1);
  for (int attempt = 0; attempt < 2000; ++attempt) {
    std::mt19937_64 rng(seed * 1000003ULL + attempt);
    ModelSpec spec;
    spec.lattice = LatticeSpec::standard(dimension);
    spec.ambient_dim = 4;
    spec.rank = 2;
    spec.theta = tu;
    Matrix h0 = linalg::random_hermitian(4, rng);
    h0 = 0.5 * (h0 + theta_conjugate(tu, h0));
    add_matrix_hopping(spec, std::vector<int>(dimension, 0), h0);
    for (const auto& l : lambdas) {
      Matrix b = 0.6 * linalg::random_complex(4, 4, rng);
      b = 0.5 * (b + theta_conjugate(tu, b));
      std::vector<int> neg = l;
      for (auto& x : neg) x = -x;
      add_matrix_hopping(spec, l, b);
      add_matrix_hopping(spec, neg, b.adjoint());
    }
    const ProjectorFamily f = build_model(spec);
    if (min_gap_on_grid(f, dimension == 3 ? 16 : 64) >= min_gap) return spec;
  }
  throw Error(ErrorKind::NumericalFailure, "no gapped random TRS model found for seed " + std::to_string(seed));
}

ProjectorFamily twisted_family(const ProjectorFamily& base, std::uint64_t seed, double strength, int harmonics) {
  if (!base.tau_is_trivial()) throw Error(ErrorKind::InvalidArgument, "twisting needs a periodic-convention family");
  const int d = base.dimension();
  const int n = base.ambient_dim();
  const Matrix tu = base.theta_unitary();
  std::mt19937_64 rng(seed);
  auto lambdas = std::make_shared<std::vector<Eigen::VectorXd>>();
  auto cs = std::make_shared<std::vector<Matrix>>();
  auto ds = std::make_shared<std::vector<Matrix>>();
  for (const auto& l : harmonic_set(d, harmonics)) {
    Eigen::VectorXd v(d);
    for (int c = 0; c < d; ++c) v(c) = l[c];
    Matrix c = linalg::random_hermitian(n, rng, strength);
    Matrix s = linalg::random_hermitian(n, rng, strength);
    // Odd part under Theta for the cosine, even part for the sine, so that
    // exp(iA(-k)) = Theta exp(iA(k)) Theta^-1.
    cs->push_back(0.5 * (c - theta_conjugate(tu, c)));
    ds->push_back(0.5 * (s + theta_conjugate(tu, s)));
    lambdas->push_back(v);
  }
  auto generator = [lambdas, cs, ds, n](const KVec& k) {
    Matrix a = Matrix::Zero(n, n);
    for (std::size_t s = 0; s < lambdas->size(); ++s) {
      const double ph = kTwoPi * k.dot((*lambdas)[s]);
      a += std::cos(ph) * (*cs)[s] + std::sin(ph) * (*ds)[s];
    }
    return a;
  };
  auto base_h = base;
  auto h = [base_h, generator](const KVec& k) {
    const Matrix w = linalg::expi_hermitian(generator(k));
    return Matrix(w * base_h.hamiltonian(k) * w.adjoint());
  };
  return ProjectorFamily(d, n, base.rank(), h, nullptr, tu, base.gap_threshold(),
                         base.name() + "+twist(" + std::to_string(seed) + ")");
}

std::vector<std::string> builtin_names() {
  return {"kane_mele", "fkm_diamond", "constant", "stacked_kane_mele", "random_trs", "twisted", "twisted_kane_mele"};
}

ProjectorFamily builtin_family(const std::string& name, const Parameters& p, int dimension_hint) {
  auto need_dim = [&](int d) {
    if (dimension_hint != 0 && dimension_hint != d)
      throw Error(ErrorKind::InvalidSpec, name + " is a " + std::to_string(d) + "d model");
  };
  auto dim_or = [&](int fallback) {
    const int d = dimension_hint != 0 ? dimension_hint : fallback;
    if (d < 1 || d > 3) throw Error(ErrorKind::InvalidSpec, "dimension must be 1, 2 or 3");
    return d;
  };
  auto seed_of = [&](double fallback) { return static_cast<std::uint64_t>(param(p, "seed", fallback)); };
  if (name == "kane_mele" || name == "stacked_kane_mele" || name == "twisted_kane_mele") {
    const bool stacked = name == "stacked_kane_mele";
    const bool twisted = name == "twisted_kane_mele";
    if (twisted) {
      check_known(p, {"t", "lambda_so", "lambda_v", "lambda_r", "seed", "strength"}, name);
    } else {
      check_known(p, {"t", "lambda_so", "lambda_v", "lambda_r"}, name);
    }
    need_dim(stacked ? 3 : 2);
    const double t = param(p, "t", 1.0), so = param(p, "lambda_so", 0.06), v = param(p, "lambda_v", 0.1),
                 r = param(p, "lambda_r", 0.05);
    auto spec = stacked ? stacked_kane_mele_spec(t, so, v, r) : kane_mele_spec(t, so, v, r);
    auto fam = build_model(spec).with_name(stacked ? "stacked_kane_mele" : "kane_mele");
    if (twisted) fam = twisted_family(fam, seed_of(1), param(p, "strength", 0.5));
    return fam;
  }
  if (name == "fkm_diamond") {
    check_known(p, {"t", "lambda_so", "dt1"}, name);
    need_dim(3);
    return build_model(fkm_diamond_spec(param(p, "t", 1.0), param(p, "lambda_so", 0.125), param(p, "dt1", 0.4)))
        .with_name(name);
  }
  if (name == "constant") {
    check_known(p, {}, name);
    return build_model(constant_spec(dim_or(2))).with_name(name);
  }
  if (name == "random_trs") {
    check_known(p, {"seed", "min_gap"}, name);
    return build_model(random_trs_spec(dim_or(2), seed_of(1), param(p, "min_gap", 0.2)))
        .with_name("random_trs(" + std::to_string(seed_of(1)) + ")");
  }
  if (name == "twisted") {
    check_known(p, {"seed", "strength"}, name);
    return twisted_family(build_model(constant_spec(dim_or(2))).with_name("constant"), seed_of(1),
                          param(p, "strength", 1.0));
  }
  throw Error(ErrorKind::InvalidSpec, "unknown builtin model '" + name + "'");
}

}  // namespace z2kit::models
