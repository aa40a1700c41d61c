#pragma once

#include "z2kit/linalg.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace z2kit::models {

using KVec = Eigen::VectorXd;
using LVec = Eigen::VectorXi;

struct LatticeSpec {
  int dimension = 2;
  // Reciprocal-lattice generators; k-points are always given in this basis.
  std::vector<Eigen::VectorXd> basis;

  static LatticeSpec standard(int dimension);
};

enum class TauConvention { Periodic, Canonical };

struct Hopping {
  std::vector<int> displacement;
  int i = 0;
  int j = 0;
  cplx amplitude{0.0, 0.0};
};

struct ModelSpec {
  LatticeSpec lattice = LatticeSpec::standard(2);
  int ambient_dim = 0;
  std::vector<Hopping> hoppings;
  int rank = 0;
  TauConvention tau_convention = TauConvention::Periodic;
  Matrix theta;
  // Orbital positions in reduced lattice coordinates (canonical convention only).
  std::vector<std::vector<double>> positions;
  double gap_threshold = 1e-6;
};

struct Spectrum {
  Eigen::VectorXd energies;
  Matrix vectors;
  double gap = 0.0;
};

class ProjectorFamily {
 public:
  using HamiltonianFn = std::function<Matrix(const KVec&)>;
  using TauFn = std::function<Matrix(const LVec&)>;

  ProjectorFamily(int dimension, int ambient_dim, int rank, HamiltonianFn hamiltonian, TauFn tau,
                  Matrix theta_u, double gap_threshold, std::string name = {});

  int dimension() const { return dimension_; }
  int ambient_dim() const { return ambient_dim_; }
  int rank() const { return rank_; }
  double gap_threshold() const { return gap_threshold_; }
  const std::string& name() const { return name_; }
  const Matrix& theta_unitary() const { return theta_u_; }

  Matrix hamiltonian(const KVec& k) const { return hamiltonian_(k); }
  Matrix tau(const LVec& lambda) const { return tau_(lambda); }
  bool tau_is_trivial() const { return tau_trivial_; }

  // Sorted eigen-decomposition of H(k) and the gap above the m-th level.
  Spectrum spectrum(const KVec& k) const;
  // Throws GapClosedError if the gap is at or below gap_threshold.
  Matrix projector(const KVec& k) const;
  // Eigenvectors of the m lowest levels, N x m.
  Matrix occupied_frame(const KVec& k) const;

  // Theta applied to an N x m frame: Theta_u * conj(frame).
  Matrix apply_theta(const Matrix& frame) const { return theta_u_ * frame.conjugate(); }

  // Restriction to the sub-torus origin + span(directions). The induced time
  // reversal is tau(2 origin) Theta, the induced tau is tau on the sub-lattice.
  ProjectorFamily restrict(const KVec& origin, const std::vector<LVec>& directions) const;

  ProjectorFamily with_name(std::string name) const;
  ProjectorFamily with_gap_threshold(double threshold) const;

 private:
  int dimension_;
  int ambient_dim_;
  int rank_;
  HamiltonianFn hamiltonian_;
  TauFn tau_;
  Matrix theta_u_;
  double gap_threshold_;
  std::string name_;
  bool tau_trivial_ = false;

  friend ProjectorFamily build_model(const ModelSpec&);
};

ProjectorFamily build_model(const ModelSpec& spec);

Matrix bloch_hamiltonian(const ProjectorFamily& family, const KVec& k);
Matrix spectral_projector(const ProjectorFamily& family, const KVec& k);

struct AxiomResidual {
  std::string axiom;
  double max_residual = 0.0;
  bool pass = true;
};

struct AssumptionReport {
  std::vector<AxiomResidual> axioms;
  double continuity_bound = 0.0;
  std::size_t samples = 0;
  bool all_pass() const;
};

AssumptionReport verify_assumptions(const ProjectorFamily& family, const std::vector<KVec>& samples,
                                    double tol);
std::vector<KVec> random_k_points(int dimension, int count, std::uint64_t seed);

// Built-in models.
ModelSpec kane_mele_spec(double t, double lambda_so, double lambda_v, double lambda_r);
ModelSpec fkm_diamond_spec(double t, double lambda_so, double dt1);
ModelSpec stacked_kane_mele_spec(double t, double lambda_so, double lambda_v, double lambda_r);
ModelSpec constant_spec(int dimension);
// Random TRS tight-binding model, N = 4, m = 2, gap-screened on a coarse grid.
ModelSpec random_trs_spec(int dimension, std::uint64_t seed, double min_gap = 0.2);

// Theta_u = 1_orbitals (x) i sigma_y, index = orbital * 2 + spin.
Matrix spin_theta(int orbitals);

// Conjugates `base` by exp(i A(k)) with a random TRS-compatible, lattice
// periodic Hermitian generator A. Gap and symmetries are inherited.
ProjectorFamily twisted_family(const ProjectorFamily& base, std::uint64_t seed, double strength = 1.0,
                               int harmonics = 2);

using Parameters = std::map<std::string, double>;

// Names: kane_mele, fkm_diamond, constant, stacked_kane_mele, random_trs.
ProjectorFamily builtin_family(const std::string& name, const Parameters& params, int dimension_hint);
std::vector<std::string> builtin_names();

}  // namespace z2kit::models
