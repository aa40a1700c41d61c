#pragma once

#include <Eigen/Dense>

#include <complex>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

namespace z2kit {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr cplx kI{0.0, 1.0};

struct Tolerances {
  double unitary = 1e-10;
  double proj = 1e-10;
  double skew = 1e-8;
  double sym = 1e-8;
  double rank = 1e-8;
  double winding_margin = kPi / 2;
  double log_margin = 1e-3;
};

namespace linalg {

enum class EpsilonLayout { BlockDiagonal, StandardSymplectic };

// The reshuffling matrix relating a frame to its time-reversed image.
class EpsilonForm {
 public:
  static EpsilonForm block_diagonal(int m);
  static EpsilonForm standard_symplectic(int m);

  const Matrix& matrix() const { return eps_; }
  const Matrix& inverse() const { return inv_; }
  EpsilonLayout layout() const { return layout_; }
  int size() const { return static_cast<int>(eps_.rows()); }

 private:
  EpsilonForm(Matrix eps, EpsilonLayout layout);
  Matrix eps_;
  Matrix inv_;
  EpsilonLayout layout_;
};

// Closed loop of unit complex numbers; samples.front() and samples.back() are
// the same point of the curve.
struct PhaseLoop {
  std::vector<cplx> samples;
};

// Eigen-decomposition of a unitary via complex Schur, so the eigenvector
// matrix is unitary even for degenerate spectra.
struct UnitaryEigen {
  Matrix vectors;
  Eigen::VectorXcd values;
};
UnitaryEigen unitary_eigen(const Matrix& u);

// Maps an angle into [0, 2pi); angles within 1e-8 below 2pi snap to 0.
double normalize_phase(double angle);

double unitarity_defect(const Matrix& u);
double hermiticity_defect(const Matrix& a);
double skew_defect(const Matrix& a);
double projector_defect(const Matrix& p);
double operator_norm(const Matrix& a);

Matrix loewdin_unitarize(const Matrix& a, double tol_rank = 1e-8);

cplx pfaffian(const Matrix& a, double tol_skew = 1e-8);

int winding_number(const PhaseLoop& loop, double margin = kPi / 2);

// Samples f on [0, 1] (f(0) == f(1)) and doubles the sample count whenever
// the loop aliases, up to `cap` samples.
struct RefinedWinding {
  int winding = 0;
  int samples = 0;
};
RefinedWinding winding_number_refined(const std::function<cplx(double)>& f, int initial_samples,
                                      int cap, double margin = kPi / 2);

Matrix geodesic_unitary_path(const Matrix& u1, const Matrix& u2, double t);

Matrix symplectic_square_root(const Matrix& v, const EpsilonForm& eps, double tol_sym = 1e-8);

// Eigenphases of v normalized to [0, 2pi), ascending.
std::vector<double> normalized_eigenphases(const Matrix& v);

Matrix kato_nagy_intertwiner(const Matrix& p0, const Matrix& p1, double tol_proj = 1e-10);

// exp(i h) for Hermitian h.
Matrix expi_hermitian(const Matrix& h);

// Principal logarithm of a unitary: returns Hermitian a with u = exp(i a),
// spectrum of a in (-pi, pi]. Throws LogBranch if an eigenvalue lies within
// `margin` of -1.
Matrix log_unitary(const Matrix& u, double margin);

Matrix random_unitary(int n, std::mt19937_64& rng);
Matrix random_hermitian(int n, std::mt19937_64& rng, double scale = 1.0);
Matrix random_complex(int rows, int cols, std::mt19937_64& rng);

}  // namespace linalg
}  // namespace z2kit
