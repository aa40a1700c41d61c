#include "z2kit/linalg.hpp"

#include "z2kit/error.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace z2kit::linalg {

EpsilonForm::EpsilonForm(Matrix eps, EpsilonLayout layout)
    : eps_(std::move(eps)), layout_(layout) {
  // eps is real orthogonal and skew, so its inverse is its transpose.
  inv_ = eps_.transpose();
}

EpsilonForm EpsilonForm::block_diagonal(int m) {
  if (m <= 0 || m % 2 != 0) throw Error(ErrorKind::OddDimension, "epsilon needs even size, got " + std::to_string(m));
  Matrix e = Matrix::Zero(m, m);
  for (int b = 0; b < m; b += 2) {
    e(b, b + 1) = 1.0;
    e(b + 1, b) = -1.0;
  }
  return EpsilonForm(e, EpsilonLayout::BlockDiagonal);
}

EpsilonForm EpsilonForm::standard_symplectic(int m) {
  if (m <= 0 || m % 2 != 0) throw Error(ErrorKind::OddDimension, "epsilon needs even size, got " + std::to_string(m));
  const int h = m / 2;
  Matrix e = Matrix::Zero(m, m);
  for (int b = 0; b < h; ++b) {
    e(b, h + b) = 1.0;
    e(h + b, b) = -1.0;
  }
  return EpsilonForm(e, EpsilonLayout::StandardSymplectic);
}

UnitaryEigen unitary_eigen(const Matrix& u) {
  Eigen::ComplexSchur<Matrix> schur(u);
  if (schur.info() != Eigen::Success) throw Error(ErrorKind::NumericalFailure, "complex Schur decomposition failed");
  return {schur.matrixU(), schur.matrixT().diagonal()};
}

double normalize_phase(double angle) {
  double a = std::fmod(angle, kTwoPi);
  if (a < 0) a += kTwoPi;
  if (a >= kTwoPi - 1e-8) a = 0.0;
  return a;
}

double unitarity_defect(const Matrix& u) {
  return (u.adjoint() * u - Matrix::Identity(u.cols(), u.cols())).norm();
}

double hermiticity_defect(const Matrix& a) { return (a - a.adjoint()).norm(); }

double skew_defect(const Matrix& a) { return (a + a.transpose()).norm(); }

double projector_defect(const Matrix& p) {
  return std::max((p * p - p).norm(), hermiticity_defect(p));
}

double operator_norm(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(a);
  return svd.singularValues()(0);
}

Matrix loewdin_unitarize(const Matrix& a, double tol_rank) {
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(s.size() - 1) <= tol_rank) {
    std::ostringstream os;
    os << "smallest singular value " << (s.size() ? s(s.size() - 1) : 0.0) << " <= " << tol_rank;
    throw Error(ErrorKind::RankDeficient, os.str());
  }
  return svd.matrixU() * svd.matrixV().adjoint();
}

cplx pfaffian(const Matrix& a_in, double tol_skew) {
  const Eigen::Index n = a_in.rows();
  if (a_in.cols() != n) throw Error(ErrorKind::InvalidArgument, "pfaffian of a non-square matrix");
  if (n % 2 != 0) throw Error(ErrorKind::OddDimension, "pfaffian of odd dimension " + std::to_string(n));
  const double sk = skew_defect(a_in);
  if (sk > tol_skew) {
    std::ostringstream os;
    os << "||A + A^T|| = " << sk << " > " << tol_skew;
    throw Error(ErrorKind::NotSkew, os.str());
  }
  if (n == 0) return 1.0;
  // Parlett-Reid: eliminate two columns at a time with a pivoted Gauss vector,
  // keeping the trailing block skew.
  Matrix a = 0.5 * (a_in - a_in.transpose());
  cplx pf = 1.0;
  for (Eigen::Index k = 0; k < n - 1; k += 2) {
    Eigen::Index kp = k + 1;
    double best = std::abs(a(k + 1, k));
    for (Eigen::Index i = k + 2; i < n; ++i) {
      if (std::abs(a(i, k)) > best) {
        best = std::abs(a(i, k));
        kp = i;
      }
    }
    if (kp != k + 1) {
      a.row(k + 1).swap(a.row(kp));
      a.col(k + 1).swap(a.col(kp));
      pf = -pf;
    }
    if (a(k + 1, k) == cplx(0.0)) return 0.0;
    pf *= a(k, k + 1);
    if (k + 2 < n) {
      const Eigen::Index r = n - k - 2;
      Vector tau = a.row(k).segment(k + 2, r).transpose() / a(k, k + 1);
      Vector col = a.col(k + 1).segment(k + 2, r);
      a.block(k + 2, k + 2, r, r) += tau * col.transpose() - col * tau.transpose();
    }
  }
  return pf;
}

int winding_number(const PhaseLoop& loop, double margin) {
  const auto& z = loop.samples;
  if (z.size() < 2) throw Error(ErrorKind::InvalidArgument, "winding number needs at least two samples");
  double total = 0.0;
  for (std::size_t j = 0; j + 1 < z.size(); ++j) {
    if (std::abs(z[j]) == 0.0 || std::abs(z[j + 1]) == 0.0)
      throw Error(ErrorKind::NumericalFailure, "zero sample in phase loop");
    const double inc = std::arg(z[j + 1] * std::conj(z[j]));
    if (std::abs(inc) >= kPi - margin) throw AliasingError(j, inc);
    total += inc;
  }
  const double w = total / kTwoPi;
  const double r = std::round(w);
  if (std::abs(w - r) > 1e-6) {
    std::ostringstream os;
    os << "winding sum " << w << " is not an integer";
    throw Error(ErrorKind::NonInteger, os.str());
  }
  return static_cast<int>(r);
}

RefinedWinding winding_number_refined(const std::function<cplx(double)>& f, int initial_samples,
                                      int cap, double margin) {
  int n = std::max(initial_samples, 2);
  for (;;) {
    PhaseLoop loop;
    loop.samples.reserve(n + 1);
    for (int j = 0; j <= n; ++j) loop.samples.push_back(f(static_cast<double>(j) / n));
    try {
      return {winding_number(loop, margin), n};
    } catch (const AliasingError&) {
      if (2 * n > cap) throw;
      n *= 2;
    }
  }
}

Matrix geodesic_unitary_path(const Matrix& u1, const Matrix& u2, double t) {
  if (t == 0.0) return u1;
  if (t == 1.0) return u2;
  const auto eig = unitary_eigen(u1.adjoint() * u2);
  Vector d(eig.values.size());
  for (Eigen::Index j = 0; j < d.size(); ++j) d(j) = std::exp(kI * (t * std::arg(eig.values(j))));
  return u1 * eig.vectors * d.asDiagonal() * eig.vectors.adjoint();
}

std::vector<double> normalized_eigenphases(const Matrix& v) {
  const auto eig = unitary_eigen(v);
  std::vector<double> ph(eig.values.size());
  for (std::size_t j = 0; j < ph.size(); ++j) ph[j] = normalize_phase(std::arg(eig.values(j)));
  std::sort(ph.begin(), ph.end());
  return ph;
}

Matrix symplectic_square_root(const Matrix& v, const EpsilonForm& eps, double tol_sym) {
  const Matrix& e = eps.matrix();
  const double compat = (v.transpose() * e - e * v).norm();
  if (compat > tol_sym) {
    std::ostringstream os;
    os << "||V^T eps - eps V|| = " << compat << " > " << tol_sym;
    throw Error(ErrorKind::CompatibilityViolated, os.str());
  }
  const auto eig = unitary_eigen(v);
  const Eigen::Index m = eig.values.size();
  std::vector<double> lambda(m);
  for (Eigen::Index j = 0; j < m; ++j) lambda[j] = normalize_phase(std::arg(eig.values(j)));
  std::vector<Eigen::Index> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return lambda[a] < lambda[b]; });
  Matrix w(m, m);
  Vector half(m);
  for (Eigen::Index j = 0; j < m; ++j) {
    w.col(j) = eig.vectors.col(order[j]);
    half(j) = std::exp(kI * (0.5 * lambda[order[j]]));
  }
  Matrix u = w * half.asDiagonal() * w.adjoint();
  const double resid = (u * eps.inverse() * u.transpose() * e - v).norm();
  if (resid > tol_sym) {
    std::ostringstream os;
    os << "square root residual " << resid << " > " << tol_sym;
    throw Error(ErrorKind::NumericalFailure, os.str());
  }
  return u;
}

Matrix kato_nagy_intertwiner(const Matrix& p0, const Matrix& p1, double tol_proj) {
  if (projector_defect(p0) > tol_proj || projector_defect(p1) > tol_proj)
    throw Error(ErrorKind::InvalidArgument, "Kato-Nagy inputs are not orthogonal projectors");
  const Eigen::Index n = p0.rows();
  const Matrix id = Matrix::Identity(n, n);
  const Matrix d = p0 - p1;
  Eigen::SelfAdjointEigenSolver<Matrix> dsolve(d);
  const double dist = dsolve.eigenvalues().cwiseAbs().maxCoeff();
  if (dist >= 1.0) {
    std::ostringstream os;
    os << "||P0 - P1|| = " << dist << " >= 1";
    throw Error(ErrorKind::TooFar, os.str());
  }
  // 1 - D^2 shares eigenvectors with D.
  const auto& ev = dsolve.eigenvalues();
  Eigen::VectorXd inv_sqrt(n);
  for (Eigen::Index j = 0; j < n; ++j) inv_sqrt(j) = 1.0 / std::sqrt(1.0 - ev(j) * ev(j));
  const Matrix& q = dsolve.eigenvectors();
  const Matrix s = q * inv_sqrt.cast<cplx>().asDiagonal() * q.adjoint();
  return s * (p1 * p0 + (id - p1) * (id - p0));
}

Matrix expi_hermitian(const Matrix& h) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (h + h.adjoint()));
  const auto& ev = es.eigenvalues();
  Vector d(ev.size());
  for (Eigen::Index j = 0; j < ev.size(); ++j) d(j) = std::exp(kI * ev(j));
  return es.eigenvectors() * d.asDiagonal() * es.eigenvectors().adjoint();
}

Matrix log_unitary(const Matrix& u, double margin) {
  const auto eig = unitary_eigen(u);
  Eigen::VectorXd ph(eig.values.size());
  for (Eigen::Index j = 0; j < ph.size(); ++j) {
    const cplx z = eig.values(j);
    if (std::abs(z + 1.0) < margin) {
      std::ostringstream os;
      os << "eigenvalue " << z << " within " << margin << " of -1";
      throw Error(ErrorKind::LogBranch, os.str());
    }
    ph(j) = std::arg(z);
  }
  return eig.vectors * ph.cast<cplx>().asDiagonal() * eig.vectors.adjoint();
}

Matrix random_complex(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Matrix a(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) {
      const double re = g(rng);
      const double im = g(rng);
      a(i, j) = cplx(re, im);
    }
  return a;
}

Matrix random_unitary(int n, std::mt19937_64& rng) {
  const Matrix g = random_complex(n, n, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j) {
    const cplx d = r(j, j);
    if (std::abs(d) > 0) q.col(j) *= d / std::abs(d);
  }
  return q;
}

Matrix random_hermitian(int n, std::mt19937_64& rng, double scale) {
  const Matrix g = random_complex(n, n, rng);
  return 0.5 * scale * (g + g.adjoint());
}

}  // namespace z2kit::linalg
