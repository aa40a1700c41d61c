#include "z2kit/error.hpp"
#include "z2kit/frames.hpp"

#include <cmath>

namespace z2kit::frames {

Matrix midpoint_frame(const Matrix& phi, const Matrix& psi, double log_margin) {
  // phi^dagger psi is unitary when both frames span the same space; the polar
  // factor removes rounding before taking the logarithm.
  const Matrix rel = linalg::loewdin_unitarize(phi.adjoint() * psi, 1e-8);
  return phi * linalg::expi_hermitian(0.5 * linalg::log_unitary(rel, log_margin));
}

FrameField midpoint_symmetrize(const FrameField& field, const ProjectorFamily& family, const EpsilonForm& eps,
                               const Tolerances& tol) {
  auto symmetric = [](double origin, double step, int count) {
    return count <= 1 || std::abs(origin + (origin + (count - 1) * step)) < 1e-12;
  };
  if (!symmetric(field.x0, field.hx, field.nx) || (field.dimension > 1 && !symmetric(field.y0, field.hy, field.ny)))
    throw Error(ErrorKind::InvalidArgument, "midpoint symmetrization needs a grid symmetric under k -> -k");
  FrameField out = field;
  for (int i = 0; i < field.nx; ++i) {
    for (int j = 0; j < field.ny; ++j) {
      const Matrix partner = family.apply_theta(field.at(field.nx - 1 - i, field.ny - 1 - j)) * eps.matrix();
      out.at(i, j) = midpoint_frame(field.at(i, j), partner, tol.log_margin);
    }
  }
  return out;
}

}  // namespace z2kit::frames
