#include "z2kit/error.hpp"

#include <sstream>

namespace z2kit {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::RankDeficient: return "RankDeficient";
    case ErrorKind::NotSkew: return "NotSkew";
    case ErrorKind::OddDimension: return "OddDimension";
    case ErrorKind::Aliasing: return "Aliasing";
    case ErrorKind::NonInteger: return "NonInteger";
    case ErrorKind::NumericalFailure: return "NumericalFailure";
    case ErrorKind::CompatibilityViolated: return "CompatibilityViolated";
    case ErrorKind::TooFar: return "TooFar";
    case ErrorKind::InvalidSpec: return "InvalidSpec";
    case ErrorKind::GapClosed: return "GapClosed";
    case ErrorKind::DegreeNonzero: return "DegreeNonzero";
    case ErrorKind::ContractionFailure: return "ContractionFailure";
    case ErrorKind::Obstructed: return "Obstructed";
    case ErrorKind::LogBranch: return "LogBranch";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

namespace {
std::string gap_message(const std::vector<double>& k, double gap, const std::string& context) {
  std::ostringstream os;
  os << "spectral gap " << gap << " at k = (";
  for (std::size_t i = 0; i < k.size(); ++i) os << (i ? ", " : "") << k[i];
  os << ")";
  if (!context.empty()) os << " [" << context << "]";
  return os.str();
}
}  // namespace

GapClosedError::GapClosedError(std::vector<double> k, double gap, const std::string& context)
    : Error(ErrorKind::GapClosed, gap_message(k, gap, context)), k_(std::move(k)), gap_(gap) {}

AliasingError::AliasingError(std::size_t index, double increment)
    : Error(ErrorKind::Aliasing, "phase increment " + std::to_string(increment) +
                                     " at sample " + std::to_string(index) +
                                     " too close to pi; refine the loop"),
      index_(index),
      increment_(increment) {}

ObstructedError::ObstructedError(std::vector<int> invariants, const std::string& what)
    : Error(ErrorKind::Obstructed, what), invariants_(std::move(invariants)) {}

}  // namespace z2kit
