#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace z2kit {

enum class ErrorKind {
  RankDeficient,
  NotSkew,
  OddDimension,
  Aliasing,
  NonInteger,
  NumericalFailure,
  CompatibilityViolated,
  TooFar,
  InvalidSpec,
  GapClosed,
  DegreeNonzero,
  ContractionFailure,
  Obstructed,
  LogBranch,
  InvalidArgument,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class GapClosedError : public Error {
 public:
  GapClosedError(std::vector<double> k, double gap, const std::string& context = {});
  const std::vector<double>& k() const noexcept { return k_; }
  double gap() const noexcept { return gap_; }

 private:
  std::vector<double> k_;
  double gap_;
};

// Carries the index of the first increment that was too large, so callers can
// tell which part of a concatenated loop needs more samples.
class AliasingError : public Error {
 public:
  AliasingError(std::size_t index, double increment);
  std::size_t index() const noexcept { return index_; }
  double increment() const noexcept { return increment_; }

 private:
  std::size_t index_;
  double increment_;
};

class ObstructedError : public Error {
 public:
  ObstructedError(std::vector<int> invariants, const std::string& what);
  const std::vector<int>& invariants() const noexcept { return invariants_; }

 private:
  std::vector<int> invariants_;
};

}  // namespace z2kit
