#pragma once

#include <ostream>

namespace z2kit::cli {

// Exit codes of the z2kit tool.
enum Exit : int {
  kOk = 0,
  kAxiomFailed = 1,
  kBadInput = 2,
  kRoutesDisagree = 3,
  kGapClosed = 4,
  kAliasing = 5,
  kObstructed = 6,
};

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace z2kit::cli
