#pragma once

#include "z2kit/frames.hpp"
#include "z2kit/invariants.hpp"
#include "z2kit/models.hpp"
#include "z2kit/toml_lite.hpp"

#include <string>

namespace z2kit::io {

// Non-finite values become null.
Json number(double x);
Json complex_pair(cplx z);

// `timing` false writes 0 for every runtime field, so repeated runs give
// byte-identical output.
Json to_json(const invariants::Z2Report& r, bool timing = true);
Json to_json(const invariants::Z2Bundle& b, bool timing = true);
Json to_json(const invariants::Z2Quadruple& q, bool timing = true);
Json to_json(const invariants::HomotopyReport& h);
Json to_json(const models::AssumptionReport& a);
Json orbit_json(const invariants::Quadruple& q);
Json residuals_json(const frames::FrameResiduals& r);

// Frame export: one entry per grid point with k and the N x m frame as rows
// of [re, im] pairs, plus a metadata block.
Json frame_to_json(const frames::FrameField& field, const frames::FrameResiduals& residuals, const Tolerances& tol,
                   const std::string& model_name);
frames::FrameField frame_from_json(const Json& doc);

std::string dump(const Json& j);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace z2kit::io
