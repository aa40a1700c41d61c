#pragma once

#include "z2kit/models.hpp"
#include "z2kit/toml_lite.hpp"

#include <optional>
#include <string>

namespace z2kit::models {

// A model file either names a builtin (plus parameters) or spells out a full
// tight-binding spec.
struct ModelSource {
  std::string builtin;
  Parameters parameters;
  std::optional<ModelSpec> spec;
};

ModelSource parse_model_document(const Json& doc);
// Format is chosen by extension: .toml, otherwise JSON.
ModelSource load_model_file(const std::string& path);

// Parameters in `overrides` replace those of the source.
ProjectorFamily instantiate(const ModelSource& source, int dimension_hint, const Parameters& overrides = {});

Json model_spec_to_json(const ModelSpec& spec);

}  // namespace z2kit::models
