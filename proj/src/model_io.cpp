#include "z2kit/model_io.hpp"

#include "z2kit/error.hpp"

#include <fstream>
#include <sstream>

namespace z2kit::models {

namespace {

[[noreturn]] void bad(const std::string& msg) { throw Error(ErrorKind::InvalidSpec, msg); }

int as_int(const Json& j, const std::string& what) {
  if (!j.is_number_integer()) bad("'" + what + "' must be an integer");
  return j.get<int>();
}

double as_double(const Json& j, const std::string& what) {
  if (!j.is_number()) bad("'" + what + "' must be a number");
  return j.get<double>();
}

cplx as_complex(const Json& j, const std::string& what) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2) bad("'" + what + "' must be [re, im]");
  return {as_double(j[0], what), as_double(j[1], what)};
}

const Json& field(const Json& doc, const char* key) {
  if (!doc.contains(key)) bad(std::string("missing key '") + key + "'");
  return doc.at(key);
}

}  // namespace

ModelSource parse_model_document(const Json& doc) {
  if (!doc.is_object()) bad("model document must be a table/object");
  ModelSource src;
  if (doc.contains("parameters")) {
    const Json& p = doc.at("parameters");
    if (!p.is_object()) bad("'parameters' must be a table");
    for (const auto& [k, v] : p.items()) src.parameters[k] = as_double(v, "parameters." + k);
  }
  if (doc.contains("builtin")) {
    if (!doc.at("builtin").is_string()) bad("'builtin' must be a string");
    src.builtin = doc.at("builtin").get<std::string>();
    return src;
  }

  ModelSpec spec;
  const int d = as_int(field(doc, "dimension"), "dimension");
  if (d < 1 || d > 3) bad("dimension must be 1, 2 or 3");
  spec.lattice = LatticeSpec::standard(d);
  if (doc.contains("basis")) {
    const Json& b = doc.at("basis");
    if (!b.is_array() || static_cast<int>(b.size()) != d) bad("'basis' must list `dimension` vectors");
    for (int c = 0; c < d; ++c) {
      if (!b[c].is_array() || static_cast<int>(b[c].size()) != d) bad("basis vector has wrong length");
      for (int r = 0; r < d; ++r) spec.lattice.basis[c](r) = as_double(b[c][r], "basis");
    }
  }
  spec.ambient_dim = as_int(field(doc, "ambient_dim"), "ambient_dim");
  spec.rank = as_int(field(doc, "rank"), "rank");
  const int n = spec.ambient_dim;
  if (n < 1) bad("ambient_dim must be positive");

  std::string conv = "periodic";
  if (doc.contains("tau_convention")) {
    if (!doc.at("tau_convention").is_string()) bad("'tau_convention' must be a string");
    conv = doc.at("tau_convention").get<std::string>();
  }
  if (conv == "periodic") {
    spec.tau_convention = TauConvention::Periodic;
  } else if (conv == "canonical") {
    spec.tau_convention = TauConvention::Canonical;
  } else {
    bad("tau_convention must be 'periodic' or 'canonical'");
  }
  if (doc.contains("positions")) {
    if (!doc.at("positions").is_array()) bad("'positions' must be a list of coordinate lists");
    for (const auto& r : doc.at("positions")) {
      std::vector<double> pos;
      for (const auto& x : r) pos.push_back(as_double(x, "positions"));
      spec.positions.push_back(pos);
    }
  }
  if (doc.contains("gap_threshold")) spec.gap_threshold = as_double(doc.at("gap_threshold"), "gap_threshold");

  const Json& theta = field(doc, "theta");
  if (!theta.is_array() || static_cast<int>(theta.size()) != n) bad("'theta' must have ambient_dim rows");
  spec.theta = Matrix::Zero(n, n);
  for (int r = 0; r < n; ++r) {
    if (!theta[r].is_array() || static_cast<int>(theta[r].size()) != n) bad("'theta' row has wrong length");
    for (int c = 0; c < n; ++c) spec.theta(r, c) = as_complex(theta[r][c], "theta");
  }

  const Json& hops = field(doc, "hoppings");
  if (!hops.is_array()) bad("'hoppings' must be a list");
  for (const auto& h : hops) {
    if (!h.is_object()) bad("hopping entries must be tables");
    Hopping hop;
    if (!field(h, "displacement").is_array()) bad("'displacement' must be a list of integers");
    for (const auto& x : field(h, "displacement")) hop.displacement.push_back(as_int(x, "displacement"));
    hop.i = as_int(field(h, "i"), "i");
    hop.j = as_int(field(h, "j"), "j");
    hop.amplitude = as_complex(field(h, "amplitude"), "amplitude");
    spec.hoppings.push_back(hop);
  }
  src.spec = spec;
  return src;
}

ModelSource load_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::InvalidSpec, "cannot open model file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  const bool toml = path.size() >= 5 && path.substr(path.size() - 5) == ".toml";
  if (toml) return parse_model_document(parse_toml(text));
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorKind::InvalidSpec, std::string("malformed JSON: ") + e.what());
  }
  return parse_model_document(doc);
}

ProjectorFamily instantiate(const ModelSource& source, int dimension_hint, const Parameters& overrides) {
  Parameters p = source.parameters;
  for (const auto& [k, v] : overrides) p[k] = v;
  if (!source.builtin.empty()) return builtin_family(source.builtin, p, dimension_hint);
  if (!source.spec) bad("model source has neither builtin nor spec");
  if (!p.empty()) bad("parameters only apply to builtin models");
  if (dimension_hint != 0 && dimension_hint != source.spec->lattice.dimension)
    bad("--dim disagrees with the model file dimension");
  return build_model(*source.spec).with_name("spec");
}

Json model_spec_to_json(const ModelSpec& spec) {
  Json doc = Json::object();
  doc["dimension"] = spec.lattice.dimension;
  doc["ambient_dim"] = spec.ambient_dim;
  doc["rank"] = spec.rank;
  doc["tau_convention"] = spec.tau_convention == TauConvention::Periodic ? "periodic" : "canonical";
  if (!spec.positions.empty()) doc["positions"] = spec.positions;
  Json theta = Json::array();
  for (Eigen::Index r = 0; r < spec.theta.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < spec.theta.cols(); ++c) row.push_back({spec.theta(r, c).real(), spec.theta(r, c).imag()});
    theta.push_back(row);
  }
  doc["theta"] = theta;
  Json hops = Json::array();
  for (const auto& h : spec.hoppings)
    hops.push_back({{"displacement", h.displacement}, {"i", h.i}, {"j", h.j},
                    {"amplitude", {h.amplitude.real(), h.amplitude.imag()}}});
  doc["hoppings"] = hops;
  return doc;
}

}  // namespace z2kit::models
