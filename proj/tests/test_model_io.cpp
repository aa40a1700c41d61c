#include "doctest.h"
#include "z2kit/error.hpp"
#include "z2kit/model_io.hpp"

#include <string>

using namespace z2kit;
using namespace z2kit::models;

namespace {

const std::string kData = Z2KIT_TEST_DATA;

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error raised");
  return ErrorKind::NumericalFailure;
}

}  // namespace

TEST_CASE("toml subset parser") {
  const Json j = parse_toml(R"(# comment
name = "x"   # trailing comment
n = 3
x = -1.5e-2
flag = true
arr = [1, 2,
       3]
nested = [[1.0, 0.0], [0.0, -1.0]]
inline = { a = 1, b = "two" }

[table]
key = 'literal'

[[items]]
v = 1

[[items]]
v = 2
)");
  CHECK(j.at("name") == "x");
  CHECK(j.at("n") == 3);
  CHECK(j.at("x").get<double>() == doctest::Approx(-0.015));
  CHECK(j.at("flag") == true);
  CHECK(j.at("arr").size() == 3);
  CHECK(j.at("nested")[1][1].get<double>() == -1.0);
  CHECK(j.at("inline").at("b") == "two");
  CHECK(j.at("table").at("key") == "literal");
  REQUIRE(j.at("items").size() == 2);
  CHECK(j.at("items")[1].at("v") == 2);

  try {
    parse_toml("a = 1\nb = [1, 2\nc = 3\n");
    FAIL("unterminated array accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidSpec);
  }
  CHECK(kind_of([] { parse_toml("a = 1\na = 2\n"); }) == ErrorKind::InvalidSpec);
  CHECK(kind_of([] { parse_toml("just words\n"); }) == ErrorKind::InvalidSpec);
}

TEST_CASE("model files load in both formats") {
  const ModelSource bhz = load_model_file(kData + "/bhz.toml");
  REQUIRE(bhz.spec.has_value());
  CHECK(bhz.spec->ambient_dim == 4);
  CHECK(bhz.spec->rank == 2);
  CHECK(bhz.spec->lattice.dimension == 2);
  const ProjectorFamily f = instantiate(bhz, 0);
  CHECK(verify_assumptions(f, random_k_points(2, 50, 3), 1e-9).all_pass());

  const ModelSource triv = load_model_file(kData + "/bhz_trivial.json");
  REQUIRE(triv.spec.has_value());
  CHECK(instantiate(triv, 2).dimension() == 2);

  const ModelSource km = load_model_file(kData + "/kane_mele_qsh.toml");
  CHECK(km.builtin == "kane_mele");
  CHECK(km.parameters.at("lambda_v") == doctest::Approx(0.1));
  const ProjectorFamily kmf = instantiate(km, 0, {{"lambda_v", 0.4}});
  const ProjectorFamily ref = builtin_family("kane_mele", {{"lambda_v", 0.4}}, 2);
  KVec k(2);
  k << 0.12, -0.31;
  CHECK((kmf.projector(k) - ref.projector(k)).norm() < 1e-14);
}

TEST_CASE("spec round trip through JSON") {
  const ModelSpec spec = kane_mele_spec(1.0, 0.06, 0.1, 0.05);
  const ModelSource back = parse_model_document(model_spec_to_json(spec));
  REQUIRE(back.spec.has_value());
  const ProjectorFamily a = build_model(spec), b = build_model(*back.spec);
  for (const KVec& k : random_k_points(2, 10, 12)) CHECK((a.hamiltonian(k) - b.hamiltonian(k)).norm() < 1e-12);
}

TEST_CASE("malformed model documents") {
  const Json good = model_spec_to_json(constant_spec(2));
  auto broken = [&](const std::function<void(Json&)>& edit) {
    Json j = good;
    edit(j);
    return kind_of([&] { instantiate(parse_model_document(j), 0); });
  };
  CHECK(broken([](Json& j) { j.erase("rank"); }) == ErrorKind::InvalidSpec);
  CHECK(broken([](Json& j) { j["dimension"] = 4; }) == ErrorKind::InvalidSpec);
  CHECK(broken([](Json& j) { j["dimension"] = "two"; }) == ErrorKind::InvalidSpec);
  CHECK(broken([](Json& j) { j["tau_convention"] = "sideways"; }) == ErrorKind::InvalidSpec);
  CHECK(broken([](Json& j) { j["tau_convention"] = 3; }) == ErrorKind::InvalidSpec);
  CHECK(broken([](Json& j) { j["theta"] = "identity"; }) == ErrorKind::InvalidSpec);
  CHECK(broken([](Json& j) { j["hoppings"] = Json::array({{{"displacement", 1}, {"i", 0}, {"j", 0}, {"amplitude", 1.0}}}); }) ==
        ErrorKind::InvalidSpec);
  CHECK(broken([](Json& j) { j["builtin"] = "nonexistent"; }) == ErrorKind::InvalidSpec);
  CHECK(kind_of([] { parse_model_document(Json::array()); }) == ErrorKind::InvalidSpec);

  CHECK(kind_of([] { load_model_file(kData + "/does_not_exist.toml"); }) == ErrorKind::InvalidSpec);
}
