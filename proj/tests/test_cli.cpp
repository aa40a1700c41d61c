#include "doctest.h"
#include "z2kit/cli.hpp"
#include "z2kit/report_json.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

using namespace z2kit;

namespace {

const std::string kData = Z2KIT_TEST_DATA;

struct Result {
  int code = -1;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "z2kit");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Result r;
  r.code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

Json parse(const Result& r) { return Json::parse(r.out); }

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream is(text);
  std::string l;
  while (std::getline(is, l))
    if (!l.empty()) out.push_back(l);
  return out;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

std::string temp_path(const std::string& name) { return std::string(P_tmpdir) + "/z2kit_test_" + name; }

}  // namespace

TEST_CASE("orbit subcommand") {
  CHECK(parse(run({"orbit", "0", "0", "0", "0"})).at("orbit") == "O1");
  CHECK(parse(run({"orbit", "1", "1", "0", "0"})).at("orbit") == "O2");
  const Result o3 = run({"orbit", "1", "0", "1", "1"});
  CHECK(o3.code == cli::kOk);
  const Json j = parse(o3);
  CHECK(j.at("orbit") == "O3");
  CHECK(j.at("nu0") == 1);
  CHECK(j.contains("nu_tot"));
  CHECK(j.contains("omega_hat"));
  CHECK(j.at("images").at("t") == Json::array({0, 1, 1, 1}));
  CHECK(run({"orbit", "1", "0", "2", "1"}).code == cli::kBadInput);
  CHECK(run({"orbit", "1", "0", "1"}).code == cli::kBadInput);
}

TEST_CASE("verify subcommand") {
  const Result ok = run({"verify", "--builtin", "kane_mele"});
  CHECK(ok.code == cli::kOk);
  CHECK(parse(ok).at("report").at("pass") == true);

  const Result bad = run({"verify", "--spec", kData + "/corrupted_theta.toml"});
  CHECK(bad.code == cli::kAxiomFailed);
  CHECK(bad.err.find("P3") != std::string::npos);

  CHECK(run({"verify", "--spec", kData + "/does_not_exist.toml"}).code == cli::kBadInput);
  CHECK(run({"verify", "--builtin", "kane_mele", "--spec", kData + "/bhz.toml"}).code == cli::kBadInput);
  CHECK(run({"verify"}).code == cli::kBadInput);
  CHECK(run({"verify", "--builtin", "kane_mele", "--param", "lambda_v"}).code == cli::kBadInput);
  CHECK(run({"verify", "--builtin", "kane_mele", "--tol", "-1"}).code == cli::kBadInput);
  CHECK(run({"frobnicate"}).code == cli::kBadInput);
  CHECK(run({"verify", "--spec", kData + "/bhz.toml"}).code == cli::kOk);
}

TEST_CASE("z2 subcommand in 2d") {
  const Result km = run({"z2", "--builtin", "kane_mele", "--param", "lambda_v=0.1", "--param", "lambda_so=0.06",
                         "--param", "lambda_r=0.05", "--edge-samples", "64"});
  REQUIRE(km.code == cli::kOk);
  const Json j = parse(km);
  CHECK(j.at("value") == 1);
  CHECK(j.at("agree") == true);
  for (const char* route : {"degree", "trim", "fu_kane"}) {
    const Json& r = j.at("routes").at(route);
    CHECK(r.at("value") == 1);
    CHECK(r.at("route") == route);
    for (const char* key : {"winding", "residuals", "grid", "min_gap", "seconds"}) CHECK(r.contains(key));
    for (const char* key : {"unitary", "symmetry", "range"}) CHECK(r.at("residuals").contains(key));
  }
  CHECK(j.at("routes").at("trim").at("per_vertex").size() == 4);
  CHECK(j.at("routes").at("fu_kane").at("p_theta").size() == 2);
  CHECK(j.at("routes").at("degree").at("grid").at("n1") == 64);

  const Result c = run({"z2", "--builtin", "constant", "--edge-samples", "16"});
  CHECK(c.code == cli::kOk);
  CHECK(parse(c).at("value") == 0);

  const Result single = run({"z2", "--spec", kData + "/bhz.toml", "--route", "trim", "--edge-samples", "32"});
  CHECK(single.code == cli::kOk);
  CHECK(parse(single).at("route") == "trim");
  CHECK(parse(single).at("value") == 1);

  CHECK(run({"z2", "--builtin", "constant", "--edge-samples", "4"}).code == cli::kBadInput);
  CHECK(run({"z2", "--builtin", "constant", "--format", "csv"}).code == cli::kBadInput);
  CHECK(run({"z2", "--builtin", "constant", "--dim", "1"}).code == cli::kBadInput);
  CHECK(run({"z2", "--builtin", "constant", "--route", "wilson"}).code == cli::kBadInput);
}

TEST_CASE("z2 reports gap closing with its k-point") {
  char crit[64];
  std::snprintf(crit, sizeof crit, "lambda_v=%.17g", 3.0 * std::sqrt(3.0) * 0.06);
  // 24 samples put K = (1/3, -1/3) on the grid.
  const Result r = run({"z2", "--builtin", "kane_mele", "--param", crit, "--param", "lambda_r=0", "--edge-samples", "24"});
  CHECK(r.code == cli::kGapClosed);
  CHECK(r.err.find("GapClosed") != std::string::npos);
}

TEST_CASE("z2 subcommand in 3d") {
  const Result r = run({"z2", "--builtin", "stacked_kane_mele", "--edge-samples", "32"});
  REQUIRE(r.code == cli::kOk);
  const Json j = parse(r);
  CHECK(j.at("quadruple") == Json::array({0, 0, 0, 1}));
  CHECK(j.at("nu0") == 0);
  CHECK(j.at("orbit") == "O2");
  CHECK(j.at("faces").size() == 6);
  CHECK(j.at("minus_faces_consistent") == true);

  const Result c = run({"z2", "--builtin", "constant", "--dim", "3", "--edge-samples", "8"});
  CHECK(parse(c).at("quadruple") == Json::array({0, 0, 0, 0}));
  CHECK(parse(c).at("orbit") == "O1");
}

TEST_CASE("output is deterministic without timing") {
  const std::vector<std::string> args = {"z2", "--builtin", "twisted_kane_mele", "--param", "seed=3", "--edge-samples", "32",
                                         "--no-timing"};
  const Result a = run(args), b = run(args);
  CHECK(a.code == cli::kOk);
  CHECK(a.out == b.out);

  const std::vector<std::string> scan = {"scan", "--builtin", "kane_mele", "--range", "lambda_v=0:0.6:5", "--edge-samples",
                                         "16", "--no-timing", "--jobs", "3"};
  CHECK(run(scan).out == run(scan).out);
}

TEST_CASE("frame subcommand") {
  const Result c = run({"frame", "--builtin", "constant", "--edge-samples", "8"});
  REQUIRE(c.code == cli::kOk);
  const Json j = parse(c);
  const Json& res = j.at("metadata").at("residuals");
  for (const char* key : {"orthonormality", "range", "tau_equivariance", "time_reversal"}) CHECK(res.at(key).get<double>() <= 1e-10);
  CHECK(j.at("points").size() == 17u * 17u);
  const frames::FrameField back = io::frame_from_json(j);
  CHECK(back.nx == 17);
  CHECK(back.values.front().rows() == 4);

  const std::string path = temp_path("frame.json");
  const Result t = run({"frame", "--builtin", "kane_mele", "--param", "lambda_v=0.4", "--out", path});
  REQUIRE(t.code == cli::kOk);
  const Json summary = parse(t);
  for (const char* key : {"orthonormality", "range", "tau_equivariance", "time_reversal"})
    CHECK(summary.at("residuals").at(key).get<double>() <= 1e-6);
  std::ifstream in(path);
  REQUIRE(in.good());
  const Json file = Json::parse(in);
  CHECK(file.at("metadata").at("grid").at("nx") == 65);
  std::remove(path.c_str());

  const Result q = run({"frame", "--builtin", "kane_mele", "--param", "lambda_v=0.1"});
  CHECK(q.code == cli::kObstructed);
  CHECK(parse(q).at("invariants").at("delta") == 1);

  const Result line = run({"frame", "--builtin", "constant", "--dim", "1", "--edge-samples", "8"});
  CHECK(line.code == cli::kOk);
  CHECK(run({"frame", "--builtin", "constant", "--dim", "3"}).code == cli::kBadInput);
}

TEST_CASE("scan subcommand") {
  const Result r = run({"scan", "--builtin", "kane_mele", "--param", "lambda_so=0.06", "--range", "lambda_v=0:0.6:25",
                        "--edge-samples", "32"});
  REQUIRE(r.code == cli::kOk);
  const auto ls = lines(r.out);
  REQUIRE(ls.size() == 26);
  CHECK(ls[0] == "lambda_v,delta,gap,status,runtime");
  int transitions = 0;
  double last_one = -1, first_zero = -1;
  int prev = -1;
  for (std::size_t i = 1; i < ls.size(); ++i) {
    const auto cells = split(ls[i]);
    REQUIRE(cells.size() == 5);
    CHECK(cells[3] == "ok");
    const double lv = std::stod(cells[0]);
    const int delta = std::stoi(cells[1]);
    if (prev >= 0 && delta != prev) ++transitions;
    if (delta == 1) last_one = lv;
    if (delta == 0 && first_zero < 0) first_zero = lv;
    prev = delta;
  }
  CHECK(transitions == 1);
  CHECK(last_one >= 0.25);
  CHECK(first_zero <= 0.35);
  CHECK(last_one < first_zero);

  const Result one = run({"scan", "--builtin", "kane_mele", "--range", "lambda_v=0.1:0.1:1", "--edge-samples", "16"});
  CHECK(one.code == cli::kOk);
  CHECK(lines(one.out).size() == 2);

  // Zero Hamiltonian: every point is gapless, flagged but not fatal.
  const Result flat = run({"scan", "--builtin", "kane_mele", "--param", "lambda_so=0", "--param", "lambda_v=0", "--param",
                           "lambda_r=0", "--range", "t=0:0:3", "--edge-samples", "8"});
  CHECK(flat.code == cli::kOk);
  const auto fl = lines(flat.out);
  REQUIRE(fl.size() == 4);
  for (std::size_t i = 1; i < fl.size(); ++i) CHECK(split(fl[i])[3] == "gap_closed");

  const Result js = run({"scan", "--builtin", "kane_mele", "--range", "lambda_v=0.1:0.4:2", "--edge-samples", "16", "--format",
                         "json"});
  CHECK(js.code == cli::kOk);
  CHECK(parse(js).at("rows").size() == 2);

  const Result three = run({"scan", "--builtin", "stacked_kane_mele", "--range", "lambda_v=0.1:0.1:1", "--edge-samples", "16"});
  CHECK(three.code == cli::kOk);
  CHECK(lines(three.out)[0] == "lambda_v,d10,d1p,d2p,d3p,nu0,gap,status,runtime");

  CHECK(run({"scan", "--builtin", "kane_mele", "--range", "lambda_v=0:1"}).code == cli::kBadInput);
  CHECK(run({"scan", "--builtin", "kane_mele"}).code == cli::kBadInput);
}
