#include "z2kit/cli.hpp"

#include "CLI11.hpp"
#include "z2kit/error.hpp"
#include "z2kit/invariants.hpp"
#include "z2kit/model_io.hpp"
#include "z2kit/report_json.hpp"

#include <chrono>
#include <cstdlib>
#include <iomanip>
#include <sstream>

namespace z2kit::cli {

namespace {

using invariants::Z2Report;
using models::Parameters;
using models::ProjectorFamily;

struct Config {
  std::string builtin;
  std::string spec_file;
  std::vector<std::string> params;
  int dim = 0;
  int edge_samples = 256;
  double tol = 0.0;  // 0 keeps the library defaults
  std::string route = "all";
  std::string out_path;
  std::string format = "json";
  int jobs = 1;
  std::uint64_t seed = 1;
  bool no_timing = false;
  int samples = 64;
  std::vector<std::string> ranges;
  std::vector<std::string> bits;
};

int exit_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidSpec:
    case ErrorKind::InvalidArgument: return kBadInput;
    case ErrorKind::GapClosed: return kGapClosed;
    case ErrorKind::Aliasing: return kAliasing;
    case ErrorKind::Obstructed: return kObstructed;
    default: return kRoutesDisagree;
  }
}

double parse_double(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) throw Error(ErrorKind::InvalidArgument, "cannot parse " + what + " '" + text + "'");
  return v;
}

Parameters parse_params(const std::vector<std::string>& items) {
  Parameters p;
  for (const auto& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) throw Error(ErrorKind::InvalidArgument, "--param expects key=value, got '" + item + "'");
    p[item.substr(0, eq)] = parse_double(item.substr(eq + 1), "parameter value");
  }
  return p;
}

models::ModelSource model_source(const Config& c) {
  if (c.builtin.empty() == c.spec_file.empty())
    throw Error(ErrorKind::InvalidArgument, "give exactly one of --builtin NAME or --spec FILE");
  if (!c.builtin.empty()) return {c.builtin, {}, std::nullopt};
  return models::load_model_file(c.spec_file);
}

ProjectorFamily load_family(const Config& c, const Parameters& extra = {}) {
  Parameters p = parse_params(c.params);
  for (const auto& [k, v] : extra) p[k] = v;
  return models::instantiate(model_source(c), c.dim, p);
}

int worker_cap(int jobs) {
  int cap = std::max(1, jobs);
  if (const char* env = std::getenv("Z2KIT_THREADS")) {
    const int limit = std::atoi(env);
    if (limit > 0) cap = std::min(cap, limit);
  }
  return cap;
}

frames::ComputeOptions compute_options(const Config& c, int samples) {
  frames::ComputeOptions o;
  o.n1 = samples;
  o.n2 = samples;
  o.jobs = worker_cap(c.jobs);
  if (c.tol > 0) {
    o.tol.sym = c.tol;
    o.tol.skew = c.tol;
  }
  return o;
}

void emit(const Config& c, std::ostream& out, const std::string& text) {
  if (c.out_path.empty()) {
    out << text;
  } else {
    io::write_text_file(c.out_path, text);
  }
}

Json model_header(const ProjectorFamily& f) {
  return {{"model", f.name()}, {"dimension", f.dimension()}, {"ambient_dim", f.ambient_dim()}, {"rank", f.rank()}};
}

void require_json(const Config& c) {
  if (c.format != "json") throw Error(ErrorKind::InvalidArgument, "csv output is only available for scan");
}

int cmd_verify(const Config& c, std::ostream& out, std::ostream& err) {
  require_json(c);
  const ProjectorFamily fam = load_family(c);
  const double tol = c.tol > 0 ? c.tol : 1e-8;
  const auto pts = models::random_k_points(fam.dimension(), c.samples, c.seed);
  const auto rep = models::verify_assumptions(fam, pts, tol);
  Json j = model_header(fam);
  j["tolerance"] = tol;
  j["seed"] = c.seed;
  j["report"] = io::to_json(rep);
  emit(c, out, io::dump(j));
  if (rep.all_pass()) return kOk;
  for (const auto& a : rep.axioms)
    if (!a.pass) err << "axiom " << a.axiom << " failed: max residual " << a.max_residual << "\n";
  return kAxiomFailed;
}

int cmd_z2(const Config& c, std::ostream& out, std::ostream& err) {
  require_json(c);
  const ProjectorFamily fam = load_family(c);
  const auto opts = compute_options(c, c.edge_samples);
  const bool timing = !c.no_timing;
  Json j = model_header(fam);
  bool ok = true;
  if (fam.dimension() == 2) {
    if (c.route == "all") {
      const auto b = invariants::z2_all_routes(fam, opts);
      j.update(io::to_json(b, timing));
      ok = b.agree();
    } else {
      const auto route = invariants::parse_route(c.route);
      if (!route) throw Error(ErrorKind::InvalidArgument, "unknown route '" + c.route + "'");
      Z2Report r;
      switch (*route) {
        case invariants::Route::Degree: r = invariants::delta_2d(fam, opts); break;
        case invariants::Route::Trim: r = invariants::delta_trim(fam, opts); break;
        case invariants::Route::FuKane: r = invariants::fu_kane_delta(fam, opts); break;
      }
      j.update(io::to_json(r, timing));
    }
  } else if (fam.dimension() == 3) {
    const auto q = invariants::z2_quadruple_3d(fam, opts);
    j.update(io::to_json(q, timing));
    for (const auto& f : q.faces) ok = ok && f.routes.agree();
    ok = ok && q.minus_faces_consistent();
  } else {
    throw Error(ErrorKind::InvalidArgument, "z2 invariants are defined for d = 2 and d = 3");
  }
  emit(c, out, io::dump(j));
  if (!ok) {
    err << "routes disagree; inspect the per-route reports\n";
    return kRoutesDisagree;
  }
  return kOk;
}

int cmd_frame(const Config& c, int samples, std::ostream& out, std::ostream& err) {
  require_json(c);
  const ProjectorFamily fam = load_family(c);
  const auto opts = compute_options(c, samples);
  frames::FrameField field;
  frames::FrameResiduals res;
  if (fam.dimension() == 2) {
    try {
      const auto f = frames::symmetric_frame_2d(fam, opts);
      field = f.full;
      res = f.residuals;
    } catch (const ObstructedError& e) {
      Json j = model_header(fam);
      j["obstructed"] = true;
      j["invariants"] = {{"delta", e.invariants().at(0)}};
      out << io::dump(j);
      err << e.what() << "\n";
      return kObstructed;
    }
  } else if (fam.dimension() == 1) {
    const auto f = frames::symmetric_frame_1d(fam, samples, opts.tol);
    field = f.full;
    res = f.residuals;
  } else {
    throw Error(ErrorKind::InvalidArgument, "frame export supports d = 1 and d = 2");
  }
  const std::string text = io::dump(io::frame_to_json(field, res, opts.tol, fam.name()));
  if (c.out_path.empty()) {
    out << text;
  } else {
    io::write_text_file(c.out_path, text);
    Json j = model_header(fam);
    j["file"] = c.out_path;
    j["grid"] = {{"nx", field.nx}, {"ny", field.ny}};
    j["residuals"] = io::residuals_json(res);
    out << io::dump(j);
  }
  return kOk;
}

struct Range {
  std::string name;
  std::vector<double> values;
};

Range parse_range(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0) throw Error(ErrorKind::InvalidArgument, "--range expects NAME=a:b:n, got '" + text + "'");
  Range r;
  r.name = text.substr(0, eq);
  std::vector<std::string> parts;
  std::stringstream ss(text.substr(eq + 1));
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  if (parts.size() != 3) throw Error(ErrorKind::InvalidArgument, "--range expects NAME=a:b:n, got '" + text + "'");
  const double a = parse_double(parts[0], "range start"), b = parse_double(parts[1], "range end");
  const double nd = parse_double(parts[2], "range count");
  const int n = static_cast<int>(nd);
  if (n < 1 || n != nd) throw Error(ErrorKind::InvalidArgument, "range count must be a positive integer");
  for (int i = 0; i < n; ++i) r.values.push_back(n == 1 ? a : a + (b - a) * i / (n - 1));
  return r;
}

std::string fmt(double x) {
  std::ostringstream os;
  os << std::setprecision(12) << x;
  return os.str();
}

struct ScanRow {
  Parameters point;
  std::string status = "ok";
  std::vector<int> values;
  std::optional<int> winding;
  double gap = 0.0;
  double seconds = 0.0;
  std::string message;
};

int cmd_scan(const Config& c, std::ostream& out, std::ostream& /*err*/) {
  if (c.format != "json" && c.format != "csv") throw Error(ErrorKind::InvalidArgument, "format must be json or csv");
  if (c.ranges.empty()) throw Error(ErrorKind::InvalidArgument, "scan needs at least one --range NAME=a:b:n");
  std::vector<Range> ranges;
  for (const auto& r : c.ranges) ranges.push_back(parse_range(r));

  // Cartesian product, first range varying slowest.
  std::vector<Parameters> points(1);
  for (const auto& r : ranges) {
    std::vector<Parameters> next;
    for (const auto& p : points)
      for (double v : r.values) {
        Parameters q = p;
        q[r.name] = v;
        next.push_back(q);
      }
    points = std::move(next);
  }
  std::vector<ProjectorFamily> families;
  for (const auto& p : points) families.push_back(load_family(c, p));
  const int d = families.front().dimension();
  if (d != 2 && d != 3) throw Error(ErrorKind::InvalidArgument, "scan supports d = 2 and d = 3");

  auto opts = compute_options(c, c.edge_samples);
  const int workers = opts.jobs;
  opts.jobs = 1;
  std::vector<ScanRow> rows(points.size());
  frames::run_parallel(static_cast<int>(points.size()), workers, [&](int idx) {
    ScanRow& row = rows[idx];
    row.point = points[idx];
    const auto t0 = std::chrono::steady_clock::now();
    try {
      if (d == 2) {
        const Z2Report r = invariants::delta_2d(families[idx], opts);
        row.values = {r.value};
        row.winding = r.winding;
        row.gap = r.min_gap;
      } else {
        const auto q = invariants::z2_quadruple_3d(families[idx], opts);
        const auto o = invariants::classify_orbit(q.values);
        row.values = {q.values[0], q.values[1], q.values[2], q.values[3], o.nu0};
        row.gap = q.faces.front().routes.degree.min_gap;
        for (const auto& f : q.faces) row.gap = std::min(row.gap, f.routes.degree.min_gap);
      }
    } catch (const GapClosedError& e) {
      row.status = "gap_closed";
      row.gap = e.gap();
      row.message = e.what();
    } catch (const Error& e) {
      row.status = e.kind() == ErrorKind::Aliasing ? "aliasing" : "error";
      row.message = e.what();
    }
    row.seconds = c.no_timing ? 0.0 : std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  });

  const std::vector<std::string> value_names =
      d == 2 ? std::vector<std::string>{"delta"} : std::vector<std::string>{"d10", "d1p", "d2p", "d3p", "nu0"};
  std::ostringstream os;
  if (c.format == "csv") {
    for (const auto& r : ranges) os << r.name << ",";
    for (const auto& v : value_names) os << v << ",";
    os << "gap,status,runtime\n";
    for (const auto& row : rows) {
      for (const auto& r : ranges) os << fmt(row.point.at(r.name)) << ",";
      for (std::size_t v = 0; v < value_names.size(); ++v) {
        if (row.status == "ok") os << row.values[v];
        os << ",";
      }
      os << fmt(row.gap) << "," << row.status << "," << fmt(row.seconds) << "\n";
    }
  } else {
    Json arr = Json::array();
    for (const auto& row : rows) {
      Json j;
      for (const auto& r : ranges) j[r.name] = row.point.at(r.name);
      for (std::size_t v = 0; v < value_names.size(); ++v) j[value_names[v]] = row.status == "ok" ? Json(row.values[v]) : Json(nullptr);
      if (d == 2) j["winding"] = row.winding ? Json(*row.winding) : Json(nullptr);
      j["gap"] = io::number(row.gap);
      j["status"] = row.status;
      if (!row.message.empty()) j["message"] = row.message;
      j["runtime"] = row.seconds;
      arr.push_back(j);
    }
    os << io::dump(Json{{"model", families.front().name()}, {"rows", arr}});
  }
  emit(c, out, os.str());
  return kOk;
}

int cmd_orbit(const Config& c, std::ostream& out) {
  require_json(c);
  if (c.bits.size() != 4) throw Error(ErrorKind::InvalidArgument, "orbit expects four bits");
  invariants::Quadruple q{};
  for (int i = 0; i < 4; ++i) {
    if (c.bits[i] != "0" && c.bits[i] != "1") throw Error(ErrorKind::InvalidArgument, "orbit entries must be 0 or 1, got '" + c.bits[i] + "'");
    q[i] = c.bits[i] == "1";
  }
  emit(c, out, io::dump(io::orbit_json(q)));
  return kOk;
}

void add_model_options(CLI::App* sub, Config& c) {
  auto* b = sub->add_option("--builtin", c.builtin, "built-in model name");
  auto* s = sub->add_option("--spec", c.spec_file, "model file (.toml or .json)");
  b->excludes(s);
  sub->add_option("--param", c.params, "model parameter key=value (repeatable)");
  sub->add_option("--dim", c.dim, "dimension")->check(CLI::Range(1, 3));
}

void add_output_options(CLI::App* sub, Config& c) {
  sub->add_option("--out", c.out_path, "output file (default stdout)");
  sub->add_option("--format", c.format, "output format")->check(CLI::IsMember({"json", "csv"}));
  sub->add_option("--tol", c.tol, "residual tolerance")->check(CLI::PositiveNumber);
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"z2kit: Z2 invariants and symmetric Bloch frames of time-reversal symmetric projector families"};
  app.require_subcommand(1);
  Config c;

  auto* verify = app.add_subcommand("verify", "check the model axioms on random k-points");
  add_model_options(verify, c);
  add_output_options(verify, c);
  verify->add_option("--seed", c.seed, "sample seed");
  verify->add_option("--samples", c.samples, "number of k-points")->check(CLI::Range(1, 1 << 20));

  auto* z2 = app.add_subcommand("z2", "compute the Z2 invariant(s)");
  add_model_options(z2, c);
  add_output_options(z2, c);
  z2->add_option("--edge-samples", c.edge_samples, "samples per half edge")->check(CLI::Range(8, 1 << 14));
  z2->add_option("--route", c.route, "route")->check(CLI::IsMember({"all", "degree", "trim", "fukane"}));
  z2->add_option("--jobs", c.jobs, "worker threads")->check(CLI::Range(1, 1024));
  z2->add_flag("--no-timing", c.no_timing, "write 0 for runtimes");

  auto* frame = app.add_subcommand("frame", "construct and export a symmetric Bloch frame");
  add_model_options(frame, c);
  add_output_options(frame, c);
  auto* frame_samples =
      frame->add_option("--edge-samples", c.edge_samples, "samples per half edge (default 32)")->check(CLI::Range(8, 1 << 14));
  frame->add_option("--jobs", c.jobs, "worker threads")->check(CLI::Range(1, 1024));

  auto* scan = app.add_subcommand("scan", "invariants over a parameter grid");
  add_model_options(scan, c);
  add_output_options(scan, c);
  scan->add_option("--range", c.ranges, "NAME=a:b:n (repeatable)")->required();
  scan->add_option("--edge-samples", c.edge_samples, "samples per half edge")->check(CLI::Range(8, 1 << 14));
  scan->add_option("--jobs", c.jobs, "worker threads")->check(CLI::Range(1, 1024));
  scan->add_flag("--no-timing", c.no_timing, "write 0 for runtimes");

  auto* orbit = app.add_subcommand("orbit", "GL(3,Z) orbit of a quadruple (d10 d1+ d2+ d3+)");
  orbit->add_option("bits", c.bits, "four entries, each 0 or 1")->expected(4);
  orbit->add_option("--out", c.out_path, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return kBadInput;
  }

  try {
    if (verify->parsed()) return cmd_verify(c, out, err);
    if (z2->parsed()) return cmd_z2(c, out, err);
    if (frame->parsed()) return cmd_frame(c, frame_samples->count() > 0 ? c.edge_samples : 32, out, err);
    if (scan->parsed()) {
      if (c.format == "json" && scan->get_option("--format")->count() == 0) c.format = "csv";
      return cmd_scan(c, out, err);
    }
    if (orbit->parsed()) return cmd_orbit(c, out);
  } catch (const Error& e) {
    err << e.what() << "\n";
    return exit_for(e.kind());
  } catch (const std::exception& e) {
    err << "NumericalFailure: " << e.what() << "\n";
    return kRoutesDisagree;
  }
  return kBadInput;
}

}  // namespace z2kit::cli
