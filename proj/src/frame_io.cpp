#include "z2kit/error.hpp"
#include "z2kit/report_json.hpp"

#include <fstream>

namespace z2kit::io {

Json frame_to_json(const frames::FrameField& field, const frames::FrameResiduals& residuals, const Tolerances& tol,
                   const std::string& model_name) {
  Json meta;
  meta["model"] = model_name;
  meta["dimension"] = field.dimension;
  meta["grid"] = {{"nx", field.nx}, {"ny", field.ny}, {"x0", field.x0}, {"y0", field.y0}, {"hx", field.hx}, {"hy", field.hy}};
  const Matrix& first = field.values.front();
  meta["ambient_dim"] = first.rows();
  meta["rank"] = first.cols();
  meta["tolerances"] = {{"unitary", tol.unitary}, {"sym", tol.sym}, {"skew", tol.skew}, {"log_margin", tol.log_margin}};
  meta["residuals"] = residuals_json(residuals);

  Json points = Json::array();
  for (int i = 0; i < field.nx; ++i) {
    for (int j = 0; j < field.ny; ++j) {
      const auto k = field.k(i, j);
      Json kj = Json::array();
      for (Eigen::Index c = 0; c < k.size(); ++c) kj.push_back(k(c));
      const Matrix& f = field.at(i, j);
      Json rows = Json::array();
      for (Eigen::Index r = 0; r < f.rows(); ++r) {
        Json row = Json::array();
        for (Eigen::Index c = 0; c < f.cols(); ++c) row.push_back(complex_pair(f(r, c)));
        rows.push_back(row);
      }
      points.push_back({{"index", Json::array({i, j})}, {"k", kj}, {"frame", rows}});
    }
  }
  return {{"metadata", meta}, {"points", points}};
}

frames::FrameField frame_from_json(const Json& doc) {
  try {
    const Json& meta = doc.at("metadata");
    const Json& g = meta.at("grid");
    frames::FrameField f;
    f.dimension = meta.at("dimension").get<int>();
    f.nx = g.at("nx").get<int>();
    f.ny = g.at("ny").get<int>();
    f.x0 = g.at("x0").get<double>();
    f.y0 = g.at("y0").get<double>();
    f.hx = g.at("hx").get<double>();
    f.hy = g.at("hy").get<double>();
    const int n = meta.at("ambient_dim").get<int>(), m = meta.at("rank").get<int>();
    f.values.assign(static_cast<std::size_t>(f.nx) * f.ny, Matrix::Zero(n, m));
    for (const Json& p : doc.at("points")) {
      const int i = p.at("index").at(0).get<int>(), j = p.at("index").at(1).get<int>();
      if (i < 0 || i >= f.nx || j < 0 || j >= f.ny) throw Error(ErrorKind::InvalidSpec, "frame point index out of range");
      const Json& rows = p.at("frame");
      Matrix& dst = f.at(i, j);
      for (int r = 0; r < n; ++r)
        for (int c = 0; c < m; ++c) dst(r, c) = cplx(rows.at(r).at(c).at(0).get<double>(), rows.at(r).at(c).at(1).get<double>());
    }
    return f;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::InvalidSpec, std::string("malformed frame file: ") + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::InvalidArgument, "cannot open " + path + " for writing");
  out << text;
  if (!out) throw Error(ErrorKind::InvalidArgument, "write to " + path + " failed");
}

}  // namespace z2kit::io
