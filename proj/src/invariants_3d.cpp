#include "z2kit/error.hpp"
#include "z2kit/invariants.hpp"

namespace z2kit::invariants {

namespace {

struct FaceSpec {
  const char* name;
  double origin[3];
  int dir_a;
  int dir_b;
};

// Faces F1,0 F1,+ F2,+ F3,+ and the diagnostics F2,- F3,-.
constexpr FaceSpec kFaces[] = {
    {"F1,0", {0.0, 0.0, 0.0}, 1, 2},  {"F1,+", {0.5, 0.0, 0.0}, 1, 2}, {"F2,+", {0.0, 0.5, 0.0}, 0, 2},
    {"F3,+", {0.0, 0.0, 0.5}, 0, 1},  {"F2,-", {0.0, -0.5, 0.0}, 0, 2}, {"F3,-", {0.0, 0.0, -0.5}, 0, 1},
};

LVec unit(int j) {
  LVec e = LVec::Zero(3);
  e(j) = 1;
  return e;
}

}  // namespace

bool Z2Quadruple::minus_faces_consistent() const {
  return delta2_minus == values[2] && delta3_minus == values[3];
}

Z2Quadruple z2_quadruple_3d(const ProjectorFamily& family, const ComputeOptions& opts) {
  if (family.dimension() != 3) throw Error(ErrorKind::InvalidArgument, "z2_quadruple_3d needs a 3d family");
  Z2Quadruple out;
  for (const FaceSpec& spec : kFaces) {
    FaceReport face;
    face.name = spec.name;
    face.origin = KVec(3);
    face.origin << spec.origin[0], spec.origin[1], spec.origin[2];
    face.directions = {unit(spec.dir_a), unit(spec.dir_b)};
    const ProjectorFamily restricted =
        family.restrict(face.origin, face.directions).with_name(family.name() + " face " + spec.name);
    try {
      face.routes = z2_all_routes(restricted, opts);
    } catch (const GapClosedError& e) {
      std::vector<double> k(3);
      for (int c = 0; c < 3; ++c) k[c] = face.origin(c);
      k[spec.dir_a] += e.k().at(0);
      k[spec.dir_b] += e.k().at(1);
      throw GapClosedError(k, e.gap(), family.name() + " face " + spec.name);
    } catch (const Error& e) {
      throw Error(e.kind(), std::string("face ") + spec.name + ": " + e.what());
    }
    out.faces.push_back(std::move(face));
  }
  for (int f = 0; f < 4; ++f) out.values[f] = out.faces[f].routes.degree.value;
  out.delta2_minus = out.faces[4].routes.degree.value;
  out.delta3_minus = out.faces[5].routes.degree.value;
  return out;
}

}  // namespace z2kit::invariants
