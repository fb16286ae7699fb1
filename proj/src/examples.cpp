#include "doa/examples.h"

namespace doa {

namespace {

struct RawSpec {
  const char* name;
  const char* text;
};

const RawSpec kRaw[] = {
#include "examples_gen.inc"
};

}  // namespace

const std::vector<ExampleInfo>& bundled_examples() {
  static const std::vector<ExampleInfo> list = [] {
    std::vector<ExampleInfo> v;
    for (const auto& r : kRaw) v.push_back({r.name, r.text});
    return v;
  }();
  return list;
}

std::optional<std::string> find_example(const std::string& name) {
  std::string key = name;
  if (name == "newton_rigid") key = "newton_rigid_gravity_fixed";
  if (name == "rel_rigid_flow") key = "rel_rigid_flow_free";
  for (const auto& e : bundled_examples()) {
    if (e.name == key) return std::string(e.text);
  }
  return std::nullopt;
}

std::vector<std::string> example_listing() {
  return {
      "riemann: Riemannian geometry at generic dimension n",
      "riemann_torsion: Riemannian geometry with independent torsion",
      "einstein: vacuum Einstein spaces, Ricci-flat constraint",
      "gauge: abelian gauge field kinematics on a Riemannian background",
      "yang_mills_einstein: Yang-Mills field with equations of motion on an "
      "Einstein background",
      "scalar_kg: scalar Klein-Gordon field on a specified background",
      "newton_rigid: Newtonian rigid motion (variants: "
      "newton_rigid_gravity_fixed, newton_rigid_gravity_free, "
      "newton_rigid_poisson)",
      "rel_rigid_flow: relativistic rigid flow (variants: rel_rigid_flow_free, "
      "rel_rigid_flow_specified, rel_rigid_flow_minkowski)",
  };
}

}  // namespace doa
