#ifndef PRESYM_TESTS_FIXTURES_HPP
#define PRESYM_TESTS_FIXTURES_HPP

#include "presym/geometry3d.hpp"

namespace fixtures {

using namespace presym;

inline MongePatch a3_patch() {
  MongePatch p;
  p.k1 = 1.0;
  p.k2 = 2.0;
  p.b = {0.0, 1.0, 1.0, 0.0};
  p.c = {0.0, 1.0, 0.0, 0.0, 0.0};
  p.d = {1.0, 0.0, 0.0, 0.0, 0.0, 0.0};
  return p;
}

inline PatchSpec generic_n() {
  PatchSpec n;
  n.patch.k1 = -0.5;
  n.patch.k2 = 0.3;
  n.patch.b = {0.2, -0.1, 0.3, 0.1};
  n.patch.c = {0.1, 0.0, -0.2, 0.0, 0.05};
  return n;
}

inline SceneSpec two_patch(Contact cm) {
  SceneSpec spec;
  spec.radius = 1.0;
  spec.m.patch = a3_patch();
  spec.m.contact = cm;
  if (cm == Contact::A1) spec.m.patch.k1 = 0.4;
  if (cm == Contact::A2) spec.m.patch.b[0] = 0.5;
  spec.n = generic_n();
  spec.chord_angle = 2.0;
  spec.azimuth = 0.5;
  spec.twist = 0.3;
  return spec;
}

inline BitangentScene scene(Contact cm) { return construct_scene(two_patch(cm)); }

inline SceneSpec transitional_spec(double c2 = 0.0) {
  SceneSpec spec = two_patch(Contact::A3);
  spec.m.patch.c[2] = c2;
  spec.transitional = true;
  spec.chord_angle = 2.5;
  return spec;
}

inline SceneSpec ondiag_spec(Contact cm) {
  SceneSpec spec;
  spec.radius = 1.0;
  spec.m.patch = a3_patch();
  spec.m.contact = cm;
  return spec;
}

}  // namespace fixtures

#endif  // PRESYM_TESTS_FIXTURES_HPP
