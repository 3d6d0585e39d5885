#include <filesystem>
#include <sstream>

#include "doctest.h"
#include "presym/errors.hpp"
#include "presym/scene_io.hpp"

using namespace presym;

namespace {

std::string diagnostic(const std::string& text) {
  std::istringstream in(text);
  try {
    parse_scene(in, "t.scene");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ParseError);
    return e.what();
  }
  FAIL("expected a parse error");
  return "";
}

const char* kRidge = R"(presym-scene 1
[scene]
kind = ondiag
radius = 1   # trailing comment
expect = Fold

[patchM]
contact = A4
k1 = 1
k2 = 2
b = 0 1 1 0
c = 0 1 0 0 0
d = 1 0 0 0 0 0
)";

}  // namespace

TEST_CASE("every bundled scene parses except the malformed one") {
  int count = 0;
  for (const auto& e : std::filesystem::directory_iterator(PRESYM_SCENES)) {
    if (e.path().extension() != ".scene") continue;
    ++count;
    const std::string path = e.path().string();
    if (e.path().stem() == "malformed") {
      CHECK_THROWS_AS(load_scene(path), Error);
    } else {
      CHECK_NOTHROW(load_scene(path));
    }
  }
  CHECK(count >= 14);
}

TEST_CASE("fields land in the scene spec") {
  std::istringstream in(kRidge);
  const SceneFile f = parse_scene(in, "ridge");
  CHECK(f.kind == SceneKind::OnDiagonal);
  CHECK(f.expect == "Fold");
  CHECK(f.spec.m.contact == Contact::A4);
  CHECK(f.spec.m.patch.b[2] == 1.0);
  CHECK(f.spec.m.patch.d[0] == 1.0);
  CHECK_FALSE(f.spec.n.has_value());
  CHECK(f.run.stencil == 0.02);
  CHECK(f.digest.size() == 16);

  const SceneFile g = with_value(f, "patchM.b[2]", 0.5);
  CHECK(g.spec.m.patch.b[2] == 0.5);
  CHECK(g.digest == f.digest);
  const SceneFile h = with_value(f, "scene.twist", 0.1);
  CHECK(h.spec.twist == 0.1);
}

TEST_CASE("diagnostics name the line and the field") {
  CHECK(diagnostic("presym-scene 2\n").find("t.scene:1: header") != std::string::npos);
  CHECK(diagnostic("").find("header") != std::string::npos);
  std::string bad = kRidge;
  bad.replace(bad.find("k2 = 2"), 6, "k2 = x");
  CHECK(diagnostic(bad).find("t.scene:10: patchM.k2:") != std::string::npos);
  bad = kRidge;
  bad.replace(bad.find("b = 0 1 1 0"), 11, "b = 0 1 1");
  CHECK(diagnostic(bad).find("t.scene:11: patchM.b: expected 4 numbers") != std::string::npos);
  bad = kRidge;
  bad += "colour = red\n";
  CHECK(diagnostic(bad).find("t.scene:14: patchM.colour: unknown field") != std::string::npos);
  bad = kRidge;
  bad.replace(bad.find("k1 = 1\n"), 7, "");
  CHECK(diagnostic(bad).find("t.scene:7: patchM.k1: required field is missing") != std::string::npos);
  bad = kRidge;
  bad.replace(bad.find("A4"), 2, "A9");
  CHECK(diagnostic(bad).find("patchM.contact: unknown contact type") != std::string::npos);
  bad = kRidge;
  bad += "[patchN]\n";
  CHECK(diagnostic(bad).find("[patchN]: section not allowed") != std::string::npos);
  CHECK(diagnostic("presym-scene 1\nkind = x\n").find("t.scene:2: kind: field outside") != std::string::npos);

  std::istringstream in(kRidge);
  const SceneFile f = parse_scene(in, "ridge");
  CHECK_THROWS_AS(with_value(f, "patchM.k3", 1.0), Error);
  CHECK_THROWS_AS(with_value(f, "patchN.shift", 1.0), Error);
  CHECK_THROWS_AS(with_value(f, "patchM.b[7]", 1.0), Error);
}
