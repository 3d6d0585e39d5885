#ifndef PRESYM_SCENE_IO_HPP
#define PRESYM_SCENE_IO_HPP

#include <iosfwd>
#include <map>
#include <optional>
#include <string>

#include "presym/geometry2d.hpp"
#include "presym/geometry3d.hpp"

namespace presym {

/// Scene files: a header line `presym-scene 1`, then `[section]` blocks of
/// `key = value` lines. `#` starts a comment. Grammar in README.md.
enum class SceneKind { Curve2D, A1A3, OffDiagonal, OnDiagonal };
const char* to_string(SceneKind k);

struct RunParams {
  int grid = 256;           // 2D trace grid
  double stencil = 0.02;    // on-diagonal stencil radius
  double tol = 1e-6;        // classifier tolerance
  double band = 0.05;       // 2D diagonal exclusion band
  double half_width = 0.1;  // off-diagonal field half width
  int half_nodes = 10;      // off-diagonal field nodes per half width
};

struct SweepSpec {
  std::string key;  // "section.key" or "section.key[i]"
  double from = 0.0, to = 0.0;
  int steps = 0;
};

struct A1A3Seed {
  double s0 = 0.0, t0 = 0.0, r0 = 0.0;
};

struct SceneFile {
  std::string name;
  std::string digest;  // FNV-1a of the file text, hex
  SceneKind kind = SceneKind::Curve2D;
  std::optional<std::string> expect;
  RunParams run;
  std::optional<SweepSpec> sweep;

  std::optional<PlaneCurve> curve, curve_n;
  A1A3Seed a1a3;
  SceneSpec spec;

  struct Entry {
    std::string value;
    int line = 0;
  };
  using Section = std::map<std::string, Entry>;
  std::map<std::string, Section> raw;
  std::map<std::string, int> section_lines;
};

/// Throws ParseError with "name:line: field: message" diagnostics.
SceneFile parse_scene(std::istream& in, const std::string& name);
SceneFile load_scene(const std::string& path);

/// Copy of the scene with one numeric field replaced; throws ParseError for
/// keys that the scene does not contain.
SceneFile with_value(const SceneFile& scene, const std::string& key, double value);

}  // namespace presym

#endif  // PRESYM_SCENE_IO_HPP
