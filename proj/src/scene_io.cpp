#include "presym/scene_io.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>
#include <vector>

#include "presym/errors.hpp"

namespace presym {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string fnv1a(const std::string& text) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

const std::array<const char*, 6> kClasses = {"Diffeomorphism", "Fold", "Cusp",
                                              "Lips", "Beaks", "Swallowtail"};

// Typed access to one section, recording which keys were consumed.
class Reader {
 public:
  Reader(const SceneFile& f, std::string section, std::set<std::string>& used)
      : f_(f), section_(std::move(section)), used_(used) {}

  bool has(const std::string& key) const { return entries() && entries()->count(key); }

  [[noreturn]] void fail(const std::string& key, const std::string& msg) const {
    int line = 0;
    if (entries() && entries()->count(key)) line = entries()->at(key).line;
    else if (f_.section_lines.count(section_)) line = f_.section_lines.at(section_);
    throw Error(ErrorKind::ParseError, f_.name + ":" + std::to_string(line) + ": " + section_ +
                                           "." + key + ": " + msg);
  }

  std::string text(const std::string& key) {
    if (!has(key)) fail(key, "required field is missing");
    used_.insert(section_ + "." + key);
    return entries()->at(key).value;
  }

  std::vector<double> numbers(const std::string& key) {
    std::istringstream is(text(key));
    std::vector<double> out;
    std::string tok;
    while (is >> tok) out.push_back(parse_double(key, tok));
    if (out.empty()) fail(key, "expected at least one number");
    return out;
  }

  double number(const std::string& key) {
    const auto v = numbers(key);
    if (v.size() != 1) fail(key, "expected one number, found " + std::to_string(v.size()));
    return v[0];
  }
  double number(const std::string& key, double fallback) {
    return has(key) ? number(key) : fallback;
  }

  int integer(const std::string& key, int fallback) {
    if (!has(key)) return fallback;
    const double v = number(key);
    if (v != std::floor(v) || std::abs(v) > 1e9) fail(key, "expected an integer");
    return static_cast<int>(v);
  }

  template <std::size_t N>
  std::array<double, N> fixed(const std::string& key, const std::array<double, N>& fallback) {
    if (!has(key)) return fallback;
    const auto v = numbers(key);
    if (v.size() != N)
      fail(key, "expected " + std::to_string(N) + " numbers, found " + std::to_string(v.size()));
    std::array<double, N> out{};
    std::copy(v.begin(), v.end(), out.begin());
    return out;
  }

  bool boolean(const std::string& key, bool fallback) {
    if (!has(key)) return fallback;
    const std::string v = text(key);
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    fail(key, "expected true or false, found '" + v + "'");
  }

 private:
  const SceneFile::Section* entries() const {
    const auto it = f_.raw.find(section_);
    return it == f_.raw.end() ? nullptr : &it->second;
  }

  double parse_double(const std::string& key, const std::string& tok) const {
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (end != tok.c_str() + tok.size() || !std::isfinite(v))
      fail(key, "'" + tok + "' is not a finite number");
    return v;
  }

  const SceneFile& f_;
  std::string section_;
  std::set<std::string>& used_;
};

Eigen::Vector3d vec3(const std::array<double, 3>& a) { return {a[0], a[1], a[2]}; }

std::optional<RigidMotion> read_motion(Reader& r) {
  if (!r.has("axis") && !r.has("angle") && !r.has("translation")) return std::nullopt;
  const Eigen::Vector3d axis = vec3(r.fixed<3>("axis", {0.0, 0.0, 1.0}));
  if (axis.norm() < 1e-12) r.fail("axis", "rotation axis must be nonzero");
  return RigidMotion::from_axis_angle(axis, r.number("angle", 0.0),
                                      vec3(r.fixed<3>("translation", {0.0, 0.0, 0.0})));
}

PatchSpec read_patch(Reader& r) {
  PatchSpec p;
  const std::string contact = r.text("contact");
  const auto parsed = contact_from_string(contact);
  if (!parsed) r.fail("contact", "unknown contact type '" + contact + "' (A1..A5)");
  p.contact = *parsed;
  p.patch.k1 = r.number("k1");
  p.patch.k2 = r.number("k2");
  p.patch.b = r.fixed<4>("b", {0, 0, 0, 0});
  p.patch.c = r.fixed<5>("c", {0, 0, 0, 0, 0});
  p.patch.d = r.fixed<6>("d", {0, 0, 0, 0, 0, 0});
  p.patch.box = r.number("box", p.patch.box);
  if (!(p.patch.box > 0.0)) r.fail("box", "must be positive");
  p.motion = read_motion(r);
  return p;
}

PlaneCurve read_curve(Reader& r) {
  const std::string family = r.text("family");
  PlaneCurve c;
  if (family == "ellipse") {
    c = PlaneCurve::ellipse(r.number("a"), r.number("b"));
  } else if (family == "circle") {
    c = PlaneCurve::circle(r.number("radius"));
  } else if (family == "perturbed") {
    std::vector<double> cs = {0.0}, sn = {0.0};
    if (r.has("cos"))
      for (double v : r.numbers("cos")) cs.push_back(v);
    if (r.has("sin"))
      for (double v : r.numbers("sin")) sn.push_back(v);
    c = PlaneCurve::perturbed(r.number("a"), r.number("b"), cs, sn);
  } else if (family == "graph") {
    c = PlaneCurve::local_graph(r.numbers("coeffs"), r.number("x_min", -1.0),
                                r.number("x_max", 1.0));
  } else {
    r.fail("family", "unknown curve family '" + family + "' (ellipse, circle, perturbed, graph)");
  }
  const auto t = r.fixed<2>("translation", {0.0, 0.0});
  return c.placed(r.number("angle", 0.0), Eigen::Vector2d(t[0], t[1]));
}

void build(SceneFile& f) {
  std::set<std::string> used;
  Reader scene(f, "scene", used);
  const std::string kind = scene.text("kind");
  std::set<std::string> allowed = {"scene", "run", "sweep"};
  if (kind == "curve2d") {
    f.kind = SceneKind::Curve2D;
    allowed.insert("curve");
  } else if (kind == "a1a3") {
    f.kind = SceneKind::A1A3;
    allowed.insert({"curve", "curveN", "a1a3"});
  } else if (kind == "offdiag") {
    f.kind = SceneKind::OffDiagonal;
    allowed.insert({"patchM", "patchN", "global"});
  } else if (kind == "ondiag") {
    f.kind = SceneKind::OnDiagonal;
    allowed.insert({"patchM", "global"});
  } else {
    scene.fail("kind", "unknown scene kind '" + kind + "' (curve2d, a1a3, offdiag, ondiag)");
  }
  for (const auto& [name, line] : f.section_lines)
    if (!allowed.count(name))
      throw Error(ErrorKind::ParseError, f.name + ":" + std::to_string(line) + ": [" + name +
                                             "]: section not allowed in a " + kind + " scene");

  if (scene.has("expect")) {
    const std::string e = scene.text("expect");
    bool known = false;
    for (const char* c : kClasses) known |= e == c;
    if (!known) scene.fail("expect", "unknown class '" + e + "'");
    f.expect = e;
  }

  Reader run(f, "run", used);
  f.run.grid = run.integer("grid", f.run.grid);
  f.run.stencil = run.number("stencil", f.run.stencil);
  f.run.tol = run.number("tol", f.run.tol);
  f.run.band = run.number("band", f.run.band);
  f.run.half_width = run.number("half_width", f.run.half_width);
  f.run.half_nodes = run.integer("half_nodes", f.run.half_nodes);
  if (f.run.grid < 8) run.fail("grid", "must be at least 8");
  if (!(f.run.stencil > 0.0)) run.fail("stencil", "must be positive");
  if (!(f.run.tol > 0.0)) run.fail("tol", "must be positive");
  if (f.run.half_nodes < 2) run.fail("half_nodes", "must be at least 2");

  if (f.raw.count("sweep")) {
    Reader sw(f, "sweep", used);
    SweepSpec s;
    s.key = sw.text("key");
    s.from = sw.number("from");
    s.to = sw.number("to");
    s.steps = sw.integer("steps", 11);
    if (s.steps < 2) sw.fail("steps", "must be at least 2");
    f.sweep = s;
  }

  if (f.kind == SceneKind::Curve2D || f.kind == SceneKind::A1A3) {
    Reader c(f, "curve", used);
    f.curve = read_curve(c);
  }
  if (f.kind == SceneKind::A1A3) {
    Reader cn(f, "curveN", used);
    f.curve_n = read_curve(cn);
    Reader a(f, "a1a3", used);
    f.a1a3 = {a.number("s0"), a.number("t0"), a.number("r0")};
  }
  if (f.kind == SceneKind::OffDiagonal || f.kind == SceneKind::OnDiagonal) {
    f.spec.radius = scene.number("radius", 1.0);
    if (!(f.spec.radius > 0.0)) scene.fail("radius", "must be positive");
    f.spec.chord_angle = scene.number("chord_angle", f.spec.chord_angle);
    f.spec.azimuth = scene.number("azimuth", f.spec.azimuth);
    f.spec.twist = scene.number("twist", f.spec.twist);
    f.spec.transitional = scene.boolean("transitional", false);
    Reader m(f, "patchM", used);
    f.spec.m = read_patch(m);
    if (f.kind == SceneKind::OffDiagonal) {
      Reader n(f, "patchN", used);
      f.spec.n = read_patch(n);
      f.spec.n_shift = n.number("shift", 0.0);
    }
    if (f.raw.count("global")) {
      Reader g(f, "global", used);
      f.spec.global = read_motion(g);
    }
  }

  for (const auto& [section, entries] : f.raw)
    for (const auto& [key, entry] : entries)
      if (!used.count(section + "." + key))
        throw Error(ErrorKind::ParseError,
                    f.name + (entry.line > 0 ? ":" + std::to_string(entry.line) : "") + ": " +
                        section + "." + key + ": unknown field");
}

}  // namespace

const char* to_string(SceneKind k) {
  switch (k) {
    case SceneKind::Curve2D: return "curve2d";
    case SceneKind::A1A3: return "a1a3";
    case SceneKind::OffDiagonal: return "offdiag";
    case SceneKind::OnDiagonal: return "ondiag";
  }
  return "?";
}

SceneFile parse_scene(std::istream& in, const std::string& name) {
  SceneFile f;
  f.name = name;
  std::string text, line, section;
  bool header = false;
  int lineno = 0;
  auto fail = [&](const std::string& msg) {
    throw Error(ErrorKind::ParseError, name + ":" + std::to_string(lineno) + ": " + msg);
  };
  while (std::getline(in, line)) {
    ++lineno;
    text += line + "\n";
    const std::string body = trim(line.substr(0, line.find('#')));
    if (body.empty()) continue;
    if (!header) {
      if (body != "presym-scene 1") fail("header: expected 'presym-scene 1', found '" + body + "'");
      header = true;
      continue;
    }
    if (body.front() == '[') {
      if (body.back() != ']' || body.size() < 3) fail("malformed section header '" + body + "'");
      section = trim(body.substr(1, body.size() - 2));
      if (f.section_lines.count(section)) fail("[" + section + "]: duplicate section");
      f.section_lines[section] = lineno;
      f.raw[section];
      continue;
    }
    const auto eq = body.find('=');
    if (eq == std::string::npos) fail("expected 'key = value', found '" + body + "'");
    const std::string key = trim(body.substr(0, eq));
    const std::string value = trim(body.substr(eq + 1));
    if (section.empty()) fail(key + ": field outside any section");
    if (key.empty()) fail("empty key");
    if (value.empty()) fail(section + "." + key + ": empty value");
    if (f.raw[section].count(key)) fail(section + "." + key + ": duplicate field");
    f.raw[section][key] = {value, lineno};
  }
  if (!header) fail("header: file is empty, expected 'presym-scene 1'");
  f.digest = fnv1a(text);
  build(f);
  return f;
}

SceneFile load_scene(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ParseError, path + ":0: cannot open file");
  return parse_scene(in, path);
}

SceneFile with_value(const SceneFile& scene, const std::string& key, double value) {
  const auto dot = key.find('.');
  if (dot == std::string::npos)
    throw Error(ErrorKind::ParseError, scene.name + ": " + key + ": sweep key must be section.key");
  const std::string section = key.substr(0, dot);
  std::string field = key.substr(dot + 1);
  int index = -1;
  if (const auto br = field.find('['); br != std::string::npos) {
    if (field.back() != ']')
      throw Error(ErrorKind::ParseError, scene.name + ": " + key + ": malformed index");
    index = std::atoi(field.substr(br + 1).c_str());
    field = field.substr(0, br);
  }
  SceneFile out = scene;
  std::ostringstream num;
  num << std::setprecision(17) << value;
  auto sec = out.raw.find(section);
  if (sec == out.raw.end())
    throw Error(ErrorKind::ParseError, scene.name + ": " + key + ": no section [" + section + "]");
  auto it = sec->second.find(field);
  if (index < 0) {
    if (it == sec->second.end()) {
      // Optional scalar keys may be swept without being written out.
      sec->second[field] = {num.str(), 0};
    } else {
      it->second.value = num.str();
    }
  } else {
    if (it == sec->second.end())
      throw Error(ErrorKind::ParseError, scene.name + ": " + key + ": field not present");
    std::istringstream is(it->second.value);
    std::vector<std::string> toks;
    std::string tok;
    while (is >> tok) toks.push_back(tok);
    if (index >= static_cast<int>(toks.size()))
      throw Error(ErrorKind::ParseError, scene.name + ":" + std::to_string(it->second.line) +
                                             ": " + key + ": index out of range");
    toks[index] = num.str();
    std::string joined;
    for (const auto& t : toks) joined += (joined.empty() ? "" : " ") + t;
    it->second.value = joined;
  }
  out.expect.reset();
  out.sweep.reset();
  out.curve.reset();
  out.curve_n.reset();
  out.spec = SceneSpec{};
  build(out);
  return out;
}

}  // namespace presym
