// presym: drive the pre-symmetry solvers from scene files.
//
// Exit codes: 0 all expectations met, 1 mismatch or numeric degeneracy,
// 2 input error.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <sstream>

#include "CLI11.hpp"
#include "artifacts.hpp"
#include "json.hpp"
#include "presym/classifier.hpp"
#include "presym/errors.hpp"
#include "presym/offdiag.hpp"
#include "presym/ondiag.hpp"
#include "presym/presym2d.hpp"
#include "presym/scene_io.hpp"

using namespace presym;
using namespace presym::tools;
using nlohmann::json;

namespace {

struct Options {
  std::string scene;
  std::string out_dir = "out";
  std::optional<int> grid;
  std::optional<double> stencil;
  std::optional<double> tol;
  bool no_timestamp = false;
  bool expect_strict = false;
  // sweep
  std::string key;
  std::optional<double> from, to;
  std::optional<int> steps;
};

// Classification margins below this multiple of the tolerance fail under
// --expect-strict.
constexpr double kStrictRatio = 10.0;

class Run {
 public:
  Run(std::string command, const Options& opt) : command_(std::move(command)), opt_(opt) {
    start_ = std::chrono::steady_clock::now();
    scene_ = load_scene(opt.scene);
    if (opt.grid) {
      scene_.run.grid = *opt.grid;
      scene_.run.half_nodes = std::max(2, *opt.grid / 2);
    }
    if (opt.stencil) scene_.run.stencil = *opt.stencil;
    if (opt.tol) scene_.run.tol = *opt.tol;
    std::filesystem::create_directories(opt.out_dir);
    stem_ = std::filesystem::path(opt.scene).stem().string();
    report_["command"] = command_;
    report_["scene"] = std::filesystem::path(opt.scene).filename().string();
    report_["scene_digest"] = scene_.digest;
    report_["parameters"] = {{"grid", scene_.run.grid},
                             {"stencil", scene_.run.stencil},
                             {"tol", scene_.run.tol},
                             {"band", scene_.run.band},
                             {"half_width", scene_.run.half_width},
                             {"half_nodes", scene_.run.half_nodes},
                             {"expect_strict", opt.expect_strict}};
    report_["checks"] = json::array();
    report_["artifacts"] = json::array();
  }

  const SceneFile& scene() const { return scene_; }
  const Options& options() const { return opt_; }
  json& report() { return report_; }

  void check(const Check& c) {
    report_["checks"].push_back(to_json(c));
    ok_ = ok_ && c.pass;
  }

  void classification(const Classification& k, const std::string& key = "classification") {
    report_[key] = to_json(k);
    if (opt_.expect_strict)
      check(above("min decision margin / tolerance", k.min_ratio(), kStrictRatio));
  }

  void expect(const std::string& got) {
    if (scene_.expect) {
      check(tools::equal("class", got, *scene_.expect));
    } else {
      report_["class_unchecked"] = got;
      if (opt_.expect_strict) check(tools::equal("class (no expect key)", got, "<expect key>"));
    }
  }

  void artifact(const std::string& suffix, const std::string& contents) {
    const std::string path = (std::filesystem::path(opt_.out_dir) / (stem_ + suffix)).string();
    write_atomic(path, contents);
    report_["artifacts"].push_back(stem_ + suffix);
    std::cout << "wrote " << path << "\n";
  }

  int finish(const std::string& error = "") {
    if (!error.empty()) {
      report_["error"] = error;
      ok_ = false;
    }
    report_["status"] = ok_ ? "pass" : "fail";
    if (!opt_.no_timestamp) {
      const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - start_;
      report_["wall_time_s"] = dt.count();
    }
    artifact("." + command_ + ".json", report_.dump(2) + "\n");
    for (const auto& c : report_["checks"])
      std::cout << (c["pass"].get<bool>() ? "  pass  " : "  FAIL  ") << c["name"].get<std::string>()
                << "\n";
    if (!error.empty()) std::cout << "error: " << error << "\n";
    std::cout << (ok_ ? "PASS" : "FAIL") << "\n";
    return ok_ ? 0 : 1;
  }

 private:
  std::string command_;
  Options opt_;
  SceneFile scene_;
  std::string stem_;
  json report_;
  bool ok_ = true;
  std::chrono::steady_clock::time_point start_;
};

std::string number(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

// Splits polylines where they wrap around the torus.
std::vector<std::vector<Eigen::Vector2d>> torus_pieces(const std::vector<Eigen::Vector2d>& pts,
                                                       double period) {
  std::vector<std::vector<Eigen::Vector2d>> out(1);
  for (const auto& p : pts) {
    if (!out.back().empty() && (p - out.back().back()).norm() > 0.25 * period) out.emplace_back();
    out.back().push_back(p);
  }
  return out;
}

void require_kind(const SceneFile& f, std::initializer_list<SceneKind> kinds) {
  for (SceneKind k : kinds)
    if (f.kind == k) return;
  throw Error(ErrorKind::ParseError,
              f.name + ": scene kind '" + to_string(f.kind) + "' does not fit this command");
}

// ---------------------------------------------------------------- presym2d

void curve2d(Run& run) {
  const SceneFile& f = run.scene();
  const PlaneCurve& c = *f.curve;
  std::ostringstream csv;
  csv << "branch,s,t,residual\n" << std::setprecision(17);
  Svg svg(1, !run.options().no_timestamp);
  const double lo = c.domain_min(), hi = c.domain_max();
  svg.frame(0, {lo, hi, lo, hi}, "pre-symmetry set on the parameter torus", "s", "t");
  svg.polyline(0, {{lo, lo}, {hi, hi}}, "gray", 1.0, true);
  try {
    TraceOptions to;
    to.grid = f.run.grid;
    to.diagonal_band = f.run.band;
    const PreSymCurve2D trace = trace_presym2d(c, to);
    std::vector<std::vector<Eigen::Vector2d>> branches(trace.branch_count);
    for (const auto& p : trace.samples) {
      csv << p.branch << ',' << p.s << ',' << p.t << ',' << p.residual << '\n';
      branches[p.branch].emplace_back(p.s, p.t);
    }
    for (const auto& b : branches)
      for (const auto& piece : torus_pieces(b, c.period())) svg.polyline(0, piece, "black", 1.5);
    run.report()["branch_count"] = trace.branch_count;
    run.report()["sample_count"] = trace.samples.size();
    double worst = 0.0;
    for (const auto& p : trace.samples) worst = std::max(worst, p.residual);
    run.check(below("max residual", worst, 1e-8));
    run.check(below("swap symmetry defect", trace_symmetry_defect(trace, c.period()), 1e-6));
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::NoBranches) throw;
    run.report()["branch_count"] = 0;
    run.report()["note"] = e.what();
  }
  run.artifact(".presym2d.csv", csv.str());
  run.artifact(".presym2d.svg", svg.str());
}

void a1a3(Run& run) {
  const SceneFile& f = run.scene();
  const A1A3Analysis a = a1a3_analyze(*f.curve, *f.curve_n, f.a1a3.s0, f.a1a3.t0, f.a1a3.r0);
  run.report()["derivatives"] = {{"t1", a.dt1}, {"t2", a.dt2}, {"t3", a.dt3},
                                 {"r1", a.dr1}, {"r2", a.dr2}};
  run.check(below("|t'(s0)|", a.dt1, 1e-6));
  run.check(below("|t''(s0)|", a.dt2, 1e-6));
  run.check(above("|t'''(s0)|", a.dt3, 1e-3));
  std::ostringstream csv;
  csv << "s,t,r\n" << std::setprecision(17);
  std::vector<Eigen::Vector2d> pts;
  double tmin = 1e300, tmax = -1e300;
  for (const auto& x : a.samples) {
    csv << x[0] << ',' << x[1] << ',' << x[2] << '\n';
    pts.emplace_back(x[0], x[1]);
    tmin = std::min(tmin, x[1]);
    tmax = std::max(tmax, x[1]);
  }
  Svg svg(1, !run.options().no_timestamp);
  const double pad = std::max(1e-9, 0.05 * (tmax - tmin));
  svg.frame(0, {pts.front().x(), pts.back().x(), tmin - pad, tmax + pad},
            "second contact t(s) near the vertex", "s", "t");
  svg.polyline(0, pts, "black", 1.5);
  svg.marker(0, {f.a1a3.s0, f.a1a3.t0}, "red");
  run.artifact(".presym2d.csv", csv.str());
  run.artifact(".presym2d.svg", svg.str());
}

// ----------------------------------------------------------------- offdiag

Classification exact_classification(const BitangentScene& sc, double tol) {
  const OffDiagSample b = base_sample(sc);
  const SolutionJet<4> j = solution_jet<4>(sc, b);
  PlanarMapJet jet;
  jet.f1 = j.u;
  jet.f2 = j.v;
  return classify(jet, tol);
}

void offdiag(Run& run) {
  const SceneFile& f = run.scene();
  const BitangentScene sc = construct_scene(f.spec);
  const double tol = f.run.tol;
  const OffDiagSample base = base_sample(sc);
  run.report()["base"] = {{"s", base.s}, {"t", base.t}, {"u", base.u},
                          {"v", base.v}, {"r", base.r}, {"residual", base.residual}};
  run.report()["contacts"] = {{"M", to_string(sc.contact_m)}, {"N", to_string(sc.contact_n)}};

  const Classification k = exact_classification(sc, tol);
  run.classification(k);
  run.expect(to_string(k.cls));

  // Least-squares cross-check on a small solved field.
  try {
    const double w = 0.02;
    const GraphField small = build_graph_field(sc, base, {w, 8});
    std::vector<Eigen::Vector2d> pts, vals;
    for (const GraphNode& n : small.nodes)
      if (n.valid) {
        pts.emplace_back(n.sample.s - base.s, n.sample.t - base.t);
        vals.emplace_back(n.sample.u, n.sample.v);
      }
    const FieldFit fit = classify_field(pts, vals, Eigen::Vector2d::Zero(), w, tol);
    run.report()["field_fit"] = to_json(fit.classification);
    run.report()["field_fit"]["condition"] = fit.condition;
    run.report()["field_fit"]["agrees"] = fit.classification.cls == k.cls;
  } catch (const Error& e) {
    run.report()["field_fit"] = {{"error", e.what()}};
  }

  if (sc.contact_n == Contact::A1 &&
      (sc.contact_m == Contact::A2 || sc.contact_m == Contact::A3)) {
    const DerivativeReport d = derivative_identities_check(sc);
    run.check(below("r_s", d.r_s, 1e-6));
    run.check(below("u_s", d.u_s, 1e-6));
    run.check(below("v_s", d.v_s, 1e-6));
    run.check(below("r_t - closed form", d.r_t - d.r_t_closed, 1e-6));
    if (d.second_order) {
      run.check(below("r_ss", d.r_ss, 1e-5));
      run.check(below("u_ss", d.u_ss, 1e-5));
      run.check(below("v_ss", d.v_ss, 1e-5));
    }
  }
  if (sc.contact_m == Contact::A3 && sc.contact_n == Contact::A1) {
    const TransitionReport t = transitional_a3a1_test(sc);
    run.report()["transitional"] = {{"transitional", t.transitional},
                                    {"delta", t.delta},
                                    {"plane_distance", t.plane_distance},
                                    {"geometric", t.geometric_transitional}};
    if (t.transitional) {
      const LipsBeaksReport lb = lips_beaks_discriminant(sc);
      run.report()["lips_beaks"] = {{"side", to_string(lb.kind)},
                                    {"det", lb.det},
                                    {"det_differenced", lb.det_differenced}};
      const std::string want = lb.kind == LipsBeaks::LipsSide   ? "Lips"
                               : lb.kind == LipsBeaks::BeaksSide ? "Beaks"
                                                                 : "Degenerate";
      run.check(tools::equal("jet class agrees with the radius Hessian", to_string(k.cls), want));
    }
  }

  const GraphField field = build_graph_field(sc, base, {f.run.half_width, f.run.half_nodes});
  std::ostringstream csv;
  write_field_csv(csv, field);
  run.artifact(".offdiag.csv", csv.str());

  const CriticalCurves cc = critical_curves(field);
  run.report()["critical_curves"] = {{"components", cc.sigma.size()}, {"cusps", cc.cusps.size()}};
  Svg svg(2, !run.options().no_timestamp);
  const double w = f.run.half_width;
  svg.frame(0, {base.s - w, base.s + w, base.t - w, base.t + w}, "critical set in (s, t)", "s",
            "t");
  double u0 = 1e300, u1 = -1e300, v0 = 1e300, v1 = -1e300;
  for (const GraphNode& n : field.nodes)
    if (n.valid) {
      u0 = std::min(u0, n.sample.u);
      u1 = std::max(u1, n.sample.u);
      v0 = std::min(v0, n.sample.v);
      v1 = std::max(v1, n.sample.v);
    }
  const double span = std::max(u1 - u0, v1 - v0) / 2 + 1e-12;
  const double uc = (u0 + u1) / 2, vc = (v0 + v1) / 2;
  svg.frame(1, {uc - span, uc + span, vc - span, vc + span}, "image in (u, v)", "u", "v");
  for (std::size_t c = 0; c < cc.sigma.size(); ++c) {
    svg.polyline(0, cc.sigma[c], "black", 1.5);
    svg.polyline(1, cc.image[c], "black", 1.5);
  }
  for (const auto& p : cc.cusps) svg.marker(0, p, "red");
  svg.marker(0, {base.s, base.t}, "blue", 2.0);
  svg.marker(1, {base.u, base.v}, "blue", 2.0);
  run.artifact(".offdiag.svg", svg.str());
}

// ------------------------------------------------------------------ ondiag

double coef(const Cubic& c, int i, int j) { return c[Jet<3>::index(i, j)]; }

Check relative(const std::string& name, double got, double want, double bound) {
  Check c = below(name + " relative error", (got - want) / want, bound);
  c.expected = number(want) + " within " + number(bound) + " relative";
  c.value = got;
  return c;
}

void ondiag(Run& run) {
  const SceneFile& f = run.scene();
  const BitangentScene sc = construct_scene(f.spec);
  const OnDiagClassification oc = ondiag_classify(sc, f.run.stencil, f.run.tol);
  const SeriesFit& fit = oc.fit;
  const SeriesPrediction p = predicted_coeffs(sc.m.patch, fit.contact);
  run.report()["contact"] = to_string(fit.contact);
  run.report()["fit"] = {{"degree", fit.degree},
                         {"h", fit.h},
                         {"h_requested", fit.h_requested},
                         {"nodes", fit.nodes},
                         {"excluded", fit.excluded},
                         {"rms_residual", fit.residual}};
  json rows = json::array();
  auto row = [&](const std::string& name, double fitted, std::optional<double> predicted) {
    json r = {{"coefficient", name}, {"fitted", fitted}};
    if (predicted) r["predicted"] = *predicted;
    rows.push_back(r);
  };
  switch (fit.contact) {
    case Contact::A3:
      row("t_s", coef(fit.t, 1, 0), p.alpha);
      row("t_u", coef(fit.t, 0, 1), p.alpha);
      run.check(relative("t_s vs alpha", coef(fit.t, 1, 0), p.alpha, 1e-3));
      run.check(relative("t_u vs alpha", coef(fit.t, 0, 1), p.alpha, 1e-3));
      break;
    case Contact::A4:
      row("t20", coef(fit.t, 2, 0), p.t20);
      row("t11", coef(fit.t, 1, 1), p.t11);
      row("t02", coef(fit.t, 0, 2), p.t02);
      run.check(relative("t20", coef(fit.t, 2, 0), p.t20, 1e-2));
      run.check(relative("t11", coef(fit.t, 1, 1), p.t11, 1e-2));
      run.check(relative("t02", coef(fit.t, 0, 2), p.t02, 1e-2));
      run.check(relative("t11 / t02", coef(fit.t, 1, 1) / coef(fit.t, 0, 2), 4.0 / 3.0, 1e-2));
      run.check(below("critical set angle to 2s+3u=0 (deg)", oc.sigma_angle_deg, 1.0));
      break;
    case Contact::A5: {
      const double t21 = coef(fit.t, 2, 1);
      row("s^2", coef(fit.t, 2, 0), p.t20);
      row("t30", coef(fit.t, 3, 0), std::nullopt);
      row("t21", t21, std::nullopt);
      row("t12", coef(fit.t, 1, 2), t21);
      row("t03", coef(fit.t, 0, 3), 2.0 / 3.0 * t21);
      run.check(relative("s^2 coefficient", coef(fit.t, 2, 0), p.t20, 1e-2));
      run.check(relative("t12 vs t21", coef(fit.t, 1, 2), t21, 1e-2));
      run.check(relative("t03 vs 2/3 t21", coef(fit.t, 0, 3), 2.0 / 3.0 * t21, 1e-2));
      break;
    }
    default:
      break;
  }
  run.report()["coefficients"] = rows;

  std::vector<Eigen::Vector2d> grid;
  for (const auto& x : fit.samples) grid.emplace_back(x.s, x.u);
  const SymmetryReport sym = symmetry_check(sc, grid);
  run.report()["symmetry"] = {{"defect", sym.defect}, {"nodes", sym.nodes},
                              {"excluded", sym.excluded}};
  run.check(below("swap symmetry defect", sym.defect, 1e-9));

  run.classification(oc.classification);
  run.expect(to_string(oc.classification.cls));

  std::ostringstream csv;
  write_ondiag_csv(csv, fit.samples);
  run.artifact(".ondiag.csv", csv.str());
}

// ------------------------------------------------------------------- sweep

struct StepResult {
  std::string cls;
  int cusps = -1, components = -1, extrema = -1, branches = -1;
  std::string signature() const {
    return cls + "/" + std::to_string(cusps) + "/" + std::to_string(components) + "/" +
           std::to_string(extrema) + "/" + std::to_string(branches);
  }
};

StepResult sweep_step(const SceneFile& f) {
  StepResult r;
  switch (f.kind) {
    case SceneKind::OffDiagonal: {
      const BitangentScene sc = construct_scene(f.spec);
      try {
        r.cls = to_string(exact_classification(sc, f.run.tol).cls);
      } catch (const Error& e) {
        r.cls = to_string(e.kind());
      }
      const GraphField field =
          build_graph_field(sc, base_sample(sc), {f.run.half_width, f.run.half_nodes});
      const CriticalCurves cc = critical_curves(field);
      r.cusps = static_cast<int>(cc.cusps.size());
      r.components = static_cast<int>(cc.sigma.size());
      break;
    }
    case SceneKind::OnDiagonal:
      try {
        r.cls = to_string(
            ondiag_classify(construct_scene(f.spec), f.run.stencil, f.run.tol).classification.cls);
      } catch (const Error& e) {
        r.cls = to_string(e.kind());
      }
      break;
    case SceneKind::A1A3: {
      const auto rows = sample_bitangent_branch(*f.curve, *f.curve_n, f.a1a3.s0, f.a1a3.t0,
                                                f.a1a3.r0, f.a1a3.s0 - 0.2, f.a1a3.s0 + 0.2, 801);
      r.extrema = count_local_extrema(rows);
      r.cls = "-";
      break;
    }
    case SceneKind::Curve2D:
      try {
        TraceOptions to;
        to.grid = f.run.grid;
        to.diagonal_band = f.run.band;
        r.branches = trace_presym2d(*f.curve, to).branch_count;
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::NoBranches) throw;
        r.branches = 0;
      }
      r.cls = "-";
      break;
  }
  return r;
}

void sweep(Run& run) {
  const SceneFile& f = run.scene();
  const Options& o = run.options();
  SweepSpec s = f.sweep.value_or(SweepSpec{});
  if (!o.key.empty()) s.key = o.key;
  if (o.from) s.from = *o.from;
  if (o.to) s.to = *o.to;
  if (o.steps) s.steps = *o.steps;
  if (!f.sweep && !o.steps) s.steps = 11;
  if (s.key.empty())
    throw Error(ErrorKind::ParseError, f.name + ": sweep.key: no [sweep] section and no --key");
  if (s.steps < 2) throw Error(ErrorKind::ParseError, f.name + ": sweep.steps: must be >= 2");
  run.report()["sweep"] = {{"key", s.key}, {"from", s.from}, {"to", s.to}, {"steps", s.steps}};

  std::ostringstream csv;
  csv << "step,value,class,cusps,components,extrema,branches\n";
  json steps = json::array(), transitions = json::array();
  std::string prev;
  for (int k = 0; k < s.steps; ++k) {
    const double value = s.from + (s.to - s.from) * k / (s.steps - 1);
    SceneFile g = with_value(f, s.key, value);
    g.run = f.run;
    const StepResult r = sweep_step(g);
    csv << k << ',' << number(value) << ',' << r.cls << ',' << r.cusps << ',' << r.components
        << ',' << r.extrema << ',' << r.branches << '\n';
    steps.push_back({{"step", k},
                     {"value", value},
                     {"class", r.cls},
                     {"cusps", r.cusps},
                     {"components", r.components},
                     {"extrema", r.extrema},
                     {"branches", r.branches}});
    if (k > 0 && r.signature() != prev) transitions.push_back({{"between", {k - 1, k}}});
    prev = r.signature();
    std::cout << "step " << k << " " << s.key << "=" << number(value) << " " << r.cls
              << " cusps " << r.cusps << " components " << r.components << " extrema "
              << r.extrema << " branches " << r.branches << "\n";
  }
  run.report()["steps"] = steps;
  run.report()["transitions"] = transitions;
  run.artifact(".sweep.csv", csv.str());
}

int dispatch(const std::string& command, const Options& opt) {
  std::optional<Run> run;
  try {
    run.emplace(command, opt);
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  try {
    const SceneFile& f = run->scene();
    if (command == "presym2d") {
      require_kind(f, {SceneKind::Curve2D, SceneKind::A1A3});
      f.kind == SceneKind::Curve2D ? curve2d(*run) : a1a3(*run);
    } else if (command == "offdiag") {
      require_kind(f, {SceneKind::OffDiagonal});
      offdiag(*run);
    } else if (command == "ondiag") {
      require_kind(f, {SceneKind::OnDiagonal});
      ondiag(*run);
    } else {
      sweep(*run);
    }
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::ParseError || e.kind() == ErrorKind::UnrealizableSpec) {
      std::cerr << e.what() << "\n";
      return 2;
    }
    return run->finish(e.what());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return run->finish();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pre-symmetry sets of curves and surfaces: tracing, solving, classifying."};
  app.require_subcommand(1);
  Options opt;
  auto common = [&](CLI::App* sub) {
    sub->add_option("scene", opt.scene, "scene file")->required()->check(CLI::ExistingFile);
    sub->add_option("--grid", opt.grid, "2D trace grid size (off-diagonal: nodes per side)")
        ->check(CLI::Range(8, 1 << 14));
    sub->add_option("--stencil", opt.stencil, "on-diagonal stencil radius")
        ->check(CLI::PositiveNumber);
    sub->add_option("--tol", opt.tol, "classifier tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--out-dir", opt.out_dir, "artifact directory")->capture_default_str();
    sub->add_flag("--no-timestamp", opt.no_timestamp,
                  "omit SVG timestamps and the report wall time");
    sub->add_flag("--expect-strict", opt.expect_strict,
                  "require an expect key and decision margins of 10x the tolerance");
  };
  std::string command;
  for (const char* name : {"presym2d", "offdiag", "ondiag", "sweep"}) {
    CLI::App* sub = app.add_subcommand(name);
    common(sub);
    sub->callback([&command, name] { command = name; });
    if (std::string(name) == "sweep") {
      sub->add_option("--key", opt.key, "swept field, section.key or section.key[i]");
      sub->add_option("--from", opt.from, "first value");
      sub->add_option("--to", opt.to, "last value");
      sub->add_option("--steps", opt.steps, "number of values")->check(CLI::Range(2, 100000));
    }
  }
  app.get_subcommand("presym2d")->description("trace a planar pre-symmetry set or analyze an A1A3 pair");
  app.get_subcommand("offdiag")->description("two-patch bitangent map: classify and plot");
  app.get_subcommand("ondiag")->description("single-patch ridge: fit and compare series");
  app.get_subcommand("sweep")->description("vary one scene field and track the classification");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  return dispatch(command, opt);
}
