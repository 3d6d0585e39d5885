// acceptance: one pass/fail line per acceptance criterion, with runtimes.
//
//   acceptance [scene-dir] [--only N]
//
// Exit status 0 iff every criterion that ran passed.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "presym/classifier.hpp"
#include "presym/errors.hpp"
#include "presym/geometry2d.hpp"
#include "presym/offdiag.hpp"
#include "presym/ondiag.hpp"
#include "presym/presym2d.hpp"
#include "presym/scene_io.hpp"

using namespace presym;

namespace {

std::string g_scenes = PRESYM_SCENES;

struct Outcome {
  bool pass = false;
  std::string detail;
  double time_limit = 0.0;  // seconds; 0 means none
};

std::string fmt(const char* f, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

SceneFile scene(const std::string& name) { return load_scene(g_scenes + "/" + name + ".scene"); }

double coef(const Cubic& c, int i, int j) { return c[Jet<3>::index(i, j)]; }

double rel(double got, double want) { return std::abs(got - want) / std::abs(want); }

// ------------------------------------------------------------------------ 1

VertexContact vertex_oracle(const LocalVertexModel& m) {
  // Exact on dyadic draws.
  if (m.a4 != m.a2 * m.a2 * m.a2) return VertexContact::A3;
  if (m.a5 != 0.0) return VertexContact::A4;
  if (m.a6 != 2.0 * std::pow(m.a2, 5)) return VertexContact::A5;
  return VertexContact::BeyondA5;
}

Outcome vertex_table() {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> num(-16, 16), coin(0, 1);
  auto dyadic = [&] { return num(rng) / 8.0; };
  auto nonzero = [&] {
    double x = 0.0;
    while (x == 0.0) x = dyadic();
    return x;
  };
  std::vector<LocalVertexModel> cases;
  for (int k = 0; k < 1000; ++k) {
    LocalVertexModel m;
    m.a2 = nonzero();
    m.a4 = coin(rng) ? m.a2 * m.a2 * m.a2 : dyadic();
    m.a5 = coin(rng) ? 0.0 : dyadic();
    m.a6 = coin(rng) ? 2.0 * std::pow(m.a2, 5) : dyadic();
    cases.push_back(m);
  }
  // Boundary cases: each condition exactly met, and just missed.
  for (double a2 : {1.0, -1.0, 0.5, -2.0, 0.125}) {
    const double a4 = a2 * a2 * a2, a6 = 2 * std::pow(a2, 5);
    cases.push_back({a2, a4, 0.0, a6});
    cases.push_back({a2, a4, 0.0, 0.0});
    cases.push_back({a2, a4, 1e-3 * std::abs(a2 * a4), a6});
    cases.push_back({a2, a4 * (1 + 1e-6), 0.0, a6});
    cases.push_back({a2, a4, 0.0, a6 * (1 + 1e-6)});
    cases.push_back({a2, 0.0, 0.0, 0.0});
  }
  int bad = 0, counts[4] = {};
  for (const auto& m : cases) {
    const VertexContact want = vertex_oracle(m);
    bad += vertex_classify(m) != want;
    ++counts[static_cast<int>(want)];
  }
  return {bad == 0,
          fmt("%zu cases (A3 %d, A4 %d, A5 %d, beyond %d), %d mismatches", cases.size(),
              counts[0], counts[1], counts[2], counts[3], bad),
          1.0};
}

// ------------------------------------------------------------------------ 2

Outcome ellipse_trace() {
  const SceneFile f = scene("ellipse");
  TraceOptions to;
  to.grid = 512;
  to.diagonal_band = f.run.band;
  const PreSymCurve2D trace = trace_presym2d(*f.curve, to);
  double worst = 0.0;
  for (const auto& p : trace.samples)
    worst = std::max(worst, std::abs(wrap_difference(p.s + p.t, 0.0, std::numbers::pi)) /
                                std::sqrt(2.0));
  return {worst < 1e-8 && trace.branch_count == 4 && trace.samples.size() > 500,
          fmt("512^2 grid, %d branches, %zu samples, max deviation %.2e", trace.branch_count,
              trace.samples.size(), worst),
          10.0};
}

// ------------------------------------------------------------------------ 3

Outcome a1a3() {
  const SceneFile f = scene("a1a3");
  const A1A3Analysis a = a1a3_analyze(*f.curve, *f.curve_n, f.a1a3.s0, f.a1a3.t0, f.a1a3.r0);
  const bool derivs = std::abs(a.dt1) < 1e-6 && std::abs(a.dt2) < 1e-6 && std::abs(a.dt3) > 1e-3;
  const SweepSpec& s = *f.sweep;
  auto extrema = [&](double value) {
    const SceneFile g = with_value(f, s.key, value);
    return count_local_extrema(sample_bitangent_branch(*g.curve, *g.curve_n, g.a1a3.s0,
                                                       g.a1a3.t0, g.a1a3.r0, g.a1a3.s0 - 0.2,
                                                       g.a1a3.s0 + 0.2, 801));
  };
  const int lo = extrema(s.from), hi = extrema(s.to);
  const bool sweep = std::min(lo, hi) == 0 && std::max(lo, hi) == 2;
  return {derivs && sweep,
          fmt("|t'| %.1e |t''| %.1e |t'''| %.3f; extrema %d at %s=%g, %d at %g", std::abs(a.dt1),
              std::abs(a.dt2), std::abs(a.dt3), lo, s.key.c_str(), s.from, hi, s.to)};
}

// ----------------------------------------------------------- random scenes

MongePatch random_patch(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  MongePatch p;
  p.k1 = 1.0;
  do p.k2 = 3.0 * u(rng);
  while (std::abs(p.k2 - 1.0) < 0.5);
  for (double& x : p.b) x = u(rng);
  for (double& x : p.c) x = u(rng);
  for (double& x : p.d) x = u(rng);
  return p;
}

SceneSpec random_two_patch(std::mt19937_64& rng, Contact cm) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  SceneSpec spec;
  spec.radius = 0.8 + 0.4 * u(rng);
  spec.m.patch = random_patch(rng);
  spec.m.patch.k1 = 0.3 * (2 * u(rng) - 1);
  spec.m.contact = cm;
  PatchSpec n;
  n.patch = random_patch(rng);
  n.patch.k1 = -1.0 + u(rng);
  n.patch.k2 = -0.5 + u(rng);
  spec.n = n;
  spec.chord_angle = 1.0 + 1.5 * u(rng);
  spec.azimuth = 2 * std::numbers::pi * u(rng);
  spec.twist = 2 * std::numbers::pi * u(rng);
  return spec;
}

// Draws until the construction succeeds and `keep` accepts the scene.
BitangentScene draw_scene(std::mt19937_64& rng, Contact cm,
                          const std::function<bool(const BitangentScene&)>& keep = {}) {
  for (;;) {
    try {
      const BitangentScene sc = construct_scene(random_two_patch(rng, cm));
      if (!keep || keep(sc)) return sc;
    } catch (const Error&) {
    }
  }
}

// ------------------------------------------------------------------------ 4

Outcome jacobian_columns_fd() {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> off(-0.05, 0.05);
  double worst = 0.0;
  int solved = 0;
  for (int k = 0; k < 100; ++k) {
    const BitangentScene sc = draw_scene(rng, Contact::A1);
    const OffDiagSample base = base_sample(sc);
    OffDiagSample x = base;
    try {
      x = solve_second_contact(sc, off(rng), off(rng), {base.u, base.v, base.r});
      ++solved;
    } catch (const Error&) {
    }
    const auto cols = jacobian_columns(sc, x);
    const PrincipalData pm = principal_data(sc.m, x.s, x.t);
    const PrincipalData pn = principal_data(*sc.n, x.u, x.v);
    const double h = 1e-5;
    auto G = [&](Eigen::Vector2d dm, Eigen::Vector2d dn, double dr) {
      return residual_G<double>(sc, x.s + dm.x(), x.t + dm.y(), x.u + dn.x(), x.v + dn.y(),
                                x.r + dr);
    };
    const Eigen::Vector2d z = Eigen::Vector2d::Zero();
    const std::array<Eigen::Vector3d, 5> fd = {
        (G(h * pm.dir1, z, 0) - G(-h * pm.dir1, z, 0)) / (2 * h),
        (G(h * pm.dir2, z, 0) - G(-h * pm.dir2, z, 0)) / (2 * h),
        (G(z, h * pn.dir1, 0) - G(z, -h * pn.dir1, 0)) / (2 * h),
        (G(z, h * pn.dir2, 0) - G(z, -h * pn.dir2, 0)) / (2 * h),
        (G(z, z, h) - G(z, z, -h)) / (2 * h)};
    for (int c = 0; c < 5; ++c) worst = std::max(worst, (cols[c] - fd[c]).norm());
  }
  return {worst < 1e-6,
          fmt("100 scenes (%d off-base samples), max column error %.2e", solved, worst)};
}

// ------------------------------------------------------------------------ 5

Outcome derivative_identities() {
  std::mt19937_64 rng(5);
  std::vector<std::pair<BitangentScene, std::string>> scenes;
  for (const char* name : {"a2a1", "a3a1", "a3a1_lips", "a3a1_beaks"})
    scenes.emplace_back(construct_scene(scene(name).spec), name);
  for (int k = 0; k < 20; ++k) {
    scenes.emplace_back(draw_scene(rng, Contact::A2), "random A2A1");
    scenes.emplace_back(draw_scene(rng, Contact::A3), "random A3A1");
  }
  double first = 0.0, rt = 0.0, second = 0.0;
  int bad = 0, a3 = 0;
  for (const auto& [sc, name] : scenes) {
    const DerivativeReport d = derivative_identities_check(sc);
    first = std::max({first, std::abs(d.r_s), std::abs(d.u_s), std::abs(d.v_s)});
    rt = std::max(rt, std::abs(d.r_t - d.r_t_closed));
    bool ok = std::abs(d.r_s) < 1e-6 && std::abs(d.u_s) < 1e-6 && std::abs(d.v_s) < 1e-6 &&
              std::abs(d.r_t - d.r_t_closed) < 1e-6;
    if (sc.contact_m == Contact::A3) {
      ++a3;
      second = std::max({second, std::abs(d.r_ss), std::abs(d.u_ss)});
      ok = ok && d.second_order && std::abs(d.r_ss) < 1e-5 && std::abs(d.u_ss) < 1e-5;
    }
    if (!ok) {
      ++bad;
      std::cerr << "  identity failure on " << name << "\n";
    }
  }
  return {bad == 0, fmt("%zu scenes (%d A3A1): max first %.1e, r_t %.1e, second %.1e",
                        scenes.size(), a3, first, rt, second)};
}

// ------------------------------------------------------------------------ 6

Classification exact_class(const BitangentScene& sc, double tol) {
  const SolutionJet<4> j = solution_jet<4>(sc, base_sample(sc));
  PlanarMapJet jet;
  jet.f1 = j.u;
  jet.f2 = j.v;
  return classify(jet, tol);
}

Outcome offdiag_classes() {
  std::string detail;
  bool ok = true;
  for (const char* name : {"a1a1", "a2a1", "a3a1", "a3a1_lips", "a3a1_beaks", "a4a1"}) {
    const SceneFile f = scene(name);
    const Classification k = exact_class(construct_scene(f.spec), f.run.tol);
    const bool good = f.expect && to_string(k.cls) == *f.expect && k.min_ratio() > 10.0;
    ok = ok && good;
    detail += fmt("%s%s %s (x%.0e)", detail.empty() ? "" : ", ", name, to_string(k.cls),
                  k.min_ratio());
  }
  return {ok, detail, 60.0};
}

// ------------------------------------------------------------------------ 7

// Ridge patch with the requested contact and well separated closed forms.
BitangentScene random_ridge(std::mt19937_64& rng, Contact c) {
  for (;;) {
    SceneSpec spec;
    spec.radius = 1.0;
    spec.m.patch = random_patch(rng);
    spec.m.contact = c;
    try {
      const BitangentScene sc = construct_scene(spec);
      const MongePatch& p = sc.m.patch;
      if (std::abs(a3_denominator(p)) < 0.3) continue;
      if (c == Contact::A3) {
        const double alpha = predicted_coeffs(p, c).alpha;
        if (std::abs(alpha) < 0.2 || std::abs(alpha) > 5.0) continue;
      } else if (c == Contact::A5) {
        const double t20 = predicted_coeffs(p, c).t20;
        if (std::abs(t20) < 0.2 || std::abs(t20) > 20.0) continue;
      } else {
        const SeriesPrediction q = predicted_coeffs(p, c);
        const double lo = std::min({std::abs(q.t20), std::abs(q.t11), std::abs(q.t02)});
        const double hi = std::max({std::abs(q.t20), std::abs(q.t11), std::abs(q.t02)});
        if (lo < 0.2 || hi > 20.0) continue;
      }
      return sc;
    } catch (const Error&) {
    }
  }
}

Outcome ondiag_series(double h) {
  std::mt19937_64 rng(7);
  std::string detail;
  bool ok = true;

  // Bundled ridges first.
  {
    const SeriesFit a3 = series_fit(construct_scene(scene("ridge_a3").spec), h);
    const SeriesFit a4 = series_fit(construct_scene(scene("ridge_a4").spec), h);
    const double e3 = rel(coef(a3.t, 1, 0), -1.25);
    const double e4 = std::max({rel(coef(a4.t, 2, 0), 2.0), rel(coef(a4.t, 1, 1), 4.0),
                                rel(coef(a4.t, 0, 2), 3.0)});
    ok = ok && e3 < 1e-3 && e4 < 1e-2;
    detail += fmt("bundled alpha %.4f, (t20,t11,t02) (%.3f,%.3f,%.3f); ", coef(a3.t, 1, 0),
                  coef(a4.t, 2, 0), coef(a4.t, 1, 1), coef(a4.t, 0, 2));
  }

  double worst3 = 0.0;
  for (int k = 0; k < 20; ++k) {
    const BitangentScene sc = random_ridge(rng, Contact::A3);
    const double alpha = predicted_coeffs(sc.m.patch, Contact::A3).alpha;
    const SeriesFit fit = series_fit(sc, h);
    worst3 = std::max({worst3, rel(coef(fit.t, 1, 0), alpha), rel(coef(fit.t, 0, 1), alpha)});
  }
  ok = ok && worst3 < 1e-3;

  double worst4 = 0.0, ratio4 = 0.0, angle = 0.0;
  for (int k = 0; k < 10; ++k) {
    const BitangentScene sc = random_ridge(rng, Contact::A4);
    const SeriesPrediction p = predicted_coeffs(sc.m.patch, Contact::A4);
    const OnDiagClassification oc = ondiag_classify(sc, h);
    const Cubic& t = oc.fit.t;
    worst4 = std::max({worst4, rel(coef(t, 2, 0), p.t20), rel(coef(t, 1, 1), p.t11),
                       rel(coef(t, 0, 2), p.t02)});
    ratio4 = std::max(ratio4, rel(coef(t, 1, 1) / coef(t, 0, 2), 4.0 / 3.0));
    angle = std::max(angle, oc.sigma_angle_deg);
  }
  ok = ok && worst4 < 1e-2 && ratio4 < 1e-2 && angle < 1.0;

  int lips = 0, beaks = 0, other = 0;
  const int n5 = 10;
  for (int k = 0; k < n5; ++k) {
    const BitangentScene sc = random_ridge(rng, Contact::A5);
    const SingularityClass c = ondiag_classify(sc, h).classification.cls;
    lips += c == SingularityClass::Lips;
    beaks += c == SingularityClass::Beaks;
    other += c != SingularityClass::Lips && c != SingularityClass::Beaks;
  }
  ok = ok && lips == n5 && beaks == 0;

  detail += fmt("A3 x20 alpha rel %.1e; A4 x10 rel %.1e, t11/t02 %.1e, angle %.3f deg; "
                "A5 x%d Lips %d Beaks %d other %d",
                worst3, worst4, ratio4, angle, n5, lips, beaks, other);
  return {ok, detail};
}

// ------------------------------------------------------------------------ 8

Outcome swap_symmetry(double h) {
  double worst = 0.0;
  int nodes = 0, scenes = 0, skipped = 0;
  for (const auto& e : std::filesystem::directory_iterator(g_scenes)) {
    if (e.path().extension() != ".scene" || e.path().stem() == "malformed") continue;
    const SceneFile f = load_scene(e.path().string());
    if (f.kind != SceneKind::OnDiagonal) continue;
    const BitangentScene sc = construct_scene(f.spec);
    try {
      predicted_coeffs(sc.m.patch, sc.contact_m);
    } catch (const Error&) {
      ++skipped;  // no stencil is solved for a ridge without a series
      continue;
    }
    ++scenes;
    const double used = series_fit(sc, h).h;
    for (double step : {used, used / 2}) {
      int excluded = 0;
      const SymmetryReport rep = symmetry_check(sc, stencil_nodes(step, &excluded));
      worst = std::max(worst, rep.defect);
      nodes += rep.nodes;
    }
  }
  return {scenes > 0 && worst < 1e-9,
          fmt("%d scenes (%d without a series skipped), %d node pairs, max |t(s,u) - v(u,s)| "
              "%.2e",
              scenes, skipped, nodes, worst)};
}

// ------------------------------------------------------------------------ 9

Outcome fold_counts() {
  int miscounts = 0, targets = 0;
  // Off-diagonal fold.
  {
    const BitangentScene sc = construct_scene(scene("a2a1").spec);
    const OffDiagSample b = base_sample(sc);
    const SolutionJet<1> jet = solution_jet<1>(sc, b);
    Eigen::Matrix2d J;
    J << jet.u.coeff(1, 0), jet.u.coeff(0, 1), jet.v.coeff(1, 0), jet.v.coeff(0, 1);
    const Eigen::Vector2d ell = Eigen::Vector2d(J(1, 1), -J(0, 1)).normalized();
    // The preimage side is taken from the first target and held fixed.
    int side_two = 0;
    for (int k = 0; k < 100; ++k) {
      const double eta = 1e-5 * std::pow(100.0, k / 99.0);
      auto count = [&](double sign) {
        return static_cast<int>(
            preimages(sc, b.u + sign * eta * ell.x(), b.v + sign * eta * ell.y(), 0.1).size());
      };
      const int plus = count(1.0), minus = count(-1.0);
      if (k == 0) side_two = plus >= minus ? 1 : -1;
      const int two = side_two > 0 ? plus : minus, none = side_two > 0 ? minus : plus;
      miscounts += (two != 2) + (none != 0);
      targets += 2;
    }
  }
  // On-diagonal fold of an A4 ridge.
  {
    const BitangentScene sc = construct_scene(scene("ridge_a4").spec);
    for (int k = 0; k < 100; ++k) {
      const double s = (k % 2 ? 1.0 : -1.0) * (0.002 + 0.018 * (k / 2) / 49.0);
      const OnDiagSample f = fold_point(sc, s);
      const double up = solve_ondiag(sc, s, f.u + 1e-3, {f.t, f.v, f.r}).t - f.t;
      const double side = up > 0.0 ? 1.0 : -1.0;
      const double eta = 1e-6 * (1.0 + 9.0 * (k % 10) / 9.0);
      const auto two = spheres_through(sc, s, f.t + side * eta);
      const auto none = spheres_through(sc, s, f.t - side * eta);
      miscounts += (two.size() != 2) + (!none.empty());
      targets += 2;
    }
  }
  return {miscounts == 0, fmt("%d targets, %d miscounts", targets, miscounts)};
}

// ----------------------------------------------------------------------- 10

Outcome classifier_robustness() {
  std::mt19937_64 rng(10);
  int kept = 0, total = 0;
  std::string lost;
  for (SingularityClass c : {SingularityClass::Fold, SingularityClass::Cusp, SingularityClass::Lips,
                             SingularityClass::Beaks, SingularityClass::Swallowtail}) {
    int here = 0;
    for (int k = 0; k < 100; ++k) here += classify(perturb(normal_form(c), rng)).cls == c;
    kept += here;
    total += 100;
    if (here < 100) lost += fmt(" %s %d/100", to_string(c), here);
  }
  return {kept == total, fmt("%d/%d retained%s", kept, total, lost.c_str())};
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  double stencil = 0.02;
  for (int k = 1; k < argc; ++k) {
    const std::string a = argv[k];
    if (a == "--only" && k + 1 < argc) only = std::atoi(argv[++k]);
    else if (a == "--stencil" && k + 1 < argc) stencil = std::atof(argv[++k]);
    else if (a == "-h" || a == "--help") {
      std::cout << "usage: acceptance [scene-dir] [--only N] [--stencil h]\n";
      return 0;
    } else g_scenes = a;
  }

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"vertex contact table", vertex_table},
      {"ellipse pre-symmetry trace", ellipse_trace},
      {"A1A3 inflexion and sweep", a1a3},
      {"jacobian columns vs differences", jacobian_columns_fd},
      {"A2A1/A3A1 derivative identities", derivative_identities},
      {"off-diagonal classification", offdiag_classes},
      {"on-diagonal series", [&] { return ondiag_series(stencil); }},
      {"swap symmetry", [&] { return swap_symmetry(stencil); }},
      {"fold preimage counts", fold_counts},
      {"classifier robustness", classifier_robustness},
  };

  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    if (only && only != static_cast<int>(k + 1)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double dt =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (o.time_limit > 0 && dt >= o.time_limit) {
      o.pass = false;
      o.detail += fmt("; over the %.0f s limit", o.time_limit);
    }
    failed += !o.pass;
    std::cout << (o.pass ? "PASS " : "FAIL ") << fmt("%2zu", k + 1) << "  "
              << fmt("%-34s %8.3f s  ", criteria[k].first.c_str(), dt) << o.detail << std::endl;
  }
  std::cout << (failed ? fmt("%d criteria failed", failed) : std::string("all criteria passed"))
            << "\n";
  return failed ? 1 : 0;
}
