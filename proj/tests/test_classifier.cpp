#include <cmath>
#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "presym/classifier.hpp"
#include "presym/errors.hpp"
#include "presym/offdiag.hpp"

using namespace presym;

namespace {

constexpr std::array kForms = {SingularityClass::Fold, SingularityClass::Cusp,
                               SingularityClass::Lips, SingularityClass::Beaks,
                               SingularityClass::Swallowtail};

PlanarMapJet jet_of(const BitangentScene& sc) {
  const OffDiagSample b = base_sample(sc);
  const SolutionJet<4> j = solution_jet<4>(sc, b);
  PlanarMapJet out;
  out.f1 = j.u;
  out.f2 = j.v;
  return out;
}

}  // namespace

TEST_CASE("critical set examples") {
  const auto fold = critical_set(normal_form(SingularityClass::Fold));
  CHECK(fold.kind == SigmaKind::SmoothCurve);
  CHECK(std::abs(fold.tangent.y()) < 1e-15);
  CHECK(critical_set(normal_form(SingularityClass::Lips)).kind == SigmaKind::IsolatedPoint);
  CHECK(critical_set(normal_form(SingularityClass::Beaks)).kind ==
        SigmaKind::TransverseCrossing);
  CHECK(critical_set(normal_form(SingularityClass::Diffeomorphism)).kind == SigmaKind::Empty);

  PlanarMapJet flat;
  flat.f1 = Jet<4>::variable(0, 0.0);
  const Jet<4> y = Jet<4>::variable(1, 0.0);
  flat.f2 = y * y * y * y;
  CHECK_THROWS_AS(critical_set(flat), Error);
}

TEST_CASE("normal forms classify as themselves") {
  CHECK(classify(normal_form(SingularityClass::Diffeomorphism)).cls ==
        SingularityClass::Diffeomorphism);
  for (SingularityClass c : kForms) {
    const Classification k = classify(normal_form(c));
    CHECK(k.cls == c);
    CHECK(k.min_ratio() > 10.0);
  }
  PlanarMapJet zero;
  CHECK(classify(zero).cls == SingularityClass::Degenerate);
}

TEST_CASE("classes survive near-identity coordinate changes") {
  std::mt19937_64 rng(20240611);
  for (SingularityClass c : kForms) {
    int kept = 0;
    for (int trial = 0; trial < 100; ++trial) {
      const Classification k = classify(perturb(normal_form(c), rng));
      kept += k.cls == c;
    }
    CHECK(kept == 100);
  }
}

TEST_CASE("source rescaling keeps the class") {
  std::mt19937_64 rng(5);
  for (SingularityClass c : kForms) {
    const PlanarMapJet f = perturb(normal_form(c), rng);
    for (double lambda : {0.5, 0.75, 1.0, 1.5, 2.0})
      CHECK(classify(rescale_source(f, lambda)).cls == c);
  }
}

TEST_CASE("least-squares fit of sampled normal forms") {
  for (SingularityClass c : kForms) {
    const PlanarMapJet f = normal_form(c);
    std::vector<Eigen::Vector2d> pts, vals;
    for (int i = -8; i <= 8; ++i)
      for (int j = -8; j <= 8; ++j) {
        const double x = 0.1 * i, y = 0.1 * j;
        pts.emplace_back(x, y);
        vals.emplace_back(f.f1.evaluate(x, y), f.f2.evaluate(x, y));
      }
    const FieldFit fit = classify_field(pts, vals, Eigen::Vector2d::Zero(), 0.8);
    CHECK(fit.classification.cls == c);
    CHECK(fit.condition < 1e8);
    CHECK(fit.jet.error[2] < 1e-10);
  }
  std::vector<Eigen::Vector2d> few(5, Eigen::Vector2d::Zero());
  CHECK_THROWS_AS(classify_field(few, few, Eigen::Vector2d::Zero(), 1.0), Error);
}

TEST_CASE("bitangent maps classify per contact type") {
  using fixtures::scene;
  struct Case {
    BitangentScene sc;
    SingularityClass want;
  };
  const std::vector<Case> cases = {
      {scene(Contact::A1), SingularityClass::Diffeomorphism},
      {scene(Contact::A2), SingularityClass::Fold},
      {scene(Contact::A3), SingularityClass::Cusp},
      {construct_scene(fixtures::transitional_spec(0.0)), SingularityClass::Lips},
      {construct_scene(fixtures::transitional_spec(2.0)), SingularityClass::Beaks},
      {scene(Contact::A4), SingularityClass::Swallowtail},
  };
  for (const Case& c : cases) {
    const Classification k = classify(jet_of(c.sc));
    MESSAGE(std::string(to_string(k.cls)) << " min ratio " << k.min_ratio());
    CHECK(k.cls == c.want);
    CHECK(k.min_ratio() > 10.0);
  }
}

TEST_CASE("field fits agree with the exact expansions") {
  using fixtures::scene;
  for (auto [cm, want] : {std::pair{Contact::A1, SingularityClass::Diffeomorphism},
                          std::pair{Contact::A2, SingularityClass::Fold}}) {
    const BitangentScene sc = scene(cm);
    const GraphField f = build_graph_field(sc, base_sample(sc), {0.02, 8});
    std::vector<Eigen::Vector2d> pts, vals;
    for (const GraphNode& n : f.nodes) {
      pts.emplace_back(n.sample.s, n.sample.t);
      vals.emplace_back(n.sample.u, n.sample.v);
    }
    const FieldFit fit = classify_field(pts, vals, Eigen::Vector2d::Zero(), 0.02);
    MESSAGE(std::string(to_string(fit.classification.cls)) << " cond " << fit.condition << " err1 "
                                              << fit.jet.error[1]);
    CHECK(fit.classification.cls == want);
  }
}
