#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gcdual/crossratio.hpp"
#include "oracles.hpp"

using namespace gcdual;

namespace {
struct Fixture {
  std::shared_ptr<const Group> g = Group::make(GroupMode::Genus2Octagon);
  std::shared_ptr<const CurveOps> ops = std::make_shared<CurveOps>(g);
  GroupElement E(const char* s) const { return g->element(s); }
};
}  // namespace

TEST_CASE("hyperbolic cross-ratio satisfies the four axioms") {
  Fixture f;
  auto rs = check_crossratio_axioms(*f.g, hyperbolic_crossratio(), 50, 4242, 1e-9);
  REQUIRE(rs.size() == 4);
  for (const auto& r : rs) {
    CAPTURE(r.axiom);
    CHECK(r.pass);
  }
}

TEST_CASE("degenerate cross-ratios behave as expected") {
  Fixture f;
  GeneralizedCrossRatio zero{"zero", [](const BoundaryPoint&, const BoundaryPoint&,
                                        const BoundaryPoint&, const BoundaryPoint&) {
                               return 0.0;
                             }};
  for (const auto& r : check_crossratio_axioms(*f.g, zero, 30, 4243, 1e-9)) CHECK(r.pass);

  // flipping the sign breaks positivity
  auto hyp = hyperbolic_crossratio();
  GeneralizedCrossRatio neg{"neg", [hyp](const BoundaryPoint& a, const BoundaryPoint& b,
                                         const BoundaryPoint& c, const BoundaryPoint& d) {
                              return -hyp.eval(a, b, c, d);
                            }};
  bool pos_failed = false;
  for (const auto& r : check_crossratio_axioms(*f.g, neg, 30, 4244, 1e-9))
    if (r.axiom == "crossratio_positivity" && !r.pass) pos_failed = true;
  CHECK(pos_failed);
}

TEST_CASE("periods equal hyperbolic lengths") {
  Fixture f;
  auto cr = hyperbolic_crossratio();
  auto hyp = hyperbolic_length_functional(f.g);
  // generic evaluator with transversal independence, moderate classes
  for (const char* w : {"a1", "b2", "a1 b1", "a2 B1"}) {
    double p = period(cr, *f.g, f.E(w), 1e-7);
    CHECK(p == doctest::Approx(hyp(f.E(w))).epsilon(1e-9));
  }
  // stable closed form on all ball(4) classes
  auto per = hyperbolic_period_functional(f.g);
  int checked = 0;
  for (const auto& cls : f.g->class_representatives(4)) {
    if (cls.is_identity()) continue;
    CHECK(std::fabs(per(cls) - hyp(cls)) < 1e-9);
    checked++;
  }
  CHECK(checked > 300);
}

TEST_CASE("period homogeneity and inversion invariance") {
  Fixture f;
  auto per = hyperbolic_period_functional(f.g);
  for (const char* w : {"a1", "a1 b1", "b2 a2"}) {
    double p = per(f.E(w));
    for (int n = 2; n <= 6; n++)
      CHECK(std::fabs(per(f.g->power(f.E(w), n)) - n * p) < 1e-9 * n);
    CHECK(per(f.g->inverse(f.E(w))) == doctest::Approx(p).epsilon(1e-12));
  }
}

TEST_CASE("multicurve cross-ratios count boxes") {
  Fixture f;
  MultiCurve A = single_curve(*f.g, f.E("a1"));
  auto cr = multicurve_crossratio(f.ops, A, true);
  Axis ax = f.g->axis(f.E("a1"));
  double rep = ax.repelling.angle(), att = ax.attracting.angle();
  // tuple (a,b,c,d) whose box [d,a) x [b,c) straddles the central lift
  BoundaryPoint a = boundary_from_angle(rep + 0.05);
  BoundaryPoint b = boundary_from_angle(att - 0.05);
  BoundaryPoint c = boundary_from_angle(att + 0.05);
  BoundaryPoint d = boundary_from_angle(rep - 0.05);
  CHECK(cr.eval(a, b, c, d) == doctest::Approx(1.0));
  // a tuple far from every lift endpoint pair
  BoundaryPoint e1 = boundary_from_angle(rep - 0.03);
  BoundaryPoint e2 = boundary_from_angle(rep - 0.02);
  BoundaryPoint e3 = boundary_from_angle(rep - 0.01);
  CHECK(cr.eval(e1, e2, e3, boundary_from_angle(rep - 0.04)) == doctest::Approx(0.0));
  // period of the multicurve cross-ratio reproduces intersection numbers
  CHECK(period(cr, *f.g, f.E("b1"), 1e-9) == doctest::Approx(1.0));
  CHECK(period(cr, *f.g, f.E("b2"), 1e-9) == doctest::Approx(0.0));
  CHECK(period(cr, *f.g, f.E("a1 a1 b1"), 1e-9) == doctest::Approx(1.0));
}

TEST_CASE("plus and minus conventions agree away from atoms") {
  Fixture f;
  MultiCurve A = single_curve(*f.g, f.E("a1"));
  auto crp = multicurve_crossratio(f.ops, A, true);
  auto crm = multicurve_crossratio(f.ops, A, false);
  Axis ax = f.g->axis(f.E("a1"));
  BoundaryPoint a = boundary_from_angle(ax.repelling.angle() + 0.07);
  BoundaryPoint b = boundary_from_angle(ax.attracting.angle() - 0.07);
  BoundaryPoint c = boundary_from_angle(ax.attracting.angle() + 0.07);
  BoundaryPoint d = boundary_from_angle(ax.repelling.angle() - 0.07);
  CHECK(crp.eval(a, b, c, d) == doctest::Approx(crm.eval(a, b, c, d)));
}
