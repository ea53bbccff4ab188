#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "gcdual/crossratio.hpp"
#include "gcdual/currents.hpp"
#include "oracles.hpp"

using namespace gcdual;

namespace {
constexpr double kPi = 3.14159265358979323846;

struct Fixture {
  std::shared_ptr<const Group> g = Group::make(GroupMode::Genus2Octagon);
  std::shared_ptr<const CurveOps> ops = std::make_shared<CurveOps>(g);
  GroupElement E(const char* s) const { return g->element(s); }

  RHLiftSystem quadrant_box(double phase = 0.0, const char* base = "a1") const {
    std::array<BoundaryPoint, 4> t;
    for (int k = 0; k < 4; k++) t[k] = boundary_from_angle(phase + k * kPi / 2);
    return find_rh_box(*ops, E(base), t, 20.0 * kPi / 180.0);
  }
};
}  // namespace

TEST_CASE("find_rh_box produces a validated type-1 system") {
  Fixture f;
  RHLiftSystem sys = f.quadrant_box();
  CHECK(sys.type == 1);
  // orbit identity a C d B = 1
  Word closure = f.g->reduce_word(
      concat(concat(sys.a.word, inverse_word(sys.c.word)),
             concat(sys.d.word, inverse_word(sys.b.word))));
  CHECK(closure.empty());
  // re-validation is stable
  RHLiftSystem again = validate_rh_system(*f.ops, sys.x, sys.p1, sys.q1, sys.p2, sys.q2);
  CHECK(again.a.word == sys.a.word);
}

TEST_CASE("validate_rh_system rejects broken systems") {
  Fixture f;
  RHLiftSystem sys = f.quadrant_box();
  // p1 = x p2 makes p1 P2 a power of x: condition (1)
  CHECK_THROWS_AS(validate_rh_system(*f.ops, sys.x, f.g->multiply(sys.x, sys.p2), sys.q1,
                                     sys.p2, sys.q2),
                  GcdError);
  // identical q's also violate condition (1)
  CHECK_THROWS_AS(validate_rh_system(*f.ops, sys.x, sys.p1, sys.q1, sys.p2, sys.q1),
                  GcdError);
  // swapping q1 and q2 breaks the corner order or the crossing conditions
  CHECK_THROWS_AS(validate_rh_system(*f.ops, sys.x, sys.p1, sys.q2, sys.p2, sys.q1),
                  GcdError);
  // non-simple base
  CHECK_THROWS_AS(validate_rh_system(*f.ops, f.E("a1 a1 b1 b1"), sys.p1, sys.q1, sys.p2,
                                     sys.q2),
                  GcdError);
  // corner targets must be spread out
  std::array<BoundaryPoint, 4> tight;
  for (int k = 0; k < 4; k++) tight[k] = boundary_from_angle(0.05 * k);
  CHECK_THROWS_AS(find_rh_box(*f.ops, f.E("a1"), tight, 0.2), GcdError);
}

TEST_CASE("estimator basics: zero functional and positivity") {
  Fixture f;
  RHLiftSystem sys = f.quadrant_box();
  auto est = box_measure_estimate(zero_functional(f.g), sys, 40, 1e-7);
  CHECK(est.converged);
  CHECK(est.value == doctest::Approx(0.0));

  auto hyp = hyperbolic_length_functional(f.g);
  auto eh = box_measure_estimate(hyp, sys, 40, 1e-7);
  CHECK(eh.converged);
  CHECK(eh.value >= -1e-6);
}

TEST_CASE("estimates match the Liouville closed form") {
  Fixture f;
  auto hyp = hyperbolic_length_functional(f.g);
  for (double phase : {0.0, 0.35, 0.8}) {
    RHLiftSystem sys = f.quadrant_box(phase);
    auto est = box_measure_estimate(hyp, sys, 40, 1e-9);
    CHECK(est.converged);
    CHECK(est.value ==
          doctest::Approx(liouville_box_measure(sys.box)).epsilon(1e-8));
  }
}

TEST_CASE("estimates match box counts for multicurve currents") {
  Fixture f;
  auto iA = intersection_functional(f.ops, single_curve(*f.g, f.E("a1")));
  // base the box on the disjoint handle so a1-lifts cross it transversally
  RHLiftSystem sys = f.quadrant_box(0.35, "a2");
  auto est = box_measure_estimate(iA, sys, 30, 1e-9);
  CHECK(est.converged);
  double direct = f.ops->box_count(single_curve(*f.g, f.E("a1")), sys.box);
  CHECK(est.value == doctest::Approx(direct).epsilon(1e-9));
  // the estimator sequence is eventually constant for integer currents
  CHECK(std::fabs(est.value - std::round(2 * est.value) / 2) < 1e-9);
}

TEST_CASE("translation and reparametrization invariance") {
  Fixture f;
  auto hyp = hyperbolic_length_functional(f.g);
  RHLiftSystem sys = f.quadrant_box();
  auto rep0 = invariance_check(hyp, *f.ops, sys, f.g->identity(), 40, 1e-8);
  CHECK(rep0.translation_dev == doctest::Approx(0.0));
  auto rep = invariance_check(hyp, *f.ops, sys, f.E("a1"), 40, 1e-8);
  CHECK(rep.max_dev < 1e-6);
  auto iA = intersection_functional(f.ops, single_curve(*f.g, f.E("a1")));
  RHLiftSystem sys_a2 = f.quadrant_box(0.0, "a2");
  auto repi = invariance_check(iA, *f.ops, sys_a2, f.E("b2"), 30, 1e-9);
  CHECK(repi.max_dev < 1e-9);
}

TEST_CASE("side-by-side additivity") {
  Fixture f;
  // two abutting boxes sharing p1, p2 and the middle lift
  std::array<BoundaryPoint, 4> t1, t2;
  double eps = 14.0 * kPi / 180.0;
  t1[0] = boundary_from_angle(0.0);
  t1[1] = boundary_from_angle(kPi / 2);
  t1[2] = boundary_from_angle(kPi);
  t1[3] = boundary_from_angle(kPi + 0.9);
  RHLiftSystem sys1 = find_rh_box(*f.ops, f.E("a2"), t1, eps);
  // build the second system on the same lifts, with a fresh upper corner
  std::vector<GroupElement> q3s;
  Axis ax = f.g->axis(f.E("a2"));
  BoundaryPoint target = boundary_from_angle(kPi - 0.85);
  f.g->ball(5, [&](const GroupElement& u) {
    if (q3s.size() >= 8) return;
    BoundaryPoint up = u.iso.apply(ax.attracting), um = u.iso.apply(ax.repelling);
    constexpr double tau = 2 * kPi;
    auto near = [&](const BoundaryPoint& p) {
      double gap = target.ccw_gap_to(p);
      return gap < eps || tau - gap < eps;
    };
    if (!near(up) || !near(um)) return;
    double sp = std::fmod(target.ccw_gap_to(up) + eps, tau);
    double sm = std::fmod(target.ccw_gap_to(um) + eps, tau);
    if (sm < sp) q3s.push_back(u);
  });
  REQUIRE(!q3s.empty());
  auto hyp = hyperbolic_length_functional(f.g);
  bool done = false;
  for (const auto& q3 : q3s) {
    try {
      RHLiftSystem sys2 =
          validate_rh_system(*f.ops, sys1.x, sys1.p1, sys1.q2, sys1.p2, q3);
      double dev = sidebyside_check(hyp, *f.ops, sys1, sys2, 40, 1e-8);
      CHECK(dev < 1e-6);
      auto iA = intersection_functional(f.ops, single_curve(*f.g, f.E("a1")));
      double devi = sidebyside_check(iA, *f.ops, sys1, sys2, 30, 1e-9);
      CHECK(devi < 1e-9);
      done = true;
      break;
    } catch (const GcdError&) {
    }
  }
  CHECK(done);
  // systems that do not share lifts are rejected
  RHLiftSystem other = f.quadrant_box(0.8, "a2");
  CHECK_THROWS_AS(sidebyside_check(hyp, *f.ops, sys1, other, 20, 1e-6), GcdError);
}

TEST_CASE("length recovery from the dual current") {
  Fixture f;
  auto hyp = hyperbolic_length_functional(f.g);
  for (const char* w : {"a1 b1", "b2 a1"}) {
    auto rr = recover_length(hyp, *f.ops, f.E("a1"), f.E(w), 40, 1e-7);
    CHECK(rr.converged);
    CHECK(rr.value == doctest::Approx(hyp(f.E(w))).epsilon(1e-6));
  }
  auto iB = intersection_functional(f.ops, single_curve(*f.g, f.E("b1")));
  auto ri = recover_length(iB, *f.ops, f.E("a1"), f.E("a1"), 40, 1e-9);
  CHECK(ri.converged);
  CHECK(ri.value == doctest::Approx(1.0));
  auto rz = recover_length(zero_functional(f.g), *f.ops, f.E("a1"), f.E("b1"), 20, 1e-9);
  CHECK(rz.value == doctest::Approx(0.0));
}

TEST_CASE("Liouville masses in closed form") {
  auto bp = [](double v) { return BoundaryPoint::finite(v); };
  GeodesicBox B{bp(0), bp(1), bp(2), bp(3)};
  CHECK(liouville_box_measure(B) == doctest::Approx(std::log(4.0 / 3.0)).epsilon(1e-12));
  CHECK(liouville_box_measure(complement_box(B)) ==
        doctest::Approx(std::log(4.0)).epsilon(1e-12));
  // fundamental box of diag(2, 1/2) with transversal -1 has mass l = 2 ln 2
  GeodesicBox fund{bp(0), BoundaryPoint::infinity(), bp(-1), bp(-0.25)};
  CHECK(liouville_box_measure(fund) == doctest::Approx(2 * std::log(2.0)).epsilon(1e-12));
  // repeated corners are rejected
  CHECK_THROWS_AS(liouville_box_measure(GeodesicBox{bp(0), bp(0), bp(1), bp(2)}), GcdError);
}

TEST_CASE("Bonahon identity on seeded boxes") {
  std::mt19937_64 rng(66100);
  std::uniform_real_distribution<double> uni(0.0, 2 * kPi);
  int done = 0;
  while (done < 50) {
    double a[4];
    for (double& v : a) v = uni(rng);
    std::sort(a, a + 4);
    bool ok = true;
    for (int i = 0; i < 3; i++)
      if (a[i + 1] - a[i] < 0.1) ok = false;
    if (!ok || a[0] + 2 * kPi - a[3] < 0.1) continue;
    GeodesicBox B{boundary_from_angle(a[0]), boundary_from_angle(a[1]),
                  boundary_from_angle(a[2]), boundary_from_angle(a[3])};
    double m = liouville_box_measure(B);
    double mp = liouville_box_measure(complement_box(B));
    CHECK(std::fabs(std::exp(-m) + std::exp(-mp) - 1.0) < 1e-12);
    done++;
  }
}
