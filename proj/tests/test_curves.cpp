#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "gcdual/curves.hpp"
#include "oracles.hpp"

using namespace gcdual;

namespace {
struct Fixture {
  std::shared_ptr<const Group> g = Group::make(GroupMode::Genus2Octagon);
  CurveOps ops{g};
  GroupElement E(const char* s) const { return g->element(s); }
  MultiCurve C(const char* s, double w = 1.0) const {
    return single_curve(*g, g->element(s), w);
  }
};
}  // namespace

TEST_CASE("handle intersection pattern") {
  Fixture f;
  CHECK(f.ops.intersection_classes(f.E("a1"), f.E("b1")) == 1);
  CHECK(f.ops.intersection_classes(f.E("a2"), f.E("b2")) == 1);
  CHECK(f.ops.intersection_classes(f.E("a1"), f.E("a2")) == 0);
  CHECK(f.ops.intersection_classes(f.E("a1"), f.E("b2")) == 0);
  CHECK(f.ops.intersection_classes(f.E("b1"), f.E("a2")) == 0);
  CHECK(f.ops.intersection_classes(f.E("b1"), f.E("b2")) == 0);
  // the separating commutator avoids both handles' generators
  CHECK(f.ops.intersection_classes(f.E("a1 b1 A1 B1"), f.E("a1")) == 0);
  CHECK(f.ops.intersection_classes(f.E("a1 b1 A1 B1"), f.E("b2")) == 0);
}

TEST_CASE("self intersections of small classes") {
  Fixture f;
  CHECK(f.ops.self_intersection(f.E("a1")) == 0);
  CHECK(f.ops.self_intersection(f.E("a1 a1")) == 0);
  CHECK(f.ops.self_intersection(f.E("a1 b1 A1 B1")) == 0);
  // a^2 b is the simple (2,1) class in its handle; both independent routes
  // agree on 0 (see the cross-check case below)
  CHECK(f.ops.self_intersection(f.E("a1 a1 b1")) == 0);
  // a^2 b^2 has one essential self-crossing
  CHECK(f.ops.self_intersection(f.E("a1 a1 b1 b1")) == 1);
}

TEST_CASE("corridor counts agree with the word-ball oracle") {
  Fixture f;
  struct Case {
    const char* a;
    const char* b;
  } cases[] = {
      {"a1", "b1"},       {"a1", "a2"},          {"a1 b1 A1 B1", "a1"},
      {"a1 a1 b1", "b1"}, {"a1 b1", "a2 b2"},    {"a1 b1", "a1"},
      {"a2 b1", "a1"},    {"a1 a1 b1", "a1 b1"}, {"a1 B1", "b1"},
  };
  for (const auto& c : cases) {
    long long corridor = f.ops.intersection_classes(f.E(c.a), f.E(c.b));
    long long naive = oracles::naive_lift_count(*f.g, f.E(c.a), f.E(c.b), 6);
    CAPTURE(c.a);
    CAPTURE(c.b);
    CHECK(corridor == naive);
  }
}

TEST_CASE("torus-slope determinant inside one handle") {
  // (p,q) vs (r,s) curves of one handle cross |ps - qr| times
  Fixture f;
  CHECK(f.ops.intersection_classes(f.E("a1 a1 b1"), f.E("b1")) == 2);
  CHECK(f.ops.intersection_classes(f.E("a1 a1 b1"), f.E("a1")) == 1);
  CHECK(f.ops.intersection_classes(f.E("a1 a1 b1"), f.E("a1 b1")) == 1);
}

TEST_CASE("intersection is symmetric and stable under powers") {
  Fixture f;
  std::mt19937_64 rng(4401);
  auto reps = oracles::class_sample(*f.g, 2);
  for (int i = 0; i < 15; i++) {
    const auto& a = reps[rng() % reps.size()];
    const auto& b = reps[rng() % reps.size()];
    long long ab = f.ops.intersection_classes(a, b);
    CHECK(f.ops.intersection_classes(b, a) == ab);
    for (int n = 2; n <= 4; n++)
      CHECK(f.ops.intersection_classes(f.g->power(a, n), b) == n * ab);
  }
}

TEST_CASE("multicurve arithmetic is bilinear") {
  Fixture f;
  MultiCurve two_a1 = f.C("a1", 2.0);
  MultiCurve b1 = f.C("b1");
  CHECK(f.ops.intersection_number(two_a1, b1) == doctest::Approx(2.0));
  MultiCurve mixed = make_multicurve(
      *f.g, {{f.E("a1"), 1.0}, {f.E("a2"), 3.0}});
  MultiCurve target = make_multicurve(*f.g, {{f.E("b1"), 1.0}, {f.E("b2"), 1.0}});
  CHECK(f.ops.intersection_number(mixed, target) == doctest::Approx(1.0 + 3.0));
}

TEST_CASE("multicurve construction rules") {
  Fixture f;
  // merging and nullification
  MultiCurve m = make_multicurve(
      *f.g, {{f.E("a1"), 1.0}, {f.E("b1 a1 B1"), 2.0}, {f.E("a2"), 0.0}});
  CHECK(m.components.size() == 1);
  CHECK(m.components[0].weight == doctest::Approx(3.0));
  CHECK_THROWS_AS(make_multicurve(*f.g, {{f.E("a1"), -1.0}}), GcdError);
  CHECK_THROWS_AS(make_multicurve(*f.g, {{f.g->identity(), 1.0}}), GcdError);
  // JSON round trip
  MultiCurve parsed = multicurve_from_json(
      *f.g, "[{\"word\": \"a1 b1 A1\", \"weight\": 1.5}]");
  CHECK(parsed.components.size() == 1);
  CHECK(parsed.components[0].weight == doctest::Approx(1.5));
  CHECK(f.g->conjugate_classes(parsed.components[0].g, f.E("b1")));
}

TEST_CASE("algebraic intersection in the symplectic basis") {
  Fixture f;
  CHECK(f.ops.algebraic_classes(f.E("a1"), f.E("b1")) == 1);
  CHECK(f.ops.algebraic_classes(f.E("a2"), f.E("b2")) == 1);
  CHECK(f.ops.algebraic_classes(f.E("a1"), f.E("a2")) == 0);
  CHECK(f.ops.algebraic_classes(f.E("a1 b1"), f.E("a1")) == -1);
  CHECK(f.ops.algebraic_classes(f.E("b1"), f.E("a1")) == -1);
  auto fr = Group::make(GroupMode::FreeSchottky);
  CurveOps fops(fr);
  CHECK_THROWS_AS(fops.algebraic_classes(fr->element("a"), fr->element("b")), GcdError);
}

TEST_CASE("asymmetric intersection equals the right-handed count") {
  Fixture f;
  // the (a1, b1) crossing is right-handed
  CHECK(f.ops.right_crossing_count(f.E("a1"), f.E("b1")) == 1);
  CHECK(f.ops.right_crossing_count(f.E("a1"), f.E("B1")) == 0);
  CHECK(f.ops.asymmetric_intersection(f.C("a1"), f.C("b1")) == doctest::Approx(1.0));
  CHECK(f.ops.asymmetric_intersection(f.C("a1"), f.C("B1")) == doctest::Approx(0.0));
  // the two orientations sum to the geometric count
  CHECK(f.ops.asymmetric_intersection(f.C("a1"), f.C("b1")) +
            f.ops.asymmetric_intersection(f.C("a1"), f.C("B1")) ==
        doctest::Approx(1.0));
  // simple class against itself
  CHECK(f.ops.asymmetric_intersection(f.C("a1"), f.C("a1")) == doctest::Approx(0.0));

  std::mt19937_64 rng(4402);
  auto reps = oracles::class_sample(*f.g, 2);
  int checked = 0;
  for (int i = 0; i < 40 && checked < 25; i++) {
    const auto& a = reps[rng() % reps.size()];
    const auto& b = reps[rng() % reps.size()];
    if (f.g->common_powers(a, b)) continue;
    double formula = 0.5 * (double)f.ops.intersection_classes(a, b) +
                     0.5 * (double)f.ops.algebraic_classes(a, b);
    CHECK((double)f.ops.right_crossing_count(a, b) == doctest::Approx(formula));
    checked++;
  }
  CHECK(checked >= 20);
}

TEST_CASE("doubled zero-homology collections have no asymmetric excess") {
  Fixture f;
  // h(a1) + h(A1) + h(a2 b2) + h(B2 A2) = 0; double every component
  MultiCurve doubled = make_multicurve(
      *f.g, {{f.E("a1"), 1.0},
             {f.E("A1"), 1.0},
             {f.E("a2 b2"), 1.0},
             {f.E("B2 A2"), 1.0}});
  for (const char* d : {"b1", "a1 b1", "b2", "a2 b1"}) {
    MultiCurve D = f.C(d);
    CHECK(f.ops.algebraic_intersection(doubled, D) == doctest::Approx(0.0));
    CHECK(f.ops.asymmetric_intersection(doubled, D) -
              0.5 * f.ops.intersection_number(doubled, D) ==
          doctest::Approx(0.0));
  }
}

TEST_CASE("box counts around a single lift") {
  Fixture f;
  Axis ax = f.g->axis(f.E("a1"));
  double rep = ax.repelling.angle(), att = ax.attracting.angle();
  auto bp = [](double a) { return BoundaryPoint::finite(-1.0 / std::tan(a / 2.0)); };
  GeodesicBox tight{bp(rep - 0.05), bp(rep + 0.05), bp(att - 0.05), bp(att + 0.05)};
  MultiCurve a1 = f.C("a1", 1.0);
  CHECK(f.ops.box_count(a1, tight) == doctest::Approx(1.0));
  MultiCurve heavy = f.C("a1", 2.5);
  CHECK(f.ops.box_count(heavy, tight) == doctest::Approx(2.5));
  // disjoint box on the far side
  GeodesicBox empty{bp(rep - 0.05), bp(rep - 0.02), bp(rep + 0.02), bp(rep + 0.05)};
  CHECK(f.ops.box_count(a1, empty) == doctest::Approx(0.0));
  // side-by-side additivity splitting the second factor
  GeodesicBox left{bp(rep - 0.05), bp(rep + 0.05), bp(att - 0.05), bp(att + 0.001)};
  GeodesicBox right{bp(rep - 0.05), bp(rep + 0.05), bp(att + 0.001), bp(att + 0.05)};
  CHECK(f.ops.box_count(a1, left) + f.ops.box_count(a1, right) ==
        doctest::Approx(f.ops.box_count(a1, tight)));
}

TEST_CASE("smoothing inequalities for intersection with a fixed multicurve") {
  Fixture f;
  MultiCurve C = make_multicurve(*f.g, {{f.E("a1"), 1.0}, {f.E("a2 b2"), 1.0}});
  auto iC = [&](const GroupElement& e) {
    return f.ops.intersection_number(C, single_curve(*f.g, e));
  };
  std::mt19937_64 rng(4403);
  auto reps = oracles::class_sample(*f.g, 2);
  int checked = 0;
  for (int i = 0; i < 60 && checked < 20; i++) {
    const auto& a = reps[rng() % reps.size()];
    const auto& b = reps[rng() % reps.size()];
    PairClass pc;
    try {
      pc = classify_pair(*f.g, a, b);
    } catch (const GcdError&) {
      continue;
    }
    if (!is_crossing(pc)) continue;
    double lhs = iC(a) + iC(b);
    CHECK(lhs >= iC(f.g->multiply(a, b)) - 1e-9);
    CHECK(lhs >= iC(f.g->multiply(a, f.g->inverse(b))) - 1e-9);
    checked++;
  }
  CHECK(checked >= 15);
}

TEST_CASE("randomized corridor-vs-oracle consistency in both modes") {
  for (auto mode : {GroupMode::Genus2Octagon, GroupMode::FreeSchottky}) {
    auto g = Group::make(mode);
    CurveOps ops(g);
    auto reps = oracles::class_sample(*g, 3);
    std::mt19937_64 rng(mode == GroupMode::Genus2Octagon ? 8801 : 8802);
    for (int it = 0; it < 24; it++) {
      const auto& a = reps[rng() % reps.size()];
      const auto& b = reps[rng() % reps.size()];
      long long c = ops.intersection_classes(a, b);
      CAPTURE(g->to_string(a.word));
      CAPTURE(g->to_string(b.word));
      CHECK(c == ops.intersection_classes(b, a));
      CHECK(c == oracles::naive_lift_count(*g, a, b, 6));
    }
  }
}

TEST_CASE("free-mode intersections work on the Schottky pair") {
  auto fr = Group::make(GroupMode::FreeSchottky);
  CurveOps ops(fr);
  auto ab = fr->element("a b"), ba = fr->element("b a");
  CHECK(ops.intersection_classes(ab, ba) ==
        oracles::naive_lift_count(*fr, ab, ba, 6));
  CHECK(ops.intersection_classes(fr->element("a"), fr->element("b")) == 0);
}
