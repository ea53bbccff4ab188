#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "gcdual/sgroup.hpp"
#include "oracles.hpp"

using namespace gcdual;

TEST_CASE("free reduction and Dehn reduction") {
  auto g2 = Group::make(GroupMode::Genus2Octagon);
  CHECK(g2->element("a1 A1").word.empty());
  CHECK(g2->element("a1 b1 B1").word == g2->parse("a1"));
  CHECK(g2->element("a1 b1 A1 B1 a2 b2 A2 B2").word.empty());
  // more than half the relator collapses to the shorter complement
  Word long_half = g2->parse("a1 b1 A1 B1 a2");
  CHECK(g2->reduce_word(long_half).size() == 3);
}

TEST_CASE("genus2 startup invariants") {
  auto g2 = Group::make(GroupMode::Genus2Octagon);
  for (int k = 1; k <= 4; k++) {
    CHECK(g2->generator(k).is_hyperbolic());
    CHECK(std::fabs(g2->generator(k).trace()) ==
          doctest::Approx(2 * (1 + std::sqrt(2.0))).epsilon(1e-12));
  }
  CHECK(g2->eval(g2->relator()).is_identity(1e-7));
}

TEST_CASE("conjugacy normal forms") {
  auto g2 = Group::make(GroupMode::Genus2Octagon);
  CHECK(g2->conjugacy_normal_form(g2->parse("a1 b1 A1")) == g2->parse("b1"));
  CHECK(g2->conjugate_classes(g2->element("b1 a1"), g2->element("a1 b1")));
  // distinct traces certify distinct classes
  auto ab = g2->element("a1 b1"), aB = g2->element("a1 B1");
  CHECK(std::fabs(std::fabs(ab.iso.trace()) - std::fabs(aB.iso.trace())) > 1e-6);
  CHECK(!g2->conjugate_classes(ab, aB));
  CHECK(g2->conjugacy_normal_form(Word{}).empty());
}

TEST_CASE("half-relator spellings share keys and classes") {
  auto g2 = Group::make(GroupMode::Genus2Octagon);
  auto w1 = g2->element("a1 b1 A1 B1");
  auto w2 = g2->element("b2 a2 B2 A2");
  CHECK(g2->element_key(w1.word) == g2->element_key(w2.word));
  CHECK(g2->conjugate_classes(w1, w2));
  CHECK(w1.iso.approx_equal(w2.iso, 1e-9));
}

TEST_CASE("ball enumeration counts") {
  auto fr = Group::make(GroupMode::FreeSchottky);
  CHECK(fr->ball(1).size() == 5);   // e, a, A, b, B
  CHECK(fr->ball(2).size() == 17);  // 1 + 4 + 12
  auto g2 = Group::make(GroupMode::Genus2Octagon);
  CHECK(g2->ball(1).size() == 9);
  CHECK_THROWS_AS(g2->ball(g2->max_ball_radius() + 1, [](const GroupElement&) {}), GcdError);
}

TEST_CASE("reduce preserves the evaluated isometry") {
  auto g2 = Group::make(GroupMode::Genus2Octagon);
  std::mt19937_64 rng(881);
  auto ball = g2->ball(3);
  for (int i = 0; i < 60; i++) {
    const auto& w = ball[rng() % ball.size()];
    Word padded = concat(w.word, concat(g2->parse("a2 A2"), g2->relator()));
    GroupElement red = g2->element(padded);
    CHECK(red.iso.approx_equal(w.iso, 1e-7));
  }
}

TEST_CASE("normal form is invariant under conjugation") {
  for (auto mode : {GroupMode::Genus2Octagon, GroupMode::FreeSchottky}) {
    auto g = Group::make(mode);
    std::mt19937_64 rng(882);
    auto ball3 = g->ball(3);
    auto reps = oracles::class_sample(*g, 2);
    for (int i = 0; i < 50; i++) {
      const auto& w = reps[rng() % reps.size()];
      const auto& k = ball3[rng() % ball3.size()];
      CHECK(g->conjugacy_normal_form(g->conjugate(k, w).word) ==
            g->conjugacy_normal_form(w.word));
    }
  }
}

TEST_CASE("primitive roots and common powers") {
  auto g2 = Group::make(GroupMode::Genus2Octagon);
  auto a = g2->element("a1");
  auto [r, k] = g2->primitive_root(g2->power(a, 3));
  CHECK(k == 3);
  CHECK(g2->conjugate_classes(r, a));
  CHECK(g2->common_powers(a, g2->power(a, 2)));
  CHECK(!g2->common_powers(a, g2->element("b1")));
  // conjugates of a are not common powers of a
  CHECK(!g2->common_powers(a, g2->conjugate(g2->element("b1"), a)));
}

TEST_CASE("word length over generating sets") {
  auto g2 = Group::make(GroupMode::Genus2Octagon);
  GeneratingSet std_gs = standard_generating_set(*g2);
  CHECK(word_length(*g2, g2->element("a1"), std_gs) == doctest::Approx(1.0));
  CHECK(word_length(*g2, g2->identity(), std_gs) == doctest::Approx(0.0));
  CHECK(word_length(*g2, g2->element("a1 b1 A1"), std_gs) == doctest::Approx(1.0));

  auto fr = Group::make(GroupMode::FreeSchottky);
  GeneratingSet abb2;
  abb2.name = "abb2";
  abb2.items = {{fr->element("a"), 1.0}, {fr->element("b"), 1.0}, {fr->element("b b"), 1.0}};
  CHECK(word_length(*fr, fr->element("b b b"), abb2) == doctest::Approx(2.0));
  CHECK(word_length(*fr, fr->element("b b"), abb2) == doctest::Approx(1.0));

  GeneratingSet weighted;
  weighted.items = {{fr->element("a"), 2.0}, {fr->element("b"), 1.0}};
  CHECK(word_length(*fr, fr->element("a"), weighted) == doctest::Approx(2.0));
}

TEST_CASE("word length triangle inequality and conjugation invariance") {
  auto fr = Group::make(GroupMode::FreeSchottky);
  GeneratingSet gs = standard_generating_set(*fr);
  std::mt19937_64 rng(883);
  auto reps = oracles::class_sample(*fr, 3);
  for (int i = 0; i < 30; i++) {
    const auto& v = reps[rng() % reps.size()];
    const auto& w = reps[rng() % reps.size()];
    double lv = word_length(*fr, v, gs), lw = word_length(*fr, w, gs);
    double lvw = word_length(*fr, fr->multiply(v, w), gs);
    CHECK(lvw <= lv + lw + 1e-12);
    const auto& k = reps[rng() % reps.size()];
    CHECK(word_length(*fr, fr->conjugate(k, v), gs) == doctest::Approx(lv));
  }
}

TEST_CASE("genus2 word length triangle inequality") {
  auto g2 = Group::make(GroupMode::Genus2Octagon);
  GeneratingSet gs = standard_generating_set(*g2);
  std::mt19937_64 rng(884);
  auto reps = oracles::class_sample(*g2, 3);
  for (int i = 0; i < 40; i++) {
    const auto& v = reps[rng() % reps.size()];
    const auto& w = reps[rng() % reps.size()];
    double lv = word_length(*g2, v, gs), lw = word_length(*g2, w, gs);
    CHECK(word_length(*g2, g2->multiply(v, w), gs) <= lv + lw + 1e-12);
    const auto& k = reps[rng() % reps.size()];
    CHECK(word_length(*g2, g2->conjugate(k, v), gs) == doctest::Approx(lv));
  }
}

TEST_CASE("stable length extrapolation") {
  auto fr = Group::make(GroupMode::FreeSchottky);
  GeneratingSet abb2;
  abb2.items = {{fr->element("a"), 1.0}, {fr->element("b"), 1.0}, {fr->element("b b"), 1.0}};
  auto wl = [&](const GroupElement& e) { return word_length(*fr, e, abb2); };
  auto res = stable_length(*fr, fr->element("b"), 12, wl);
  CHECK(res.value == doctest::Approx(0.5));
  CHECK(res.spread <= 1e-12);

  auto hyp = [&](const GroupElement& e) { return translation_length(e.iso); };
  auto res2 = stable_length(*fr, fr->element("a b"), 10, hyp);
  CHECK(res2.value == doctest::Approx(translation_length(fr->element("a b").iso)));

  auto zero = [&](const GroupElement&) { return 0.0; };
  CHECK(stable_length(*fr, fr->element("a"), 8, zero).value == doctest::Approx(0.0));
}

TEST_CASE("free mode parsing accepts both alphabets") {
  auto fr = Group::make(GroupMode::FreeSchottky);
  CHECK(fr->parse("a1 B1") == fr->parse("a B"));
  CHECK_THROWS_AS(fr->parse("c"), GcdError);
}
