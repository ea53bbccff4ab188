#include "gcdual/boundary.hpp"

#include <array>
#include <cmath>

namespace gcdual {

const char* to_string(PairClass c) {
  switch (c) {
    case PairClass::RCross: return "RCross";
    case PairClass::LCross: return "LCross";
    case PairClass::RParallel: return "RParallel";
    case PairClass::LParallel: return "LParallel";
    case PairClass::RAntiParallel: return "RAntiParallel";
    case PairClass::LAntiParallel: return "LAntiParallel";
  }
  return "?";
}

bool is_crossing(PairClass c) { return c == PairClass::RCross || c == PairClass::LCross; }
bool is_parallel(PairClass c) {
  return c == PairClass::RParallel || c == PairClass::LParallel;
}
bool is_anti_parallel(PairClass c) {
  return c == PairClass::RAntiParallel || c == PairClass::LAntiParallel;
}

const char* to_string(SplitState s) {
  switch (s) {
    case SplitState::ASided: return "ASided";
    case SplitState::Splitting: return "Splitting";
    case SplitState::BSided: return "BSided";
  }
  return "?";
}

static void require_distinct(const BoundaryPoint& p, const BoundaryPoint& q, double eps,
                             const char* who) {
  if (p.approx_equal(q, eps))
    throw GcdError("boundary_ambiguity",
                   std::string(who) + ": endpoints coincide within eps_bdy (angles " +
                       std::to_string(p.angle()) + ", " + std::to_string(q.angle()) + ")");
}

bool ccw(const BoundaryPoint& x, const BoundaryPoint& y, const BoundaryPoint& z,
         double eps_bdy) {
  require_distinct(x, y, eps_bdy, "ccw");
  require_distinct(y, z, eps_bdy, "ccw");
  require_distinct(x, z, eps_bdy, "ccw");
  return x.ccw_gap_to(y) < x.ccw_gap_to(z);
}

PairClass classify_axes(const Axis& a, const Axis& b, double eps_bdy) {
  const BoundaryPoint& ap = a.attracting;
  const BoundaryPoint& am = a.repelling;
  const BoundaryPoint& bp = b.attracting;
  const BoundaryPoint& bm = b.repelling;
  std::array<const BoundaryPoint*, 4> pts = {&ap, &am, &bp, &bm};
  const char* names[4] = {"a+", "a-", "b+", "b-"};
  for (int i = 0; i < 4; i++)
    for (int j = i + 1; j < 4; j++)
      require_distinct(*pts[i], *pts[j], eps_bdy,
                       (std::string("classify ") + names[i] + "/" + names[j]).c_str());

  double arc = ap.ccw_gap_to(am);  // ccw length of (a+, a-)
  double gp = ap.ccw_gap_to(bp);
  double gm = ap.ccw_gap_to(bm);
  bool bp_in_1 = gp < arc;  // b+ in (a+, a-)
  bool bm_in_1 = gm < arc;

  if (bp_in_1 && !bm_in_1) return PairClass::RCross;
  if (!bp_in_1 && bm_in_1) return PairClass::LCross;
  if (!bp_in_1 && !bm_in_1) {
    // both in (a-, a+): order from a-
    double hm = am.ccw_gap_to(bm), hp = am.ccw_gap_to(bp);
    return hm < hp ? PairClass::RParallel : PairClass::RAntiParallel;
  }
  // both in (a+, a-): order from a+
  return gp < gm ? PairClass::LParallel : PairClass::LAntiParallel;
}

double parallelogram_residual_checked(const Isometry& g, const Isometry& h, double eps_bdy,
                                      double eps_hyp) {
  PairClass pc = classify_axes(axis_of(g, eps_hyp), axis_of(h, eps_hyp), eps_bdy);
  if (!is_crossing(pc))
    throw GcdError("precondition", "parallelogram residual requires crossing axes");
  return parallelogram_residual(g, h, eps_hyp);
}

PairClass classify_pair(const Group& g, const GroupElement& a, const GroupElement& b) {
  const double eh = g.tol().eps_hyp, eb = g.tol().eps_bdy;
  if (!a.iso.is_hyperbolic(eh) || !b.iso.is_hyperbolic(eh))
    throw GcdError("not_hyperbolic", "classify_pair requires hyperbolic elements");
  if (g.common_powers(a, b))
    throw GcdError("common_power", "classify_pair: arguments are common powers");
  Axis aa = axis_of(a.iso, eh), ab = axis_of(b.iso, eh);
  for (const BoundaryPoint* p : {&aa.attracting, &aa.repelling})
    for (const BoundaryPoint* q : {&ab.attracting, &ab.repelling})
      if (p->approx_equal(*q, eb))
        throw GcdError("degenerate_pair", "classify_pair: shared axis endpoint");
  return classify_axes(aa, ab, eb);
}

SplitState split_state(const Group& g, const GroupElement& a, const GroupElement& b) {
  PairClass pc = classify_pair(g, a, b);
  if (!is_parallel(pc))
    throw GcdError("precondition", "split_state requires a parallel pair");
  if (pc == PairClass::LParallel) return split_state(g, b, a);

  // R-parallel: ccw order a+, a-, b-, b+.
  const double eh = g.tol().eps_hyp, eb = g.tol().eps_bdy;
  Axis aa = axis_of(a.iso, eh), ab = axis_of(b.iso, eh);
  GroupElement aB = g.multiply(a, g.inverse(b));
  GroupElement Ba = g.multiply(g.inverse(b), a);
  if (!aB.iso.is_hyperbolic(eh) || !Ba.iso.is_hyperbolic(eh))
    throw GcdError("not_hyperbolic", "split_state: aB not hyperbolic");
  Axis x = axis_of(aB.iso, eh), y = axis_of(Ba.iso, eh);

  auto in_arc = [&](const BoundaryPoint& from, const BoundaryPoint& to,
                    const BoundaryPoint& p) {
    require_distinct(from, p, eb, "split_state");
    require_distinct(to, p, eb, "split_state");
    return from.ccw_gap_to(p) < from.ccw_gap_to(to);
  };
  const BoundaryPoint &apl = aa.attracting, &amn = aa.repelling;
  const BoundaryPoint &bpl = ab.attracting, &bmn = ab.repelling;

  // Splitting: endpoints of aB inside (b+, a+), endpoints of Ba inside (a-, b-).
  bool split = in_arc(bpl, apl, x.attracting) && in_arc(bpl, apl, x.repelling) &&
               in_arc(amn, bmn, y.attracting) && in_arc(amn, bmn, y.repelling);
  if (split) return SplitState::Splitting;
  bool bsided = in_arc(bmn, bpl, x.attracting) && in_arc(bmn, bpl, x.repelling) &&
                in_arc(bmn, bpl, y.attracting) && in_arc(bmn, bpl, y.repelling);
  if (bsided) return SplitState::BSided;
  bool asided = in_arc(apl, amn, x.attracting) && in_arc(apl, amn, x.repelling) &&
                in_arc(apl, amn, y.attracting) && in_arc(apl, amn, y.repelling);
  if (asided) return SplitState::ASided;
  throw GcdError("boundary_ambiguity", "split_state: trichotomy test inconclusive");
}

int find_splitting_exponent(const Group& g, const GroupElement& a, const GroupElement& b,
                            int smax) {
  PairClass pc = classify_pair(g, a, b);
  if (!is_parallel(pc))
    throw GcdError("precondition", "find_splitting_exponent requires a parallel pair");
  auto state_at = [&](int s) {
    return split_state(g, g.power(a, s), g.power(b, s));
  };
  for (int s = 1; s <= smax; s++) {
    if (state_at(s) == SplitState::Splitting) {
      if (state_at(s + 1) != SplitState::Splitting || state_at(s + 2) != SplitState::Splitting)
        throw GcdError("unstable_split", "splitting did not persist at s+1, s+2");
      return s;
    }
  }
  throw GcdError("bound_exceeded", "no splitting exponent <= smax");
}

bool crossing_closure_check(const Group& g, const GroupElement& a, const GroupElement& b,
                            const GroupElement& x, int n, int k) {
  if (classify_pair(g, a, x) != PairClass::RCross ||
      classify_pair(g, b, x) != PairClass::RCross)
    throw GcdError("precondition", "crossing_closure_check requires a, b R-crossing x");
  GroupElement xn = g.power(x, n);
  GroupElement xk = g.power(x, k);
  GroupElement axn = g.multiply(a, xn);
  GroupElement axnbxk = g.multiply(axn, g.multiply(b, xk));
  bool first = classify_pair(g, axn, x) == PairClass::RCross;
  bool second = classify_pair(g, axnbxk, x) == PairClass::RCross;
  return first && second;
}

}  // namespace gcdual
