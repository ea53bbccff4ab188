#include "gcdual/currents.hpp"

#include <algorithm>
#include <cmath>

namespace gcdual {

namespace {

Axis translated_axis(const Isometry& u, const Axis& base) {
  return Axis{u.apply(base.repelling), u.apply(base.attracting), base.length};
}

bool ccw_corners(const GeodesicBox& b, double eps) {
  // s1, s2, t2, t1 strictly ccw
  double g1 = b.s1.ccw_gap_to(b.s2);
  double g2 = b.s1.ccw_gap_to(b.t2);
  double g3 = b.s1.ccw_gap_to(b.t1);
  if (g1 < eps || g2 < eps || g3 < eps) return false;
  return g1 < g2 && g2 < g3;
}

}  // namespace

RHLiftSystem validate_rh_system(const CurveOps& ops, const GroupElement& x,
                                const GroupElement& p1, const GroupElement& q1,
                                const GroupElement& p2, const GroupElement& q2, int n0,
                                int window) {
  const Group& g = ops.group();
  if (x.is_identity() || !x.iso.is_hyperbolic(g.tol().eps_hyp))
    throw GcdError("precondition", "base x must be hyperbolic");
  if (g.primitive_root(x).second != 1)
    throw GcdError("precondition", "base x must be primitive");
  if (ops.self_intersection(x) != 0)
    throw GcdError("precondition", "base x must be simple");

  // (1) p1 P2 and Q1 q2 are not powers of x.
  GroupElement p1P2 = g.multiply(p1, g.inverse(p2));
  GroupElement Q1q2 = g.multiply(g.inverse(q1), q2);
  if (g.common_powers(p1P2, x))
    throw GcdError("rh_condition_1", "p1 P2 is a power of the base x");
  if (g.common_powers(Q1q2, x))
    throw GcdError("rh_condition_1", "Q1 q2 is a power of the base x");

  // (2) all four ora{p_i q_j} R-cross ora{x}.
  const GroupElement* ps[2] = {&p1, &p2};
  const GroupElement* qs[2] = {&q1, &q2};
  for (int i = 0; i < 2; i++)
    for (int j = 0; j < 2; j++) {
      GroupElement pq = g.multiply(*ps[i], *qs[j]);
      PairClass pc;
      try {
        pc = classify_pair(g, pq, x);
      } catch (const GcdError& e) {
        throw GcdError("rh_condition_2", "condition (2) p" + std::to_string(i + 1) + " q" +
                                             std::to_string(j + 1) + ": " + e.what());
      }
      if (pc != PairClass::RCross)
        throw GcdError("rh_condition_2", "ora{p" + std::to_string(i + 1) + " q" +
                                             std::to_string(j + 1) +
                                             "} does not R-cross ora{x}");
    }

  // (3) ora{q2 x^n p1} R-crosses ora{q1 x^n p2} on the tested window.
  // Window points whose endpoints degenerate below eps_bdy (nested family
  // members contracting onto a corner) are skipped and tallied; at least
  // one point must resolve, and every resolved point must R-cross.
  int resolved = 0;
  for (int n = n0; n <= n0 + window; n++) {
    GroupElement xn = g.power(x, n);
    GroupElement lhs = g.multiply(g.multiply(q2, xn), p1);
    GroupElement rhs = g.multiply(g.multiply(q1, xn), p2);
    PairClass pc;
    try {
      pc = classify_pair(g, lhs, rhs);
    } catch (const GcdError& e) {
      if (e.code() == "boundary_ambiguity") continue;
      throw GcdError("rh_condition_3", std::string("condition (3) at n = ") +
                                           std::to_string(n) + ": " + e.what());
    }
    resolved++;
    if (pc != PairClass::RCross)
      throw GcdError("rh_condition_3",
                     "diagonal crossing fails at n = " + std::to_string(n));
  }
  if (resolved == 0)
    throw GcdError("rh_condition_3", "condition (3) window entirely unresolvable");

  RHLiftSystem sys;
  sys.x = x;
  sys.p1 = p1;
  sys.q1 = q1;
  sys.p2 = p2;
  sys.q2 = q2;
  sys.a = g.multiply(p1, q1);
  sys.b = g.multiply(p1, q2);
  sys.c = g.multiply(p2, q1);
  sys.d = g.multiply(p2, q2);
  sys.n0 = n0;
  sys.window = window;
  Word closure = g.reduce_word(concat(
      concat(sys.a.word, inverse_word(sys.c.word)),
      concat(sys.d.word, inverse_word(sys.b.word))));
  if (!closure.empty()) throw GcdError("internal", "orbit identity aCdB != 1");

  Axis ax = g.axis(x);
  Axis l1 = translated_axis(g.inverse(p1).iso, ax);
  Axis l2 = translated_axis(g.inverse(p2).iso, ax);
  Axis r1 = translated_axis(q1.iso, ax);
  Axis r2 = translated_axis(q2.iso, ax);
  sys.box = GeodesicBox{l1.repelling, l2.repelling, r2.attracting, r1.attracting};
  if (!ccw_corners(sys.box, g.tol().eps_bdy))
    throw GcdError("rh_order", "box corners are not in ccw order");
  sys.type = 1;
  try {
    if (is_parallel(classify_axes(l1, l2, g.tol().eps_bdy))) sys.type++;
    if (is_parallel(classify_axes(r1, r2, g.tol().eps_bdy))) sys.type++;
  } catch (const GcdError&) {
    // nested-family slivers: the nesting count is a diagnostic only
  }
  return sys;
}

RHLiftSystem find_rh_box(const CurveOps& ops, const GroupElement& x,
                         const std::array<BoundaryPoint, 4>& targets, double eps, int L,
                         int n0, int window) {
  const Group& g = ops.group();
  for (int k = 0; k < 4; k++) {
    double gap = targets[k].ccw_gap_to(targets[(k + 1) % 4]);
    if (gap <= 2 * eps)
      throw GcdError("precondition",
                     "corner targets must be ccw with disjoint eps-neighborhoods");
  }
  Axis ax = g.axis(x);
  // Candidates per corner: translates with both endpoints eps-close to the
  // target, oriented (x+, x-) ccw for the left lifts and (x-, x+) for the
  // right ones.
  std::array<std::vector<GroupElement>, 4> cand;
  const size_t per_target = 24;
  g.ball(L, [&](const GroupElement& u) {
    BoundaryPoint up = u.iso.apply(ax.attracting);
    BoundaryPoint um = u.iso.apply(ax.repelling);
    for (int k = 0; k < 4; k++) {
      if (cand[k].size() >= per_target) continue;
      double gp = targets[k].ccw_gap_to(up), gm = targets[k].ccw_gap_to(um);
      constexpr double tau = 6.283185307179586476925286766559;
      auto near = [&](double gap) { return gap < eps || tau - gap < eps; };
      if (!near(gp) || !near(gm)) continue;
      // in-eps-arc ccw order relative to the arc start (target - eps)
      double sp = std::fmod(gp + eps, tau), sm = std::fmod(gm + eps, tau);
      bool plus_first = sp < sm;
      bool want_plus_first = k < 2;  // left lifts: (x+, x-); right: (x-, x+)
      if (plus_first == want_plus_first) cand[k].push_back(u);
    }
  });
  for (int k = 0; k < 4; k++)
    if (cand[k].empty())
      throw GcdError("search_exhausted",
                     "no lift found near corner target " + std::to_string(k + 1));

  // Deterministic sweep, small index sums first.
  size_t maxn = std::max({cand[0].size(), cand[1].size(), cand[2].size(), cand[3].size()});
  int tries = 0;
  for (size_t total = 0; total <= 4 * (maxn - 1); total++) {
    for (size_t i0 = 0; i0 <= total && i0 < cand[0].size(); i0++)
      for (size_t i1 = 0; i1 + i0 <= total && i1 < cand[1].size(); i1++)
        for (size_t i2 = 0; i2 + i1 + i0 <= total && i2 < cand[2].size(); i2++) {
          size_t i3 = total - i0 - i1 - i2;
          if (i3 >= cand[3].size()) continue;
          if (++tries > 4000)
            throw GcdError("search_exhausted", "corner-target search budget exceeded");
          try {
            RHLiftSystem sys = validate_rh_system(
                ops, x, g.inverse(cand[0][i0]), cand[3][i3], g.inverse(cand[1][i1]),
                cand[2][i2], n0, window);
            if (sys.type != 1) continue;
            return sys;
          } catch (const GcdError& e) {
            if (std::string(e.code()).rfind("rh_", 0) == 0 ||
                e.code() == "boundary_ambiguity" || e.code() == "degenerate_pair" ||
                e.code() == "common_power")
              continue;
            throw;
          }
        }
  }
  throw GcdError("search_exhausted", "no valid RH system at the corner targets");
}

MeasureEstimate box_measure_estimate(const CurveFunctional& f, const RHLiftSystem& sys,
                                     int Nmax, double tol, bool spot_check) {
  const Group& g = *f.group();
  if (!f.flags().symmetric || !f.flags().additive)
    throw GcdError("precondition", "estimator requires a symmetric additive functional");
  if (spot_check) {
    // smoothing and stability smoke test on one crossing pair
    GroupElement u = sys.a, v = sys.x;
    double fu = f(u), fv = f(v);
    if (classify_pair(g, u, v) == PairClass::RCross &&
        fu + fv < f(g.multiply(u, v)) - 1e-6)
      throw GcdError("precondition", "functional fails the smoothing smoke test");
    if (std::fabs(f(g.power(v, 2)) - 2 * fv) > 1e-6)
      throw GcdError("precondition", "functional fails the stability smoke test");
  }

  MeasureEstimate est;
  GroupElement axn = sys.a, bxn = sys.b, cxn = sys.c, dxn = sys.d;
  double prev = 0;
  int streak = 0;
  std::vector<double> seq;
  for (int n = 1; n <= Nmax; n++) {
    axn = g.multiply(axn, sys.x);
    bxn = g.multiply(bxn, sys.x);
    cxn = g.multiply(cxn, sys.x);
    dxn = g.multiply(dxn, sys.x);
    double s = 0.5 * (f(bxn) + f(cxn) - f(axn) - f(dxn));
    seq.push_back(s);
    if (n > 1) {
      double delta = std::fabs(s - prev);
      est.last_delta = delta;
      streak = delta <= tol ? streak + 1 : 0;
    }
    prev = s;
    est.value = s;
    est.n_used = n;
    if (streak >= 3) {
      est.converged = true;
      break;
    }
  }
  size_t tail = std::min<size_t>(5, seq.size());
  est.tail.assign(seq.end() - tail, seq.end());
  return est;
}

InvarianceReport invariance_check(const CurveFunctional& f, const CurveOps& ops,
                                  const RHLiftSystem& sys, const GroupElement& g,
                                  int Nmax, double tol) {
  const Group& gr = ops.group();
  MeasureEstimate base = box_measure_estimate(f, sys, Nmax, tol, false);

  RHLiftSystem tr = validate_rh_system(
      ops, sys.x, gr.multiply(sys.p1, gr.inverse(g)), gr.multiply(g, sys.q1),
      gr.multiply(sys.p2, gr.inverse(g)), gr.multiply(g, sys.q2), sys.n0, sys.window);
  RHLiftSystem mp = validate_rh_system(ops, sys.x, gr.multiply(sys.x, sys.p1), sys.q1,
                                       sys.p2, sys.q2, sys.n0, sys.window);
  RHLiftSystem mq = validate_rh_system(ops, sys.x, sys.p1, gr.multiply(sys.q1, sys.x),
                                       sys.p2, sys.q2, sys.n0, sys.window);

  InvarianceReport rep;
  rep.translation_dev =
      std::fabs(box_measure_estimate(f, tr, Nmax, tol, false).value - base.value);
  rep.reparam_p_dev =
      std::fabs(box_measure_estimate(f, mp, Nmax, tol, false).value - base.value);
  rep.reparam_q_dev =
      std::fabs(box_measure_estimate(f, mq, Nmax, tol, false).value - base.value);
  rep.max_dev = std::max({rep.translation_dev, rep.reparam_p_dev, rep.reparam_q_dev});
  return rep;
}

double sidebyside_check(const CurveFunctional& f, const CurveOps& ops,
                        const RHLiftSystem& sys1, const RHLiftSystem& sys2, int Nmax,
                        double tol) {
  const Group& g = ops.group();
  auto same = [&](const GroupElement& u, const GroupElement& v) {
    return g.element_key(u.word) == g.element_key(v.word);
  };
  if (!same(sys1.x, sys2.x) || !same(sys1.p1, sys2.p1) || !same(sys1.p2, sys2.p2) ||
      !same(sys1.q2, sys2.q1))
    throw GcdError("precondition",
                   "side-by-side systems must share p1, p2 and the middle lift");
  RHLiftSystem uni = validate_rh_system(ops, sys1.x, sys1.p1, sys1.q1, sys1.p2, sys2.q2,
                                        sys1.n0, sys1.window);
  double e1 = box_measure_estimate(f, sys1, Nmax, tol, false).value;
  double e2 = box_measure_estimate(f, sys2, Nmax, tol, false).value;
  double eu = box_measure_estimate(f, uni, Nmax, tol, false).value;
  return std::fabs(eu - e1 - e2);
}

RecoverResult recover_length(const CurveFunctional& f, const CurveOps& ops,
                             const GroupElement& x, const GroupElement& y, int Nmax,
                             double tol) {
  const Group& g = ops.group();
  if (y.is_identity()) return RecoverResult{0, true, 0, {}, 0};
  Axis ay = g.axis(y);
  Axis ax = g.axis(x);

  // Auxiliary candidates with (P.ora{x}, ora{y}, q.ora{x}) R-parallel,
  // ranked by how well the lift endpoints are separated from the y-axis
  // endpoints (degenerate slivers make the box family ill-conditioned).
  auto quality = [&](const Axis& lift) {
    const BoundaryPoint* pts[4] = {&lift.repelling, &lift.attracting, &ay.repelling,
                                   &ay.attracting};
    double best = 1e300;
    for (int i = 0; i < 4; i++)
      for (int j = 0; j < 4; j++) {
        if (i == j) continue;
        best = std::min(best, pts[i]->ccw_gap_to(*pts[j]));
      }
    return best;
  };
  std::vector<std::pair<double, GroupElement>> Pc, qc;
  g.ball(5, [&](const GroupElement& u) {
    Axis tr = translated_axis(u.iso, ax);
    try {
      if (classify_axes(tr, ay, g.tol().eps_bdy) == PairClass::RParallel)
        Pc.push_back({-quality(tr), u});
      if (classify_axes(ay, tr, g.tol().eps_bdy) == PairClass::RParallel)
        qc.push_back({-quality(tr), u});
    } catch (const GcdError&) {
    }
  });
  if (Pc.empty() || qc.empty())
    throw GcdError("search_exhausted", "no R-parallel sandwich lifts found for recovery");
  std::stable_sort(Pc.begin(), Pc.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  std::stable_sort(qc.begin(), qc.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<GroupElement> Ps, qs;
  for (size_t i = 0; i < Pc.size() && i < 8; i++) Ps.push_back(Pc[i].second);
  for (size_t i = 0; i < qc.size() && i < 8; i++) qs.push_back(qc[i].second);

  std::string last_failure = "no candidate pair produced a convergent box family";
  for (size_t total = 0; total <= Ps.size() + qs.size() - 2; total++) {
    for (size_t ip = 0; ip <= total && ip < Ps.size(); ip++) {
      size_t iq = total - ip;
      if (iq >= qs.size()) continue;
      GroupElement p = g.inverse(Ps[ip]);
      const GroupElement& q = qs[iq];
      RecoverResult res;
      double prev = 0;
      int streak = 0;
      std::vector<double> seq;
      bool abandoned = false;
      for (int n = 0; n <= Nmax && !abandoned; n++) {
        GroupElement yn = g.power(y, n);
        GroupElement p1 = p;
        GroupElement q1 = g.multiply(yn, q);
        GroupElement p2 = g.multiply(p, y);
        GroupElement q2 = g.multiply(g.power(y, -(n + 1)), q);
        try {
          RHLiftSystem sys = validate_rh_system(ops, x, p1, q1, p2, q2);
          MeasureEstimate est = box_measure_estimate(f, sys, Nmax, tol, false);
          seq.push_back(est.value);
          if (seq.size() > 1) {
            double delta = std::fabs(est.value - prev);
            res.last_delta = delta;
            streak = delta <= tol ? streak + 1 : 0;
          }
          prev = est.value;
          res.value = est.value;
          res.n_used = n;
          if (streak >= 3) {
            res.converged = true;
            size_t tail = std::min<size_t>(5, seq.size());
            res.outer_tail.assign(seq.end() - tail, seq.end());
            return res;
          }
        } catch (const GcdError& e) {
          if (seq.empty() && n < 4) continue;  // small-n boxes may be degenerate
          last_failure = e.what();
          abandoned = true;
        }
      }
      if (!abandoned && !seq.empty()) {
        // ran out of outer steps without a plateau
        res.converged = false;
        size_t tail = std::min<size_t>(5, seq.size());
        res.outer_tail.assign(seq.end() - tail, seq.end());
        return res;
      }
    }
  }
  throw GcdError("search_exhausted", "recover_length: " + last_failure);
}

namespace {
double corner_factor(const BoundaryPoint& u, const BoundaryPoint& v) {
  // (u - v) with infinities dropped (they cancel in the cross-ratio).
  if (u.is_inf() || v.is_inf()) return 1.0;
  return u.value() - v.value();
}
}  // namespace

double liouville_box_measure(const GeodesicBox& B, double eps_bdy) {
  const BoundaryPoint* pts[4] = {&B.s1, &B.s2, &B.t2, &B.t1};
  for (int i = 0; i < 4; i++)
    for (int j = i + 1; j < 4; j++)
      if (pts[i]->approx_equal(*pts[j], eps_bdy))
        throw GcdError("degenerate_box", "box corners coincide");
  double num = corner_factor(B.s1, B.t2) * corner_factor(B.s2, B.t1);
  double den = corner_factor(B.s1, B.t1) * corner_factor(B.s2, B.t2);
  double cr = num / den;
  if (!(cr > 0) || !std::isfinite(cr))
    throw GcdError("degenerate_box", "cross-ratio is not positive");
  return std::log(cr);
}

GeodesicBox complement_box(const GeodesicBox& B) {
  return GeodesicBox{B.s2, B.t2, B.t1, B.s1};
}

HalfIntegralityReport halfintegrality_check(std::shared_ptr<const CurveOps> ops,
                                            const CurveFunctional& f, int L, int Nmax,
                                            double tol) {
  const Group& g = ops->group();
  HalfIntegralityReport rep;
  for (const auto& cls : g.class_representatives(L)) {
    if (cls.is_identity()) continue;
    rep.classes_checked++;
    double v = f(cls);
    double dev = std::fabs(v - std::llround(v));
    if (dev > rep.worst_value_dev) rep.worst_value_dev = dev;
    if (dev > tol && rep.values_pass) {
      rep.values_pass = false;
      rep.first_witness = g.to_string(cls.word) + " -> " + std::to_string(v);
    }
  }
  // box integrality of 2 mu_f on seeded corner targets; the base curve is
  // taken from the second handle so counted lifts never fellow-travel it
  constexpr double tau = 6.283185307179586476925286766559;
  GroupElement x = g.element(Word{g.num_generators() >= 3 ? 3 : 1});
  for (int s = 0; s < 2; s++) {
    std::array<BoundaryPoint, 4> targets;
    for (int k = 0; k < 4; k++) {
      double ang = (0.17 + 0.23 * s) + k * tau / 4.0;
      targets[k] = BoundaryPoint::finite(-1.0 / std::tan(ang / 2.0));
    }
    try {
      RHLiftSystem sys = find_rh_box(*ops, x, targets, tau / 18.0);
      MeasureEstimate est = box_measure_estimate(f, sys, Nmax, tol, false);
      rep.boxes_checked++;
      double two = 2.0 * est.value;
      double dev = std::fabs(two - std::llround(two));
      if (dev > rep.worst_box_dev) rep.worst_box_dev = dev;
      if (!est.converged || dev > 10 * tol) rep.boxes_pass = false;
    } catch (const GcdError&) {
      // search failures are reported, not fatal
    }
  }
  return rep;
}

}  // namespace gcdual
