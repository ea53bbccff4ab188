#include "gcdual/crossratio.hpp"

#include <cmath>
#include <random>

namespace gcdual {

BoundaryPoint boundary_from_angle(double theta) {
  constexpr double tau = 6.283185307179586476925286766559;
  theta = std::fmod(theta, tau);
  if (theta < 0) theta += tau;
  if (theta < 1e-12 || tau - theta < 1e-12) return BoundaryPoint::infinity();
  return BoundaryPoint::finite(-1.0 / std::tan(theta / 2.0));
}

GeneralizedCrossRatio hyperbolic_crossratio() {
  GeneralizedCrossRatio cr;
  cr.name = "hyperbolic";
  cr.eval = [](const BoundaryPoint& a, const BoundaryPoint& b, const BoundaryPoint& c,
               const BoundaryPoint& d) {
    return liouville_box_measure(GeodesicBox{d, a, b, c});
  };
  return cr;
}

GeneralizedCrossRatio multicurve_crossratio(std::shared_ptr<const CurveOps> ops,
                                            MultiCurve C, bool plus) {
  GeneralizedCrossRatio cr;
  cr.name = plus ? "multicurve+" : "multicurve-";
  cr.eval = [ops, C, plus](const BoundaryPoint& a, const BoundaryPoint& b,
                           const BoundaryPoint& c, const BoundaryPoint& d) {
    return ops->box_count(C, GeodesicBox{d, a, b, c}, plus, plus);
  };
  return cr;
}

double period(const GeneralizedCrossRatio& cr, const Group& g, const GroupElement& e,
              double tol) {
  if (e.is_identity()) return 0.0;
  Axis ax = g.axis(e);
  double arc = ax.repelling.ccw_gap_to(ax.attracting);
  auto at = [&](double frac) {
    return boundary_from_angle(ax.repelling.angle() + frac * arc);
  };
  auto val = [&](const BoundaryPoint& x) {
    BoundaryPoint gx = e.iso.apply(x);
    return cr.eval(ax.repelling, x, gx, ax.attracting);
  };
  double v1 = val(at(0.5));
  double v2 = val(at(0.381966011));
  if (std::fabs(v1 - v2) > tol)
    throw GcdError("axiom_violation",
                   "period depends on the transversal point: " + std::to_string(v1) +
                       " vs " + std::to_string(v2));
  return v1;
}

CurveFunctional hyperbolic_period_functional(std::shared_ptr<const Group> g) {
  auto gp = g;
  return CurveFunctional(
      "period", FunctionalFlags{true, true, true}, g, [gp](const GroupElement& e) {
        const Isometry& m = e.iso;
        if (!m.is_hyperbolic(gp->tol().eps_hyp))
          throw GcdError("not_hyperbolic", "period requires a hyperbolic class");
        double scale = std::max({std::fabs(m.a()), std::fabs(m.b()), std::fabs(m.c()),
                                 std::fabs(m.d())});
        if (std::fabs(m.c()) < 1e-14 * scale)
          return 2.0 * std::log(std::max(std::fabs(m.a()), std::fabs(m.d())));
        FixedPoints fp = fixed_points(m, gp->tol().eps_hyp);
        if (fp.attracting.is_inf())
          return 2.0 * std::log(std::max(std::fabs(m.a()), std::fabs(m.d())));
        double lam = m.c() * fp.attracting.value() + m.d();
        return 2.0 * std::log(std::fabs(lam));
      });
}

CurveFunctional period_functional(std::shared_ptr<const Group> g, GeneralizedCrossRatio cr,
                                  std::string name, double tol) {
  auto gp = g;
  return CurveFunctional(std::move(name), FunctionalFlags{true, true, true}, g,
                         [gp, cr, tol](const GroupElement& e) {
                           return period(cr, *gp, e, tol);
                         });
}

std::vector<AxiomReport> check_crossratio_axioms(const Group& g,
                                                 const GeneralizedCrossRatio& cr,
                                                 int samples, uint64_t seed, double tol) {
  constexpr double tau = 6.283185307179586476925286766559;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, tau);
  auto conjugators = g.ball(2);

  auto tuple = [&](int n, std::vector<BoundaryPoint>& pts) {
    while (true) {
      std::vector<double> ang(n);
      for (double& a : ang) a = uni(rng);
      std::sort(ang.begin(), ang.end());
      bool ok = true;
      for (int i = 0; i < n; i++) {
        double gap = (i + 1 < n ? ang[i + 1] : ang[0] + tau) - ang[i];
        if (gap < 0.05) ok = false;
      }
      if (!ok) continue;
      pts.clear();
      for (double a : ang) pts.push_back(boundary_from_angle(a));
      return;
    }
  };

  AxiomReport flip, add, inv, pos;
  flip.axiom = "crossratio_flip";
  add.axiom = "crossratio_additivity";
  inv.axiom = "crossratio_invariance";
  pos.axiom = "crossratio_positivity";
  for (AxiomReport* r : {&flip, &add, &inv, &pos}) {
    r->tolerance = tol;
    r->sample_size = samples;
    r->worst_margin = 0;
  }
  int skipped = 0;
  for (int s = 0; s < samples; s++) {
    try {
      std::vector<BoundaryPoint> p5;
      tuple(5, p5);
      const BoundaryPoint &a = p5[0], &b = p5[1], &c = p5[2], &d = p5[3], &e = p5[4];

      double v = cr.eval(a, b, c, d);
      double rf = std::fabs(v - cr.eval(c, d, a, b));
      flip.worst_margin = std::min(flip.worst_margin, -rf);
      if (rf > tol && flip.pass) {
        flip.pass = false;
        flip.witness_a = "tuple#" + std::to_string(s);
      }

      double ra = std::fabs(cr.eval(a, b, d, e) - cr.eval(a, b, c, e) - cr.eval(a, c, d, e));
      add.worst_margin = std::min(add.worst_margin, -ra);
      if (ra > tol && add.pass) {
        add.pass = false;
        add.witness_a = "tuple#" + std::to_string(s);
      }

      const GroupElement& k = conjugators[rng() % conjugators.size()];
      double ri = std::fabs(v - cr.eval(k.iso.apply(a), k.iso.apply(b), k.iso.apply(c),
                                        k.iso.apply(d)));
      inv.worst_margin = std::min(inv.worst_margin, -ri);
      if (ri > tol && inv.pass) {
        inv.pass = false;
        inv.witness_a = "tuple#" + std::to_string(s);
      }

      pos.worst_margin = std::min(pos.worst_margin, v);
      if (v < -tol && pos.pass) {
        pos.pass = false;
        pos.witness_a = "tuple#" + std::to_string(s);
      }
    } catch (const GcdError&) {
      skipped++;
    }
  }
  for (AxiomReport* r : {&flip, &add, &inv, &pos}) r->skipped = skipped;
  return {flip, add, inv, pos};
}

}  // namespace gcdual
