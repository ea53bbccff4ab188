#include "gcdual/hypgeom.hpp"

#include <algorithm>
#include <cmath>

namespace gcdual {

Isometry::Isometry(double a, double b, double c, double d, double eps_det)
    : a_(a), b_(b), c_(c), d_(d) {
  double m = std::max({std::fabs(a_), std::fabs(b_), std::fabs(c_), std::fabs(d_)});
  if (!std::isfinite(m) || m == 0.0)
    throw GcdError("bad_matrix", "isometry entries must be finite and not all zero");
  // For small entries the determinant is numerically trustworthy: verify
  // and renormalize. Beyond that ad - bc cancels catastrophically (error
  // ~ eps * m^2), so renormalizing would corrupt the matrix; the unit
  // determinant is instead maintained multiplicatively by the products of
  // already-normalized factors.
  if (m <= 32.0) {
    double det = a_ * d_ - b_ * c_;
    if (!(det > 0) || !std::isfinite(det))
      throw GcdError("bad_matrix", "isometry must have positive determinant");
    double s = std::sqrt(det);
    a_ /= s;
    b_ /= s;
    c_ /= s;
    d_ /= s;
    double drift = std::fabs(a_ * d_ - b_ * c_ - 1.0);
    if (drift > std::max(eps_det, 1e-12))
      throw GcdError("numeric_degradation",
                     "determinant drift " + std::to_string(drift) +
                         " exceeds eps_det after renormalization");
  }
  // Projective sign: make the first entry of magnitude > 0.5*max positive.
  m = std::max({std::fabs(a_), std::fabs(b_), std::fabs(c_), std::fabs(d_)});
  const double entries[4] = {a_, b_, c_, d_};
  for (double e : entries) {
    if (std::fabs(e) > 0.5 * m) {
      if (e < 0) {
        a_ = -a_;
        b_ = -b_;
        c_ = -c_;
        d_ = -d_;
      }
      break;
    }
  }
}

BoundaryPoint Isometry::apply(const BoundaryPoint& p) const {
  if (p.is_inf()) {
    if (c_ == 0.0) return BoundaryPoint::infinity();
    return BoundaryPoint::finite(a_ / c_);
  }
  double x = p.value();
  double num = a_ * x + b_;
  double den = c_ * x + d_;
  if (den == 0.0) return BoundaryPoint::infinity();
  double r = num / den;
  if (!std::isfinite(r)) return BoundaryPoint::infinity();
  return BoundaryPoint::finite(r);
}

std::pair<double, double> Isometry::apply_interior(double x, double y) const {
  // (a z + b)/(c z + d), z = x + iy
  double dn = (c_ * x + d_) * (c_ * x + d_) + (c_ * y) * (c_ * y);
  double nx = (a_ * x + b_) * (c_ * x + d_) + a_ * y * c_ * y;
  double ny = y * (a_ * (c_ * x + d_) - c_ * (a_ * x + b_));  // = y * det
  return {nx / dn, ny / dn};
}

Isometry compose(const Isometry& m1, const Isometry& m2, double eps_det) {
  return Isometry(m1.a() * m2.a() + m1.b() * m2.c(), m1.a() * m2.b() + m1.b() * m2.d(),
                  m1.c() * m2.a() + m1.d() * m2.c(), m1.c() * m2.b() + m1.d() * m2.d(),
                  eps_det);
}

FixedPoints fixed_points(const Isometry& m, double eps_hyp) {
  double tr = m.trace();
  if (std::fabs(tr) <= 2.0 + eps_hyp)
    throw GcdError("not_hyperbolic",
                   "fixed_points requires |tr| > 2 + eps_hyp, got tr = " + std::to_string(tr));
  double s = tr >= 0 ? 1.0 : -1.0;
  double disc = std::sqrt(tr * tr - 4.0);
  double lam_big = (tr + s * disc) / 2.0;    // dominant eigenvalue
  double lam_small = (tr - s * disc) / 2.0;  // = 1/lam_big up to sign

  auto fp_for = [&](double lam) -> BoundaryPoint {
    // Eigenvector candidates (b, lam - a) and (lam - d, c); take the one
    // with the larger norm for stability.
    double v1x = m.b(), v1y = lam - m.a();
    double v2x = lam - m.d(), v2y = m.c();
    double n1 = v1x * v1x + v1y * v1y, n2 = v2x * v2x + v2y * v2y;
    double vx = n1 >= n2 ? v1x : v2x;
    double vy = n1 >= n2 ? v1y : v2y;
    if (std::fabs(vy) * 1e15 <= std::fabs(vx)) return BoundaryPoint::infinity();
    return BoundaryPoint::finite(vx / vy);
  };
  return FixedPoints{fp_for(lam_big), fp_for(lam_small)};
}

double translation_length(const Isometry& m, double eps_hyp) {
  double tr = std::fabs(m.trace());
  if (tr <= 2.0 + eps_hyp)
    throw GcdError("not_hyperbolic", "translation_length requires a hyperbolic isometry");
  return 2.0 * std::acosh(tr / 2.0);
}

Axis axis_of(const Isometry& m, double eps_hyp) {
  FixedPoints fp = fixed_points(m, eps_hyp);
  return Axis{fp.repelling, fp.attracting, translation_length(m, eps_hyp)};
}

double parallelogram_residual(const Isometry& g, const Isometry& h, double eps_hyp) {
  double lg = translation_length(g, eps_hyp);
  double lh = translation_length(h, eps_hyp);
  double lgh = translation_length(compose(g, h), eps_hyp);
  double lghi = translation_length(compose(g, h.inverse()), eps_hyp);
  return 2.0 * std::cosh(lg / 2) * std::cosh(lh / 2) - std::cosh(lgh / 2) -
         std::cosh(lghi / 2);
}

double dist_h2(double x1, double y1, double x2, double y2) {
  double dx = x1 - x2, dy = y1 - y2;
  double arg = 1.0 + (dx * dx + dy * dy) / (2.0 * y1 * y2);
  return std::acosh(std::max(1.0, arg));
}

Isometry frame_for_geodesic(const BoundaryPoint& rep, const BoundaryPoint& att) {
  // Map rep -> 0, att -> inf, orientation-preserving.
  double a, b, c, d;
  if (rep.is_inf()) {
    // t -> -1/(t - q)
    a = 0, b = -1, c = 1, d = -att.value();
  } else if (att.is_inf()) {
    a = 1, b = -rep.value(), c = 0, d = 1;
  } else {
    a = 1, b = -rep.value(), c = 1, d = -att.value();
  }
  double det = a * d - b * c;
  if (det < 0) {
    c = -c;
    d = -d;
  }
  Isometry t(a, b, c, d);
  // Rebase so i maps to the foot height 1 on the axis: precompose nothing,
  // postcompose a scaling so that the image of i has |.| = 1.
  auto [ix, iy] = t.apply_interior(0.0, 1.0);
  double r = std::sqrt(ix * ix + iy * iy);
  double s = std::sqrt(r);
  return compose(Isometry(1.0 / s, 0, 0, s), t);
}

}  // namespace gcdual
