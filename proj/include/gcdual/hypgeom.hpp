#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

namespace gcdual {

// Structured failure carrying a stable machine code alongside the message.
// Codes are short snake_case tags ("not_hyperbolic", "boundary_ambiguity", ...).
class GcdError : public std::runtime_error {
public:
  GcdError(std::string code, const std::string& what)
      : std::runtime_error(what), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

private:
  std::string code_;
};

struct Tolerances {
  double eps_det = 1e-9;  // determinant drift allowed after renormalization
  double eps_bdy = 1e-9;  // circle-angle resolution on the boundary
  double eps_hyp = 1e-9;  // hyperbolicity margin: |tr| > 2 + eps_hyp
};

// Point of the boundary circle of the upper half-plane, R u {inf}.
// The circle angle (via the Cayley transform) is the coordinate used by
// every cyclic-order test; the extended-real value is kept for reporting
// and Mobius arithmetic.
class BoundaryPoint {
public:
  BoundaryPoint() : value_(0), inf_(false), angle_(angle_of(0, false)) {}
  static BoundaryPoint finite(double x) { return BoundaryPoint(x, false); }
  static BoundaryPoint infinity() { return BoundaryPoint(0, true); }

  bool is_inf() const { return inf_; }
  double value() const { return value_; }  // meaningless when is_inf()
  double angle() const { return angle_; }  // in [0, 2*pi)

  // Counterclockwise angular gap from *this to other, in [0, 2*pi).
  double ccw_gap_to(const BoundaryPoint& other) const {
    double d = other.angle_ - angle_;
    constexpr double tau = 6.283185307179586476925286766559;
    d = std::fmod(d, tau);
    if (d < 0) d += tau;
    return d;
  }

  bool approx_equal(const BoundaryPoint& other, double eps_bdy) const {
    double d = ccw_gap_to(other);
    constexpr double tau = 6.283185307179586476925286766559;
    return d < eps_bdy || tau - d < eps_bdy;
  }

  static double angle_of(double x, bool inf) {
    if (inf) return 0.0;
    // arg of the Cayley image (x - i)/(x + i); increasing x moves ccw.
    double a = std::atan2(-2.0 * x, x * x - 1.0);
    constexpr double tau = 6.283185307179586476925286766559;
    if (a < 0) a += tau;
    return a;
  }

private:
  BoundaryPoint(double x, bool inf) : value_(x), inf_(inf), angle_(angle_of(x, inf)) {}
  double value_;
  bool inf_;
  double angle_;
};

// Orientation-preserving isometry of H^2 as a unit-determinant 2x2 real
// matrix, canonicalized so the first entry of (a,b,c,d) exceeding a small
// threshold is positive (the representation is projective: M and -M agree).
class Isometry {
public:
  Isometry() : a_(1), b_(0), c_(0), d_(1) {}
  Isometry(double a, double b, double c, double d, double eps_det = 1e-9);

  double a() const { return a_; }
  double b() const { return b_; }
  double c() const { return c_; }
  double d() const { return d_; }

  double trace() const { return a_ + d_; }
  double det() const { return a_ * d_ - b_ * c_; }

  Isometry inverse() const { return Isometry(d_, -b_, -c_, a_); }

  bool is_hyperbolic(double eps_hyp = 1e-9) const {
    return std::fabs(trace()) > 2.0 + eps_hyp;
  }

  bool approx_equal(const Isometry& o, double tol = 1e-7) const {
    return std::fabs(a_ - o.a_) <= tol && std::fabs(b_ - o.b_) <= tol &&
           std::fabs(c_ - o.c_) <= tol && std::fabs(d_ - o.d_) <= tol;
  }

  bool is_identity(double tol = 1e-7) const { return approx_equal(Isometry(), tol); }

  // Mobius action on the boundary.
  BoundaryPoint apply(const BoundaryPoint& p) const;

  // Action on the interior (upper half-plane), z = x + iy with y > 0.
  std::pair<double, double> apply_interior(double x, double y) const;

private:
  double a_, b_, c_, d_;
};

Isometry compose(const Isometry& m1, const Isometry& m2, double eps_det = 1e-9);

struct FixedPoints {
  BoundaryPoint attracting;
  BoundaryPoint repelling;
};

// Attracting/repelling boundary fixed points of a hyperbolic isometry.
FixedPoints fixed_points(const Isometry& m, double eps_hyp = 1e-9);

// 2*arccosh(|tr|/2); throws not_hyperbolic for |tr| <= 2 + eps_hyp.
double translation_length(const Isometry& m, double eps_hyp = 1e-9);

// Oriented axis of a hyperbolic isometry, with its translation length.
struct Axis {
  BoundaryPoint repelling;   // g^-
  BoundaryPoint attracting;  // g^+
  double length = 0;
};

Axis axis_of(const Isometry& m, double eps_hyp = 1e-9);

// 2 cosh(l(g)/2) cosh(l(h)/2) - cosh(l(gh)/2) - cosh(l(gh^-1)/2).
// Vanishes for genuine isometries with crossing axes (the trace identity
// tr g * tr h = tr gh + tr gh^-1 at half-lengths). The crossing
// precondition is enforced by the caller (boundary module).
double parallelogram_residual(const Isometry& g, const Isometry& h, double eps_hyp = 1e-9);

// Hyperbolic distance between interior points.
double dist_h2(double x1, double y1, double x2, double y2);

// Normalizing frame for a directed geodesic: maps (rep -> att) to the
// upward imaginary axis with a chosen base point to i. Returned as the
// Isometry performing the normalization (not a group element).
Isometry frame_for_geodesic(const BoundaryPoint& rep, const BoundaryPoint& att);

}  // namespace gcdual
