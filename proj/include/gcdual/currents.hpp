#pragma once

#include <array>
#include <string>
#include <vector>

#include "gcdual/axioms.hpp"
#include "gcdual/curves.hpp"
#include "gcdual/functionals.hpp"

namespace gcdual {

// Right-handed lift system over a simple base curve x: lifts
// l_i = P_i.ora{x}, r_j = q_j.ora{x} with the crossing conditions that make
// [l1-, l2-) x [r2+, r1+) a right-handed box, plus the orbit words
// a = p1 q1, b = p1 q2, c = p2 q1, d = p2 q2 (so a C d B = 1).
struct RHLiftSystem {
  GroupElement x, p1, q1, p2, q2;
  GroupElement a, b, c, d;
  GeodesicBox box;
  int type = 1;     // 1 + number of nested (parallel) lift pairs
  int n0 = 10;      // window on which condition (3) was tested
  int window = 5;
};

// Checks conditions (1)-(3) and the corner order; throws rh_condition_1/2/3
// or rh_order naming the violation.
RHLiftSystem validate_rh_system(const CurveOps& ops, const GroupElement& x,
                                const GroupElement& p1, const GroupElement& q1,
                                const GroupElement& p2, const GroupElement& q2, int n0 = 10,
                                int window = 5);

// Searches ball(L) translates of ora{x} whose endpoints land in the
// eps-neighborhoods of four ccw corner targets, forming a type-1 system.
RHLiftSystem find_rh_box(const CurveOps& ops, const GroupElement& x,
                         const std::array<BoundaryPoint, 4>& targets, double eps, int L = 6,
                         int n0 = 10, int window = 5);

struct MeasureEstimate {
  double value = 0;
  int n_used = 0;
  double last_delta = 0;
  bool converged = false;
  std::vector<double> tail;  // last terms of the estimator sequence
};

// Dual-measure mass of the box: (1/2) lim f([bx^n]) + f([cx^n]) - f([ax^n])
// - f([dx^n]); plateau convergence (3 consecutive deltas <= tol).
MeasureEstimate box_measure_estimate(const CurveFunctional& f, const RHLiftSystem& sys,
                                     int Nmax, double tol, bool spot_check = true);

struct InvarianceReport {
  double translation_dev = 0;
  double reparam_p_dev = 0;
  double reparam_q_dev = 0;
  double max_dev = 0;
};

// Translation by g plus the p_i -> x p_i and q_i -> q_i x moves; all must
// leave the estimate unchanged.
InvarianceReport invariance_check(const CurveFunctional& f, const CurveOps& ops,
                                  const RHLiftSystem& sys, const GroupElement& g, int Nmax,
                                  double tol);

// sys1 = (p1,q1,p2,q2) and sys2 = (p1,q2,p2,q3) abut side by side; returns
// |estimate(union) - estimate(sys1) - estimate(sys2)|.
double sidebyside_check(const CurveFunctional& f, const CurveOps& ops,
                        const RHLiftSystem& sys1, const RHLiftSystem& sys2, int Nmax,
                        double tol);

struct RecoverResult {
  double value = 0;
  bool converged = false;
  double last_delta = 0;
  std::vector<double> outer_tail;  // box-family masses S_n
  int n_used = 0;
};

// Iterated-limit mass of the fundamental domain of y via the nested box
// family; converges to f([y]) for admissible f.
RecoverResult recover_length(const CurveFunctional& f, const CurveOps& ops,
                             const GroupElement& x, const GroupElement& y, int Nmax,
                             double tol);

// Closed-form Liouville mass log of the cross-ratio of the corners; the
// Bonahon identity e^-m(B) + e^-m(B_perp) = 1 holds exactly and the
// fundamental box of g has mass 2 arccosh(|tr g|/2).
double liouville_box_measure(const GeodesicBox& B, double eps_bdy = 1e-9);
GeodesicBox complement_box(const GeodesicBox& B);

}  // namespace gcdual
