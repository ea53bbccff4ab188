#pragma once

#include "gcdual/hypgeom.hpp"
#include "gcdual/sgroup.hpp"

namespace gcdual {

// Six-way chirality classification of a pair of oriented axes, read off
// the counterclockwise cyclic order of the four endpoints:
//   RCross:        a+, b+, a-, b-
//   RParallel:     a+, a-, b-, b+
//   RAntiParallel: a+, a-, b+, b-
// and the L-versions are the reversed cyclic orders.
enum class PairClass { RCross, LCross, RParallel, LParallel, RAntiParallel, LAntiParallel };

const char* to_string(PairClass c);
bool is_crossing(PairClass c);
bool is_parallel(PairClass c);
bool is_anti_parallel(PairClass c);

enum class SplitState { ASided, Splitting, BSided };
const char* to_string(SplitState s);

// True iff y lies in the open ccw arc from x to z. Near-coincident inputs
// (within eps_bdy) raise boundary_ambiguity rather than guessing.
bool ccw(const BoundaryPoint& x, const BoundaryPoint& y, const BoundaryPoint& z,
         double eps_bdy = 1e-9);

// Axis-level classification; throws boundary_ambiguity when any two of the
// four endpoints coincide within eps_bdy.
PairClass classify_axes(const Axis& a, const Axis& b, double eps_bdy = 1e-9);

// Appendix-A parallelogram residual with the crossing precondition enforced.
double parallelogram_residual_checked(const Isometry& g, const Isometry& h,
                                      double eps_bdy = 1e-9, double eps_hyp = 1e-9);

// Group-level classification; inadmissible pairs are rejected: shared
// endpoints give degenerate_pair, common powers give common_power.
PairClass classify_pair(const Group& g, const GroupElement& a, const GroupElement& b);

// Position of aB (and Ba) relative to a parallel pair (a, b).
SplitState split_state(const Group& g, const GroupElement& a, const GroupElement& b);

// Least s <= smax with split_state(a^s, b^s) == Splitting, stable at s+1 and
// s+2. Throws bound_exceeded if none.
int find_splitting_exponent(const Group& g, const GroupElement& a, const GroupElement& b,
                            int smax);

// Crossing-closure oracle: given ora{a}, ora{b} R-crossing ora{x}, both
// (ora{a x^n}, ora{x}) and (ora{a x^n b x^k}, ora{x}) must R-cross.
bool crossing_closure_check(const Group& g, const GroupElement& a, const GroupElement& b,
                            const GroupElement& x, int n, int k);

}  // namespace gcdual
