#pragma once

#include <functional>
#include <memory>
#include <string>

#include "gcdual/axioms.hpp"
#include "gcdual/currents.hpp"
#include "gcdual/curves.hpp"
#include "gcdual/functionals.hpp"

namespace gcdual {

// Function on ccw-distinct boundary 4-tuples satisfying flip-invariance,
// additivity, group invariance, and positivity.
struct GeneralizedCrossRatio {
  std::string name;
  std::function<double(const BoundaryPoint&, const BoundaryPoint&, const BoundaryPoint&,
                       const BoundaryPoint&)>
      eval;
};

// [a,b,c,d] = Liouville mass of [d,a) x [b,c): the log cross-ratio.
GeneralizedCrossRatio hyperbolic_crossratio();

// Box-count cross-ratio of a multicurve current; plus selects [.,.) x [.,.),
// minus the (.,.] x (.,.] convention (they differ only at atoms).
GeneralizedCrossRatio multicurve_crossratio(std::shared_ptr<const CurveOps> ops,
                                            MultiCurve C, bool plus = true);

// [g-, x, g.x, g+]; the transversal x defaults to the ccw midpoint of the
// axis arc, and independence of that choice is verified at a second point.
double period(const GeneralizedCrossRatio& cr, const Group& g, const GroupElement& e,
              double tol = 1e-7);

// The hyperbolic period in closed form (2 log |c g+ + d|), stable for long
// words; an independent route to hyperbolic length.
CurveFunctional hyperbolic_period_functional(std::shared_ptr<const Group> g);

CurveFunctional period_functional(std::shared_ptr<const Group> g, GeneralizedCrossRatio cr,
                                  std::string name, double tol = 1e-7);

// Residual checks of the four defining axioms on seeded ccw tuples.
std::vector<AxiomReport> check_crossratio_axioms(const Group& g,
                                                 const GeneralizedCrossRatio& cr,
                                                 int samples, uint64_t seed, double tol);

BoundaryPoint boundary_from_angle(double theta);

}  // namespace gcdual
