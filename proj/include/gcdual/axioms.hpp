#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gcdual/boundary.hpp"
#include "gcdual/functionals.hpp"

namespace gcdual {

struct AxiomReport {
  std::string axiom;
  int sample_size = 0;
  int skipped = 0;  // pairs rejected by classify_pair
  bool pass = true;
  double worst_margin = 0;  // signed; inequalities pass iff >= -slack
  double tolerance = 0;
  std::string witness_a, witness_b;
  std::string witness_class;
};

struct SampleConfig {
  int Lpair = 4;       // pair-sampling ball radius
  int pair_cap = 500;  // reservoir cap on admissible pairs
  int Lelem = 3;       // element-sampling ball radius
  int elem_cap = 64;
  uint64_t seed = 20260808;
};

struct PairSample {
  std::vector<std::pair<GroupElement, GroupElement>> pairs;
  std::vector<PairClass> classes;
  int skipped = 0;
};

// Ordered pairs of distinct class representatives from ball(Lpair),
// classification-admissible, thinned by seeded reservoir sampling.
PairSample sample_admissible_pairs(const Group& g, const SampleConfig& sc);
std::vector<GroupElement> sample_elements(const Group& g, const SampleConfig& sc);

// The oriented/unoriented smoothing inequalities split by configuration;
// carries the worst signed margin (LHS - RHS of the claimed inequality).
std::vector<AxiomReport> check_smoothing(const Group& g, const CurveFunctional& f,
                                         const PairSample& sample, double tol_slack);

// f(g^n) = n f(g), n <= N.
AxiomReport check_stability(const Group& g, const CurveFunctional& f,
                            const std::vector<GroupElement>& elems, int N, double tol);

// f(g^{n+m}) >= f(g^n) + f(g^m), n,m <= 5.
AxiomReport check_power_smoothing(const Group& g, const CurveFunctional& f,
                                  const std::vector<GroupElement>& elems, double tol_slack);

// Lamination characterization: crossing pairs satisfy
// f(a)+f(b) = max{f(ab), f(aB)}.
AxiomReport check_lamination(const Group& g, const CurveFunctional& f,
                             const PairSample& sample, double tol);

// Hyperbolic-metric characterization: crossing pairs satisfy
// l(a)l(b) = l(ab)+l(aB) with l(g) = 2 cosh(f(g)/2).
AxiomReport check_hyperbolic(const Group& g, const CurveFunctional& f,
                             const PairSample& sample, double tol);

// Parry: max of {f(g)+f(h), f(gh), f(gH)} attained at least twice.
AxiomReport check_parry(const Group& g, const CurveFunctional& f, const PairSample& sample,
                        double tol);

// Dual-tree equalities: crossing f(a)+f(b) = max{f(ab),f(aB)};
// parallel f(ab) = max{f(a)+f(b), f(aB)}.
AxiomReport check_tree_dual(const Group& g, const CurveFunctional& f,
                            const PairSample& sample, double tol);

struct LimitSequenceReport {
  std::vector<double> sequence;  // f([a x^n]) - f([x^n]), n = 1..N
  bool convergent = false;
  double last_delta = 0;
  PairClass pair_class;
  bool hypothesis_met = false;  // (a, x) R-cross
};

// The additivity tail sequence whose limit feeds the box measures. With
// require_crossing the R-crossing hypothesis is enforced; otherwise the
// configuration is reported alongside the sequence (used to reproduce the
// quasi-smoothing counterexample).
LimitSequenceReport additivity_limit_sequence(const Group& g, const CurveFunctional& f,
                                              const GroupElement& a, const GroupElement& x,
                                              int N, double tol, bool require_crossing = true);

}  // namespace gcdual
