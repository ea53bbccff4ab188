#pragma once

#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>

#include "gcdual/curves.hpp"

namespace gcdual {

struct FunctionalFlags {
  bool symmetric = true;
  bool additive = true;
  bool claims_smoothing = true;
};

// Conjugation-invariant evaluator on classes, extended to multicurves by
// additivity. Evaluations on short words are memoized by normal form;
// concurrent readers share the cache under a mutex.
class CurveFunctional {
public:
  CurveFunctional() = default;
  CurveFunctional(std::string name, FunctionalFlags flags, std::shared_ptr<const Group> g,
                  std::function<double(const GroupElement&)> eval);

  const std::string& name() const { return name_; }
  const FunctionalFlags& flags() const { return flags_; }
  const std::shared_ptr<const Group>& group() const { return group_; }

  double operator()(const GroupElement& g) const;
  double eval(const MultiCurve& C) const;

private:
  std::string name_;
  FunctionalFlags flags_;
  std::shared_ptr<const Group> group_;
  std::function<double(const GroupElement&)> eval_;
  struct Memo {
    std::mutex mu;
    std::unordered_map<std::string, double> map;
  };
  std::shared_ptr<Memo> memo_;
};

// f([g]) = 2 arccosh(|tr g|/2); 0 on the trivial class.
CurveFunctional hyperbolic_length_functional(std::shared_ptr<const Group> g);

// f([g]) = i(C, [g]).
CurveFunctional intersection_functional(std::shared_ptr<const CurveOps> ops, MultiCurve C,
                                        std::string name = "");

// Conjugacy gs-length, optionally homogenized by stable_length.
CurveFunctional graph_length_functional(std::shared_ptr<const Group> g, GeneratingSet gs,
                                        bool stabilized, int stable_N = 12, int stable_K = 4);

// Translation length on the tree dual to a weighted lamination:
// |g| = sum_i w_i i(alpha_i, [g]). Components must be simple and pairwise
// disjoint or invalid_lamination is raised.
CurveFunctional tree_length_functional(std::shared_ptr<const CurveOps> ops,
                                       const std::vector<std::pair<MultiCurve, double>>& parts);

CurveFunctional zero_functional(std::shared_ptr<const Group> g);
CurveFunctional scaled_functional(const CurveFunctional& f, double scale, std::string name);

// Registration-time guard: f(k w K) = f(w) over seeded conjugators.
void verify_conjugation_invariance(const Group& g, const CurveFunctional& f, int samples,
                                   uint64_t seed, double tol);

// Minimum of f over the nontrivial conjugacy classes represented in ball(L).
double systole_estimate(const Group& g, const CurveFunctional& f, int L);

struct HalfIntegralityReport {
  bool values_pass = true;
  double worst_value_dev = 0;
  std::string first_witness;
  int classes_checked = 0;
  bool boxes_pass = true;
  double worst_box_dev = 0;
  int boxes_checked = 0;
};

// Checks f(C) in Z over ball(L) classes, and that sampled box-measure
// estimates of 2 mu_f land near integers. Implemented with the currents
// module's estimator.
HalfIntegralityReport halfintegrality_check(std::shared_ptr<const CurveOps> ops,
                                            const CurveFunctional& f, int L, int Nmax,
                                            double tol);

}  // namespace gcdual
