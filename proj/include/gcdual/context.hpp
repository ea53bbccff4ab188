#pragma once

#include <memory>
#include <string>
#include <vector>

#include "gcdual/axioms.hpp"
#include "gcdual/crossratio.hpp"
#include "gcdual/currents.hpp"
#include "gcdual/curves.hpp"
#include "gcdual/functionals.hpp"

namespace gcdual {

struct RunConfig {
  std::string group = "genus2";  // genus2 | free2
  double tol = 1e-7;             // equality tolerance
  double ineq_slack = 1e-9;      // slack added to inequality margins
  int nmax = 40;                 // estimator sequence cap
  int lmax = 4;                  // pair-sampling ball radius
  int pair_cap = 500;
  int elem_cap = 64;
  uint64_t seed = 20260808;
  std::string format = "json";  // json | csv

  static RunConfig from_json(const std::string& text);
  std::string to_json() const;
};

// One fully-configured run environment: group, intersection machinery, and
// the functional registry addressable by CLI-style specs.
class Context {
public:
  explicit Context(RunConfig cfg);

  const RunConfig& config() const { return cfg_; }
  std::shared_ptr<const Group> group_ptr() const { return group_; }
  const Group& group() const { return *group_; }
  std::shared_ptr<const CurveOps> ops() const { return ops_; }

  // Registry specs: hyperbolic | zero | period | graph:standard[:stable]
  //   | graph:<json>[:stable] | curve:<json-or-@file> | tree:<json-or-@file>
  CurveFunctional functional(const std::string& spec) const;

  SampleConfig sample_config() const;

  // Subcommand payloads; status follows the CLI convention
  // 0 = pass, 1 = violations/non-convergence, 2 = computational failure.
  std::string classify_cmd(const std::string& w1, const std::string& w2, int& status) const;
  std::string intersect_cmd(const std::string& a_json, const std::string& b_json,
                            int& status) const;
  std::string axioms_cmd(const std::string& fspec, const std::vector<std::string>& suites,
                         int& status) const;
  std::string box_measure_cmd(const std::string& fspec, const std::string& box_json,
                              int& status) const;
  std::string recover_cmd(const std::string& fspec, const std::string& word,
                          int& status) const;
  std::string period_cmd(const std::string& word, int& status) const;
  std::string report_all_cmd(int& status) const;

  static std::string csv_from_report(const std::string& json_text);

private:
  RunConfig cfg_;
  std::shared_ptr<const Group> group_;
  std::shared_ptr<const CurveOps> ops_;
};

}  // namespace gcdual
