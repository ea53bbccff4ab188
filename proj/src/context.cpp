#include "gcdual/context.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace gcdual {

using nlohmann::json;

RunConfig RunConfig::from_json(const std::string& text) {
  RunConfig c;
  if (text.empty()) return c;
  json j = json::parse(text);
  if (j.contains("group")) c.group = j["group"].get<std::string>();
  if (j.contains("tol")) c.tol = j["tol"].get<double>();
  if (j.contains("ineq_slack")) c.ineq_slack = j["ineq_slack"].get<double>();
  if (j.contains("nmax")) c.nmax = j["nmax"].get<int>();
  if (j.contains("lmax")) c.lmax = j["lmax"].get<int>();
  if (j.contains("pair_cap")) c.pair_cap = j["pair_cap"].get<int>();
  if (j.contains("elem_cap")) c.elem_cap = j["elem_cap"].get<int>();
  if (j.contains("seed")) c.seed = j["seed"].get<uint64_t>();
  if (j.contains("format")) c.format = j["format"].get<std::string>();
  return c;
}

std::string RunConfig::to_json() const {
  json j;
  j["group"] = group;
  j["tol"] = tol;
  j["ineq_slack"] = ineq_slack;
  j["nmax"] = nmax;
  j["lmax"] = lmax;
  j["pair_cap"] = pair_cap;
  j["elem_cap"] = elem_cap;
  j["seed"] = seed;
  j["format"] = format;
  return j.dump();
}

namespace {

json config_json(const RunConfig& c) { return json::parse(c.to_json()); }

std::string slurp_if_file(const std::string& spec) {
  if (!spec.empty() && spec[0] == '@') {
    std::ifstream in(spec.substr(1));
    if (!in) throw GcdError("io", "cannot open " + spec.substr(1));
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }
  return spec;
}

json report_from_axiom(const AxiomReport& r) {
  json j;
  j["axiom"] = r.axiom;
  j["pass"] = r.pass;
  j["sample_size"] = r.sample_size;
  j["skipped"] = r.skipped;
  j["worst_margin"] = r.worst_margin;
  j["tolerance"] = r.tolerance;
  if (!r.pass) {
    j["witness_a"] = r.witness_a;
    j["witness_b"] = r.witness_b;
    j["witness_class"] = r.witness_class;
  }
  return j;
}

json estimate_json(const MeasureEstimate& e) {
  json j;
  j["value"] = e.value;
  j["n_used"] = e.n_used;
  j["last_delta"] = e.last_delta;
  j["converged"] = e.converged;
  j["tail"] = e.tail;
  return j;
}

}  // namespace

Context::Context(RunConfig cfg) : cfg_(std::move(cfg)) {
  GroupMode mode;
  if (cfg_.group == "genus2")
    mode = GroupMode::Genus2Octagon;
  else if (cfg_.group == "free2")
    mode = GroupMode::FreeSchottky;
  else
    throw GcdError("bad_argument", "unknown group mode '" + cfg_.group + "'");
  group_ = Group::make(mode);
  ops_ = std::make_shared<CurveOps>(group_);
}

SampleConfig Context::sample_config() const {
  SampleConfig sc;
  sc.Lpair = cfg_.lmax;
  sc.pair_cap = cfg_.pair_cap;
  sc.elem_cap = cfg_.elem_cap;
  sc.seed = cfg_.seed;
  sc.Lelem = std::min(3, cfg_.lmax);
  return sc;
}

CurveFunctional Context::functional(const std::string& spec) const {
  if (spec == "hyperbolic") return hyperbolic_length_functional(group_);
  if (spec == "zero") return zero_functional(group_);
  if (spec == "period") return hyperbolic_period_functional(group_);
  auto starts = [&](const char* p) { return spec.rfind(p, 0) == 0; };
  if (starts("graph:")) {
    std::string rest = spec.substr(6);
    bool stabilized = false;
    if (rest.size() > 7 && rest.substr(rest.size() - 7) == ":stable") {
      stabilized = true;
      rest = rest.substr(0, rest.size() - 7);
    }
    GeneratingSet gs;
    if (rest == "standard") {
      gs = standard_generating_set(*group_);
    } else {
      json j = json::parse(slurp_if_file(rest));
      gs.name = j.contains("name") ? j["name"].get<std::string>() : "custom";
      gs.symmetric = j.contains("symmetric") ? j["symmetric"].get<bool>() : true;
      for (const auto& item : j.at("items"))
        gs.items.push_back({group_->element(item.at("word").get<std::string>()),
                            item.contains("weight") ? item["weight"].get<double>() : 1.0});
    }
    return graph_length_functional(group_, gs, stabilized);
  }
  if (starts("curve:")) {
    MultiCurve C = multicurve_from_json(*group_, slurp_if_file(spec.substr(6)));
    return intersection_functional(ops_, C);
  }
  if (starts("tree:")) {
    MultiCurve C = multicurve_from_json(*group_, slurp_if_file(spec.substr(5)));
    std::vector<std::pair<MultiCurve, double>> parts;
    for (const auto& comp : C.components)
      parts.push_back({single_curve(*group_, comp.g, 1.0), comp.weight});
    return tree_length_functional(ops_, parts);
  }
  throw GcdError("bad_argument", "unknown functional spec '" + spec + "'");
}

std::string Context::classify_cmd(const std::string& w1, const std::string& w2,
                                  int& status) const {
  json out;
  out["config"] = config_json(cfg_);
  out["w1"] = w1;
  out["w2"] = w2;
  try {
    PairClass c = classify_pair(*group_, group_->element(w1), group_->element(w2));
    out["class"] = to_string(c);
    status = 0;
  } catch (const GcdError& e) {
    out["error"] = {{"code", e.code()}, {"message", e.what()}};
    status = 2;
  }
  return out.dump(2);
}

std::string Context::intersect_cmd(const std::string& a_json, const std::string& b_json,
                                   int& status) const {
  json out;
  out["config"] = config_json(cfg_);
  try {
    MultiCurve A = multicurve_from_json(*group_, slurp_if_file(a_json));
    MultiCurve B = multicurve_from_json(*group_, slurp_if_file(b_json));
    out["geometric"] = ops_->intersection_number(A, B);
    out["algebraic"] =
        group_->mode() == GroupMode::Genus2Octagon ? json(ops_->algebraic_intersection(A, B))
                                                   : json();
    if (group_->mode() == GroupMode::Genus2Octagon)
      out["asymmetric"] = ops_->asymmetric_intersection(A, B);
    status = 0;
  } catch (const GcdError& e) {
    out["error"] = {{"code", e.code()}, {"message", e.what()}};
    status = 2;
  }
  return out.dump(2);
}

std::string Context::axioms_cmd(const std::string& fspec,
                                const std::vector<std::string>& suites, int& status) const {
  json out;
  out["config"] = config_json(cfg_);
  out["functional"] = fspec;
  try {
    CurveFunctional f = functional(fspec);
    SampleConfig sc = sample_config();
    PairSample pairs = sample_admissible_pairs(*group_, sc);
    std::vector<GroupElement> elems = sample_elements(*group_, sc);
    out["sample"] = {{"pairs", (int)pairs.pairs.size()},
                     {"pairs_skipped", pairs.skipped},
                     {"elements", (int)elems.size()}};
    json reports = json::array();
    bool any_fail = false;
    auto add = [&](const AxiomReport& r) {
      reports.push_back(report_from_axiom(r));
      if (!r.pass) any_fail = true;
    };
    auto want = [&](const std::string& s) {
      if (suites.empty()) return true;
      for (const auto& x : suites)
        if (x == s || x == "all") return true;
      return false;
    };
    if (want("smoothing"))
      for (const auto& r : check_smoothing(*group_, f, pairs, cfg_.ineq_slack)) add(r);
    if (want("stability")) add(check_stability(*group_, f, elems, 5, cfg_.tol));
    if (want("power")) add(check_power_smoothing(*group_, f, elems, cfg_.ineq_slack));
    if (want("lamination")) add(check_lamination(*group_, f, pairs, cfg_.tol));
    if (want("hyperbolic")) add(check_hyperbolic(*group_, f, pairs, cfg_.tol));
    if (want("parry")) add(check_parry(*group_, f, pairs, cfg_.tol));
    if (want("tree")) add(check_tree_dual(*group_, f, pairs, cfg_.tol));
    out["reports"] = reports;
    status = any_fail ? 1 : 0;
  } catch (const GcdError& e) {
    out["error"] = {{"code", e.code()}, {"message", e.what()}};
    status = 2;
  }
  return out.dump(2);
}

std::string Context::box_measure_cmd(const std::string& fspec, const std::string& box_json,
                                     int& status) const {
  json out;
  out["config"] = config_json(cfg_);
  out["functional"] = fspec;
  try {
    CurveFunctional f = functional(fspec);
    json spec = json::parse(slurp_if_file(box_json));
    GroupElement x = group_->element(spec.at("x").get<std::string>());
    RHLiftSystem sys;
    if (spec.contains("p1")) {
      sys = validate_rh_system(*ops_, x, group_->element(spec.at("p1").get<std::string>()),
                               group_->element(spec.at("q1").get<std::string>()),
                               group_->element(spec.at("p2").get<std::string>()),
                               group_->element(spec.at("q2").get<std::string>()));
    } else {
      std::array<BoundaryPoint, 4> targets;
      auto tj = spec.at("targets_deg");
      constexpr double pi = 3.14159265358979323846;
      for (int k = 0; k < 4; k++)
        targets[k] = boundary_from_angle(tj.at(k).get<double>() * pi / 180.0);
      double eps = spec.contains("eps_deg") ? spec["eps_deg"].get<double>() * pi / 180.0
                                            : 20.0 * pi / 180.0;
      sys = find_rh_box(*ops_, x, targets, eps);
    }
    out["orbit"] = {{"a", group_->to_string(sys.a.word)},
                    {"b", group_->to_string(sys.b.word)},
                    {"c", group_->to_string(sys.c.word)},
                    {"d", group_->to_string(sys.d.word)}};
    out["type"] = sys.type;
    MeasureEstimate est = box_measure_estimate(f, sys, cfg_.nmax, cfg_.tol);
    out["estimate"] = estimate_json(est);
    out["liouville_mass"] = liouville_box_measure(sys.box);
    status = est.converged ? 0 : 1;
  } catch (const GcdError& e) {
    out["error"] = {{"code", e.code()}, {"message", e.what()}};
    status = 2;
  }
  return out.dump(2);
}

std::string Context::recover_cmd(const std::string& fspec, const std::string& word,
                                 int& status) const {
  json out;
  out["config"] = config_json(cfg_);
  out["functional"] = fspec;
  out["word"] = word;
  try {
    CurveFunctional f = functional(fspec);
    GroupElement y = group_->element(word);
    GroupElement x = group_->element(Word{1});
    RecoverResult rr = recover_length(f, *ops_, x, y, cfg_.nmax, cfg_.tol);
    double direct = f(y);
    out["recovered"] = rr.value;
    out["direct"] = direct;
    out["deviation"] = std::fabs(rr.value - direct);
    out["converged"] = rr.converged;
    out["outer_tail"] = rr.outer_tail;
    status = (rr.converged && std::fabs(rr.value - direct) <= 1e3 * cfg_.tol) ? 0 : 1;
  } catch (const GcdError& e) {
    out["error"] = {{"code", e.code()}, {"message", e.what()}};
    status = 2;
  }
  return out.dump(2);
}

std::string Context::period_cmd(const std::string& word, int& status) const {
  json out;
  out["config"] = config_json(cfg_);
  out["word"] = word;
  try {
    CurveFunctional per = hyperbolic_period_functional(group_);
    GroupElement e = group_->element(word);
    out["period"] = per(e);
    out["hyperbolic_length"] = hyperbolic_length_functional(group_)(e);
    status = 0;
  } catch (const GcdError& e) {
    out["error"] = {{"code", e.code()}, {"message", e.what()}};
    status = 2;
  }
  return out.dump(2);
}

std::string Context::report_all_cmd(int& status) const {
  json out;
  out["config"] = config_json(cfg_);
  status = 0;
  try {
    json sections = json::object();
    for (const char* fs : {"hyperbolic", "period"}) {
      int st = 0;
      sections[fs] = json::parse(axioms_cmd(fs, {"smoothing", "stability", "power"}, st));
      if (st > (status == 2 ? -1 : status)) status = st;
    }
    if (group_->mode() == GroupMode::Genus2Octagon) {
      int st = 0;
      sections["curve_a1"] =
          json::parse(axioms_cmd("curve:[{\"word\":\"a1\",\"weight\":1.0}]",
                                 {"smoothing", "stability", "lamination"}, st));
      if (st > status) status = st;
    }
    json crj = json::array();
    for (const auto& r :
         check_crossratio_axioms(*group_, hyperbolic_crossratio(), 50, cfg_.seed, 1e-9))
      crj.push_back(report_from_axiom(r));
    sections["crossratio"] = crj;
    out["sections"] = sections;
  } catch (const GcdError& e) {
    out["error"] = {{"code", e.code()}, {"message", e.what()}};
    status = 2;
  }
  return out.dump(2);
}

std::string Context::csv_from_report(const std::string& json_text) {
  json j = json::parse(json_text);
  std::ostringstream csv;
  csv << "axiom,pass,worst_margin,witness\n";
  std::function<void(const json&)> walk = [&](const json& node) {
    if (node.is_object()) {
      if (node.contains("axiom")) {
        csv << node["axiom"].get<std::string>() << ","
            << (node["pass"].get<bool>() ? "true" : "false") << ","
            << node["worst_margin"].dump() << ",";
        if (node.contains("witness_a"))
          csv << '"' << node["witness_a"].get<std::string>() << " | "
              << (node.contains("witness_b") ? node["witness_b"].get<std::string>() : "")
              << '"';
        csv << "\n";
        return;
      }
      for (const auto& [k, v] : node.items()) walk(v);
    } else if (node.is_array()) {
      for (const auto& v : node) walk(v);
    }
  };
  walk(j);
  return csv.str();
}

}  // namespace gcdual
