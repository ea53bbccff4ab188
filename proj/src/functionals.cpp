#include "gcdual/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace gcdual {

namespace {
std::string class_key(const Group& g, const Word& w) {
  Word n = g.conjugacy_normal_form(w);
  std::string s;
  s.reserve(n.size());
  for (int x : n) s.push_back((char)(x + 64));
  return s;
}
}  // namespace

CurveFunctional::CurveFunctional(std::string name, FunctionalFlags flags,
                                 std::shared_ptr<const Group> g,
                                 std::function<double(const GroupElement&)> eval)
    : name_(std::move(name)), flags_(flags), group_(std::move(g)), eval_(std::move(eval)),
      memo_(std::make_shared<Memo>()) {}

double CurveFunctional::operator()(const GroupElement& e) const {
  if (!eval_) throw GcdError("bad_argument", "empty functional");
  Word red = group_->reduce_word(e.word);
  if (red.empty()) return 0.0;
  if (red.size() <= 16) {
    std::string key = class_key(*group_, red);
    {
      std::lock_guard<std::mutex> lk(memo_->mu);
      auto it = memo_->map.find(key);
      if (it != memo_->map.end()) return it->second;
    }
    double v = eval_(GroupElement{red, group_->eval(red)});
    std::lock_guard<std::mutex> lk(memo_->mu);
    memo_->map.emplace(key, v);
    return v;
  }
  return eval_(GroupElement{red, group_->eval(red)});
}

double CurveFunctional::eval(const MultiCurve& C) const {
  double total = 0;
  for (const auto& comp : C.components) total += comp.weight * (*this)(comp.g);
  return total;
}

CurveFunctional hyperbolic_length_functional(std::shared_ptr<const Group> g) {
  auto gp = g;
  return CurveFunctional(
      "hyperbolic", FunctionalFlags{true, true, true}, g,
      [gp](const GroupElement& e) {
        return translation_length(e.iso, gp->tol().eps_hyp);
      });
}

CurveFunctional intersection_functional(std::shared_ptr<const CurveOps> ops, MultiCurve C,
                                        std::string name) {
  std::shared_ptr<const Group> group(ops, &ops->group());
  if (name.empty()) {
    name = "i(";
    for (size_t k = 0; k < C.components.size(); k++) {
      if (k) name += "+";
      name += group->to_string(C.components[k].g.word);
    }
    name += ",.)";
  }
  return CurveFunctional(name, FunctionalFlags{true, true, true}, group,
                         [ops, C](const GroupElement& e) {
                           double total = 0;
                           for (const auto& comp : C.components)
                             total += comp.weight *
                                      (double)ops->intersection_classes(comp.g, e);
                           return total;
                         });
}

CurveFunctional graph_length_functional(std::shared_ptr<const Group> g, GeneratingSet gs,
                                        bool stabilized, int stable_N, int stable_K) {
  std::string nm = "graph:" + (gs.name.empty() ? "custom" : gs.name);
  if (stabilized) nm += ":stable";
  auto gp = g;
  auto base = [gp, gs](const GroupElement& e) -> double {
    return word_length(*gp, e, gs);
  };
  if (!stabilized)
    return CurveFunctional(nm, FunctionalFlags{true, true, false}, g, base);
  // The power budget is clamped by the word length (the search cost grows
  // with |w^n|), with an even difference step so period-2 corrections cancel.
  return CurveFunctional(nm, FunctionalFlags{true, true, false}, g,
                         [gp, base, stable_N, stable_K](const GroupElement& e) -> double {
                           Word red = gp->cyclic_reduce(e.word);
                           if (red.empty()) return 0.0;
                           int budget = std::max(3, 18 / std::max(1, (int)red.size()));
                           int n_eff = std::min(stable_N, budget);
                           int k_eff = std::min(stable_K, n_eff - 1);
                           if (k_eff >= 2 && k_eff % 2) k_eff--;
                           GroupElement re{red, gp->eval(red)};
                           return stable_length(*gp, re, n_eff, base, k_eff, 0.75).value;
                         });
}

CurveFunctional tree_length_functional(
    std::shared_ptr<const CurveOps> ops,
    const std::vector<std::pair<MultiCurve, double>>& parts) {
  std::shared_ptr<const Group> group(ops, &ops->group());
  std::vector<std::pair<GroupElement, double>> merged;
  for (const auto& [mc, w] : parts) {
    if (w < 0) throw GcdError("invalid_lamination", "lamination weights must be >= 0");
    for (const auto& comp : mc.components)
      merged.push_back({comp.g, w * comp.weight});
  }
  MultiCurve lam = make_multicurve(*group, merged);
  for (size_t i = 0; i < lam.components.size(); i++) {
    if (ops->self_intersection(lam.components[i].g) != 0)
      throw GcdError("invalid_lamination",
                     "component " + group->to_string(lam.components[i].g.word) +
                         " is not simple");
    for (size_t j = i + 1; j < lam.components.size(); j++)
      if (ops->intersection_classes(lam.components[i].g, lam.components[j].g) != 0)
        throw GcdError("invalid_lamination", "lamination components cross");
  }
  std::string nm = "tree:";
  for (size_t k = 0; k < lam.components.size(); k++) {
    if (k) nm += "+";
    nm += group->to_string(lam.components[k].g.word);
  }
  return CurveFunctional(nm, FunctionalFlags{true, true, true}, group,
                         [ops, lam](const GroupElement& e) {
                           double total = 0;
                           for (const auto& comp : lam.components)
                             total += comp.weight *
                                      (double)ops->intersection_classes(comp.g, e);
                           return total;
                         });
}

CurveFunctional zero_functional(std::shared_ptr<const Group> g) {
  return CurveFunctional("zero", FunctionalFlags{true, true, true}, g,
                         [](const GroupElement&) { return 0.0; });
}

CurveFunctional scaled_functional(const CurveFunctional& f, double scale, std::string name) {
  FunctionalFlags fl = f.flags();
  // scaling by a negative factor inverts smoothing claims
  if (scale < 0) fl.claims_smoothing = false;
  CurveFunctional base = f;
  return CurveFunctional(
      std::move(name), fl, f.group(),
      [base, scale](const GroupElement& e) { return scale * base(e); });
}

void verify_conjugation_invariance(const Group& g, const CurveFunctional& f, int samples,
                                   uint64_t seed, double tol) {
  auto reps = g.class_representatives(2);
  auto conjugators = g.ball(3);
  std::mt19937_64 rng(seed);
  for (int s = 0; s < samples; s++) {
    const GroupElement& w = reps[rng() % reps.size()];
    if (w.is_identity()) continue;
    const GroupElement& k = conjugators[rng() % conjugators.size()];
    double fw = f(w);
    double fk = f(g.conjugate(k, w));
    if (std::fabs(fw - fk) > tol)
      throw GcdError("invariance", "functional " + f.name() +
                                       " is not conjugation invariant: " +
                                       std::to_string(fw) + " vs " + std::to_string(fk));
  }
}

double systole_estimate(const Group& g, const CurveFunctional& f, int L) {
  double best = 0;
  bool first = true;
  for (const auto& rep : g.class_representatives(L)) {
    if (rep.is_identity()) continue;
    double v = f(rep);
    if (first || v < best) {
      best = v;
      first = false;
    }
  }
  if (first) throw GcdError("bad_argument", "no nontrivial classes in ball");
  return best;
}

}  // namespace gcdual
