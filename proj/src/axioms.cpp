#include "gcdual/axioms.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>

namespace gcdual {

namespace {

struct Margin {
  double value = 1e300;
  const GroupElement* a = nullptr;
  const GroupElement* b = nullptr;
  PairClass cls = PairClass::RCross;
};

void take_worst(Margin& m, double v, const GroupElement& a, const GroupElement& b,
                PairClass c) {
  if (v < m.value) {
    m.value = v;
    m.a = &a;
    m.b = &b;
    m.cls = c;
  }
}

AxiomReport finish(const Group& g, std::string name, const PairSample& s, const Margin& m,
                   double tol) {
  AxiomReport r;
  r.axiom = std::move(name);
  r.sample_size = (int)s.pairs.size();
  r.skipped = s.skipped;
  r.tolerance = tol;
  if (m.a == nullptr) {
    r.pass = true;
    r.worst_margin = 0;
    return r;
  }
  r.worst_margin = m.value;
  r.pass = m.value >= -tol;
  if (!r.pass) {
    r.witness_a = g.to_string(m.a->word);
    r.witness_b = g.to_string(m.b->word);
    r.witness_class = to_string(m.cls);
  }
  return r;
}

}  // namespace

PairSample sample_admissible_pairs(const Group& g, const SampleConfig& sc) {
  auto reps = g.class_representatives(sc.Lpair);
  std::vector<const GroupElement*> nontrivial;
  for (const auto& r : reps)
    if (!r.is_identity()) nontrivial.push_back(&r);

  // Reservoir over the deterministic ordered-pair stream.
  std::mt19937_64 rng(sc.seed);
  std::vector<std::pair<const GroupElement*, const GroupElement*>> reservoir;
  size_t stream_pos = 0;
  for (const GroupElement* a : nontrivial)
    for (const GroupElement* b : nontrivial) {
      if (a == b) continue;
      if ((int)reservoir.size() < sc.pair_cap) {
        reservoir.push_back({a, b});
      } else {
        size_t j = rng() % (stream_pos + 1);
        if (j < (size_t)sc.pair_cap) reservoir[j] = {a, b};
      }
      stream_pos++;
    }

  PairSample out;
  for (auto& [a, b] : reservoir) {
    try {
      PairClass c = classify_pair(g, *a, *b);
      out.pairs.push_back({*a, *b});
      out.classes.push_back(c);
    } catch (const GcdError&) {
      out.skipped++;
    }
  }
  return out;
}

std::vector<GroupElement> sample_elements(const Group& g, const SampleConfig& sc) {
  auto reps = g.class_representatives(sc.Lelem);
  std::vector<GroupElement> out;
  for (const auto& r : reps)
    if (!r.is_identity()) out.push_back(r);
  if ((int)out.size() > sc.elem_cap) {
    std::mt19937_64 rng(sc.seed ^ 0x9e3779b97f4a7c15ull);
    std::shuffle(out.begin(), out.end(), rng);
    out.resize(sc.elem_cap);
  }
  return out;
}

std::vector<AxiomReport> check_smoothing(const Group& g, const CurveFunctional& f,
                                         const PairSample& sample, double tol_slack) {
  Margin oc, od, uc, ud;
  int n_conn = 0, n_disc = 0;
  for (size_t k = 0; k < sample.pairs.size(); k++) {
    const auto& [a0, b0] = sample.pairs[k];
    PairClass c = sample.classes[k];
    GroupElement a = a0, b = b0;
    if (is_anti_parallel(c)) b = g.inverse(b0);  // (a, B) is parallel
    GroupElement ab = g.multiply(a, b);
    GroupElement aB = g.multiply(a, g.inverse(b));
    double fa = f(a), fb = f(b), fab = f(ab), faB = f(aB);
    if (is_crossing(c)) {
      n_disc++;
      take_worst(od, fa + fb - fab, a0, b0, c);
      if (f.flags().symmetric)
        take_worst(ud, fa + fb - std::max(fab, faB), a0, b0, c);
    } else {
      n_conn++;
      take_worst(oc, fab - fa - fb, a0, b0, c);
      if (f.flags().symmetric)
        take_worst(uc, fab - std::max(faB, fa + fb), a0, b0, c);
    }
  }
  std::vector<AxiomReport> out;
  out.push_back(finish(g, "oriented_connected_smoothing", sample, oc, tol_slack));
  out.back().sample_size = n_conn;
  out.push_back(finish(g, "oriented_disconnected_smoothing", sample, od, tol_slack));
  out.back().sample_size = n_disc;
  if (f.flags().symmetric) {
    out.push_back(finish(g, "unoriented_connected_smoothing", sample, uc, tol_slack));
    out.back().sample_size = n_conn;
    out.push_back(
        finish(g, "unoriented_disconnected_smoothing", sample, ud, tol_slack));
    out.back().sample_size = n_disc;
  }
  return out;
}

AxiomReport check_stability(const Group& g, const CurveFunctional& f,
                            const std::vector<GroupElement>& elems, int N, double tol) {
  AxiomReport r;
  r.axiom = "stability";
  r.sample_size = (int)elems.size();
  r.tolerance = tol;
  double worst = 0;
  for (const auto& e : elems) {
    double f1 = f(e);
    for (int n = 2; n <= N; n++) {
      double dev = std::fabs(f(g.power(e, n)) - n * f1);
      if (dev > worst) {
        worst = dev;
        if (dev > tol) {
          r.witness_a = g.to_string(e.word);
          r.witness_b = "n=" + std::to_string(n);
        }
      }
    }
  }
  r.worst_margin = -worst;
  r.pass = worst <= tol;
  return r;
}

AxiomReport check_power_smoothing(const Group& g, const CurveFunctional& f,
                                  const std::vector<GroupElement>& elems, double tol_slack) {
  AxiomReport r;
  r.axiom = "power_smoothing";
  r.sample_size = (int)elems.size();
  r.tolerance = tol_slack;
  double worst = 1e300;
  for (const auto& e : elems) {
    std::array<double, 11> fp;
    for (int n = 1; n <= 10; n++) fp[n] = f(g.power(e, n));
    for (int n = 1; n <= 5; n++)
      for (int m = 1; m <= 5; m++) {
        double margin = fp[n + m] - fp[n] - fp[m];
        if (margin < worst) {
          worst = margin;
          if (margin < -tol_slack) {
            r.witness_a = g.to_string(e.word);
            r.witness_b = "n=" + std::to_string(n) + ",m=" + std::to_string(m);
          }
        }
      }
  }
  r.worst_margin = worst == 1e300 ? 0 : worst;
  r.pass = r.worst_margin >= -tol_slack;
  return r;
}

AxiomReport check_lamination(const Group& g, const CurveFunctional& f,
                             const PairSample& sample, double tol) {
  Margin m;
  int n = 0;
  for (size_t k = 0; k < sample.pairs.size(); k++) {
    if (!is_crossing(sample.classes[k])) continue;
    n++;
    const auto& [a, b] = sample.pairs[k];
    double lhs = f(a) + f(b);
    double rhs = std::max(f(g.multiply(a, b)), f(g.multiply(a, g.inverse(b))));
    take_worst(m, -std::fabs(lhs - rhs), a, b, sample.classes[k]);
  }
  AxiomReport r = finish(g, "lamination_max_smoothing", sample, m, tol);
  r.sample_size = n;
  return r;
}

AxiomReport check_hyperbolic(const Group& g, const CurveFunctional& f,
                             const PairSample& sample, double tol) {
  Margin m;
  int n = 0;
  auto lam = [&](const GroupElement& e) { return 2.0 * std::cosh(f(e) / 2.0); };
  for (size_t k = 0; k < sample.pairs.size(); k++) {
    if (!is_crossing(sample.classes[k])) continue;
    n++;
    const auto& [a, b] = sample.pairs[k];
    double res = lam(a) * lam(b) - lam(g.multiply(a, b)) - lam(g.multiply(a, g.inverse(b)));
    take_worst(m, -std::fabs(res), a, b, sample.classes[k]);
  }
  AxiomReport r = finish(g, "hyperbolic_lambda_identity", sample, m, tol);
  r.sample_size = n;
  return r;
}

AxiomReport check_parry(const Group& g, const CurveFunctional& f, const PairSample& sample,
                        double tol) {
  Margin m;
  for (size_t k = 0; k < sample.pairs.size(); k++) {
    const auto& [a, b] = sample.pairs[k];
    double v[3] = {f(a) + f(b), f(g.multiply(a, b)), f(g.multiply(a, g.inverse(b)))};
    std::sort(v, v + 3);
    take_worst(m, -(v[2] - v[1]), a, b, sample.classes[k]);  // top two must agree
  }
  return finish(g, "parry_max_twice", sample, m, tol);
}

AxiomReport check_tree_dual(const Group& g, const CurveFunctional& f,
                            const PairSample& sample, double tol) {
  Margin m;
  for (size_t k = 0; k < sample.pairs.size(); k++) {
    PairClass c = sample.classes[k];
    const auto& [a0, b0] = sample.pairs[k];
    GroupElement a = a0, b = b0;
    if (is_anti_parallel(c)) b = g.inverse(b0);
    double fa = f(a), fb = f(b);
    double fab = f(g.multiply(a, b)), faB = f(g.multiply(a, g.inverse(b)));
    double dev;
    if (is_crossing(c))
      dev = std::fabs(fa + fb - std::max(fab, faB));
    else
      dev = std::fabs(fab - std::max(fa + fb, faB));
    take_worst(m, -dev, a0, b0, c);
  }
  return finish(g, "tree_dual_skora", sample, m, tol);
}

LimitSequenceReport additivity_limit_sequence(const Group& g, const CurveFunctional& f,
                                              const GroupElement& a, const GroupElement& x,
                                              int N, double tol, bool require_crossing) {
  LimitSequenceReport r;
  r.pair_class = classify_pair(g, a, x);
  r.hypothesis_met = r.pair_class == PairClass::RCross;
  if (require_crossing && !r.hypothesis_met)
    throw GcdError("precondition",
                   "additivity_limit_sequence requires (a, x) R-crossing; got " +
                       std::string(to_string(r.pair_class)));
  for (int n = 1; n <= N; n++) {
    GroupElement xn = g.power(x, n);
    r.sequence.push_back(f(g.multiply(a, xn)) - f(xn));
  }
  int tail = std::min<int>(5, (int)r.sequence.size());
  double lo = r.sequence.back(), hi = r.sequence.back();
  for (int i = 0; i < tail; i++) {
    double v = r.sequence[r.sequence.size() - 1 - i];
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  r.last_delta = hi - lo;
  r.convergent = r.last_delta <= tol;
  return r;
}

}  // namespace gcdual
