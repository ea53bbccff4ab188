#include "gcdual/curves.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

namespace gcdual {

namespace {

// Distance from i to the axis of a hyperbolic isometry.
double dist_base_to_axis(const Isometry& m, double eps_hyp) {
  Axis ax = axis_of(m, eps_hyp);
  Isometry f = frame_for_geodesic(ax.repelling, ax.attracting);
  auto [x, y] = f.apply_interior(0.0, 1.0);
  return std::asinh(std::fabs(x) / y);
}

// Smallest literal cyclic period of a word.
int literal_period(const Word& w) {
  const int n = (int)w.size();
  for (int d = 1; d <= n; d++) {
    if (n % d) continue;
    bool ok = true;
    for (int i = d; i < n && ok; i++) ok = w[i] == w[i % d];
    if (ok) return d;
  }
  return n;
}

struct Hit {
  double t;
  double u;  // (log|v_rep| - log v_att)/2 up to signs: second dedup coordinate
  bool right_handed;
};

}  // namespace

MultiCurve make_multicurve(const Group& g,
                           const std::vector<std::pair<GroupElement, double>>& items) {
  std::map<Word, std::pair<GroupElement, double>> merged;
  for (const auto& [e, w] : items) {
    if (w < 0) throw GcdError("bad_argument", "multicurve weights must be >= 0");
    if (w == 0) continue;  // nullification
    Word n = g.conjugacy_normal_form(e.word);
    if (n.empty()) throw GcdError("bad_argument", "multicurve components must be nontrivial");
    auto it = merged.find(n);
    if (it == merged.end())
      merged.emplace(n, std::make_pair(GroupElement{n, g.eval(n)}, w));
    else
      it->second.second += w;
  }
  MultiCurve c;
  for (auto& [k, v] : merged) c.components.push_back({v.first, v.second});
  return c;
}

MultiCurve single_curve(const Group& g, const GroupElement& e, double weight) {
  return make_multicurve(g, {{e, weight}});
}

MultiCurve multicurve_from_json(const Group& g, const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  if (!j.is_array()) throw GcdError("parse", "multicurve JSON must be an array");
  std::vector<std::pair<GroupElement, double>> items;
  for (const auto& item : j) {
    double w = item.contains("weight") ? item["weight"].get<double>() : 1.0;
    items.push_back({g.element(item.at("word").get<std::string>()), w});
  }
  return make_multicurve(g, items);
}

std::string multicurve_to_json(const Group& g, const MultiCurve& c) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& comp : c.components)
    j.push_back({{"word", g.to_string(comp.g.word)}, {"weight", comp.weight}});
  return j.dump();
}

struct CurveOps::CurveData {
  GroupElement root;  // conditioned primitive representative
  int multiplicity = 1;
  BoundaryPoint rep, att;
  double ell = 0;
  double d_base = 0;
};

CurveOps::CurveOps(std::shared_ptr<const Group> g, CurveConfig cfg)
    : group_(std::move(g)), cfg_(cfg) {
  for (int k = 1; k <= group_->num_generators(); k++) {
    moves_.push_back(group_->generator(k));
    moves_.push_back(group_->generator(k).inverse());
  }
}

CurveOps::CurveData CurveOps::curve_data(const GroupElement& e) const {
  const Group& g = *group_;
  Word cyc = g.cyclic_reduce(e.word);
  if (cyc.empty()) throw GcdError("bad_argument", "trivial class has no geodesic");
  Word root_w;
  int mult = 1;
  if (cyc.size() <= 16) {
    auto [r, k] = g.primitive_root(GroupElement{cyc, g.eval(cyc)});
    root_w = r.word;
    mult = k;
  } else {
    int d = literal_period(cyc);
    mult = (int)cyc.size() / d;
    root_w = Word(cyc.begin(), cyc.begin() + d);
  }
  GroupElement root = g.best_rotation_for_axis(GroupElement{root_w, g.eval(root_w)});
  if (!root.iso.is_hyperbolic(g.tol().eps_hyp))
    throw GcdError("not_hyperbolic", "curve class is not hyperbolic");
  CurveData cd;
  cd.root = root;
  cd.multiplicity = mult;
  Axis ax = axis_of(root.iso, g.tol().eps_hyp);
  cd.rep = ax.repelling;
  cd.att = ax.attracting;
  cd.ell = ax.length;
  cd.d_base = dist_base_to_axis(root.iso, g.tol().eps_hyp);
  // length consistency between root and full class
  double full = translation_length(g.eval(cyc), g.tol().eps_hyp);
  if (std::fabs(full - mult * cd.ell) > 1e-6 * std::max(1.0, full))
    throw GcdError("conjugacy_diagnostic", "primitive-root length inconsistency");
  return cd;
}

// Corridor walk: enumerate lifts of cd's class crossing the vertical
// parameter range [0, seg_len) of the frame chain starting at frame0.
// Visits every translate whose crossing parameter falls in the range,
// assuming the tube radius covers d_base + ell/2 plus slack.
struct WalkParams {
  double seg_len;
  double window;
  double r_tube;
  double t_offset;  // global parameter of frame0's base point
};

namespace detail {

template <typename Sink>
void corridor_walk(const std::vector<Isometry>& moves, const Isometry& frame0,
                   bool track_abs, const WalkParams& wp, const BoundaryPoint& crep,
                   const BoundaryPoint& catt, Sink&& sink) {
  const int K = std::max(1, (int)std::ceil(wp.seg_len / wp.window));
  const double h = wp.seg_len / K;
  const Isometry advance(std::exp(-h / 2), 0, 0, std::exp(h / 2));

  struct Node {
    Isometry local;
    Isometry abs;
  };

  auto qkey = [](const Isometry& m) {
    auto q = [](double v) { return (int64_t)llround(v * 1e6); };
    uint64_t hsh = 1469598103934665603ull;
    for (double v : {m.a(), m.b(), m.c(), m.d()}) {
      hsh ^= (uint64_t)q(v);
      hsh *= 1099511628211ull;
    }
    return hsh;
  };
  auto dist_to_window = [&](const Isometry& local) {
    auto [x, y] = local.apply_interior(0.0, 1.0);
    double lr = 0.5 * std::log(x * x + y * y);
    if (lr >= 0 && lr <= h) return std::asinh(std::fabs(x) / y);
    if (lr < 0) return dist_h2(x, y, 0, 1);
    return dist_h2(x, y, 0, std::exp(h));
  };

  Node seed{frame0, Isometry()};
  for (int j = 0; j < K; j++) {
    std::unordered_set<uint64_t> visited;
    std::vector<Node> stack{seed};
    visited.insert(qkey(seed.local));
    std::vector<Hit> hits;
    Node best_next = seed;
    double best_next_d = 1e300;
    const double eh = std::exp(h);

    while (!stack.empty()) {
      Node n = stack.back();
      stack.pop_back();

      BoundaryPoint b1 = n.local.apply(crep);
      BoundaryPoint b2 = n.local.apply(catt);
      if (!b1.is_inf() && !b2.is_inf()) {
        double v1 = b1.value(), v2 = b2.value();
        // Endpoint values below this node's numeric resolution cannot be
        // sided reliably; skip them here. Every genuine crossing also gets
        // evaluated from well-conditioned nodes adjacent to it, while the
        // central lift (the axis itself) stays below the floor everywhere.
        double nrm = std::max({std::fabs(n.local.a()), std::fabs(n.local.b()),
                               std::fabs(n.local.c()), std::fabs(n.local.d())});
        double floor = 1e-13 * (1.0 + nrm * nrm);
        bool resolved = std::min(std::fabs(v1), std::fabs(v2)) >= floor;
        if (v1 * v2 < 0 && resolved) {
          // slack-shifted window partition: a crossing at an exact seam is
          // evaluated near h in one frame and near 0 in the next; the
          // half-open rule below counts it exactly once.
          constexpr double seam = 1e-9;
          double t = 0.5 * std::log(-v1 * v2);
          if (t >= -seam && t < h - seam) {
            Hit hit;
            hit.t = t;
            hit.u = 0.5 * (std::log(std::fabs(v1)) - std::log(std::fabs(v2)));
            hit.right_handed = (v2 < 0 && v1 > 0);
            bool fresh = true;
            for (const Hit& o : hits)
              if (std::fabs(o.t - hit.t) < 1e-7 && std::fabs(o.u - hit.u) < 1e-7) {
                fresh = false;
                break;
              }
            if (fresh) {
              hits.push_back(hit);
              CurveOps::LiftHit out;
              out.t = wp.t_offset + j * h + t;
              out.x_rep = v1;
              out.x_att = v2;
              out.right_handed = hit.right_handed;
              sink(out, n.abs);
            }
          }
        }
      }

      {
        auto [x, y] = n.local.apply_interior(0.0, 1.0);
        double d = dist_h2(x, y, 0, eh);
        if (d < best_next_d) {
          best_next_d = d;
          best_next = n;
        }
      }

      for (const Isometry& m : moves) {
        Node nx{compose(n.local, m), track_abs ? compose(n.abs, m) : Isometry()};
        if (dist_to_window(nx.local) > wp.r_tube) continue;
        if (!visited.insert(qkey(nx.local)).second) continue;
        stack.push_back(nx);
      }
    }
    seed = Node{compose(advance, best_next.local), best_next.abs};
  }
}

}  // namespace detail

// Fixed base offset along walked axes; keeps fundamental-domain seams away
// from the symmetric crossing configurations of the octagon tiling.
constexpr double kBaseShift = 0.2737421189;

void CurveOps::crossing_lifts(const GroupElement& seg, const GroupElement& curve,
                              double extra_margin,
                              const std::function<void(const LiftHit&)>& sink) const {
  CurveData cd = curve_data(curve);
  GroupElement s = group_->best_rotation_for_axis(seg);
  Axis ax = group_->axis(s);
  Isometry frame = compose(Isometry(std::exp(-kBaseShift / 2), 0, 0, std::exp(kBaseShift / 2)),
                           frame_for_geodesic(ax.repelling, ax.attracting));
  WalkParams wp;
  wp.seg_len = ax.length;
  wp.window = cfg_.window_len;
  double d0 = dist_base_to_axis(s.iso, group_->tol().eps_hyp);
  wp.r_tube = std::max(cd.d_base + cd.ell / 2 + cfg_.corridor_pad + extra_margin, d0 + 1.5);
  wp.t_offset = 0;
  detail::corridor_walk(moves_, frame, false, wp, cd.rep, cd.att,
                        [&](const LiftHit& h, const Isometry&) { sink(h); });
}

long long CurveOps::count_over_segment(const GroupElement& seg, const CurveData& cd,
                                       CrossingFilter filter, double margin) const {
  GroupElement s = group_->best_rotation_for_axis(seg);
  Axis ax = group_->axis(s);
  Isometry frame = compose(Isometry(std::exp(-kBaseShift / 2), 0, 0, std::exp(kBaseShift / 2)),
                           frame_for_geodesic(ax.repelling, ax.attracting));
  WalkParams wp;
  wp.seg_len = ax.length;
  wp.window = cfg_.window_len;
  double d0 = dist_base_to_axis(s.iso, group_->tol().eps_hyp);
  wp.r_tube = std::max(cd.d_base + cd.ell / 2 + cfg_.corridor_pad + margin, d0 + 1.5);
  wp.t_offset = 0;
  long long count = 0;
  detail::corridor_walk(moves_, frame, false, wp, cd.rep, cd.att,
                        [&](const LiftHit& h, const Isometry&) {
                          if (filter == CrossingFilter::All || h.right_handed) count++;
                        });
  return count;
}

long long CurveOps::stabilized_count(const GroupElement& seg, const CurveData& cd,
                                     CrossingFilter filter) const {
  std::vector<long long> trail;
  int streak = 0;
  for (int m = 0; m <= cfg_.max_margin; m++) {
    long long c = count_over_segment(seg, cd, filter, (double)m);
    if (!trail.empty() && trail.back() == c)
      streak++;
    else
      streak = 1;
    trail.push_back(c);
    if (streak >= cfg_.plateau_runs) return c;
  }
  std::string msg = "lift count did not stabilize; trail:";
  for (long long c : trail) msg += " " + std::to_string(c);
  throw GcdError("non_convergence", msg);
}

long long CurveOps::intersection_classes(const GroupElement& a, const GroupElement& b) const {
  const Group& g = *group_;
  Word ca = g.cyclic_reduce(a.word), cb = g.cyclic_reduce(b.word);
  if (ca.empty() || cb.empty()) return 0;
  GroupElement ea{ca, g.eval(ca)}, eb{cb, g.eval(cb)};
  CurveData da = curve_data(ea), db = curve_data(eb);
  // Count lifts of the cheaper side across the other's fundamental segment.
  double cost_ab = (da.multiplicity * da.ell) * std::exp(std::min(20.0, db.d_base + db.ell / 2));
  double cost_ba = (db.multiplicity * db.ell) * std::exp(std::min(20.0, da.d_base + da.ell / 2));
  if (cost_ab <= cost_ba) return db.multiplicity * stabilized_count(ea, db, CrossingFilter::All);
  return da.multiplicity * stabilized_count(eb, da, CrossingFilter::All);
}

double CurveOps::intersection_number(const MultiCurve& C, const MultiCurve& D) const {
  double total = 0;
  for (const auto& c : C.components)
    for (const auto& d : D.components)
      total += c.weight * d.weight * (double)intersection_classes(c.g, d.g);
  return total;
}

long long CurveOps::self_intersection(const GroupElement& e) const {
  const Group& g = *group_;
  Word cyc = g.cyclic_reduce(e.word);
  if (cyc.empty()) return 0;
  GroupElement ge{cyc, g.eval(cyc)};
  CurveData cd = curve_data(ge);
  long long crossings = stabilized_count(ge, cd, CrossingFilter::All);
  if (crossings % 2)
    throw GcdError("internal", "self-crossing lift count is odd");
  return crossings / 2;
}

long long CurveOps::algebraic_classes(const GroupElement& a, const GroupElement& b) const {
  if (group_->mode() != GroupMode::Genus2Octagon)
    throw GcdError("unsupported", "algebraic intersection requires genus2 mode");
  auto abelian = [&](const GroupElement& e) {
    std::array<long long, 4> v{0, 0, 0, 0};
    for (int x : e.word) v[std::abs(x) - 1] += x > 0 ? 1 : -1;
    return v;
  };
  auto u = abelian(a), v = abelian(b);
  return u[0] * v[1] - u[1] * v[0] + u[2] * v[3] - u[3] * v[2];
}

double CurveOps::algebraic_intersection(const MultiCurve& C, const MultiCurve& D) const {
  double total = 0;
  for (const auto& c : C.components)
    for (const auto& d : D.components)
      total += c.weight * d.weight * (double)algebraic_classes(c.g, d.g);
  return total;
}

double CurveOps::asymmetric_intersection(const MultiCurve& C, const MultiCurve& D) const {
  return 0.5 * intersection_number(C, D) + 0.5 * algebraic_intersection(C, D);
}

long long CurveOps::right_crossing_count(const GroupElement& a, const GroupElement& b) const {
  const Group& g = *group_;
  Word ca = g.cyclic_reduce(a.word), cb = g.cyclic_reduce(b.word);
  if (ca.empty() || cb.empty()) return 0;
  GroupElement ea{ca, g.eval(ca)};
  CurveData db = curve_data(GroupElement{cb, g.eval(cb)});
  return db.multiplicity * stabilized_count(ea, db, CrossingFilter::RightOnly);
}

namespace {

BoundaryPoint bp_from_angle(double theta) {
  constexpr double tau = 6.283185307179586476925286766559;
  theta = std::fmod(theta, tau);
  if (theta < 0) theta += tau;
  if (theta < 1e-12 || tau - theta < 1e-12) return BoundaryPoint::infinity();
  return BoundaryPoint::finite(-1.0 / std::tan(theta / 2.0));
}

double mid_angle(const BoundaryPoint& from, const BoundaryPoint& to) {
  return from.angle() + 0.5 * from.ccw_gap_to(to);
}

}  // namespace

long long CurveOps::box_count_class(const CurveData& cd, const GeodesicBox& B,
                                    bool left_closed, bool bottom_closed,
                                    double margin) const {
  const double eb = group_->tol().eps_bdy;
  // Transversal through the two gap arcs; every geodesic from the s-arc to
  // the t-arc crosses it.
  BoundaryPoint zA = bp_from_angle(mid_angle(B.s2, B.t2));
  BoundaryPoint zB = bp_from_angle(mid_angle(B.t1, B.s1));
  Isometry frame = frame_for_geodesic(zA, zB);
  auto local = [&](const BoundaryPoint& p) {
    BoundaryPoint q = frame.apply(p);
    if (q.is_inf()) throw GcdError("boundary_ambiguity", "box corner at transversal endpoint");
    return q.value();
  };
  double ls1 = local(B.s1), ls2 = local(B.s2), lt2 = local(B.t2), lt1 = local(B.t1);
  if (!(ls1 < 0 && ls2 < 0 && lt2 > 0 && lt1 > 0))
    throw GcdError("bad_argument", "box corners are not in ccw order");
  double ts[4] = {0.5 * std::log(-ls1 * lt2), 0.5 * std::log(-ls1 * lt1),
                  0.5 * std::log(-ls2 * lt2), 0.5 * std::log(-ls2 * lt1)};
  double tmin = *std::min_element(ts, ts + 4) - 0.75;
  double tmax = *std::max_element(ts, ts + 4) + 0.75;

  WalkParams wp;
  wp.seg_len = tmax - tmin;
  wp.window = cfg_.window_len;
  wp.r_tube = cd.d_base + cd.ell / 2 + cfg_.corridor_pad + margin;
  wp.t_offset = tmin;
  Isometry frame0 = compose(Isometry(std::exp(-tmin / 2), 0, 0, std::exp(tmin / 2)), frame);
  // keep the seed (identity) inside the tube
  {
    auto [x, y] = frame0.apply_interior(0.0, 1.0);
    double lr = 0.5 * std::log(x * x + y * y);
    double d0;
    if (lr >= 0 && lr <= wp.seg_len)
      d0 = std::asinh(std::fabs(x) / y);
    else if (lr < 0)
      d0 = dist_h2(x, y, 0, 1);
    else
      d0 = dist_h2(x, y, 0, std::exp(wp.seg_len));
    wp.r_tube = std::max(wp.r_tube, d0 + 1.5);
  }

  // Membership with half-open edges; endpoints within eps_bdy of a corner
  // follow the edge rule for that corner.
  auto arc_member = [&](const BoundaryPoint& p, const BoundaryPoint& lo,
                        const BoundaryPoint& hi, bool lo_in, bool hi_in) {
    bool at_lo = p.approx_equal(lo, eb), at_hi = p.approx_equal(hi, eb);
    if (at_lo && at_hi) throw GcdError("boundary_ambiguity", "box arc degenerate");
    if (at_lo) return lo_in;
    if (at_hi) return hi_in;
    return lo.ccw_gap_to(p) < lo.ccw_gap_to(hi);
  };

  long long count = 0;
  detail::corridor_walk(moves_, frame0, true, wp, cd.rep, cd.att,
                        [&](const LiftHit& h, const Isometry& abs_u) {
                          (void)h;
                          BoundaryPoint grep = abs_u.apply(cd.rep);
                          BoundaryPoint gatt = abs_u.apply(cd.att);
                          if (!arc_member(grep, B.s1, B.s2, left_closed, !left_closed)) return;
                          if (!arc_member(gatt, B.t2, B.t1, bottom_closed, !bottom_closed))
                            return;
                          count++;
                        });
  return count;
}

double CurveOps::box_count(const MultiCurve& C, const GeodesicBox& B, bool left_closed,
                           bool bottom_closed) const {
  double total = 0;
  for (const auto& comp : C.components) {
    CurveData cd = curve_data(comp.g);
    std::vector<long long> trail;
    int streak = 0;
    long long val = 0;
    bool done = false;
    for (int m = 0; m <= cfg_.max_margin && !done; m++) {
      long long c = box_count_class(cd, B, left_closed, bottom_closed, (double)m);
      if (!trail.empty() && trail.back() == c)
        streak++;
      else
        streak = 1;
      trail.push_back(c);
      if (streak >= cfg_.plateau_runs) {
        val = c;
        done = true;
      }
    }
    if (!done) {
      std::string msg = "box count did not stabilize; trail:";
      for (long long c : trail) msg += " " + std::to_string(c);
      throw GcdError("non_convergence", msg);
    }
    total += comp.weight * cd.multiplicity * (double)val;
  }
  return total;
}

}  // namespace gcdual
