#include "gcdual/sgroup.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <queue>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "gcdual/boundary.hpp"

namespace gcdual {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

std::string word_key(const Word& w) {
  std::string s;
  s.reserve(w.size());
  for (int x : w) s.push_back((char)(x + 64));
  return s;
}

// Upper half-plane point.
struct Pt {
  double x, y;
};

Pt disk_to_uhp(std::complex<double> w) {
  double u = w.real(), v = w.imag();
  double den = (1 - u) * (1 - u) + v * v;
  return Pt{-2 * v / den, (1 - u * u - v * v) / den};
}

// Boundary endpoints of the geodesic through two interior points, directed
// from z1 to z2: returns (backward, forward).
std::pair<BoundaryPoint, BoundaryPoint> geodesic_through(Pt z1, Pt z2) {
  if (std::fabs(z1.x - z2.x) < 1e-13) {
    if (z2.y > z1.y) return {BoundaryPoint::finite(z1.x), BoundaryPoint::infinity()};
    return {BoundaryPoint::infinity(), BoundaryPoint::finite(z1.x)};
  }
  double c = (z1.x * z1.x + z1.y * z1.y - z2.x * z2.x - z2.y * z2.y) /
             (2 * (z1.x - z2.x));
  double r = std::hypot(z1.x - c, z1.y);
  double phi1 = std::atan2(z1.y, z1.x - c);
  double phi2 = std::atan2(z2.y, z2.x - c);
  if (phi2 < phi1) return {BoundaryPoint::finite(c - r), BoundaryPoint::finite(c + r)};
  return {BoundaryPoint::finite(c + r), BoundaryPoint::finite(c - r)};
}

// Frame sending the directed geodesic (p -> q) to (0 -> inf) and base to i.
Isometry frame_for_segment(const BoundaryPoint& p, const BoundaryPoint& q, Pt base) {
  double a, b, c, d;
  if (p.is_inf()) {
    a = 0, b = -1, c = 1, d = -q.value();
  } else if (q.is_inf()) {
    a = 1, b = -p.value(), c = 0, d = 1;
  } else {
    a = 1, b = -p.value(), c = 1, d = -q.value();
  }
  if (a * d - b * c < 0) {
    c = -c;
    d = -d;
  }
  Isometry t(a, b, c, d);
  auto [ix, iy] = t.apply_interior(base.x, base.y);
  double r = std::hypot(ix, iy);
  double s = std::sqrt(r);
  return compose(Isometry(1.0 / s, 0, 0, s), t);
}

// Unique orientation-preserving isometry carrying the directed segment
// (s1 -> s2) onto (t1 -> t2); segment lengths must agree.
Isometry iso_between_segments(Pt s1, Pt s2, Pt t1, Pt t2) {
  double ls = dist_h2(s1.x, s1.y, s2.x, s2.y);
  double lt = dist_h2(t1.x, t1.y, t2.x, t2.y);
  if (std::fabs(ls - lt) > 1e-9)
    throw GcdError("bad_matrix", "iso_between_segments: length mismatch");
  auto [sp, sq] = geodesic_through(s1, s2);
  auto [tp, tq] = geodesic_through(t1, t2);
  Isometry fs = frame_for_segment(sp, sq, s1);
  Isometry ft = frame_for_segment(tp, tq, t1);
  return compose(ft.inverse(), fs);
}

double residual_to_projective_identity(const Isometry& m) {
  double rp = std::max({std::fabs(m.a() - 1), std::fabs(m.b()), std::fabs(m.c()),
                        std::fabs(m.d() - 1)});
  double rm = std::max({std::fabs(m.a() + 1), std::fabs(m.b()), std::fabs(m.c()),
                        std::fabs(m.d() + 1)});
  return std::min(rp, rm);
}

int pack5(const int* w) {
  int k = 0;
  for (int i = 0; i < 5; i++) k = k * 17 + (w[i] + 8);
  return k;
}

}  // namespace

Word inverse_word(const Word& w) {
  Word r(w.rbegin(), w.rend());
  for (int& x : r) x = -x;
  return r;
}

Word concat(const Word& a, const Word& b) {
  Word r = a;
  r.insert(r.end(), b.begin(), b.end());
  return r;
}

Word power_word(const Word& w, int n) {
  if (n == 0) return {};
  Word base = n > 0 ? w : inverse_word(w);
  Word r;
  for (int i = 0; i < std::abs(n); i++) r = concat(r, base);
  return r;
}

std::shared_ptr<const Group> Group::make(GroupMode mode, Tolerances tol) {
  auto g = std::shared_ptr<Group>(new Group());
  g->mode_ = mode;
  g->tol_ = tol;
  if (mode == GroupMode::Genus2Octagon)
    g->build_genus2();
  else
    g->build_free2();
  g->verify_startup();
  return g;
}

void Group::build_free2() {
  names_ = {"a", "b"};
  token_map_ = {{"a", 1}, {"A", -1}, {"b", 2}, {"B", -2},
                {"a1", 1}, {"A1", -1}, {"b1", 2}, {"B1", -2}};
  Isometry a(3, 0, 0, 1.0 / 3.0);
  Isometry c(2, 1, 1, 1);
  Isometry b = compose(compose(c, a), c.inverse());
  gens_ = {a, b};
  max_ball_ = 12;

  // Ping-pong domains: a maps the complement of [-t,t] into {|x| >= 9t},
  // and b = CaC^-1 does the corresponding thing around C(0)=1, C(inf)=2.
  double t = 0.3, T = 2.7;
  auto ai = [&](double x) { return 9 * x; };
  if (!(std::fabs(ai(t)) >= T - 1e-12 && std::fabs(ai(-t)) >= T - 1e-12))
    throw GcdError("ping_pong", "free2 ping-pong domain check failed (a)");
  auto C = [&](double x) { return (2 * x + 1) / (x + 1); };
  double bm_lo = C(-t), bm_hi = C(t);
  double bp_lo = C(T), bp_hi = C(-T);
  if (!(t < bm_lo && bm_hi < bp_lo && bp_hi < T))
    throw GcdError("ping_pong", "free2 ping-pong intervals are not disjoint");
}

void Group::build_genus2() {
  names_ = {"a1", "b1", "a2", "b2"};
  token_map_ = {{"a1", 1}, {"A1", -1}, {"b1", 2}, {"B1", -2},
                {"a2", 3}, {"A2", -3}, {"b2", 4}, {"B2", -4}};
  max_ball_ = 10;

  // Side pairings of the regular octagon with vertex angles pi/4: the
  // translation T along the imaginary axis through opposite side midpoints
  // has cosh(l/2) = 1 + sqrt 2, and its conjugates g_k by rotations of
  // k*pi/4 about i pair the remaining opposite sides, with the octagon
  // relation g0 G1 g2 G3 G0 g1 G2 g3 = 1.
  double r = std::acosh(1.0 + std::sqrt(2.0));
  Isometry T0(std::exp(r), 0, 0, std::exp(-r));
  double ph = kPi / 8.0;
  Isometry R(std::cos(ph), std::sin(ph), -std::sin(ph), std::cos(ph));
  Isometry g[4];
  for (int k = 0; k < 4; k++) {
    Isometry rk;
    for (int i = 0; i < k; i++) rk = compose(rk, R);
    g[k] = compose(compose(rk, T0), rk.inverse());
  }
  {
    Isometry p;
    const int octagon_rel[8] = {1, -2, 3, -4, -1, 2, -3, 4};
    for (int s : octagon_rel) {
      Isometry m = g[std::abs(s) - 1];
      if (s < 0) m = m.inverse();
      p = compose(p, m);
    }
    if (residual_to_projective_identity(p) > 1e-9)
      throw GcdError("octagon_construction", "octagon side-pairing relation failed");
  }

  // Standard symplectic basis inside the octagon group: short products of
  // side pairings, all conjugate to a side pairing (so of systole length),
  // satisfying [a1,b1][a2,b2] = 1.
  gens_ = {g[0], compose(g[1].inverse(), Isometry()),
           compose(g[2].inverse(), g[3]),
           compose(compose(g[0], g[1].inverse()), g[2])};
  {
    Isometry p;
    const int rel[8] = {1, 2, -1, -2, 3, 4, -3, -4};
    for (int s : rel) {
      Isometry m = gens_[std::abs(s) - 1];
      if (s < 0) m = m.inverse();
      p = compose(p, m);
    }
    if (residual_to_projective_identity(p) > 1e-7)
      throw GcdError("octagon_construction", "handle-basis relation failed");
  }

  // Orient the basis so (a1, b1) cross to the right: with the reversed
  // labelling (b2,a2,b1,a1) the commutator relation still holds and every
  // chirality flips.
  Axis a1 = axis_of(gens_[0], tol_.eps_hyp), b1 = axis_of(gens_[1], tol_.eps_hyp);
  PairClass pc = classify_axes(a1, b1, tol_.eps_bdy);
  if (pc == PairClass::LCross) {
    std::vector<Isometry> re = {gens_[3], gens_[2], gens_[1], gens_[0]};
    gens_ = re;
    a1 = axis_of(gens_[0], tol_.eps_hyp);
    b1 = axis_of(gens_[1], tol_.eps_hyp);
    pc = classify_axes(a1, b1, tol_.eps_bdy);
  }
  if (pc != PairClass::RCross)
    throw GcdError("octagon_construction", "handle generators a1, b1 do not R-cross");
  Axis a2 = axis_of(gens_[2], tol_.eps_hyp);
  if (is_crossing(classify_axes(a1, a2, tol_.eps_bdy)))
    throw GcdError("octagon_construction", "handle generators a1, a2 cross");

  relator_ = {1, 2, -1, -2, 3, 4, -3, -4};
  std::set<Word> rots;
  for (const Word& base : {relator_, inverse_word(relator_)}) {
    for (size_t r = 0; r < base.size(); r++) {
      Word w;
      for (size_t i = 0; i < base.size(); i++) w.push_back(base[(r + i) % base.size()]);
      rots.insert(w);
    }
  }
  relator_rotations_.assign(rots.begin(), rots.end());
  std::set<Word> forb;
  std::set<std::pair<Word, Word>> swaps;
  for (const Word& rot : relator_rotations_) {
    forb.insert(Word(rot.begin(), rot.begin() + 5));
    Word half(rot.begin(), rot.begin() + 4);
    Word rest(rot.begin() + 4, rot.end());
    swaps.insert({half, inverse_word(rest)});
  }
  forbidden_.assign(forb.begin(), forb.end());
  half_swaps_.assign(swaps.begin(), swaps.end());
}

void Group::verify_startup() const {
  for (const auto& m : gens_)
    if (!m.is_hyperbolic(tol_.eps_hyp))
      throw GcdError("startup", "generator is not hyperbolic");
  if (mode_ == GroupMode::Genus2Octagon) {
    Isometry p = eval(relator_);
    if (residual_to_projective_identity(p) > 1e-7)
      throw GcdError("startup", "relator residual exceeds 1e-7");
  }
}

Word Group::parse(const std::string& text) const {
  Word w;
  std::istringstream in(text);
  std::string tok;
  while (in >> tok) {
    if (tok == "e" || tok == "1") continue;
    auto it = token_map_.find(tok);
    if (it == token_map_.end())
      throw GcdError("parse", "unknown generator token '" + tok + "'");
    w.push_back(it->second);
  }
  return w;
}

std::string Group::to_string(const Word& w) const {
  if (w.empty()) return "e";
  std::string s;
  for (size_t i = 0; i < w.size(); i++) {
    if (i) s += ' ';
    std::string n = names_[std::abs(w[i]) - 1];
    if (w[i] < 0)
      for (char& ch : n) ch = (char)std::toupper((unsigned char)ch);
    s += n;
  }
  return s;
}

Isometry Group::eval(const Word& w) const {
  Isometry p;
  for (int x : w) {
    Isometry m = gens_[std::abs(x) - 1];
    if (x < 0) m = m.inverse();
    p = compose(p, m, tol_.eps_det);
  }
  return p;
}

GroupElement Group::element(const Word& w) const {
  Word r = reduce_word(w);
  return GroupElement{r, eval(r)};
}

GroupElement Group::element(const std::string& text) const { return element(parse(text)); }

GroupElement Group::multiply(const GroupElement& a, const GroupElement& b) const {
  return element(concat(a.word, b.word));
}

GroupElement Group::inverse(const GroupElement& a) const {
  return GroupElement{inverse_word(a.word), a.iso.inverse()};
}

GroupElement Group::conjugate(const GroupElement& k, const GroupElement& w) const {
  return element(concat(k.word, concat(w.word, inverse_word(k.word))));
}

GroupElement Group::power(const GroupElement& a, int n) const {
  return element(power_word(a.word, n));
}

static void free_reduce_inplace(Word& w) {
  Word out;
  out.reserve(w.size());
  for (int x : w) {
    if (!out.empty() && out.back() == -x)
      out.pop_back();
    else
      out.push_back(x);
  }
  w.swap(out);
}

Word Group::reduce_word(const Word& w0) const {
  Word w = w0;
  free_reduce_inplace(w);
  if (mode_ != GroupMode::Genus2Octagon) return w;
  bool changed = true;
  while (changed) {
    changed = false;
    const size_t n = w.size();
    for (size_t i = 0; i < n && !changed; i++) {
      for (const Word& rot : relator_rotations_) {
        size_t maxl = std::min<size_t>(rot.size(), n - i);
        if (maxl < 5) continue;
        size_t match = 0;
        while (match < maxl && w[i + match] == rot[match]) match++;
        if (match >= 5) {
          Word repl = inverse_word(Word(rot.begin() + match, rot.end()));
          Word nw(w.begin(), w.begin() + i);
          nw.insert(nw.end(), repl.begin(), repl.end());
          nw.insert(nw.end(), w.begin() + i + match, w.end());
          free_reduce_inplace(nw);
          w.swap(nw);
          changed = true;
          break;
        }
      }
    }
  }
  return w;
}

int Group::letter_rank(int x) const { return 2 * (std::abs(x) - 1) + (x < 0 ? 1 : 0); }

bool Group::shortlex_less(const Word& a, const Word& b) const {
  if (a.size() != b.size()) return a.size() < b.size();
  for (size_t i = 0; i < a.size(); i++) {
    int ra = letter_rank(a[i]), rb = letter_rank(b[i]);
    if (ra != rb) return ra < rb;
  }
  return false;
}

std::vector<Word> Group::half_swap_neighbors_linear(const Word& w) const {
  std::vector<Word> out;
  if (w.size() < 4) return out;
  for (size_t i = 0; i + 4 <= w.size(); i++) {
    for (const auto& [half, repl] : half_swaps_) {
      bool ok = true;
      for (int k = 0; k < 4 && ok; k++) ok = w[i + k] == half[k];
      if (!ok) continue;
      Word nw(w.begin(), w.begin() + i);
      nw.insert(nw.end(), repl.begin(), repl.end());
      nw.insert(nw.end(), w.begin() + i + 4, w.end());
      out.push_back(nw);
    }
  }
  return out;
}

std::vector<Word> Group::half_swap_neighbors_cyclic(const Word& w) const {
  std::vector<Word> out;
  const size_t n = w.size();
  if (n < 4) return out;
  for (size_t i = 0; i < n; i++) {
    for (const auto& [half, repl] : half_swaps_) {
      bool ok = true;
      for (size_t k = 0; k < 4 && ok; k++) ok = w[(i + k) % n] == half[k];
      if (!ok) continue;
      Word nw;
      for (size_t k = 4; k < n; k++) nw.push_back(w[(i + k) % n]);
      nw.insert(nw.end(), repl.begin(), repl.end());
      out.push_back(nw);
    }
  }
  return out;
}

Word Group::element_key(const Word& w0) const {
  Word start = reduce_word(w0);
  if (mode_ != GroupMode::Genus2Octagon) return start;
  std::set<Word> seen{start};
  std::vector<Word> frontier{start};
  Word best = start;
  while (!frontier.empty()) {
    if (seen.size() > 20000) throw GcdError("key_overflow", "element_key closure too large");
    Word cur = frontier.back();
    frontier.pop_back();
    for (Word& nb : half_swap_neighbors_linear(cur)) {
      free_reduce_inplace(nb);
      if (nb.size() < cur.size()) {
        // hidden reduction; restart from the shorter word
        return element_key(nb);
      }
      if (seen.insert(nb).second) frontier.push_back(nb);
    }
  }
  for (const Word& w : seen)
    if (shortlex_less(w, best)) best = w;
  return best;
}

Word Group::cyclic_reduce(const Word& w0) const {
  Word w = reduce_word(w0);
  bool changed = true;
  while (changed) {
    changed = false;
    while (w.size() >= 2 && w.front() == -w.back()) {
      w.erase(w.begin());
      w.pop_back();
      changed = true;
    }
    // Linear subwords are already Dehn-reduced; only matches straddling the
    // seam can shorten further, and those start within 7 letters of the end.
    if (mode_ == GroupMode::Genus2Octagon && w.size() >= 5) {
      const size_t n = w.size();
      for (size_t off = 1; off <= 7 && off < n && !changed; off++) {
        size_t i = n - off;
        for (const Word& rot : relator_rotations_) {
          size_t maxl = std::min(rot.size(), n);
          size_t match = 0;
          while (match < maxl && w[(i + match) % n] == rot[match]) match++;
          if (match >= 5 && match > off) {
            Word rotw;
            rotw.reserve(n);
            for (size_t k = 0; k < n; k++) rotw.push_back(w[(i + k) % n]);
            Word red = reduce_word(rotw);
            if (red.size() < n) {
              w = red;
              changed = true;
              break;
            }
          }
        }
      }
    }
  }
  return w;
}

Word Group::conjugacy_normal_form(const Word& w0) const {
  Word w = cyclic_reduce(w0);
  if (w.empty()) return w;
  if (mode_ != GroupMode::Genus2Octagon) {
    Word best = w;
    for (size_t r = 1; r < w.size(); r++) {
      Word rot;
      for (size_t i = 0; i < w.size(); i++) rot.push_back(w[(r + i) % w.size()]);
      if (shortlex_less(rot, best)) best = rot;
    }
    return best;
  }

  auto min_rotation = [&](const Word& u) {
    Word best = u;
    for (size_t r = 1; r < u.size(); r++) {
      Word rot;
      for (size_t i = 0; i < u.size(); i++) rot.push_back(u[(r + i) % u.size()]);
      if (shortlex_less(rot, best)) best = rot;
    }
    return best;
  };

  Word start = min_rotation(w);
  std::set<Word> seen{start};
  std::vector<Word> frontier{start};
  Word best = start;
  while (!frontier.empty()) {
    if (seen.size() > 100000)
      throw GcdError("cnf_overflow", "conjugacy closure too large");
    Word cur = frontier.back();
    frontier.pop_back();
    for (Word& nb : half_swap_neighbors_cyclic(cur)) {
      Word canon;
      {
        free_reduce_inplace(nb);
        if (nb.size() < cur.size()) return conjugacy_normal_form(nb);
        canon = min_rotation(nb);
      }
      if (seen.insert(canon).second) frontier.push_back(canon);
    }
  }
  for (const Word& u : seen)
    if (shortlex_less(u, best)) best = u;
  return best;
}

GroupElement Group::normal_form(const GroupElement& g) const {
  Word n = conjugacy_normal_form(g.word);
  return GroupElement{n, eval(n)};
}

bool Group::conjugate_classes(const GroupElement& a, const GroupElement& b) const {
  bool eq = conjugacy_normal_form(a.word) == conjugacy_normal_form(b.word);
  if (eq) {
    double ta = std::fabs(a.iso.trace()), tb = std::fabs(b.iso.trace());
    if (std::fabs(ta - tb) > 1e-6 * std::max(1.0, std::max(ta, tb)))
      throw GcdError("conjugacy_diagnostic",
                     "normal forms agree but traces differ: " + std::to_string(ta) + " vs " +
                         std::to_string(tb));
  }
  return eq;
}

std::pair<GroupElement, int> Group::primitive_root(const GroupElement& g) const {
  Word cw = conjugacy_normal_form(g.word);
  if (cw.empty()) return {identity(), 1};
  const size_t n = cw.size();
  for (size_t d = 1; d < n; d++) {
    if (n % d) continue;
    Word root(cw.begin(), cw.begin() + d);
    if (conjugacy_normal_form(power_word(root, (int)(n / d))) == cw)
      return {element(root), (int)(n / d)};
  }
  return {element(cw), 1};
}

bool Group::common_powers(const GroupElement& a, const GroupElement& b) const {
  if (a.is_identity() || b.is_identity()) return true;
  // Common powers <=> common axis <=> the elements commute, which the word
  // problem decides exactly.
  Word comm = reduce_word(concat(concat(a.word, b.word),
                                 concat(inverse_word(a.word), inverse_word(b.word))));
  if (comm.empty()) return true;
  // Fallback screen: coincident axes would contradict the word-level answer.
  if (a.iso.is_hyperbolic(tol_.eps_hyp) && b.iso.is_hyperbolic(tol_.eps_hyp)) {
    Axis aa = axis_of(a.iso, tol_.eps_hyp), ab = axis_of(b.iso, tol_.eps_hyp);
    bool same = (aa.attracting.approx_equal(ab.attracting, tol_.eps_bdy) &&
                 aa.repelling.approx_equal(ab.repelling, tol_.eps_bdy)) ||
                (aa.attracting.approx_equal(ab.repelling, tol_.eps_bdy) &&
                 aa.repelling.approx_equal(ab.attracting, tol_.eps_bdy));
    if (same)
      throw GcdError("conjugacy_diagnostic",
                     "axes coincide but elements do not commute at word level");
  }
  return false;
}

void Group::ball(int L, const std::function<void(const GroupElement&)>& sink) const {
  if (L > max_ball_)
    throw GcdError("resource", "ball radius " + std::to_string(L) + " exceeds configured max " +
                                   std::to_string(max_ball_));
  std::unordered_set<int> forb5;
  for (const Word& f : forbidden_) forb5.insert(pack5(f.data()));

  std::vector<int> letters;
  for (int k = 1; k <= num_generators(); k++) {
    letters.push_back(k);
    letters.push_back(-k);
  }
  std::sort(letters.begin(), letters.end(),
            [&](int a, int b) { return letter_rank(a) < letter_rank(b); });

  Word w;
  std::vector<Isometry> stack{Isometry()};
  sink(GroupElement{{}, Isometry()});

  std::function<void()> rec = [&]() {
    if ((int)w.size() == L) return;
    for (int x : letters) {
      if (!w.empty() && w.back() == -x) continue;
      if (mode_ == GroupMode::Genus2Octagon && w.size() >= 4) {
        int probe[5] = {w[w.size() - 4], w[w.size() - 3], w[w.size() - 2], w[w.size() - 1], x};
        if (forb5.count(pack5(probe))) continue;
      }
      w.push_back(x);
      Isometry m = gens_[std::abs(x) - 1];
      if (x < 0) m = m.inverse();
      stack.push_back(compose(stack.back(), m, tol_.eps_det));
      sink(GroupElement{w, stack.back()});
      rec();
      stack.pop_back();
      w.pop_back();
    }
  };
  rec();
}

std::vector<GroupElement> Group::ball(int L) const {
  std::vector<GroupElement> out;
  ball(L, [&](const GroupElement& g) { out.push_back(g); });
  return out;
}

std::vector<GroupElement> Group::class_representatives(int L) const {
  std::vector<GroupElement> out;
  std::set<Word> seen;
  ball(L, [&](const GroupElement& g) {
    Word n = conjugacy_normal_form(g.word);
    if (seen.insert(n).second) out.push_back(GroupElement{n, eval(n)});
  });
  return out;
}

GroupElement Group::best_rotation_for_axis(const GroupElement& g) const {
  Word base = cyclic_reduce(g.word);
  if (base.empty()) throw GcdError("not_hyperbolic", "identity has no axis");
  double best_d = 1e300;
  Word best = base;
  for (size_t r = 0; r < base.size(); r++) {
    Word rot;
    for (size_t i = 0; i < base.size(); i++) rot.push_back(base[(r + i) % base.size()]);
    Isometry m = eval(rot);
    if (!m.is_hyperbolic(tol_.eps_hyp)) continue;
    Axis ax = axis_of(m, tol_.eps_hyp);
    Isometry f = frame_for_geodesic(ax.repelling, ax.attracting);
    auto [px, py] = f.apply_interior(0.0, 1.0);
    double d = std::asinh(std::fabs(px) / py);
    if (d < best_d) {
      best_d = d;
      best = rot;
    }
  }
  return GroupElement{best, eval(best)};
}

GeneratingSet standard_generating_set(const Group& g) {
  GeneratingSet gs;
  gs.name = "standard";
  gs.symmetric = true;
  gs.is_standard_rose = true;
  for (int k = 1; k <= g.num_generators(); k++)
    gs.items.push_back({g.element(Word{k}), 1.0});
  return gs;
}

namespace {

// Minimal weighted cover of a run of L identical letters by the available
// powers (unbounded knapsack).
double run_cost(int L, const std::vector<std::pair<int, double>>& powers) {
  std::vector<double> best(L + 1, 1e300);
  best[0] = 0;
  for (int l = 1; l <= L; l++)
    for (auto& [k, wt] : powers)
      if (k <= l && best[l - k] + wt < best[l]) best[l] = best[l - k] + wt;
  if (best[L] >= 1e300) throw GcdError("bound_exceeded", "run not coverable by the set");
  return best[L];
}

}  // namespace

double word_length(const Group& g, const GroupElement& w, const GeneratingSet& gs,
                   double max_cost, int max_depth) {
  // The cyclic Dehn reduction already has minimal length; the shortlex
  // closure is only needed for exact class comparison below.
  if (gs.is_standard_rose) return (double)g.cyclic_reduce(w.word).size();

  // When every item is a power of a single generator, factorizations split
  // along the maximal runs of the cyclic word and each run is an
  // independent covering problem.
  bool single_letter = true;
  for (const auto& it : gs.items) {
    const Word& v = it.g.word;
    for (size_t i = 1; i < v.size() && single_letter; i++)
      single_letter = v[i] == v[0];
    if (v.empty()) single_letter = false;
    if (!single_letter) break;
  }
  if (single_letter && g.relator().empty()) {
    Word cyc = g.cyclic_reduce(w.word);
    if (cyc.empty()) return 0.0;
    std::map<int, std::vector<std::pair<int, double>>> powers;  // generator -> (k, weight)
    for (const auto& it : gs.items) {
      int letter = it.g.word[0];
      int k = (int)it.g.word.size();
      int gen = std::abs(letter);
      if (letter > 0 || gs.symmetric) powers[gen].push_back({k, it.weight});
      if (letter < 0 || gs.symmetric) powers[-gen].push_back({k, it.weight});
    }
    // maximal runs of the cyclic word (first/last runs merge on wrap)
    std::vector<std::pair<int, int>> runs;  // (signed generator, length)
    for (int x : cyc) {
      if (!runs.empty() && runs.back().first == x)
        runs.back().second++;
      else
        runs.push_back({x, 1});
    }
    if (runs.size() > 1 && runs.front().first == runs.back().first) {
      runs.front().second += runs.back().second;
      runs.pop_back();
    }
    double total = 0;
    for (auto& [x, L] : runs) {
      int key = x > 0 ? std::abs(x) : -std::abs(x);
      auto it = powers.find(key);
      if (it == powers.end())
        throw GcdError("bound_exceeded", "run letter not generated by the set");
      total += run_cost(L, it->second);
    }
    return total;
  }

  Word target = g.conjugacy_normal_form(w.word);
  if (target.empty()) return 0.0;

  struct Node {
    double cost;
    int depth;
    Word word;
  };
  auto cmp = [](const Node& a, const Node& b) { return a.cost > b.cost; };
  std::priority_queue<Node, std::vector<Node>, decltype(cmp)> pq(cmp);
  std::unordered_map<std::string, double> dist;

  std::vector<std::pair<Word, double>> moves;
  for (const auto& it : gs.items) {
    if (it.weight <= 0) throw GcdError("bad_argument", "generating-set weights must be > 0");
    moves.push_back({it.g.word, it.weight});
    if (gs.symmetric) moves.push_back({inverse_word(it.g.word), it.weight});
  }

  pq.push({0.0, 0, {}});
  dist[word_key({})] = 0.0;
  const size_t node_cap = 400000;
  while (!pq.empty()) {
    if (dist.size() > node_cap)
      throw GcdError("bound_exceeded", "word_length: search frontier exceeded the node cap");
    Node n = pq.top();
    pq.pop();
    std::string k = word_key(g.element_key(n.word));
    auto it = dist.find(k);
    if (it != dist.end() && it->second < n.cost - 1e-12) continue;
    if (g.conjugacy_normal_form(n.word) == target) return n.cost;
    if (n.cost > max_cost || n.depth >= max_depth) continue;
    for (const auto& [mw, wt] : moves) {
      Word nw = g.reduce_word(concat(n.word, mw));
      double nc = n.cost + wt;
      if (nc > max_cost + 1e-12) continue;
      std::string nk = word_key(g.element_key(nw));
      auto dit = dist.find(nk);
      if (dit == dist.end() || nc < dit->second - 1e-12) {
        dist[nk] = nc;
        pq.push({nc, n.depth + 1, nw});
      }
    }
  }
  throw GcdError("bound_exceeded",
                 "word_length: class not expressible within search bound");
}

StableLengthResult stable_length(const Group& g, const GroupElement& w, int N,
                                 const std::function<double(const GroupElement&)>& f,
                                 int K, double tol) {
  if (N < 2) throw GcdError("bad_argument", "stable_length needs N >= 2");
  K = std::min(K, N - 1);
  StableLengthResult r;
  r.sequence.resize(N);
  for (int n = 1; n <= N; n++) r.sequence[n - 1] = f(g.power(w, n));
  std::vector<double> slopes;
  for (int n = std::max(K + 1, N - K + 1); n <= N; n++)
    slopes.push_back((r.sequence[n - 1] - r.sequence[n - K - 1]) / K);
  double lo = slopes[0], hi = slopes[0];
  for (double s : slopes) {
    lo = std::min(lo, s);
    hi = std::max(hi, s);
  }
  r.value = slopes.back();
  r.spread = hi - lo;
  if (r.spread > tol) {
    std::string seq;
    for (double v : r.sequence) seq += std::to_string(v) + " ";
    throw GcdError("no_limit", "stable_length: slope estimates did not settle (spread " +
                                   std::to_string(r.spread) + "); raw sequence: " + seq);
  }
  return r;
}

}  // namespace gcdual
