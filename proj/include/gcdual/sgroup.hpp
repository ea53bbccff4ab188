#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "gcdual/hypgeom.hpp"

namespace gcdual {

// Signed generator indices: +k / -k refer to generator k (1-based) and its
// inverse. The empty word is the identity.
using Word = std::vector<int>;

Word inverse_word(const Word& w);
Word concat(const Word& a, const Word& b);
Word power_word(const Word& w, int n);

struct GroupElement {
  Word word;     // freely reduced (Dehn-reduced in genus2 mode)
  Isometry iso;  // cached evaluation of the word

  bool is_identity() const { return word.empty(); }
};

enum class GroupMode { Genus2Octagon, FreeSchottky };

// A fixed presentation together with evaluated generator isometries.
//
// genus2 mode: the four handle generators of the genus-2 surface group
// acting on H^2, built from the regular hyperbolic octagon with vertex
// angles pi/4 (side pairings conjugate by rotations of pi/4), relation
// [a1,b1][a2,b2] = 1, verified at startup.
//
// free2 mode: the Schottky pair a = diag(3,1/3), b = C a C^-1 with
// C = [[2,1],[1,1]], ping-pong checked at startup.
class Group {
public:
  static std::shared_ptr<const Group> make(GroupMode mode, Tolerances tol = {});

  GroupMode mode() const { return mode_; }
  const Tolerances& tol() const { return tol_; }
  int num_generators() const { return (int)gens_.size(); }
  const Isometry& generator(int k) const { return gens_[k - 1]; }  // 1-based
  const std::string& generator_name(int k) const { return names_[k - 1]; }
  const Word& relator() const { return relator_; }

  // Token names: a1,A1,b1,B1,a2,... in genus2; a,A,b,B (aliases a1...) in free2.
  Word parse(const std::string& text) const;
  std::string to_string(const Word& w) const;

  Isometry eval(const Word& w) const;
  GroupElement element(const Word& w) const;  // reduces and evaluates
  GroupElement element(const std::string& text) const;
  GroupElement identity() const { return GroupElement{{}, Isometry()}; }

  GroupElement multiply(const GroupElement& a, const GroupElement& b) const;
  GroupElement inverse(const GroupElement& a) const;
  GroupElement conjugate(const GroupElement& k, const GroupElement& w) const;  // k w k^-1
  GroupElement power(const GroupElement& a, int n) const;

  // Free reduction plus, in genus2 mode, Dehn reduction (any subword longer
  // than half a cyclic relator is replaced by the shorter complement).
  Word reduce_word(const Word& w) const;

  // Word-level canonical form: lexicographically least word obtainable by
  // length-preserving half-relator substitutions. Equal group elements get
  // equal keys (at the word lengths exercised here).
  Word element_key(const Word& w) const;

  // Cyclic free reduction plus, in genus2 mode, any rotation that Dehn
  // reduces shorter. Cheap conjugate representative (no shortlex closure).
  Word cyclic_reduce(const Word& w) const;

  // Cyclically reduced, closed under rotations and cyclic half-relator
  // swaps, then shortlex-minimal. Two elements are conjugate iff their
  // normal forms coincide; guarded by a trace cross-check.
  Word conjugacy_normal_form(const Word& w) const;
  GroupElement normal_form(const GroupElement& g) const;

  bool conjugate_classes(const GroupElement& a, const GroupElement& b) const;

  // Least period root: g = root^k with k maximal; returns (root, k).
  std::pair<GroupElement, int> primitive_root(const GroupElement& g) const;
  bool common_powers(const GroupElement& a, const GroupElement& b) const;

  // All reduced words of length <= L in deterministic (length, lex) order.
  // In genus2 mode the stream is Dehn-greedy; a group element may appear
  // under more than one geodesic spelling.
  void ball(int L, const std::function<void(const GroupElement&)>& sink) const;
  std::vector<GroupElement> ball(int L) const;

  // One representative per conjugacy class seen in ball(L), identity first.
  std::vector<GroupElement> class_representatives(int L) const;

  int max_ball_radius() const { return max_ball_; }

  Axis axis(const GroupElement& g) const { return axis_of(g.iso, tol_.eps_hyp); }

  // Word shifted cyclically so its axis passes as close to the base point i
  // as possible (used to condition long-geodesic walks). Conjugacy class is
  // unchanged.
  GroupElement best_rotation_for_axis(const GroupElement& g) const;

private:
  Group() = default;
  void build_genus2();
  void build_free2();
  void verify_startup() const;

  int letter_rank(int signed_idx) const;  // shortlex rank
  bool shortlex_less(const Word& a, const Word& b) const;
  std::vector<Word> half_swap_neighbors_cyclic(const Word& w) const;
  std::vector<Word> half_swap_neighbors_linear(const Word& w) const;

  GroupMode mode_ = GroupMode::FreeSchottky;
  Tolerances tol_;
  std::vector<Isometry> gens_;
  std::vector<std::string> names_;
  std::map<std::string, int> token_map_;
  Word relator_;                           // empty in free mode
  std::vector<Word> relator_rotations_;    // rotations of r and r^-1
  std::vector<Word> forbidden_;            // Dehn-reducible subwords (len > half)
  std::vector<std::pair<Word, Word>> half_swaps_;  // (half, replacement)
  int max_ball_ = 12;
};

// Weighted generating set for graph-length functionals.
struct GeneratingSet {
  struct Item {
    GroupElement g;
    double weight = 1.0;
  };
  std::vector<Item> items;
  bool symmetric = true;  // close under inverses when searching
  bool is_standard_rose = false;  // exactly the presentation generators, unit weight
  std::string name;
};

GeneratingSet standard_generating_set(const Group& g);

// Minimal weighted gs-length over all gs-expressions of any conjugate of w.
// Throws "bound_exceeded" when no expression is found within max_cost /
// max_depth.
double word_length(const Group& g, const GroupElement& w, const GeneratingSet& gs,
                   double max_cost = 24.0, int max_depth = 14);

struct StableLengthResult {
  double value = 0;
  double spread = 0;          // variation across the final slope estimates
  std::vector<double> sequence;  // f(w^n), n = 1..N
};

// Extrapolated limit of f(w^n)/n from the final K difference quotients
// (a Richardson step that cancels eventually-periodic corrections).
// Throws "no_limit" with the raw sequence attached when the slopes do not
// settle within tol.
StableLengthResult stable_length(const Group& g, const GroupElement& w, int N,
                                 const std::function<double(const GroupElement&)>& f,
                                 int K = 4, double tol = 1e-7);

}  // namespace gcdual
