#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "gcdual/boundary.hpp"
#include "gcdual/sgroup.hpp"

namespace gcdual {

// Weighted formal sum of conjugacy classes. Components are kept in
// conjugacy normal form, merged, and strictly positively weighted.
struct MultiCurve {
  struct Component {
    GroupElement g;
    double weight = 1.0;
  };
  std::vector<Component> components;
};

MultiCurve make_multicurve(const Group& g,
                           const std::vector<std::pair<GroupElement, double>>& items);
MultiCurve single_curve(const Group& g, const GroupElement& e, double weight = 1.0);
// JSON schema: [{ "word": "a1 b1 A1", "weight": 1.0 }, ...]
MultiCurve multicurve_from_json(const Group& g, const std::string& json_text);
std::string multicurve_to_json(const Group& g, const MultiCurve& c);

// Half-open box of oriented geodesics [s1,s2) x [t2,t1): first factor is
// the repelling endpoint, second the attracting one; the four corners are
// in ccw order.
struct GeodesicBox {
  BoundaryPoint s1, s2, t2, t1;
};

struct CurveConfig {
  double corridor_pad = 2.5;   // tube slack beyond d(i,axis) + l/2
  int plateau_runs = 3;        // consecutive equal counts required
  int max_margin = 6;          // extra tube radius explored before giving up
  double window_len = 1.25;    // target window length along the transversal
  int memo_word_limit = 16;
};

enum class CrossingFilter { All, RightOnly };

// Intersection machinery bound to one group. All counts stabilize over
// growing corridor radii (plateau rule) and raise non_convergence with the
// partial trail attached when they do not.
class CurveOps {
public:
  CurveOps(std::shared_ptr<const Group> g, CurveConfig cfg = {});

  const Group& group() const { return *group_; }
  const CurveConfig& config() const { return cfg_; }

  // Geometric intersection number, bilinear in weights.
  double intersection_number(const MultiCurve& C, const MultiCurve& D) const;
  long long intersection_classes(const GroupElement& a, const GroupElement& b) const;

  long long self_intersection(const GroupElement& g) const;

  // Symplectic pairing of abelianized exponent vectors in (a1,b1,a2,b2).
  double algebraic_intersection(const MultiCurve& C, const MultiCurve& D) const;
  long long algebraic_classes(const GroupElement& a, const GroupElement& b) const;

  // (i + <,>)/2, bilinear; cross-checkable against right_crossing_count.
  double asymmetric_intersection(const MultiCurve& C, const MultiCurve& D) const;
  // Direct count of lifts of [b] crossing ora{a} to the right across a
  // fundamental segment of a.
  long long right_crossing_count(const GroupElement& a, const GroupElement& b) const;

  // Weighted number of lifts of C landing in the box. left_closed /
  // bottom_closed select the half-open convention ([.,.) when true).
  double box_count(const MultiCurve& C, const GeodesicBox& B, bool left_closed = true,
                   bool bottom_closed = true) const;

  struct LiftHit {
    double t;        // parameter along the walked transversal
    double x_rep;    // local-frame repelling endpoint
    double x_att;    // local-frame attracting endpoint
    bool right_handed;
  };

  // Enumerates lifts of the class [curve] transversally crossing the
  // half-open fundamental segment of seg (parameter range [0, l(seg))).
  // Used by every counter above; exposed for the currents module.
  void crossing_lifts(const GroupElement& seg, const GroupElement& curve, double extra_margin,
                      const std::function<void(const LiftHit&)>& sink) const;

private:
  struct CurveData;  // conditioned representative of a class to count lifts of
  CurveData curve_data(const GroupElement& g) const;
  long long count_over_segment(const GroupElement& seg, const CurveData& cd,
                               CrossingFilter filter, double margin) const;
  long long stabilized_count(const GroupElement& seg, const CurveData& cd,
                             CrossingFilter filter) const;
  long long box_count_class(const CurveData& cd, const GeodesicBox& B, bool left_closed,
                            bool bottom_closed, double margin) const;

  std::shared_ptr<const Group> group_;
  CurveConfig cfg_;
  std::vector<Isometry> moves_;  // generator steps for corridor BFS
};

}  // namespace gcdual
