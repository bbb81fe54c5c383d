#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "qmorph/word.hpp"

namespace qmorph {

// ---------------------------------------------------------------------------
// Points
// ---------------------------------------------------------------------------

/// A point of the Cayley tree of F_k.
///
/// Vertices have offset 0. Interior edge points sit at distance `offset`
/// in (0, 1) from `vertex` along the edge to vertex*toward, where the edge is
/// always stored from the endpoint closer to the identity.
struct TreePoint {
  Word vertex;
  Letter toward = 0;
  double offset = 0.0;

  [[nodiscard]] bool is_vertex() const { return offset == 0.0; }
  bool operator==(const TreePoint&) const = default;
};

/// Builds a canonical tree point at distance t in [0, 1] from u toward u*l.
TreePoint tree_point(const Word& u, Letter l, double t);
inline TreePoint tree_vertex(Word w) { return TreePoint{std::move(w), 0, 0.0}; }

/// Upper half-plane point x + iy, y > 0.
struct PlanePoint {
  double x = 0.0;
  double y = 1.0;
  bool operator==(const PlanePoint&) const = default;
};

/// Euclidean point in dimension 1 or 2.
struct EuclidPoint {
  std::vector<double> v;
  bool operator==(const EuclidPoint&) const = default;
};

struct Point;

struct ProductPoint {
  std::shared_ptr<const Point> left;
  std::shared_ptr<const Point> right;
  bool operator==(const ProductPoint& other) const;
};

struct Point {
  std::variant<TreePoint, PlanePoint, EuclidPoint, ProductPoint> data;

  Point() = default;
  Point(TreePoint p) : data(std::move(p)) {}
  Point(PlanePoint p) : data(p) {}
  Point(EuclidPoint p) : data(std::move(p)) {}
  Point(ProductPoint p) : data(std::move(p)) {}

  [[nodiscard]] const TreePoint& tree() const { return std::get<TreePoint>(data); }
  [[nodiscard]] const PlanePoint& plane() const { return std::get<PlanePoint>(data); }
  [[nodiscard]] const EuclidPoint& euclid() const { return std::get<EuclidPoint>(data); }
  [[nodiscard]] const Point& left() const { return *std::get<ProductPoint>(data).left; }
  [[nodiscard]] const Point& right() const { return *std::get<ProductPoint>(data).right; }

  bool operator==(const Point& other) const;
};

Point make_product_point(Point left, Point right);
Point euclid_point(std::initializer_list<double> coords);
std::string to_string(const Point& p);

// ---------------------------------------------------------------------------
// Model spaces
// ---------------------------------------------------------------------------

enum class SpaceKind { Tree, HalfPlane, Euclidean, Product };

/// One of the concrete geodesic model spaces, with its (DD)/(FT) constant C
/// and numeric tolerance.
class ModelSpace {
 public:
  static ModelSpace tree(int rank);
  static ModelSpace half_plane();
  static ModelSpace euclidean(int dim);
  static ModelSpace product(ModelSpace left, ModelSpace right);

  [[nodiscard]] SpaceKind kind() const { return kind_; }
  [[nodiscard]] int rank() const { return rank_; }
  [[nodiscard]] int dim() const { return dim_; }
  [[nodiscard]] const ModelSpace& left() const { return *left_; }
  [[nodiscard]] const ModelSpace& right() const { return *right_; }
  [[nodiscard]] double dd_constant() const { return dd_constant_; }
  [[nodiscard]] double tolerance() const { return tolerance_; }
  /// True when every factor is a smooth model (no tree factor).
  [[nodiscard]] bool is_continuous() const;
  /// Dimension of the tangent space used by exp_point; 0 for trees.
  [[nodiscard]] int tangent_dim() const;
  [[nodiscard]] std::string name() const;

  [[nodiscard]] ModelSpace with_constant(double c) const;
  [[nodiscard]] ModelSpace with_tolerance(double eps) const;

 private:
  ModelSpace() = default;
  SpaceKind kind_ = SpaceKind::Euclidean;
  int rank_ = 0;
  int dim_ = 2;
  double dd_constant_ = 1.0;
  double tolerance_ = 1e-9;
  std::shared_ptr<const ModelSpace> left_;
  std::shared_ptr<const ModelSpace> right_;
};

/// Throws InputError if p is not a valid point of the space.
void validate(const ModelSpace& space, const Point& p);

double distance(const ModelSpace& space, const Point& x, const Point& y);

// ---------------------------------------------------------------------------
// Segments
// ---------------------------------------------------------------------------

class Segment;

namespace detail {

struct TreePath {
  std::vector<TreePoint> waypoints;  // consecutive entries share an edge
  std::vector<double> cumulative;
};

struct PlaneArc {
  bool vertical = true;
  double line_x = 0.0;      // vertical: the line x = line_x
  double log_y0 = 0.0;      // vertical: log of the start height
  double center = 0.0;      // semicircle center on the real axis
  double radius = 0.0;      // semicircle radius
  double u0 = 0.0;          // semicircle: unit-speed parameter of start
  double dir = 1.0;         // +1 or -1
};

struct EuclidLine {
  std::vector<double> origin;
  std::vector<double> unit;
};

struct ProductPath {
  std::shared_ptr<const Segment> left;
  std::shared_ptr<const Segment> right;
};

}  // namespace detail

/// An oriented geodesic with arclength parametrization.
class Segment {
 public:
  [[nodiscard]] const Point& start() const { return start_; }
  [[nodiscard]] const Point& end() const { return end_; }
  [[nodiscard]] double length() const { return length_; }
  [[nodiscard]] SpaceKind kind() const;

  /// s is clamped to [0, length].
  [[nodiscard]] Point point_at(double s) const;
  /// Arclength parametrization of the bi-infinite extension. Smooth models
  /// only; throws UnsupportedError on trees.
  [[nodiscard]] Point point_at_extended(double s) const;

  /// Vertices visited by a tree geodesic, in order.
  [[nodiscard]] std::vector<Word> tree_vertices() const;

  [[nodiscard]] const auto& geometry() const { return geom_; }

 private:
  friend Segment geodesic(const ModelSpace&, const Point&, const Point&);
  Point start_;
  Point end_;
  double length_ = 0.0;
  std::variant<detail::TreePath, detail::PlaneArc, detail::EuclidLine, detail::ProductPath> geom_;
};

Segment geodesic(const ModelSpace& space, const Point& a, const Point& b);

/// Points at parameters 0, step, 2*step, ... and always the endpoint.
std::vector<Point> sample_segment(const Segment& seg, double step);

struct ProjectionResult {
  Point point;
  double distance = 0.0;
  double parameter = 0.0;
};

/// Bracketed golden-section budget for 1-D convex minimization.
inline constexpr int kGoldenIterationCap = 200;
inline constexpr double kGoldenTolerance = 1e-9;

/// Nearest point of seg to x. Trees use the exact tripod formula, the
/// Euclidean plane and half-plane have closed forms, products use
/// golden-section on the convex distance function.
ProjectionResult project(const ModelSpace& space, const Point& x, const Segment& seg);

/// Golden-section minimizer of s -> d(x, seg.point_at(s)); available for
/// every model and used as the generic route. Throws NumericError if the
/// bracket does not close within the iteration cap.
ProjectionResult project_golden(const ModelSpace& space, const Point& x, const Segment& seg,
                                double tol = kGoldenTolerance, int max_iter = kGoldenIterationCap);

inline double distance_to_segment(const ModelSpace& space, const Point& x, const Segment& seg) {
  return project(space, x, seg).distance;
}

/// Sampled distance between two segments (min over points of `a` at `step`).
double segment_distance(const ModelSpace& space, const Segment& a, const Segment& b, double step);

/// Sampled one-sided Hausdorff distance: max over samples of a of d(., b).
double hausdorff_one_sided(const ModelSpace& space, const Segment& a, const Segment& b, double step);
double hausdorff(const ModelSpace& space, const Segment& a, const Segment& b, double step);

// ---------------------------------------------------------------------------
// Sampling helpers
// ---------------------------------------------------------------------------

/// Point reached from center by the tangent vector v (|v| = distance moved).
/// Smooth models only.
Point exp_point(const ModelSpace& space, const Point& center, std::span<const double> v);

/// Unit vector number k of a nested low-discrepancy sequence on S^{dim-1}.
std::vector<double> sphere_direction(int dim, std::size_t k);

/// The first n points of a nested deterministic sequence filling the closed
/// ball: the center, then alternately boundary and interior points. For
/// trees, every vertex in the ball plus the center (n is ignored).
std::vector<Point> ball_samples(const ModelSpace& space, const Point& center, double radius, std::size_t n);

/// Vertices of the tree within distance radius of p.
std::vector<Word> tree_ball_vertices(const ModelSpace& space, const TreePoint& p, double radius);

/// Vertices of the tree within distance radius of seg.
std::vector<Word> tree_tube_vertices(const ModelSpace& space, const Segment& seg, int radius);

// ---------------------------------------------------------------------------
// Axiom checks
// ---------------------------------------------------------------------------

/// A segment with a bundle of points; every ordered pair is a (DD) triple.
struct DdBundle {
  Segment segment;
  std::vector<Point> points;
};

struct DdViolation {
  Segment segment;
  Point x;
  Point x2;
  Point p;
  Point p2;
  double projection_gap = 0.0;   // |p - p'|
  double bound = 0.0;            // |x - x'| + C
};

using DdSink = std::function<void(const DdBundle&)>;
using DdSampler = std::function<void(const DdSink&)>;

std::vector<DdViolation> check_dd(const ModelSpace& space, const DdSampler& sampler, double c);

struct FtQuad {
  Point a, b, a2, b2;
};

struct FtViolation {
  FtQuad quad;
  Point witness;          // point of [a', b']
  double distance = 0.0;  // its distance to [a, b]
  double bound = 0.0;     // C + D
};

using FtSink = std::function<void(const FtQuad&)>;
using FtSampler = std::function<void(const FtSink&)>;

/// `step` is the sampling step along [a', b'].
std::vector<FtViolation> check_ft(const ModelSpace& space, const FtSampler& sampler, double c,
                                  double step = 0.5);

}  // namespace qmorph
