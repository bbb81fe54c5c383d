#include "qmorph/space.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <unordered_set>

#include "qmorph/errors.hpp"

namespace qmorph {

namespace {

struct Edge {
  Word u;
  Letter l;
};

Word prefix(const Word& w, std::size_t n) {
  const auto l = w.letters();
  return Word::from_reduced(std::vector<Letter>(l.begin(), l.begin() + static_cast<std::ptrdiff_t>(n)));
}

bool extends_away(const Word& u, Letter l) { return u.is_identity() || u.back() != -l; }

std::vector<std::pair<Word, double>> tree_ends(const TreePoint& p) {
  if (p.is_vertex()) return {{p.vertex, 0.0}};
  return {{p.vertex, p.offset}, {append(p.vertex, p.toward), 1.0 - p.offset}};
}

double tree_distance(const TreePoint& p, const TreePoint& q) {
  if (p.is_vertex() && q.is_vertex()) return static_cast<double>(word_distance(p.vertex, q.vertex));
  if (!p.is_vertex() && !q.is_vertex() && p.vertex == q.vertex && p.toward == q.toward) {
    return std::abs(p.offset - q.offset);
  }
  double best = INFINITY;
  for (const auto& [u, du] : tree_ends(p)) {
    for (const auto& [v, dv] : tree_ends(q)) {
      best = std::min(best, du + static_cast<double>(word_distance(u, v)) + dv);
    }
  }
  return best;
}

Edge common_edge(const TreePoint& p, const TreePoint& q) {
  if (!p.is_vertex()) return {p.vertex, p.toward};
  if (!q.is_vertex()) return {q.vertex, q.toward};
  if (q.vertex.length() > p.vertex.length()) return {p.vertex, q.vertex.back()};
  return {q.vertex, p.vertex.back()};
}

double edge_position(const TreePoint& p, const Edge& e) {
  if (!p.is_vertex()) return p.offset;
  return p.vertex == e.u ? 0.0 : 1.0;
}

double plane_distance(const PlanePoint& p, const PlanePoint& q) {
  const double chord = std::hypot(p.x - q.x, p.y - q.y);
  return 2.0 * std::asinh(chord / (2.0 * std::sqrt(p.y * q.y)));
}

double euclid_distance(const EuclidPoint& p, const EuclidPoint& q) {
  double s = 0.0;
  for (std::size_t i = 0; i < p.v.size(); ++i) s += (p.v[i] - q.v[i]) * (p.v[i] - q.v[i]);
  return std::sqrt(s);
}

double raw_distance(const ModelSpace& space, const Point& x, const Point& y) {
  switch (space.kind()) {
    case SpaceKind::Tree: return tree_distance(x.tree(), y.tree());
    case SpaceKind::HalfPlane: return plane_distance(x.plane(), y.plane());
    case SpaceKind::Euclidean: return euclid_distance(x.euclid(), y.euclid());
    case SpaceKind::Product: {
      const double l = raw_distance(space.left(), x.left(), y.left());
      const double r = raw_distance(space.right(), x.right(), y.right());
      return std::hypot(l, r);
    }
  }
  return 0.0;
}

double van_der_corput(std::size_t n, std::size_t base) {
  double q = 0.0;
  double bk = 1.0 / static_cast<double>(base);
  while (n > 0) {
    q += static_cast<double>(n % base) * bk;
    n /= base;
    bk /= static_cast<double>(base);
  }
  return q;
}

void require(bool ok, const char* what) {
  if (!ok) throw InputError(what);
}

}  // namespace

TreePoint tree_point(const Word& u, Letter l, double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw InputError("tree edge offset outside [0, 1]");
  if (t == 0.0) return tree_vertex(u);
  if (t == 1.0) return tree_vertex(append(u, l));
  if (extends_away(u, l)) return TreePoint{u, l, t};
  return TreePoint{append(u, l), -l, 1.0 - t};
}

bool ProductPoint::operator==(const ProductPoint& other) const {
  return *left == *other.left && *right == *other.right;
}

bool Point::operator==(const Point& other) const { return data == other.data; }

Point make_product_point(Point left, Point right) {
  return Point(ProductPoint{std::make_shared<const Point>(std::move(left)),
                            std::make_shared<const Point>(std::move(right))});
}

Point euclid_point(std::initializer_list<double> coords) { return Point(EuclidPoint{std::vector<double>(coords)}); }

std::string to_string(const Point& p) {
  std::ostringstream os;
  os.precision(17);
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, TreePoint>) {
          os << v.vertex.str();
          if (!v.is_vertex()) os << '>' << letter_char(v.toward) << '@' << v.offset;
        } else if constexpr (std::is_same_v<T, PlanePoint>) {
          os << '(' << v.x << ", " << v.y << ')';
        } else if constexpr (std::is_same_v<T, EuclidPoint>) {
          os << '(';
          for (std::size_t i = 0; i < v.v.size(); ++i) os << (i ? ", " : "") << v.v[i];
          os << ')';
        } else {
          os << '[' << to_string(*v.left) << " ; " << to_string(*v.right) << ']';
        }
      },
      p.data);
  return os.str();
}

// ---------------------------------------------------------------------------

ModelSpace ModelSpace::tree(int rank) {
  if (rank < 1 || rank > kMaxRank) throw InputError("tree rank must be in 1..4");
  ModelSpace s;
  s.kind_ = SpaceKind::Tree;
  s.rank_ = rank;
  s.dim_ = 1;
  s.dd_constant_ = 1.0;
  s.tolerance_ = 0.0;
  return s;
}

ModelSpace ModelSpace::half_plane() {
  ModelSpace s;
  s.kind_ = SpaceKind::HalfPlane;
  s.dim_ = 2;
  s.dd_constant_ = 1.0;
  s.tolerance_ = 1e-9;
  return s;
}

ModelSpace ModelSpace::euclidean(int dim) {
  if (dim < 1 || dim > 2) throw InputError("euclidean dimension must be 1 or 2");
  ModelSpace s;
  s.kind_ = SpaceKind::Euclidean;
  s.dim_ = dim;
  s.dd_constant_ = 0.0;
  s.tolerance_ = 1e-9;
  return s;
}

ModelSpace ModelSpace::product(ModelSpace left, ModelSpace right) {
  ModelSpace s;
  s.kind_ = SpaceKind::Product;
  s.dim_ = left.dim_ + right.dim_;
  s.dd_constant_ = std::max(left.dd_constant_, right.dd_constant_);
  s.tolerance_ = std::max({left.tolerance_, right.tolerance_, 1e-9});
  s.left_ = std::make_shared<const ModelSpace>(std::move(left));
  s.right_ = std::make_shared<const ModelSpace>(std::move(right));
  return s;
}

bool ModelSpace::is_continuous() const {
  switch (kind_) {
    case SpaceKind::Tree: return false;
    case SpaceKind::Product: return left_->is_continuous() && right_->is_continuous();
    default: return true;
  }
}

int ModelSpace::tangent_dim() const {
  switch (kind_) {
    case SpaceKind::Tree: return 0;
    case SpaceKind::HalfPlane: return 2;
    case SpaceKind::Euclidean: return dim_;
    case SpaceKind::Product: return left_->tangent_dim() + right_->tangent_dim();
  }
  return 0;
}

std::string ModelSpace::name() const {
  switch (kind_) {
    case SpaceKind::Tree: return "tree(F" + std::to_string(rank_) + ")";
    case SpaceKind::HalfPlane: return "half-plane";
    case SpaceKind::Euclidean: return "euclidean(" + std::to_string(dim_) + ")";
    case SpaceKind::Product: return "product(" + left_->name() + ", " + right_->name() + ")";
  }
  return "";
}

ModelSpace ModelSpace::with_constant(double c) const {
  ModelSpace s = *this;
  s.dd_constant_ = c;
  return s;
}

ModelSpace ModelSpace::with_tolerance(double eps) const {
  if (!(eps >= 0.0)) throw InputError("tolerance must be nonnegative");
  ModelSpace s = *this;
  s.tolerance_ = eps;
  return s;
}

void validate(const ModelSpace& space, const Point& p) {
  switch (space.kind()) {
    case SpaceKind::Tree: {
      const auto* t = std::get_if<TreePoint>(&p.data);
      require(t != nullptr, "expected a tree point");
      require(t->vertex.max_generator() <= space.rank(), "word uses a generator outside the tree rank");
      if (!t->is_vertex()) {
        require(t->offset > 0.0 && t->offset < 1.0, "tree edge offset outside (0, 1)");
        require(t->toward != 0 && std::abs(t->toward) <= space.rank(), "tree edge letter outside the rank");
        require(extends_away(t->vertex, t->toward), "tree edge must be stored from its inner endpoint");
      }
      return;
    }
    case SpaceKind::HalfPlane: {
      const auto* h = std::get_if<PlanePoint>(&p.data);
      require(h != nullptr, "expected a half-plane point");
      require(std::isfinite(h->x) && std::isfinite(h->y), "half-plane point is not finite");
      require(h->y > 0.0, "half-plane point needs a positive imaginary part");
      return;
    }
    case SpaceKind::Euclidean: {
      const auto* e = std::get_if<EuclidPoint>(&p.data);
      require(e != nullptr, "expected a euclidean point");
      require(static_cast<int>(e->v.size()) == space.dim(), "euclidean point has the wrong dimension");
      for (double c : e->v) require(std::isfinite(c), "euclidean point is not finite");
      return;
    }
    case SpaceKind::Product: {
      const auto* q = std::get_if<ProductPoint>(&p.data);
      require(q != nullptr && q->left && q->right, "expected a product point");
      validate(space.left(), *q->left);
      validate(space.right(), *q->right);
      return;
    }
  }
}

double distance(const ModelSpace& space, const Point& x, const Point& y) {
  validate(space, x);
  validate(space, y);
  return raw_distance(space, x, y);
}

// ---------------------------------------------------------------------------

SpaceKind Segment::kind() const {
  switch (geom_.index()) {
    case 0: return SpaceKind::Tree;
    case 1: return SpaceKind::HalfPlane;
    case 2: return SpaceKind::Euclidean;
    default: return SpaceKind::Product;
  }
}

Point Segment::point_at(double s) const {
  if (!(s > 0.0)) return start_;
  if (s >= length_) return end_;
  if (const auto* path = std::get_if<detail::TreePath>(&geom_)) {
    const auto& cum = path->cumulative;
    const auto it = std::upper_bound(cum.begin(), cum.end(), s);
    const std::size_t i = static_cast<std::size_t>(std::distance(cum.begin(), it)) - 1;
    const TreePoint& p = path->waypoints[i];
    const TreePoint& q = path->waypoints[i + 1];
    const Edge e = common_edge(p, q);
    const double p0 = edge_position(p, e);
    const double p1 = edge_position(q, e);
    const double frac = (s - cum[i]) / (cum[i + 1] - cum[i]);
    const double pos = std::clamp(p0 + (p1 - p0) * frac, 0.0, 1.0);
    return Point(tree_point(e.u, e.l, pos));
  }
  if (const auto* prod = std::get_if<detail::ProductPath>(&geom_)) {
    const double t = s / length_;
    return make_product_point(prod->left->point_at(t * prod->left->length()),
                              prod->right->point_at(t * prod->right->length()));
  }
  return point_at_extended(s);
}

Point Segment::point_at_extended(double s) const {
  if (const auto* arc = std::get_if<detail::PlaneArc>(&geom_)) {
    if (arc->vertical) return Point(PlanePoint{arc->line_x, std::exp(arc->log_y0 + arc->dir * s)});
    const double u = arc->u0 + arc->dir * s;
    return Point(PlanePoint{arc->center + arc->radius * std::tanh(u), arc->radius / std::cosh(u)});
  }
  if (const auto* line = std::get_if<detail::EuclidLine>(&geom_)) {
    EuclidPoint p{line->origin};
    for (std::size_t i = 0; i < p.v.size(); ++i) p.v[i] += s * line->unit[i];
    return Point(std::move(p));
  }
  if (const auto* prod = std::get_if<detail::ProductPath>(&geom_)) {
    const double l1 = prod->left->length();
    const double l2 = prod->right->length();
    const double a = length_ > 0.0 ? l1 / length_ : 0.0;
    const double b = length_ > 0.0 ? l2 / length_ : 0.0;
    return make_product_point(prod->left->point_at_extended(s * a), prod->right->point_at_extended(s * b));
  }
  throw UnsupportedError("geodesic extension is not defined on trees");
}

std::vector<Word> Segment::tree_vertices() const {
  const auto* path = std::get_if<detail::TreePath>(&geom_);
  if (path == nullptr) throw UnsupportedError("tree_vertices needs a tree segment");
  std::vector<Word> out;
  for (const auto& w : path->waypoints) {
    if (w.is_vertex()) out.push_back(w.vertex);
  }
  return out;
}

Segment geodesic(const ModelSpace& space, const Point& a, const Point& b) {
  validate(space, a);
  validate(space, b);
  Segment seg;
  seg.start_ = a;
  seg.end_ = b;
  switch (space.kind()) {
    case SpaceKind::Tree: {
      const TreePoint& p = a.tree();
      const TreePoint& q = b.tree();
      detail::TreePath path;
      const bool same_edge = !p.is_vertex() && !q.is_vertex() && p.vertex == q.vertex && p.toward == q.toward;
      if (same_edge) {
        path.waypoints = {p, q};
      } else {
        const auto ep = tree_ends(p);
        const auto eq = tree_ends(q);
        std::size_t bi = 0;
        std::size_t bj = 0;
        double best = INFINITY;
        for (std::size_t i = 0; i < ep.size(); ++i) {
          for (std::size_t j = 0; j < eq.size(); ++j) {
            const double d = ep[i].second + static_cast<double>(word_distance(ep[i].first, eq[j].first)) + eq[j].second;
            if (d < best) {
              best = d;
              bi = i;
              bj = j;
            }
          }
        }
        const Word& x = ep[bi].first;
        const Word& y = eq[bj].first;
        path.waypoints.push_back(p);
        if (!p.is_vertex()) path.waypoints.push_back(tree_vertex(x));
        const std::size_t k = common_prefix(x, y);
        for (std::size_t len = x.length(); len-- > k;) path.waypoints.push_back(tree_vertex(prefix(x, len)));
        for (std::size_t len = k + 1; len <= y.length(); ++len) path.waypoints.push_back(tree_vertex(prefix(y, len)));
        if (!q.is_vertex()) path.waypoints.push_back(q);
      }
      path.cumulative.push_back(0.0);
      for (std::size_t i = 1; i < path.waypoints.size(); ++i) {
        path.cumulative.push_back(path.cumulative.back() + tree_distance(path.waypoints[i - 1], path.waypoints[i]));
      }
      seg.length_ = path.cumulative.back();
      seg.geom_ = std::move(path);
      break;
    }
    case SpaceKind::HalfPlane: {
      const PlanePoint& p = a.plane();
      const PlanePoint& q = b.plane();
      detail::PlaneArc arc;
      const double scale = std::max(p.y, q.y);
      if (std::abs(p.x - q.x) <= 1e-13 * scale) {
        arc.vertical = true;
        arc.line_x = p.x;
        arc.log_y0 = std::log(p.y);
        arc.dir = q.y >= p.y ? 1.0 : -1.0;
        seg.length_ = std::abs(std::log(q.y) - std::log(p.y));
      } else {
        arc.vertical = false;
        arc.center = 0.5 * (p.x + q.x) + (q.y * q.y - p.y * p.y) / (2.0 * (q.x - p.x));
        arc.radius = std::hypot(p.x - arc.center, p.y);
        arc.u0 = std::asinh((p.x - arc.center) / p.y);
        const double u1 = std::asinh((q.x - arc.center) / q.y);
        arc.dir = u1 >= arc.u0 ? 1.0 : -1.0;
        seg.length_ = std::abs(u1 - arc.u0);
      }
      seg.geom_ = arc;
      break;
    }
    case SpaceKind::Euclidean: {
      detail::EuclidLine line;
      line.origin = a.euclid().v;
      line.unit.assign(line.origin.size(), 0.0);
      const double len = euclid_distance(a.euclid(), b.euclid());
      if (len > 0.0) {
        for (std::size_t i = 0; i < line.unit.size(); ++i) line.unit[i] = (b.euclid().v[i] - line.origin[i]) / len;
      }
      seg.length_ = len;
      seg.geom_ = std::move(line);
      break;
    }
    case SpaceKind::Product: {
      detail::ProductPath prod;
      prod.left = std::make_shared<const Segment>(geodesic(space.left(), a.left(), b.left()));
      prod.right = std::make_shared<const Segment>(geodesic(space.right(), a.right(), b.right()));
      seg.length_ = std::hypot(prod.left->length(), prod.right->length());
      seg.geom_ = std::move(prod);
      break;
    }
  }
  return seg;
}

std::vector<Point> sample_segment(const Segment& seg, double step) {
  if (!(step > 0.0)) throw InputError("sampling step must be positive");
  std::vector<Point> out;
  const double len = seg.length();
  const auto n = static_cast<std::size_t>(std::floor(len / step + 1e-12));
  out.reserve(n + 2);
  for (std::size_t i = 0; i <= n; ++i) out.push_back(seg.point_at(static_cast<double>(i) * step));
  if (static_cast<double>(n) * step < len) out.push_back(seg.end());
  return out;
}

ProjectionResult project_golden(const ModelSpace& space, const Point& x, const Segment& seg, double tol, int max_iter) {
  const double len = seg.length();
  auto f = [&](double s) { return raw_distance(space, x, seg.point_at(s)); };
  ProjectionResult best{seg.start(), f(0.0), 0.0};
  if (len <= 0.0) return best;
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = 0.0;
  double hi = len;
  double m1 = hi - inv_phi * (hi - lo);
  double m2 = lo + inv_phi * (hi - lo);
  double f1 = f(m1);
  double f2 = f(m2);
  int iter = 0;
  while (hi - lo > tol) {
    if (++iter > max_iter) throw NumericError("golden-section projection did not converge");
    if (f1 <= f2) {
      hi = m2;
      m2 = m1;
      f2 = f1;
      m1 = hi - inv_phi * (hi - lo);
      f1 = f(m1);
    } else {
      lo = m1;
      m1 = m2;
      f1 = f2;
      m2 = lo + inv_phi * (hi - lo);
      f2 = f(m2);
    }
  }
  const double s = 0.5 * (lo + hi);
  for (double cand : {s, len}) {
    const double d = f(cand);
    if (d < best.distance) best = ProjectionResult{seg.point_at(cand), d, cand};
  }
  return best;
}

ProjectionResult project(const ModelSpace& space, const Point& x, const Segment& seg) {
  validate(space, x);
  const double len = seg.length();
  auto at = [&](double s) {
    s = std::clamp(s, 0.0, len);
    Point p = seg.point_at(s);
    const double d = raw_distance(space, x, p);
    return ProjectionResult{std::move(p), d, s};
  };
  switch (space.kind()) {
    case SpaceKind::Tree: {
      const double da = raw_distance(space, x, seg.start());
      const double db = raw_distance(space, x, seg.end());
      return at(0.5 * (da + len - db));
    }
    case SpaceKind::Euclidean: {
      const auto& line = std::get<detail::EuclidLine>(seg.geometry());
      double t = 0.0;
      for (std::size_t i = 0; i < line.unit.size(); ++i) t += (x.euclid().v[i] - line.origin[i]) * line.unit[i];
      return at(t);
    }
    case SpaceKind::HalfPlane: {
      const auto& arc = std::get<detail::PlaneArc>(seg.geometry());
      const PlanePoint& z = x.plane();
      double u = 0.0;
      if (arc.vertical) {
        u = std::log(std::hypot(z.x - arc.line_x, z.y)) - arc.log_y0;
      } else {
        const double lo = arc.center - arc.radius;
        const double hi = arc.center + arc.radius;
        u = std::log(std::hypot(z.x - lo, z.y)) - std::log(std::hypot(hi - z.x, z.y)) - arc.u0;
      }
      return at(arc.dir * u);
    }
    case SpaceKind::Product: return project_golden(space, x, seg);
  }
  return at(0.0);
}

double segment_distance(const ModelSpace& space, const Segment& a, const Segment& b, double step) {
  double best = INFINITY;
  for (const Point& p : sample_segment(a, step)) best = std::min(best, distance_to_segment(space, p, b));
  return best;
}

double hausdorff_one_sided(const ModelSpace& space, const Segment& a, const Segment& b, double step) {
  double worst = 0.0;
  for (const Point& p : sample_segment(a, step)) worst = std::max(worst, distance_to_segment(space, p, b));
  return worst;
}

double hausdorff(const ModelSpace& space, const Segment& a, const Segment& b, double step) {
  return std::max(hausdorff_one_sided(space, a, b, step), hausdorff_one_sided(space, b, a, step));
}

// ---------------------------------------------------------------------------

Point exp_point(const ModelSpace& space, const Point& center, std::span<const double> v) {
  if (static_cast<int>(v.size()) != space.tangent_dim() || v.empty()) {
    throw UnsupportedError("exp_point needs a smooth model and a tangent vector of matching dimension");
  }
  switch (space.kind()) {
    case SpaceKind::HalfPlane: {
      const PlanePoint& c = center.plane();
      const double rho = std::hypot(v[0], v[1]);
      if (rho == 0.0) return center;
      const double theta = std::atan2(v[1], v[0]) - std::numbers::pi / 2.0;
      const double ca = std::cos(theta / 2.0);
      const double sa = std::sin(theta / 2.0);
      // rotation about i applied to i*e^rho, then z -> y_c z + x_c
      const double t = std::exp(rho);
      const double nr = sa * ca * (1.0 - t * t);
      const double ni = t;
      const double den = sa * sa * t * t + ca * ca;
      const double vx = nr / den;
      const double vy = ni / den;
      return Point(PlanePoint{c.y * vx + c.x, c.y * vy});
    }
    case SpaceKind::Euclidean: {
      EuclidPoint p = center.euclid();
      for (std::size_t i = 0; i < p.v.size(); ++i) p.v[i] += v[i];
      return Point(std::move(p));
    }
    case SpaceKind::Product: {
      const auto k = static_cast<std::size_t>(space.left().tangent_dim());
      return make_product_point(exp_point(space.left(), center.left(), v.subspan(0, k)),
                                exp_point(space.right(), center.right(), v.subspan(k)));
    }
    case SpaceKind::Tree: break;
  }
  throw UnsupportedError("exp_point is not defined on trees");
}

std::vector<double> sphere_direction(int dim, std::size_t k) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  switch (dim) {
    case 1: return {k % 2 == 0 ? 1.0 : -1.0};
    case 2: {
      const double a = two_pi * van_der_corput(k, 2);
      return {std::cos(a), std::sin(a)};
    }
    case 3: {
      const double z = 1.0 - 2.0 * van_der_corput(k, 2);
      const double phi = two_pi * van_der_corput(k, 3);
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      return {r * std::cos(phi), r * std::sin(phi), z};
    }
    case 4: {
      const double u = van_der_corput(k, 2);
      const double a = two_pi * van_der_corput(k, 3);
      const double b = two_pi * van_der_corput(k, 5);
      const double r1 = std::sqrt(u);
      const double r2 = std::sqrt(1.0 - u);
      return {r1 * std::cos(a), r1 * std::sin(a), r2 * std::cos(b), r2 * std::sin(b)};
    }
    default: throw UnsupportedError("sphere directions are implemented for dimensions 1..4");
  }
}

std::vector<Point> ball_samples(const ModelSpace& space, const Point& center, double radius, std::size_t n) {
  if (!(radius >= 0.0)) throw InputError("ball radius must be nonnegative");
  if (space.kind() == SpaceKind::Tree) {
    std::vector<Point> out{center};
    for (Word& w : tree_ball_vertices(space, center.tree(), radius)) {
      Point p(tree_vertex(std::move(w)));
      if (!(p == center)) out.push_back(std::move(p));
    }
    return out;
  }
  if (!space.is_continuous()) throw UnsupportedError("ball sampling in products with a tree factor");
  const int dim = space.tangent_dim();
  std::vector<Point> out;
  out.reserve(n);
  if (n == 0) return out;
  out.push_back(center);
  if (radius == 0.0) return out;
  for (std::size_t i = 1; i < n; ++i) {
    const std::size_t j = (i - 1) / 2;
    std::vector<double> v = sphere_direction(dim, j);
    double r = radius;
    if (i % 2 == 0) r *= std::pow(van_der_corput(j + 1, 5), 1.0 / dim);
    for (double& c : v) c *= r;
    out.push_back(exp_point(space, center, v));
  }
  return out;
}

std::vector<Word> tree_ball_vertices(const ModelSpace& space, const TreePoint& p, double radius) {
  std::unordered_set<Word, WordHash> seen;
  std::vector<Word> out;
  for (const auto& [u, du] : tree_ends(p)) {
    const double r = radius - du;
    if (r < 0.0) continue;
    const int k = static_cast<int>(std::floor(r + 1e-12));
    for (const Word& step : ball(space.rank(), k)) {
      Word v = multiply(u, step);
      if (seen.insert(v).second) out.push_back(std::move(v));
    }
  }
  return out;
}

std::vector<Word> tree_tube_vertices(const ModelSpace& space, const Segment& seg, int radius) {
  if (radius < 0) throw InputError("tube radius must be nonnegative");
  std::vector<Word> spine = seg.tree_vertices();
  for (const Point* end : {&seg.start(), &seg.end()}) {
    for (auto& [u, du] : tree_ends(end->tree())) spine.push_back(u);
  }
  const auto steps = ball(space.rank(), radius);
  std::unordered_set<Word, WordHash> seen;
  std::vector<Word> out;
  for (const Word& s : spine) {
    for (const Word& step : steps) {
      Word v = multiply(s, step);
      if (seen.contains(v)) continue;
      seen.insert(v);
      if (distance_to_segment(space, Point(tree_vertex(v)), seg) <= radius) out.push_back(std::move(v));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------

std::vector<DdViolation> check_dd(const ModelSpace& space, const DdSampler& sampler, double c) {
  std::vector<DdViolation> out;
  const double eps = space.tolerance();
  sampler([&](const DdBundle& bundle) {
    std::vector<ProjectionResult> proj;
    proj.reserve(bundle.points.size());
    for (const Point& x : bundle.points) proj.push_back(project(space, x, bundle.segment));
    for (std::size_t i = 0; i < proj.size(); ++i) {
      for (std::size_t j = i; j < proj.size(); ++j) {
        const double gap = raw_distance(space, proj[i].point, proj[j].point);
        const double bound = raw_distance(space, bundle.points[i], bundle.points[j]) + c;
        if (!(gap < bound + eps)) {
          out.push_back(DdViolation{bundle.segment, bundle.points[i], bundle.points[j], proj[i].point, proj[j].point,
                                    gap, bound});
        }
      }
    }
  });
  return out;
}

std::vector<FtViolation> check_ft(const ModelSpace& space, const FtSampler& sampler, double c, double step) {
  std::vector<FtViolation> out;
  const double eps = space.tolerance();
  sampler([&](const FtQuad& q) {
    const Segment ab = geodesic(space, q.a, q.b);
    const Segment ab2 = geodesic(space, q.a2, q.b2);
    const double d = std::max(raw_distance(space, q.a, q.a2), raw_distance(space, q.b, q.b2));
    const double bound = c + d;
    double worst = -1.0;
    Point witness;
    for (const Point& p : sample_segment(ab2, step)) {
      const double dist = distance_to_segment(space, p, ab);
      if (dist > worst) {
        worst = dist;
        witness = p;
      }
    }
    if (worst > bound + eps) out.push_back(FtViolation{q, witness, worst, bound});
  });
  return out;
}

}  // namespace qmorph
