#include "qmorph/action.hpp"

#include <cmath>
#include <cstdlib>

#include "qmorph/errors.hpp"

namespace qmorph {

Mat2 operator*(const Mat2& x, const Mat2& y) {
  return Mat2{x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
}

Mat2 inverse(const Mat2& m) {
  const double det = m.det();
  return Mat2{m.d / det, -m.b / det, -m.c / det, m.a / det};
}

Mat2 normalize_det(const Mat2& m) {
  const double det = m.det();
  if (!(det > 0.0)) throw InputError("half-plane isometries need a positive determinant");
  const double s = 1.0 / std::sqrt(det);
  return Mat2{m.a * s, m.b * s, m.c * s, m.d * s};
}

Mat2 rotation_about_i(double theta) {
  const double c = std::cos(theta / 2.0);
  const double s = std::sin(theta / 2.0);
  return Mat2{c, s, -s, c};
}

Mat2 diagonal(double lambda) { return Mat2{lambda, 0.0, 0.0, 1.0 / lambda}; }

EuclidMotion EuclidMotion::translation(std::vector<double> v) {
  EuclidMotion m;
  const std::size_t n = v.size();
  m.linear.assign(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) m.linear[i * n + i] = 1.0;
  m.shift = std::move(v);
  return m;
}

EuclidMotion operator*(const EuclidMotion& x, const EuclidMotion& y) {
  const std::size_t n = x.shift.size();
  EuclidMotion out;
  out.linear.assign(n * n, 0.0);
  out.shift = x.shift;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = 0; k < n; ++k) out.linear[i * n + j] += x.linear[i * n + k] * y.linear[k * n + j];
      out.shift[i] += x.linear[i * n + j] * y.shift[j];
    }
  }
  return out;
}

EuclidMotion inverse(const EuclidMotion& m) {
  const std::size_t n = m.shift.size();
  EuclidMotion out;
  out.linear.assign(n * n, 0.0);
  out.shift.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) out.linear[i * n + j] = m.linear[j * n + i];
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) out.shift[i] -= out.linear[i * n + j] * m.shift[j];
  }
  return out;
}

// ---------------------------------------------------------------------------

GroupModel GroupModel::free(int rank) {
  if (rank < 1 || rank > kMaxRank) throw InputError("free rank must be in 1..4");
  GroupModel g;
  g.kind_ = GroupKind::Free;
  g.rank_ = rank;
  return g;
}

GroupModel GroupModel::matrix(std::vector<Mat2> generators) {
  if (generators.empty() || generators.size() > static_cast<std::size_t>(kMaxRank)) {
    throw InputError("matrix groups need 1..4 generators");
  }
  GroupModel g;
  g.kind_ = GroupKind::Matrix;
  g.rank_ = static_cast<int>(generators.size());
  for (const Mat2& m : generators) g.mats_.push_back(normalize_det(m));
  return g;
}

GroupModel GroupModel::euclid(std::vector<EuclidMotion> generators) {
  if (generators.empty() || generators.size() > static_cast<std::size_t>(kMaxRank)) {
    throw InputError("euclidean groups need 1..4 generators");
  }
  GroupModel g;
  g.kind_ = GroupKind::Euclid;
  g.rank_ = static_cast<int>(generators.size());
  g.motions_ = std::move(generators);
  return g;
}

GroupModel GroupModel::product(GroupModel left, GroupModel right) {
  if (left.rank_ != right.rank_) throw InputError("product group factors need the same number of generators");
  GroupModel g;
  g.kind_ = GroupKind::Product;
  g.rank_ = left.rank_;
  g.left_ = std::make_shared<const GroupModel>(std::move(left));
  g.right_ = std::make_shared<const GroupModel>(std::move(right));
  return g;
}

Isometry GroupModel::evaluate(const Word& w) const {
  if (w.max_generator() > rank_) throw InputError("word " + w.str() + " uses a generator outside the group");
  Isometry iso;
  iso.word = w;
  switch (kind_) {
    case GroupKind::Free: break;
    case GroupKind::Matrix: {
      Mat2 m;
      int count = 0;
      for (Letter l : w.letters()) {
        const Mat2& g = mats_[static_cast<std::size_t>(std::abs(l) - 1)];
        m = m * (l > 0 ? g : inverse(g));
        if (++count % kRenormalizeEvery == 0) m = normalize_det(m);
      }
      iso.action = normalize_det(m);
      break;
    }
    case GroupKind::Euclid: {
      EuclidMotion m = EuclidMotion::translation(std::vector<double>(motions_.front().shift.size(), 0.0));
      for (Letter l : w.letters()) {
        const EuclidMotion& g = motions_[static_cast<std::size_t>(std::abs(l) - 1)];
        m = m * (l > 0 ? g : inverse(g));
      }
      iso.action = std::move(m);
      break;
    }
    case GroupKind::Product: {
      iso.action = ProductMotion{std::make_shared<const Isometry>(left_->evaluate(w)),
                                 std::make_shared<const Isometry>(right_->evaluate(w))};
      break;
    }
  }
  return iso;
}

Isometry compose(const Isometry& g, const Isometry& h) {
  if (g.action.index() != h.action.index()) throw InputError("cannot compose isometries of different kinds");
  Isometry out;
  out.word = multiply(g.word, h.word);
  std::visit(
      [&](const auto& ga) {
        using T = std::decay_t<decltype(ga)>;
        const auto& ha = std::get<T>(h.action);
        if constexpr (std::is_same_v<T, std::monostate>) {
          out.action = std::monostate{};
        } else if constexpr (std::is_same_v<T, Mat2>) {
          out.action = normalize_det(ga * ha);
        } else if constexpr (std::is_same_v<T, EuclidMotion>) {
          out.action = ga * ha;
        } else {
          out.action = ProductMotion{std::make_shared<const Isometry>(compose(*ga.left, *ha.left)),
                                     std::make_shared<const Isometry>(compose(*ga.right, *ha.right))};
        }
      },
      g.action);
  return out;
}

Point act(const ModelSpace& space, const Isometry& g, const Point& x) {
  validate(space, x);
  switch (space.kind()) {
    case SpaceKind::Tree: {
      if (!std::holds_alternative<std::monostate>(g.action)) throw InputError("isometry does not act on the tree");
      if (g.word.max_generator() > space.rank()) throw InputError("word uses a generator outside the tree rank");
      const TreePoint& p = x.tree();
      if (p.is_vertex()) return Point(tree_vertex(multiply(g.word, p.vertex)));
      return Point(tree_point(multiply(g.word, p.vertex), p.toward, p.offset));
    }
    case SpaceKind::HalfPlane: {
      const auto* m = std::get_if<Mat2>(&g.action);
      if (m == nullptr) throw InputError("isometry does not act on the half-plane");
      const PlanePoint& z = x.plane();
      const double re_den = m->c * z.x + m->d;
      const double im_den = m->c * z.y;
      const double den = re_den * re_den + im_den * im_den;
      const double re_num = m->a * z.x + m->b;
      const double im_num = m->a * z.y;
      const double re = (re_num * re_den + im_num * im_den) / den;
      const double im = z.y * m->det() / den;
      return Point(PlanePoint{re, im});
    }
    case SpaceKind::Euclidean: {
      const auto* m = std::get_if<EuclidMotion>(&g.action);
      if (m == nullptr || m->dim() != space.dim()) throw InputError("isometry does not act on this euclidean space");
      const auto n = static_cast<std::size_t>(m->dim());
      EuclidPoint out{m->shift};
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) out.v[i] += m->linear[i * n + j] * x.euclid().v[j];
      }
      return Point(std::move(out));
    }
    case SpaceKind::Product: {
      const auto* m = std::get_if<ProductMotion>(&g.action);
      if (m == nullptr) throw InputError("isometry does not act on the product");
      return make_product_point(act(space.left(), *m->left, x.left()), act(space.right(), *m->right, x.right()));
    }
  }
  return x;
}

std::vector<Point> orbit_points(const ModelSpace& space, const Isometry& g, const Point& x0, int n) {
  if (n < 0) throw InputError("orbit length must be nonnegative");
  std::vector<Point> out{x0};
  out.reserve(static_cast<std::size_t>(n) + 1);
  for (int k = 0; k < n; ++k) out.push_back(act(space, g, out.back()));
  return out;
}

std::vector<Word> ball(const GroupModel& group, int radius) { return ball(group.rank(), radius); }

bool conjugacy_test(const GroupModel& group, const Word& u, const Word& v) {
  if (!group.is_free()) throw UnsupportedError("conjugacy_test is only defined for free-group models");
  return conjugacy_test(u, v);
}

}  // namespace qmorph
