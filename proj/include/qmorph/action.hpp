#pragma once

#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "qmorph/space.hpp"
#include "qmorph/word.hpp"

namespace qmorph {

/// Real 2x2 matrix acting on the upper half-plane by z -> (az + b)/(cz + d).
struct Mat2 {
  double a = 1.0, b = 0.0, c = 0.0, d = 1.0;

  [[nodiscard]] double det() const { return a * d - b * c; }
  bool operator==(const Mat2&) const = default;
};

Mat2 operator*(const Mat2& x, const Mat2& y);
Mat2 inverse(const Mat2& m);
/// Rescales to determinant 1. Throws InputError if det <= 0.
Mat2 normalize_det(const Mat2& m);
/// Elliptic element rotating the tangent plane at i by angle theta.
Mat2 rotation_about_i(double theta);
Mat2 diagonal(double lambda);

/// Products between determinant renormalizations.
inline constexpr int kRenormalizeEvery = 16;

/// Orthogonal map followed by a translation of R^1 or R^2.
struct EuclidMotion {
  std::vector<double> linear;  // row-major dim x dim
  std::vector<double> shift;

  static EuclidMotion translation(std::vector<double> v);
  [[nodiscard]] int dim() const { return static_cast<int>(shift.size()); }
};

EuclidMotion operator*(const EuclidMotion& x, const EuclidMotion& y);
EuclidMotion inverse(const EuclidMotion& m);

struct Isometry;

struct ProductMotion {
  std::shared_ptr<const Isometry> left;
  std::shared_ptr<const Isometry> right;
};

/// A group element together with the data of its action on a model space.
struct Isometry {
  Word word;
  std::variant<std::monostate, Mat2, EuclidMotion, ProductMotion> action;  // monostate: tree
};

enum class GroupKind { Free, Matrix, Euclid, Product };

/// Generators with action data; words use letters 1..rank(), negative
/// letters are the inverses.
class GroupModel {
 public:
  static GroupModel free(int rank);
  static GroupModel matrix(std::vector<Mat2> generators);
  static GroupModel euclid(std::vector<EuclidMotion> generators);
  static GroupModel product(GroupModel left, GroupModel right);

  [[nodiscard]] GroupKind kind() const { return kind_; }
  [[nodiscard]] int rank() const { return rank_; }
  [[nodiscard]] const GroupModel& left() const { return *left_; }
  [[nodiscard]] const GroupModel& right() const { return *right_; }
  [[nodiscard]] const std::vector<Mat2>& matrices() const { return mats_; }
  [[nodiscard]] const std::vector<EuclidMotion>& motions() const { return motions_; }
  [[nodiscard]] bool is_free() const { return kind_ == GroupKind::Free; }

  /// Action data of a word; throws InputError for letters beyond rank().
  [[nodiscard]] Isometry evaluate(const Word& w) const;
  [[nodiscard]] Isometry identity() const { return evaluate(Word()); }

 private:
  GroupModel() = default;
  GroupKind kind_ = GroupKind::Free;
  int rank_ = 0;
  std::vector<Mat2> mats_;
  std::vector<EuclidMotion> motions_;
  std::shared_ptr<const GroupModel> left_;
  std::shared_ptr<const GroupModel> right_;
};

/// Product of two evaluated isometries (word and action data).
Isometry compose(const Isometry& g, const Isometry& h);

/// g(x). Throws InputError when the isometry does not act on this space.
Point act(const ModelSpace& space, const Isometry& g, const Point& x);

/// [x0, g x0, ..., g^n x0] by iterated action.
std::vector<Point> orbit_points(const ModelSpace& space, const Isometry& g, const Point& x0, int n);

/// All words of length <= radius over the group's generators.
std::vector<Word> ball(const GroupModel& group, int radius);

/// Conjugacy in the free group; only defined for free models.
bool conjugacy_test(const GroupModel& group, const Word& u, const Word& v);

}  // namespace qmorph
