#include "qmorph/rank_one.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qmorph/errors.hpp"

namespace qmorph {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Point orbit_point(const ModelSpace& space, const GroupModel& group, const Word& g, long n, const Point& x0) {
  return act(space, group.evaluate(power(g, n)), x0);
}

}  // namespace

RankOneCertificate rank_one_test(const ModelSpace& space, const GroupModel& group, const Word& g, const Point& x0,
                                 double B, int n_max, const CertifyBudget& budget) {
  if (g.is_identity()) throw InputError("rank-one test needs a nontrivial element");
  if (n_max < 1) throw InputError("rank-one test needs n_max >= 1");
  if (!(B > 0.0)) throw InputError("rank-one test needs B > 0");
  const double eps = space.tolerance();
  RankOneCertificate cert;
  cert.g = g;
  cert.x0 = x0;
  cert.B = B;
  cert.n_max = n_max;
  cert.epsilon0 = kInf;
  const Isometry iso = group.evaluate(g);
  const std::vector<Point> orbit = orbit_points(space, iso, x0, n_max);
  for (int n = 1; n <= n_max; ++n) {
    RankOneStep step;
    step.n = n;
    const Segment seg = geodesic(space, x0, orbit[static_cast<std::size_t>(n)]);
    step.displacement = seg.length();
    double haus = 0.0;
    for (int k = 0; k <= n; ++k) haus = std::max(haus, distance_to_segment(space, orbit[static_cast<std::size_t>(k)], seg));
    for (const Point& p : sample_segment(seg, B / 2.0)) {
      double near = kInf;
      for (int k = 0; k <= n; ++k) near = std::min(near, distance(space, p, orbit[static_cast<std::size_t>(k)]));
      haus = std::max(haus, near);
    }
    step.hausdorff = haus;
    step.certificate = certify_contracting(space, seg, B, budget);
    cert.epsilon0 = std::min(cert.epsilon0, step.displacement / n);
    const bool bad_haus = haus > B + eps;
    const bool bad_cert = step.certificate.refuted();
    cert.steps.push_back(std::move(step));
    if (bad_haus || bad_cert) {
      cert.refuted = true;
      cert.failing_n = n;
      cert.reason = bad_haus ? "hausdorff" : "contraction";
      return cert;
    }
  }
  if (!(cert.epsilon0 > eps)) {
    cert.refuted = true;
    cert.reason = "growth";
  }
  return cert;
}

IndependenceProfile independence_test(const ModelSpace& space, const GroupModel& group, const Word& g, const Word& h,
                                      const Point& x0, int grid_max, double threshold) {
  if (grid_max < 1) throw InputError("independence grid must have grid_max >= 1");
  const auto n = static_cast<std::size_t>(2 * grid_max + 1);
  std::vector<Point> xs;
  std::vector<Point> ys;
  xs.reserve(n);
  ys.reserve(n);
  for (long m = -grid_max; m <= grid_max; ++m) {
    xs.push_back(orbit_point(space, group, g, m, x0));
    ys.push_back(orbit_point(space, group, h, m, x0));
  }
  IndependenceProfile out;
  out.grid_max = grid_max;
  out.threshold = threshold;
  out.profile.assign(static_cast<std::size_t>(grid_max), kInf);
  for (long m = -grid_max; m <= grid_max; ++m) {
    for (long k = -grid_max; k <= grid_max; ++k) {
      const long r = std::max(std::abs(m), std::abs(k));
      if (r == 0) continue;
      const double d = distance(space, xs[static_cast<std::size_t>(m + grid_max)], ys[static_cast<std::size_t>(k + grid_max)]);
      double& slot = out.profile[static_cast<std::size_t>(r - 1)];
      slot = std::min(slot, d);
    }
  }
  out.increasing_tail = true;
  for (int r = std::max(2, (grid_max + 1) / 2 + 1); r <= grid_max; ++r) {
    if (!(out.profile[static_cast<std::size_t>(r - 1)] > out.profile[static_cast<std::size_t>(r - 2)])) {
      out.increasing_tail = false;
    }
  }
  out.independent = out.increasing_tail && out.profile.back() > threshold;
  return out;
}

ChainCheck chain_check(const ModelSpace& space, const std::vector<Point>& vertices, double B,
                       const ConstantLedger& ledger, const CertifyBudget& budget, double step) {
  if (vertices.size() < 2) throw InputError("a chain needs at least two vertices");
  const double C = ledger.C;
  ChainCheck out;
  out.bound = phi::qg(B, C);
  std::vector<Segment> pieces;
  for (std::size_t i = 0; i + 1 < vertices.size(); ++i) pieces.push_back(geodesic(space, vertices[i], vertices[i + 1]));
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    if (certify_contracting(space, pieces[i], B, budget).refuted()) {
      out.status = CheckStatus::Skipped;
      out.reason = "piece " + std::to_string(i) + " is not B-contracting";
      return out;
    }
  }
  for (std::size_t i = 0; i + 2 < pieces.size(); ++i) {
    const double gap = segment_distance(space, pieces[i], pieces[i + 2], step);
    if (!(gap > out.bound)) {
      out.status = CheckStatus::Skipped;
      out.reason = "gap between pieces " + std::to_string(i) + " and " + std::to_string(i + 2) + " is " +
                   std::to_string(gap);
      return out;
    }
  }
  const Segment whole = geodesic(space, vertices.front(), vertices.back());
  for (const Point& p : sample_segment(whole, step)) {
    double near = kInf;
    for (const Segment& s : pieces) near = std::min(near, distance_to_segment(space, p, s));
    out.neighborhood = std::max(out.neighborhood, near);
  }
  out.certificate = certify_contracting(space, whole, out.bound, budget);
  if (out.neighborhood > out.bound + space.tolerance()) {
    out.status = CheckStatus::Violated;
    out.reason = "segment leaves the chain neighborhood";
  } else if (out.certificate->refuted()) {
    out.status = CheckStatus::Violated;
    out.reason = "segment is not contracting at the chain constant";
  }
  return out;
}

Word substitute(const Word& w, const Word& u, const Word& v) {
  if (w.max_generator() > 2) throw InputError("Schottky words use two letters");
  const Word ui = u.inverse();
  const Word vi = v.inverse();
  Word out;
  for (Letter l : w.letters()) {
    const Word& piece = l == 1 ? u : l == -1 ? ui : l == 2 ? v : vi;
    out = multiply(out, piece);
  }
  return out;
}

SchottkyResult schottky_exponent(const ModelSpace& space, const GroupModel& group, const Word& g, const Word& h,
                                 const Point& x0, double E, int word_len_max, int n_budget) {
  if (!(E > 0.0)) throw InputError("Schottky search needs E > 0");
  if (word_len_max < 1) throw InputError("Schottky search needs word_len_max >= 1");
  const double eps = space.tolerance();
  const std::vector<Word> words = ball(2, word_len_max);
  SchottkyResult res;
  for (int N = 2; N <= n_budget; N += 2) {
    const Word G = power(g, N);
    const Word H = power(h, N);
    std::vector<SchottkyRow> table;
    double worst = kInf;
    bool ok = true;
    for (const Word& w : words) {
      if (w.is_identity()) continue;
      SchottkyRow row;
      row.word = w;
      row.element = substitute(w, G, H);
      row.displacement = distance(space, x0, act(space, group.evaluate(row.element), x0));
      row.bound = static_cast<double>(w.length()) * E;
      worst = std::min(worst, row.displacement / static_cast<double>(w.length()));
      if (row.displacement < row.bound - eps) ok = false;
      table.push_back(std::move(row));
    }
    res.attempts.emplace_back(N, worst);
    res.table = std::move(table);
    if (ok) {
      res.N = N;
      return res;
    }
  }
  return res;
}

Point flat_center(const ModelSpace& space, const Segment& seg, double r) {
  const double h = r + 1.0;
  const double mid = seg.length() / 2.0;
  if (space.kind() == SpaceKind::Euclidean) {
    if (space.dim() != 2) throw UnsupportedError("flat control needs the euclidean plane");
    const auto& line = std::get<detail::EuclidLine>(seg.geometry());
    const std::vector<double>& u = line.unit;
    return euclid_point({line.origin[0] + mid * u[0] - h * u[1], line.origin[1] + mid * u[1] + h * u[0]});
  }
  if (space.kind() == SpaceKind::Product && space.is_continuous()) {
    const auto& path = std::get<detail::ProductPath>(seg.geometry());
    const double a = path.left->length();
    const double b = path.right->length();
    const double L = seg.length();
    if (!(a > 0.0 && b > 0.0)) throw UnsupportedError("flat control needs a segment moving in both factors");
    const double c = a / L;
    const double s = b / L;
    return make_product_point(path.left->point_at_extended(mid * c - h * s),
                              path.right->point_at_extended(mid * s + h * c));
  }
  throw UnsupportedError("flat control needs the euclidean plane or a smooth product");
}

std::vector<FlatRow> half_flat_control(const ModelSpace& space, const Segment& seg, const std::vector<double>& sweep,
                                       std::size_t samples) {
  std::vector<FlatRow> out;
  for (double B : sweep) {
    if (!(B > 0.0)) throw InputError("flat control sweep values must be positive");
    const double r = std::max(B, 1.0);
    FlatRow row;
    row.B = B;
    row.probe = probe_ball(space, seg, flat_center(space, seg, r), r, samples);
    row.refuted = row.probe.diameter >= B;
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace qmorph
