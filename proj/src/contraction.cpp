#include "qmorph/contraction.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "qmorph/errors.hpp"

namespace qmorph {

namespace phi {

double subseg(double B, double C) { return B + 4.0 * C + 3.0; }
double thin(double B, double C) { return 3.0 * B + C + 1.0; }
double lemma1(double B, double C) { return B + C + 1.0; }
double proj(double B, double C, double D) { return lemma1(B, C) + 2.0 * C + 2.0 * D; }
double stab(double B, double C, double D) { return 2.0 * (C + D + proj(B, C, D) + B) + 3.0 * C + D; }
double stab2(double B, double C, double D) { return stab(stab(B, C, D), C, D); }
double var(double B, double C) { return B * (C + 2.0) + C + 1.0; }
double needed(double Bp, double C) { return 5.0 * thin(Bp, C) + C + 1.5; }
double cor23(double B, double C) { return 5.0 * subseg(B, C) + 2.0 * C + 1.0; }

double hn_length(double B, double C) {
  const double bp = subseg(B, C);
  return 4.0 * (var(bp, C) + C + needed(bp, C));
}

double hn_nbhd(double B, double C) {
  const double bp = subseg(B, C);
  return 2.0 * (var(bp, C) + needed(bp, C)) + std::max(1.0, 2.0 * bp);
}

double hn(double B, double C) { return std::max(hn_length(B, C), hn_nbhd(B, C) + C); }
double sharp(double B, double C) { return 2.0 * thin(B, C) + C; }
double qg(double B, double C) { return 2.0 * stab(B, C, sharp(B, C) + C) + C; }

}  // namespace phi

ConstantLedger phi_table(double C, double B) {
  if (!(C > 0.0) || !(B > 0.0)) throw InputError("ledger constants C and B must be positive");
  ConstantLedger l;
  l.C = C;
  l.B = B;
  l.B_prime = phi::subseg(B, C);
  l.D = phi::hn(B, C);
  l.S = phi::stab(B, C, l.D);
  l.S_prime = phi::subseg(l.S, C);
  l.T = phi::cor23(l.S_prime, C) + l.D;
  l.table = {
      {"subseg", l.B_prime},
      {"thin", phi::thin(B, C)},
      {"lemma1", phi::lemma1(B, C)},
      {"proj(D)", phi::proj(B, C, l.D)},
      {"stab(D)", l.S},
      {"var", phi::var(B, C)},
      {"needed(B')", phi::needed(l.B_prime, C)},
      {"cor23", phi::cor23(B, C)},
      {"hn_length", phi::hn_length(B, C)},
      {"hn_nbhd", phi::hn_nbhd(B, C)},
      {"hn", l.D},
      {"sharp", phi::sharp(B, C)},
      {"qg", phi::qg(B, C)},
      {"B'", l.B_prime},
      {"D", l.D},
      {"S", l.S},
      {"S'", l.S_prime},
      {"T", l.T},
  };
  return l;
}

std::vector<std::string> ledger_monotonicity_violations(const std::vector<double>& grid) {
  using F2 = std::function<double(double, double)>;
  using F3 = std::function<double(double, double, double)>;
  const std::vector<std::pair<std::string, F2>> two = {
      {"subseg", phi::subseg}, {"thin", phi::thin},       {"lemma1", phi::lemma1}, {"var", phi::var},
      {"needed", phi::needed}, {"cor23", phi::cor23},     {"hn", phi::hn},         {"hn_length", phi::hn_length},
      {"hn_nbhd", phi::hn_nbhd}, {"sharp", phi::sharp},   {"qg", phi::qg},
      {"T", [](double B, double C) { return phi_table(C, B).T; }},
  };
  const std::vector<std::pair<std::string, F3>> three = {
      {"proj", phi::proj}, {"stab", phi::stab}, {"stab2", phi::stab2}};
  std::vector<std::string> out;
  for (const auto& [name, f] : two) {
    for (double b : grid) {
      for (double c : grid) {
        for (double d : grid) {
          if (d <= b) continue;
          if (f(d, c) < f(b, c)) out.push_back(name + " decreases in B");
          if (f(c, d) < f(c, b)) out.push_back(name + " decreases in C");
        }
      }
    }
  }
  for (const auto& [name, f] : three) {
    for (double x : grid) {
      for (double y : grid) {
        for (double z : grid) {
          for (double w : grid) {
            if (w <= x) continue;
            if (f(w, y, z) < f(x, y, z)) out.push_back(name + " decreases in B");
            if (f(y, w, z) < f(y, x, z)) out.push_back(name + " decreases in C");
            if (f(y, z, w) < f(y, z, x)) out.push_back(name + " decreases in D");
          }
        }
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

std::string to_string(CertStatus s) { return s == CertStatus::Refuted ? "refuted" : "certified-at-budget"; }

std::string to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::Holds: return "holds";
    case CheckStatus::Violated: return "violated";
    case CheckStatus::Skipped: return "skipped";
  }
  return "";
}

BallProbe probe_ball(const ModelSpace& space, const Segment& seg, const Point& center, double radius,
                     std::size_t samples) {
  const double d = distance_to_segment(space, center, seg);
  if (!(d > radius)) throw InputError("ball is not disjoint from the segment");
  const std::vector<Point> pts = ball_samples(space, center, radius, samples);
  BallProbe probe{center, radius, 0.0, center, center, center, center};
  double lo = INFINITY;
  double hi = -INFINITY;
  for (const Point& x : pts) {
    ProjectionResult pr = project(space, x, seg);
    if (pr.parameter < lo) {
      lo = pr.parameter;
      probe.x1 = x;
      probe.p1 = pr.point;
    }
    if (pr.parameter > hi) {
      hi = pr.parameter;
      probe.x2 = x;
      probe.p2 = std::move(pr.point);
    }
  }
  probe.diameter = pts.empty() ? 0.0 : hi - lo;
  return probe;
}

std::vector<std::pair<Point, double>> probe_centers(const ModelSpace& space, const Segment& seg,
                                                    const CertifyBudget& budget) {
  std::vector<std::pair<Point, double>> out;
  if (space.kind() == SpaceKind::Tree) {
    for (Word& v : tree_tube_vertices(space, seg, budget.tree_tube)) {
      Point p(tree_vertex(std::move(v)));
      const double d = distance_to_segment(space, p, seg);
      if (d > 0.0) out.emplace_back(std::move(p), d);
    }
    return out;
  }
  if (!space.is_continuous()) throw UnsupportedError("contraction probes in products with a tree factor");
  const int dim = space.tangent_dim();
  for (const Point& station : sample_segment(seg, budget.station_step)) {
    for (int k = 0; k < budget.directions; ++k) {
      const std::vector<double> dir = sphere_direction(dim, static_cast<std::size_t>(k));
      for (double h : budget.center_distances) {
        std::vector<double> v = dir;
        for (double& c : v) c *= h;
        Point p = exp_point(space, station, v);
        const double d = distance_to_segment(space, p, seg);
        if (d > 0.0) out.emplace_back(std::move(p), d);
      }
    }
  }
  return out;
}

ContractionCertificate certify_contracting(const ModelSpace& space, const Segment& seg, double B,
                                           const CertifyBudget& budget) {
  if (!(B > 0.0)) throw InputError("contraction constant B must be positive");
  ContractionCertificate cert;
  cert.segment = seg;
  cert.B = B;
  cert.budget = budget;
  std::optional<BallProbe> best;
  for (const auto& [center, d] : probe_centers(space, seg, budget)) {
    std::vector<double> radii;
    if (space.kind() == SpaceKind::Tree) {
      for (double r = 0.0; r < d; r += 0.5) radii.push_back(r);
    } else {
      if (d - 1.0 > 0.0) radii.push_back(d - 1.0);
      radii.push_back(0.5 * d);
    }
    for (double r : radii) {
      BallProbe probe = probe_ball(space, seg, center, r, budget.samples);
      ++cert.balls_checked;
      if (!best || probe.diameter > best->diameter) best = std::move(probe);
    }
  }
  cert.max_diameter = best ? best->diameter : 0.0;
  if (best && best->diameter >= B) {
    cert.status = CertStatus::Refuted;
    cert.witness = std::move(best);
  }
  return cert;
}

bool replay_witness(const ModelSpace& space, const Segment& seg, const BallProbe& w, double B, std::size_t samples) {
  const BallProbe again = probe_ball(space, seg, w.center, w.radius, samples);
  const double tol = std::max(space.tolerance(), 1e-9 * (1.0 + std::abs(w.diameter)));
  return std::abs(again.diameter - w.diameter) <= tol && again.diameter >= B;
}

// ---------------------------------------------------------------------------

namespace {

LemmaCheck skipped(std::string reason) {
  LemmaCheck c;
  c.status = CheckStatus::Skipped;
  c.reason = std::move(reason);
  return c;
}

bool projection_hypothesis(const ModelSpace& space, const Point& a, const Point& b, const Point& c, double C) {
  const Segment ab = geodesic(space, a, b);
  const ProjectionResult pr = project(space, c, ab);
  return distance(space, b, pr.point) <= C + space.tolerance();
}

}  // namespace

LemmaCheck check_thin_triangle(const ModelSpace& space, const Point& a, const Point& b, const Point& c,
                               const ConstantLedger& ledger) {
  if (!projection_hypothesis(space, a, b, c, ledger.C)) return skipped("b is not within C of a projection of c");
  LemmaCheck out;
  out.value = distance_to_segment(space, b, geodesic(space, a, c));
  out.bound = phi::thin(ledger.B, ledger.C);
  out.status = out.value < out.bound + space.tolerance() ? CheckStatus::Holds : CheckStatus::Violated;
  out.witness = {a, b, c};
  return out;
}

LemmaCheck check_reverse_triangle(const ModelSpace& space, const Point& a, const Point& b, const Point& c,
                                  const ConstantLedger& ledger) {
  if (!projection_hypothesis(space, a, b, c, ledger.C)) return skipped("b is not within C of a projection of c");
  LemmaCheck out;
  const double excess = distance(space, a, b) + distance(space, b, c) - distance(space, a, c);
  const double eps = space.tolerance();
  out.value = excess;
  out.bound = phi::lemma1(ledger.B, ledger.C);
  out.status = (excess >= -eps && excess <= out.bound + eps) ? CheckStatus::Holds : CheckStatus::Violated;
  out.witness = {a, b, c};
  return out;
}

LemmaCheck check_cor23(const ModelSpace& space, const Segment& xy, const Segment& uv, const ConstantLedger& ledger,
                       double step) {
  const double C = ledger.C;
  const double eps = space.tolerance();
  const ProjectionResult px = project(space, xy.start(), uv);
  const ProjectionResult py = project(space, xy.end(), uv);
  if (distance(space, uv.start(), px.point) > C + eps || distance(space, uv.end(), py.point) > C + eps) {
    return skipped("endpoints of [u, v] are not near projections of x and y");
  }
  LemmaCheck out;
  out.value = std::min(uv.length(), segment_distance(space, xy, uv, step));
  out.bound = phi::cor23(ledger.B, C);
  out.status = out.value < out.bound + eps ? CheckStatus::Holds : CheckStatus::Violated;
  out.witness = {xy.start(), xy.end(), uv.start(), uv.end()};
  return out;
}

LemmaCheck check_variation(const ModelSpace& space, const Segment& ab, const Segment& pq,
                           const ConstantLedger& ledger, double step) {
  const double eps = space.tolerance();
  const double da = distance_to_segment(space, ab.start(), pq);
  if (da < 1.0) return skipped("d(a, [p, q]) < 1");
  for (const Point& s : sample_segment(ab, step)) {
    if (distance_to_segment(space, s, pq) < da - eps) return skipped("distance to [p, q] is not minimized at a");
  }
  LemmaCheck out;
  out.value = distance_to_segment(space, ab.end(), pq) - da;
  out.bound = (1.0 - ledger.B / da) * ab.length() - phi::var(ledger.B, ledger.C);
  out.status = out.value >= out.bound - eps ? CheckStatus::Holds : CheckStatus::Violated;
  out.witness = {ab.start(), ab.end(), pq.start(), pq.end()};
  return out;
}

LemmaCheck check_stability(const ModelSpace& space, const Segment& ab, const Point& a2, const Point& b2, double D,
                           const ConstantLedger& ledger, const CertifyBudget& budget) {
  const double eps = space.tolerance();
  if (distance(space, ab.start(), a2) > D + eps || distance(space, ab.end(), b2) > D + eps) {
    return skipped("moved endpoints are farther than D");
  }
  LemmaCheck out;
  out.bound = phi::stab2(ledger.B, ledger.C, D);
  ContractionCertificate cert = certify_contracting(space, geodesic(space, a2, b2), out.bound, budget);
  out.value = cert.max_diameter;
  out.status = cert.refuted() ? CheckStatus::Violated : CheckStatus::Holds;
  out.witness = {ab.start(), ab.end(), a2, b2};
  out.certificate = std::move(cert);
  return out;
}

}  // namespace qmorph
