#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qmorph/space.hpp"

namespace qmorph {

// ---------------------------------------------------------------------------
// Constant ledger
// ---------------------------------------------------------------------------

namespace phi {

double subseg(double B, double C);          // B + 4C + 3
double thin(double B, double C);            // 3B + C + 1
double lemma1(double B, double C);          // B + C + 1
double proj(double B, double C, double D);  // lemma1 + 2C + 2D
double stab(double B, double C, double D);  // one moved endpoint
double stab2(double B, double C, double D); // both endpoints moved: stab applied twice
double var(double B, double C);             // B(C + 2) + C + 1, valid for d >= 1
double needed(double Bp, double C);         // 5 thin(B', C) + C + 3/2
double cor23(double B, double C);           // 5 subseg(B, C) + 2C + 1
double hn_length(double B, double C);       // length bound of the long-expressway case
double hn_nbhd(double B, double C);         // neighborhood radius of the short case
double hn(double B, double C);              // max(hn_length, hn_nbhd + C)
double sharp(double B, double C);           // 2 thin(B, C) + C
double qg(double B, double C);              // 2 stab(B, C, sharp + C) + C

}  // namespace phi

/// The constants C, B, the derived values B', D, S, S', T and the full table
/// of explicit Phi-functions evaluated at (B, C).
struct ConstantLedger {
  double C = 1.0;
  double B = 1.0;
  double B_prime = 0.0;
  double D = 0.0;
  double S = 0.0;
  double S_prime = 0.0;
  double T = 0.0;
  std::map<std::string, double> table;
};

/// Throws InputError unless C > 0 and B > 0.
ConstantLedger phi_table(double C, double B);

// ---------------------------------------------------------------------------
// Contraction certificates
// ---------------------------------------------------------------------------

struct CertifyBudget {
  /// Distances d(center, station) for probe centers.
  std::vector<double> center_distances{1.5, 2, 3, 4, 6, 8, 12, 16, 24, 32, 48, 64};
  /// Probe directions per station (smooth models).
  int directions = 16;
  /// Station spacing along the segment.
  double station_step = 0.5;
  /// Points sampled per ball (smooth models).
  std::size_t samples = 64;
  /// Tree model: centers are all vertices within this distance of the segment.
  int tree_tube = 5;
};

enum class CertStatus { CertifiedAtBudget, Refuted };
std::string to_string(CertStatus s);

struct BallProbe {
  Point center;
  double radius = 0.0;
  double diameter = 0.0;
  Point x1, x2;  // ball points whose projections realize the diameter
  Point p1, p2;  // their projections
};

struct ContractionCertificate {
  Segment segment;
  double B = 0.0;
  CertifyBudget budget;
  double max_diameter = 0.0;
  CertStatus status = CertStatus::CertifiedAtBudget;
  std::optional<BallProbe> witness;
  std::size_t balls_checked = 0;
  [[nodiscard]] bool refuted() const { return status == CertStatus::Refuted; }
};

/// Observed projection diameter of the sampled ball. Throws InputError if the
/// ball meets the segment.
BallProbe probe_ball(const ModelSpace& space, const Segment& seg, const Point& center, double radius,
                     std::size_t samples);

inline double projection_diameter_under_ball(const ModelSpace& space, const Segment& seg, const Point& center,
                                             double radius, std::size_t samples) {
  return probe_ball(space, seg, center, radius, samples).diameter;
}

/// Probe centers of the budget, each paired with its distance to seg.
std::vector<std::pair<Point, double>> probe_centers(const ModelSpace& space, const Segment& seg,
                                                    const CertifyBudget& budget);

ContractionCertificate certify_contracting(const ModelSpace& space, const Segment& seg, double B,
                                           const CertifyBudget& budget = {});

/// Re-evaluates a refutation witness; true if it still reaches diameter >= B - eps.
bool replay_witness(const ModelSpace& space, const Segment& seg, const BallProbe& w, double B, std::size_t samples);

// ---------------------------------------------------------------------------
// Lemma checkers
// ---------------------------------------------------------------------------

enum class CheckStatus { Holds, Violated, Skipped };
std::string to_string(CheckStatus s);

struct LemmaCheck {
  CheckStatus status = CheckStatus::Holds;
  std::string reason;
  double value = 0.0;  // measured left-hand side
  double bound = 0.0;  // the bound it is compared with
  std::vector<Point> witness;
  std::optional<ContractionCertificate> certificate;

  [[nodiscard]] bool violated() const { return status == CheckStatus::Violated; }
  [[nodiscard]] bool skipped() const { return status == CheckStatus::Skipped; }
};

/// d(b, [a, c]) < 3B + C + 1, given b within C of a projection of c to [a, b].
LemmaCheck check_thin_triangle(const ModelSpace& space, const Point& a, const Point& b, const Point& c,
                               const ConstantLedger& ledger);

/// |a-b| + |b-c| >= |a-c| >= |a-b| + |b-c| - (B + C + 1), same hypothesis.
LemmaCheck check_reverse_triangle(const ModelSpace& space, const Point& a, const Point& b, const Point& c,
                                  const ConstantLedger& ledger);

/// Either |u - v| < Phi_2.3 or d([x, y], [u, v]) < Phi_2.3, given u and v
/// within C of projections of x and y to [u, v].
LemmaCheck check_cor23(const ModelSpace& space, const Segment& xy, const Segment& uv, const ConstantLedger& ledger,
                       double step = 0.25);

/// Growth of the distance to [p, q] along [a, b] when it is minimized at a
/// with value d >= 1.
LemmaCheck check_variation(const ModelSpace& space, const Segment& ab, const Segment& pq,
                           const ConstantLedger& ledger, double step = 0.25);

/// Certifies [a', b'] at the two-endpoint stability constant.
LemmaCheck check_stability(const ModelSpace& space, const Segment& ab, const Point& a2, const Point& b2, double D,
                           const ConstantLedger& ledger, const CertifyBudget& budget = {});

/// Samples that violate monotonicity of the ledger entries on a grid.
std::vector<std::string> ledger_monotonicity_violations(const std::vector<double>& grid);

}  // namespace qmorph
