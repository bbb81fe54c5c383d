#include "qmorph/runner.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <sstream>

#include "qmorph/algebra.hpp"
#include "qmorph/errors.hpp"
#include "qmorph/expressway.hpp"
#include "qmorph/rank_one.hpp"
#include "qmorph/rng.hpp"
#include "qmorph/suites.hpp"
#include "qmorph/wpd.hpp"

namespace qmorph {

namespace {

constexpr std::size_t kWitnessCap = 5;

// ---------------------------------------------------------------------------
// Config parsing
// ---------------------------------------------------------------------------

template <class F>
auto as_config_error(const std::string& what, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(what + ": " + e.what());
  }
}

Word parse_word(const Json& j, const std::string& what) {
  if (!j.is_string()) throw ConfigError(what + " must be a word string");
  return as_config_error(what, [&] { return Word::parse(j.get<std::string>()); });
}

double get_number(const Json& j, const std::string& key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number()) throw ConfigError(key + " must be a number");
  return j.at(key).get<double>();
}

ModelSpace parse_space(const Json& j) {
  if (!j.is_object() || !j.contains("kind")) throw ConfigError("space needs a kind");
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "tree") return ModelSpace::tree(static_cast<int>(get_number(j, "rank", 2)));
  if (kind == "half_plane") return ModelSpace::half_plane();
  if (kind == "euclidean") return ModelSpace::euclidean(static_cast<int>(get_number(j, "dim", 2)));
  if (kind == "product") {
    if (!j.contains("left") || !j.contains("right")) throw ConfigError("product space needs left and right");
    return ModelSpace::product(parse_space(j.at("left")), parse_space(j.at("right")));
  }
  throw ConfigError("unknown space kind " + kind);
}

Mat2 parse_matrix(const Json& j) {
  if (j.contains("matrix")) {
    const auto m = j.at("matrix").get<std::vector<double>>();
    if (m.size() != 4) throw ConfigError("matrix generators need four entries");
    return Mat2{m[0], m[1], m[2], m[3]};
  }
  if (j.contains("diagonal")) {
    Mat2 m = diagonal(j.at("diagonal").get<double>());
    if (j.contains("conjugate_by_rotation")) {
      const Mat2 r = rotation_about_i(j.at("conjugate_by_rotation").get<double>());
      m = r * m * inverse(r);
    }
    return m;
  }
  throw ConfigError("matrix generator needs matrix or diagonal");
}

EuclidMotion parse_motion(const Json& j) {
  if (!j.contains("translation")) throw ConfigError("euclidean generator needs a translation");
  EuclidMotion m = EuclidMotion::translation(j.at("translation").get<std::vector<double>>());
  if (j.contains("rotation")) {
    if (m.dim() != 2) throw ConfigError("rotations need dimension 2");
    const double t = j.at("rotation").get<double>();
    m.linear = {std::cos(t), -std::sin(t), std::sin(t), std::cos(t)};
  }
  return m;
}

GroupModel parse_group(const Json& j) {
  if (!j.is_object() || !j.contains("kind")) throw ConfigError("group needs a kind");
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "free") return GroupModel::free(static_cast<int>(get_number(j, "rank", 2)));
  if (kind == "matrix") {
    std::vector<Mat2> gens;
    for (const Json& g : j.at("generators")) gens.push_back(parse_matrix(g));
    return GroupModel::matrix(std::move(gens));
  }
  if (kind == "euclid") {
    std::vector<EuclidMotion> gens;
    for (const Json& g : j.at("generators")) gens.push_back(parse_motion(g));
    return GroupModel::euclid(std::move(gens));
  }
  if (kind == "product") return GroupModel::product(parse_group(j.at("left")), parse_group(j.at("right")));
  throw ConfigError("unknown group kind " + kind);
}

using BudgetField = int Budgets::*;

const std::vector<std::pair<std::string, BudgetField>>& budget_fields() {
  static const std::vector<std::pair<std::string, BudgetField>> fields{
      {"ball_radius", &Budgets::ball_radius},   {"ball_samples", &Budgets::ball_samples},
      {"n_max", &Budgets::n_max},               {"power_max", &Budgets::power_max},
      {"word_len_max", &Budgets::word_len_max}, {"defect_radius", &Budgets::defect_radius},
      {"grid_max", &Budgets::grid_max},         {"homogenize_n", &Budgets::homogenize_n},
      {"suite_count", &Budgets::suite_count},   {"lemma_radius", &Budgets::lemma_radius},
      {"wpd_radius", &Budgets::wpd_radius},     {"equiv_radius", &Budgets::equiv_radius},
      {"schottky_n", &Budgets::schottky_n},     {"family_count", &Budgets::family_count},
      {"lambda_pairs", &Budgets::lambda_pairs},
  };
  return fields;
}

Budgets parse_budgets(const Json& j, double scale) {
  Budgets b;
  if (!j.is_null() && !j.is_object()) throw ConfigError("budgets must be an object");
  const Json given = j.is_null() ? Json::object() : j;
  for (const auto& [key, value] : given.items()) {
    const auto& fields = budget_fields();
    const auto it = std::find_if(fields.begin(), fields.end(), [&](const auto& f) { return f.first == key; });
    if (it == fields.end()) throw ConfigError("unknown budget " + key);
    if (!value.is_number_integer() || value.get<long>() <= 0) throw ConfigError("budget " + key + " must be a positive integer");
    b.*(it->second) = static_cast<int>(value.get<long>());
  }
  if (!(scale > 0.0)) throw ConfigError("budget scale must be positive");
  for (const auto& [key, field] : budget_fields()) {
    b.*field = std::max(1, static_cast<int>(std::lround(b.*field * scale)));
  }
  return b;
}

Json budgets_to_json(const Budgets& b) {
  Json j = Json::object();
  for (const auto& [key, field] : budget_fields()) j[key] = b.*field;
  return j;
}

const Json& section(const ExperimentConfig& cfg, const std::string& name) {
  static const Json null_json;
  const auto it = cfg.echo.find(name);
  return it == cfg.echo.end() ? null_json : *it;
}

Word section_word(const Json& sec, const std::string& key, const Word& fallback) {
  if (!sec.contains(key)) return fallback;
  return parse_word(sec.at(key), key);
}

Json skipped(const std::string& reason) { return Json{{"status", "skipped"}, {"reason", reason}}; }

// ---------------------------------------------------------------------------
// Serialization helpers
// ---------------------------------------------------------------------------

Json seg_json(const ModelSpace& space, const Segment& s) {
  return Json::array({point_to_json(space, s.start()), point_to_json(space, s.end())});
}

Segment seg_from(const ModelSpace& space, const Json& j) {
  return geodesic(space, point_from_json(space, j.at(0)), point_from_json(space, j.at(1)));
}

Json points_json(const ModelSpace& space, const std::vector<Point>& pts) {
  Json out = Json::array();
  for (const Point& p : pts) out.push_back(point_to_json(space, p));
  return out;
}

Json ball_witness(const ModelSpace& space, const Segment& seg, const BallProbe& p, double B, std::size_t samples) {
  return Json{{"witness_type", "ball"},
              {"segment", seg_json(space, seg)},
              {"center", point_to_json(space, p.center)},
              {"radius", p.radius},
              {"samples", samples},
              {"diameter", p.diameter},
              {"B", B},
              {"x1", point_to_json(space, p.x1)},
              {"x2", point_to_json(space, p.x2)}};
}

Json certificate_json(const ModelSpace& space, const ContractionCertificate& c) {
  Json j{{"B", c.B},
         {"status", to_string(c.status)},
         {"max_diameter", c.max_diameter},
         {"balls_checked", c.balls_checked},
         {"length", c.segment.length()}};
  if (c.witness) j["witness"] = ball_witness(space, c.segment, *c.witness, c.B, c.budget.samples);
  return j;
}

Json lemma_witness(const ModelSpace& space, const std::string& lemma, const LemmaCheck& c, double D) {
  return Json{{"witness_type", "lemma"}, {"lemma", lemma},     {"points", points_json(space, c.witness)},
              {"value", c.value},        {"bound", c.bound},   {"D", D}};
}

Json suite_json(const ModelSpace& space, const LemmaSuiteReport& rep, double D) {
  Json j = Json::object();
  for (const auto& [name, t] : rep.lemmas) {
    Json w = Json::array();
    for (const LemmaCheck& c : t.violations) w.push_back(lemma_witness(space, name, c, D));
    j[name] = Json{{"holds", t.holds}, {"violated", t.violated}, {"skipped", t.skipped}, {"witnesses", w}};
  }
  return j;
}

Json path_json(const ModelSpace& space, const ModifiedLengthResult& r) {
  Json out = Json::array();
  for (const PathStep& s : r.path) {
    out.push_back(Json{{"from", point_to_json(space, s.from)},
                       {"to", point_to_json(space, s.to)},
                       {"expressway", s.expressway},
                       {"g", s.g.str()}});
  }
  return out;
}

Json lambda_witness(const ModelSpace& space, const Point& a, const Point& b, const ModifiedLengthResult& r) {
  return Json{{"witness_type", "lambda"},
              {"a", point_to_json(space, a)},
              {"b", point_to_json(space, b)},
              {"value", r.value},
              {"expressways", r.expressways},
              {"path", path_json(space, r)}};
}

std::string status_of(bool violated) { return violated ? "violated" : "ok"; }

int exit_of(const Json& part) {
  if (part.contains("status") && part.at("status") == "violated") return 1;
  return 0;
}

ConstantLedger ledger_of(const ExperimentConfig& cfg) {
  if (!(cfg.C > 0.0) || !(cfg.B > 0.0)) throw InputError("the constant ledger needs C > 0 and B > 0");
  return phi_table(cfg.C, cfg.B);
}

Json ledger_json(const ConstantLedger& l) {
  Json t = Json::object();
  for (const auto& [k, v] : l.table) t[k] = v;
  return t;
}

ExpresswayPolicy policy_of(const ExperimentConfig& cfg) {
  ExpresswayPolicy p;
  const Json& sec = section(cfg, "expressway");
  if (sec.contains("margin")) p.margin = sec.at("margin").get<double>();
  if (sec.contains("group_radius")) p.group_radius = sec.at("group_radius").get<int>();
  if (sec.contains("max_expressways")) p.max_expressways = sec.at("max_expressways").get<std::size_t>();
  return p;
}

CertifyBudget certify_budget(const ExperimentConfig& cfg) {
  CertifyBudget b;
  b.samples = static_cast<std::size_t>(cfg.budgets.ball_samples);
  const Json& sec = section(cfg, "certify");
  if (sec.contains("directions")) b.directions = sec.at("directions").get<int>();
  if (sec.contains("center_distances")) b.center_distances = sec.at("center_distances").get<std::vector<double>>();
  if (sec.contains("station_step")) b.station_step = sec.at("station_step").get<double>();
  if (sec.contains("tree_tube")) b.tree_tube = sec.at("tree_tube").get<int>();
  return b;
}

bool has_flats(const ModelSpace& s) {
  switch (s.kind()) {
    case SpaceKind::Euclidean: return true;
    case SpaceKind::Product: return true;
    default: return false;
  }
}

bool sampleable(const ModelSpace& s) { return s.kind() == SpaceKind::Tree || s.is_continuous(); }

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

Json run_axioms(const ExperimentConfig& cfg) {
  const ModelSpace& space = cfg.space;
  if (!sampleable(space)) return skipped("axiom sampling in products with a tree factor is not supported");
  const Rng rng = Rng(cfg.seed).split("axioms");
  const Budgets& b = cfg.budgets;
  const bool tree = space.kind() == SpaceKind::Tree;
  std::size_t bundles = 0;
  std::size_t quads = 0;
  DdSampler dd_inner = tree ? tree_dd_sampler(space, std::min(b.ball_radius, 3))
                            : random_dd_sampler(space, rng.split("dd"), static_cast<std::size_t>(b.suite_count), 4, 3.0);
  FtSampler ft_inner = tree ? tree_ft_sampler(space, std::min(b.ball_radius, 3), 2)
                            : random_ft_sampler(space, rng.split("ft"), static_cast<std::size_t>(b.suite_count), 3.0, 1.0);
  const DdSampler dd = [&](const DdSink& sink) {
    dd_inner([&](const DdBundle& bun) {
      ++bundles;
      sink(bun);
    });
  };
  const FtSampler ft = [&](const FtSink& sink) {
    ft_inner([&](const FtQuad& q) {
      ++quads;
      sink(q);
    });
  };
  const std::vector<DdViolation> ddv = check_dd(space, dd, cfg.C);
  const std::vector<FtViolation> ftv = check_ft(space, ft, cfg.C);
  const MetricReport m = metric_suite(space, rng.split("metric"), static_cast<std::size_t>(b.suite_count),
                                      std::min(b.ball_radius, 2), 3.0);
  Json ddw = Json::array();
  for (std::size_t i = 0; i < std::min(kWitnessCap, ddv.size()); ++i) {
    const DdViolation& v = ddv[i];
    ddw.push_back(Json{{"witness_type", "dd"},
                       {"segment", seg_json(space, v.segment)},
                       {"x", point_to_json(space, v.x)},
                       {"x2", point_to_json(space, v.x2)},
                       {"gap", v.projection_gap},
                       {"bound", v.bound}});
  }
  Json ftw = Json::array();
  for (std::size_t i = 0; i < std::min(kWitnessCap, ftv.size()); ++i) {
    const FtViolation& v = ftv[i];
    ftw.push_back(Json{{"witness_type", "ft"},
                       {"segment", Json::array({point_to_json(space, v.quad.a), point_to_json(space, v.quad.b)})},
                       {"point", point_to_json(space, v.witness)},
                       {"distance", v.distance},
                       {"bound", v.bound}});
  }
  const bool metric_bad = m.triangle_violations + m.isometry_violations + m.idempotence_violations > 0;
  Json out{{"C", cfg.C},
           {"dd", Json{{"bundles", bundles}, {"violations", ddv.size()}, {"witnesses", ddw}}},
           {"ft", Json{{"quadruples", quads}, {"violations", ftv.size()}, {"witnesses", ftw}}},
           {"metric", Json{{"triples", m.triples},
                           {"triangle_violations", m.triangle_violations},
                           {"isometry_violations", m.isometry_violations},
                           {"idempotence_violations", m.idempotence_violations}}}};
  out["status"] = status_of(!ddv.empty() || !ftv.empty() || metric_bad);
  return out;
}

Json run_contract(const ExperimentConfig& cfg) {
  const ModelSpace& space = cfg.space;
  Json out = Json::object();
  bool bad = false;
  const Point wx0 = act(space, cfg.group.evaluate(cfg.word), cfg.basepoint);
  const Segment sigma = geodesic(space, cfg.basepoint, wx0);
  if (sampleable(space)) {
    const ContractionCertificate cert = certify_contracting(space, sigma, cfg.B, certify_budget(cfg));
    out["sigma"] = certificate_json(space, cert);
    bad = bad || cert.refuted();
  } else {
    out["sigma"] = skipped("contraction probes in products with a tree factor are not supported");
  }
  if (cfg.C > 0.0) {
    const ConstantLedger ledger = ledger_of(cfg);
    out["ledger"] = ledger_json(ledger);
    const std::vector<std::string> mono = ledger_monotonicity_violations({0.5, 1.0, 2.0, 4.0});
    out["ledger_monotonicity_violations"] = mono.size();
    bad = bad || !mono.empty();
    if (has_flats(space) || !sampleable(space)) {
      out["lemmas"] = skipped("segments in spaces with flats are not B-contracting");
    } else {
      const LemmaSuiteReport rep =
          space.kind() == SpaceKind::Tree
              ? tree_lemma_suite(space, ledger, std::min(cfg.budgets.lemma_radius, 5), reduced_budget())
              : random_lemma_suite(space, ledger, static_cast<std::size_t>(cfg.budgets.suite_count),
                                   Rng(cfg.seed).split("lemmas"), reduced_budget());
      Json lem = suite_json(space, rep, space.kind() == SpaceKind::Tree ? 1.0 : 0.5);
      lem["violations"] = rep.violations();
      lem["status"] = status_of(rep.violations() > 0);
      out["lemmas"] = lem;
      bad = bad || rep.violations() > 0;
    }
  } else {
    out["ledger"] = skipped("the constant ledger needs C > 0");
    out["lemmas"] = skipped("the constant ledger needs C > 0");
  }
  out["status"] = status_of(bad);
  return out;
}

LambdaSamples smooth_lambda_samples(const ModelSpace& space, const Point& x0, Rng rng, std::size_t n,
                                    const std::vector<Word>& gens) {
  LambdaSamples s;
  for (std::size_t i = 0; i < n; ++i) {
    const Point a = random_point(space, rng, x0, 2.0);
    const Point b = random_point(space, rng, x0, 2.0);
    s.pairs.emplace_back(a, b);
    s.quads.push_back({{a, b}, {random_point(space, rng, a, 0.5), random_point(space, rng, b, 0.5)}});
    const Segment ab = geodesic(space, a, b);
    s.triples.emplace_back(a, ab.point_at(rng.uniform() * ab.length()), b);
  }
  s.group_elements = gens;
  return s;
}

Json run_qm(const ExperimentConfig& cfg) {
  const ModelSpace& space = cfg.space;
  if (!(cfg.C > 0.0)) return skipped("the constant ledger needs C > 0");
  const ConstantLedger ledger = ledger_of(cfg);
  const ExpresswayPolicy policy = policy_of(cfg);
  const ExpresswaySystem sys(space, cfg.group, cfg.word, cfg.basepoint, ledger, policy);
  const Budgets& b = cfg.budgets;
  const double eps = space.tolerance();
  Json out{{"L", sys.length()},
           {"D", ledger.D},
           {"margin", sys.margin()},
           {"length_hypothesis", sys.length_hypothesis()},
           {"line_path", sys.uses_line_path()}};
  bool bad = false;

  Json table = Json::array();
  Json witnesses = Json::array();
  double worst_dev = 0.0;
  for (int n = 1; n <= b.n_max; ++n) {
    const Word g = power(cfg.word, n);
    const Point gx0 = act(space, cfg.group.evaluate(g), cfg.basepoint);
    const ModifiedLengthResult fwd = modified_length(sys, cfg.basepoint, gx0);
    const ModifiedLengthResult back = modified_length(sys, gx0, cfg.basepoint);
    worst_dev = std::max({worst_dev, witness_deviation(sys, cfg.basepoint, gx0, fwd),
                          witness_deviation(sys, gx0, cfg.basepoint, back)});
    table.push_back(Json{{"n", n},
                         {"distance", distance(space, cfg.basepoint, gx0)},
                         {"forward", fwd.value},
                         {"backward", back.value},
                         {"phi", back.value - fwd.value},
                         {"expressways", fwd.expressways}});
    witnesses.push_back(lambda_witness(space, cfg.basepoint, gx0, fwd));
    witnesses.push_back(lambda_witness(space, gx0, cfg.basepoint, back));
  }
  out["table"] = table;
  out["witnesses"] = witnesses;
  out["witness_deviation"] = Json{{"max", worst_dev}, {"bound", ledger.D}};
  bad = bad || worst_dev > ledger.D + eps;

  std::vector<Word> gens;
  for (int i = 1; i <= cfg.group.rank(); ++i) gens.push_back(Word::generator(i));
  const LambdaSamples samples =
      space.kind() == SpaceKind::Tree
          ? tree_lambda_samples(std::min(b.ball_radius, 3), static_cast<std::size_t>(b.lambda_pairs))
          : smooth_lambda_samples(space, cfg.basepoint, Rng(cfg.seed).split("lambda"),
                                  static_cast<std::size_t>(b.lambda_pairs), gens);
  const std::vector<LambdaViolation> lv = check_lambda_properties(sys, samples);
  Json lvw = Json::array();
  for (std::size_t i = 0; i < std::min(kWitnessCap, lv.size()); ++i) {
    lvw.push_back(Json{{"property", lv[i].property},
                       {"points", points_json(space, lv[i].points)},
                       {"value", lv[i].value},
                       {"bound", lv[i].bound}});
  }
  out["lambda_properties"] = Json{{"pairs", samples.pairs.size()},
                                  {"quadruples", samples.quads.size()},
                                  {"triples", samples.triples.size()},
                                  {"violations", lv.size()},
                                  {"examples", lvw}};
  bad = bad || !lv.empty();

  DefectReport def;
  if (sys.uses_line_path()) {
    def = defect_exhaustive(sys, b.defect_radius);
  } else {
    const std::vector<Word> words = ball(cfg.group, b.defect_radius);
    std::vector<std::pair<Word, Word>> pairs;
    for (const Word& g : words) {
      for (const Word& h : words) pairs.emplace_back(g, h);
    }
    def = defect_estimate(sys, pairs);
  }
  out["defect"] = Json{{"radius", b.defect_radius},
                       {"pairs", def.pairs},
                       {"value", def.value},
                       {"witness", Json{{"witness_type", "defect_pair"}, {"g", def.g.str()}, {"h", def.h.str()}, {"value", def.value}}}};

  const Json& ind = section(cfg, "independence");
  std::vector<Word> testers{cfg.word};
  if (ind.contains("testers")) {
    testers.clear();
    for (const Json& t : ind.at("testers")) testers.push_back(parse_word(t, "tester"));
  }
  Json hom = Json::array();
  for (const Word& t : testers) {
    const Homogenized h = homogenize(sys, t, b.homogenize_n, def.value);
    hom.push_back(Json{{"g", t.str()}, {"n", b.homogenize_n}, {"value", h.value}, {"error_bound", h.error_bound}});
  }
  out["homogenized"] = hom;

  if (ind.contains("systems")) {
    std::vector<ExpresswaySystem> systems;
    for (const Json& w : ind.at("systems")) {
      systems.emplace_back(space, cfg.group, parse_word(w, "system"), cfg.basepoint, ledger, policy);
    }
    std::vector<const ExpresswaySystem*> ptrs;
    for (const auto& s : systems) ptrs.push_back(&s);
    const IndependenceResult r = independence_matrix(ptrs, testers, b.homogenize_n);
    const int full = static_cast<int>(std::min(systems.size(), testers.size()));
    out["independence"] = Json{{"matrix", r.matrix}, {"rank", r.rank}, {"full_rank", r.rank == full}};
    bad = bad || r.rank != full;
  } else {
    out["independence"] = skipped("no systems configured");
  }
  out["status"] = status_of(bad);
  return out;
}

Json rank_one_json(const ModelSpace& space, const RankOneCertificate& c) {
  Json steps = Json::array();
  for (const RankOneStep& s : c.steps) {
    steps.push_back(Json{{"n", s.n},
                         {"displacement", s.displacement},
                         {"hausdorff", s.hausdorff},
                         {"max_diameter", s.certificate.max_diameter},
                         {"certificate", to_string(s.certificate.status)}});
  }
  Json j{{"g", c.g.str()}, {"B", c.B}, {"n_max", c.n_max}, {"epsilon0", c.epsilon0}, {"refuted", c.refuted}, {"steps", steps}};
  if (c.refuted) {
    Json w{{"witness_type", "rank_one"}, {"g", c.g.str()}, {"B", c.B}, {"n", c.failing_n}, {"reason", c.reason}};
    const auto& last = c.steps.back().certificate;
    if (c.reason == "contraction" && last.witness) w["ball"] = ball_witness(space, last.segment, *last.witness, c.B, last.budget.samples);
    j["witness"] = w;
  }
  return j;
}

Json run_rank1(const ExperimentConfig& cfg) {
  const ModelSpace& space = cfg.space;
  const Json& sec = section(cfg, "rank1");
  Json out = Json::object();
  bool bad = false;
  if (!sampleable(space)) return skipped("contraction probes in products with a tree factor are not supported");
  if (sec.is_null()) {
    out["rank_one"] = skipped("no rank1 section");
  } else {
    const Word g = section_word(sec, "g", cfg.word);
    const double B = get_number(sec, "B", cfg.B);
    const CertifyBudget budget = certify_budget(cfg);
    const bool expect_refuted = sec.contains("expect_refuted") && sec.at("expect_refuted").get<bool>();
    const RankOneCertificate cg = rank_one_test(space, cfg.group, g, cfg.basepoint, B, cfg.budgets.n_max, budget);
    out["rank_one"] = Json::array({rank_one_json(space, cg)});
    out["expect_refuted"] = expect_refuted;
    bad = bad || cg.refuted != expect_refuted;
    if (sec.contains("h")) {
      const Word h = parse_word(sec.at("h"), "h");
      const RankOneCertificate ch = rank_one_test(space, cfg.group, h, cfg.basepoint, B, cfg.budgets.n_max, budget);
      out["rank_one"].push_back(rank_one_json(space, ch));
      bad = bad || ch.refuted;
      const double factor = get_number(sec, "threshold_factor", 10.0);
      const IndependenceProfile p = independence_test(space, cfg.group, g, h, cfg.basepoint, cfg.budgets.grid_max, factor * B);
      out["independence"] = Json{{"profile", p.profile},
                                 {"grid_max", p.grid_max},
                                 {"threshold", p.threshold},
                                 {"increasing_tail", p.increasing_tail},
                                 {"independent", p.independent}};
      bad = bad || !p.independent;
      if (space.kind() == SpaceKind::Tree && cfg.C > 0.0) {
        const ConstantLedger ledger = ledger_of(cfg);
        const double need = phi::qg(B, cfg.C);
        const double step_len = std::min(distance(space, cfg.basepoint, act(space, cfg.group.evaluate(g), cfg.basepoint)),
                                         distance(space, cfg.basepoint, act(space, cfg.group.evaluate(h), cfg.basepoint)));
        const int p_exp = static_cast<int>(std::ceil((need + 1.0) / step_len)) + 1;
        const Word G = power(g, p_exp);
        const Word H = power(h, p_exp);
        std::vector<Point> chain;
        for (const Word& w : {Word(), G, multiply(G, H), multiply({G, H, G})}) {
          chain.push_back(act(space, cfg.group.evaluate(w), cfg.basepoint));
        }
        CertifyBudget cb = budget;
        cb.tree_tube = 1;
        const ChainCheck cc = chain_check(space, chain, B, ledger, cb);
        out["chain"] = Json{{"power", p_exp},
                            {"status", to_string(cc.status)},
                            {"reason", cc.reason},
                            {"neighborhood", cc.neighborhood},
                            {"bound", cc.bound}};
        bad = bad || cc.status == CheckStatus::Violated;
      } else {
        out["chain"] = skipped("chains longer than the chain constant are only run in the tree");
      }
    } else {
      out["independence"] = skipped("no second element");
    }
  }
  const Json& flat = section(cfg, "flat");
  if (flat.is_null()) {
    out["flat_control"] = skipped("no flat section");
  } else {
    const Word g = section_word(flat, "g", cfg.word);
    const int pw = static_cast<int>(get_number(flat, "power", 1));
    const Segment seg = geodesic(space, cfg.basepoint, act(space, cfg.group.evaluate(power(g, pw)), cfg.basepoint));
    const auto sweep = flat.at("sweep").get<std::vector<double>>();
    const auto samples = static_cast<std::size_t>(cfg.budgets.ball_samples);
    const std::vector<FlatRow> rows = half_flat_control(space, seg, sweep, samples);
    Json jr = Json::array();
    bool all = true;
    for (const FlatRow& r : rows) {
      jr.push_back(Json{{"B", r.B}, {"diameter", r.probe.diameter}, {"refuted", r.refuted},
                        {"witness", ball_witness(space, seg, r.probe, r.B, samples)}});
      all = all && r.refuted;
    }
    out["flat_control"] = Json{{"length", seg.length()}, {"rows", jr}, {"status", all ? "refuted_as_expected" : "violated"}};
    bad = bad || !all;
  }
  out["status"] = status_of(bad);
  return out;
}

Json run_schottky(const ExperimentConfig& cfg) {
  const Json& sec = section(cfg, "schottky");
  if (sec.is_null()) return skipped("no schottky section");
  const Word g = section_word(sec, "g", cfg.word);
  const Word h = parse_word(sec.at("h"), "h");
  const double E = get_number(sec, "E", 1.0);
  const SchottkyResult r =
      schottky_exponent(cfg.space, cfg.group, g, h, cfg.basepoint, E, cfg.budgets.word_len_max, cfg.budgets.schottky_n);
  Json table = Json::array();
  for (const SchottkyRow& row : r.table) {
    table.push_back(Json{{"word", row.word.str()}, {"displacement", row.displacement}, {"bound", row.bound}});
  }
  Json attempts = Json::array();
  for (const auto& [N, worst] : r.attempts) attempts.push_back(Json{{"N", N}, {"min_ratio", worst}});
  Json out{{"E", E}, {"word_len_max", cfg.budgets.word_len_max}, {"n_budget", cfg.budgets.schottky_n},
           {"attempts", attempts}, {"table", table}};
  out["N"] = r.N ? Json(*r.N) : Json(nullptr);
  out["status"] = r.N ? "ok" : "violated";
  if (!r.N) out["reason"] = "no exponent found at budget";
  return out;
}

Json words_json(const std::vector<Word>& ws) {
  Json out = Json::array();
  for (const Word& w : ws) out.push_back(w.str());
  return out;
}

Json run_wpd(const ExperimentConfig& cfg) {
  if (!cfg.group.is_free()) return skipped("WPD counting is run on free-group models");
  const Json& sec = section(cfg, "wpd");
  if (sec.is_null()) return skipped("no wpd section");
  const Word g = section_word(sec, "g", cfg.word);
  const double c = get_number(sec, "c", 2.0);
  const int M = static_cast<int>(get_number(sec, "M", 4));
  const int radius = cfg.budgets.wpd_radius;
  const WpdReport zero = wpd_count(cfg.space, cfg.group, g, cfg.basepoint, 0.0, M, radius);
  const WpdStability st = wpd_stability(cfg.space, cfg.group, g, cfg.basepoint, c, M, radius);
  const double sep = distance(cfg.space, cfg.basepoint, act(cfg.space, cfg.group.evaluate(power(g, M)), cfg.basepoint));
  const bool zero_ok = zero.count() == 1 && zero.elements.front().is_identity();
  Json out{{"g", g.str()},
           {"M", M},
           {"separation", sep},
           {"c_zero", Json{{"radius", radius}, {"count", zero.count()}, {"elements", words_json(zero.elements)}}},
           {"c", c},
           {"inner", Json{{"radius", st.inner.radius}, {"count", st.inner.count()}, {"elements", words_json(st.inner.elements)}}},
           {"outer", Json{{"radius", st.outer.radius}, {"count", st.outer.count()}, {"elements", words_json(st.outer.elements)}}},
           {"stable", st.stable}};
  out["status"] = status_of(!zero_ok || !st.stable);
  return out;
}

Json run_equiv(const ExperimentConfig& cfg) {
  const Json& sec = section(cfg, "equiv");
  Json out = Json::object();
  bool bad = false;
  if (sec.is_null()) {
    out["search"] = skipped("no equiv section");
  } else {
    const Word g = section_word(sec, "g", cfg.word);
    const Word h = parse_word(sec.at("h"), "h");
    const double K = get_number(sec, "K", 2.0);
    const auto w = equiv_search(cfg.space, cfg.group, g, h, cfg.basepoint, K, cfg.budgets.power_max,
                                cfg.budgets.equiv_radius);
    Json s{{"g", g.str()}, {"h", h.str()}, {"K", K}, {"power_max", cfg.budgets.power_max},
           {"radius", cfg.budgets.equiv_radius}, {"found", w.has_value()}};
    if (w) {
      s["witness"] = Json{{"witness_type", "equiv"}, {"g", g.str()}, {"h", h.str()}, {"gamma", w->gamma.str()},
                          {"m", w->m}, {"n", w->n}, {"K", K}, {"hausdorff", w->hausdorff}};
      const EquivWitness sw = symmetric_witness(*w);
      const bool sym = equiv_holds(cfg.space, cfg.group, h, g, cfg.basepoint, sw, K);
      s["symmetric"] = sym;
      bad = bad || !sym;
    }
    if (cfg.group.is_free()) {
      const auto cp = conjugate_power_test(g, h, cfg.budgets.power_max);
      if (cp) {
        s["conjugate_powers"] = Json{{"witness_type", "conjugate_powers"}, {"g", g.str()}, {"h", h.str()},
                                     {"m", cp->first}, {"n", cp->second}};
      } else {
        s["conjugate_powers"] = nullptr;
      }
      s["agreement"] = w.has_value() == cp.has_value();
    }
    out["search"] = s;
  }
  const Json& fam = section(cfg, "family");
  if (fam.is_null() || !cfg.group.is_free()) {
    out["family"] = skipped(fam.is_null() ? "no family section" : "families are built in free groups");
  } else {
    FamilyBudget fb;
    fb.N = static_cast<int>(get_number(fam, "N", 2));
    fb.power_max = cfg.budgets.power_max;
    fb.commutator = !fam.contains("commutator") || fam.at("commutator").get<bool>();
    const std::vector<Word> members =
        build_family(parse_word(fam.at("g1"), "g1"), parse_word(fam.at("g2"), "g2"), cfg.budgets.family_count, fb);
    Json mj = Json::array();
    for (const Word& f : members) {
      mj.push_back(Json{{"word", f.str()}, {"exponent_sums", exponent_sums(f, cfg.group.rank())}});
    }
    out["family"] = Json{{"members", mj}, {"N", fb.N}, {"commutator", fb.commutator}};
  }
  out["status"] = status_of(bad);
  return out;
}

Json run_algebra(const ExperimentConfig& cfg) {
  if (!cfg.group.is_free() || cfg.group.rank() != 2) return skipped("the shipped extension has base F_2");
  const Json& sec = section(cfg, "algebra");
  if (sec.is_null()) return skipped("no algebra section");
  const Word w = section_word(sec, "word", cfg.word);
  const int radius = static_cast<int>(get_number(sec, "radius", 6));
  const int dr = static_cast<int>(get_number(sec, "defect_radius", 4));
  const FiniteExtension ext = FiniteExtension::letter_swap();
  const Quasimorphism raw = brooks_qm(w);
  const Quasimorphism hb = homogenized_brooks_qm(w);
  const Quasimorphism avg = orbit_average(ext, hb);
  const GQuasimorphism tr = transfer_extend(ext, avg);
  const double inv = invariance_defect(ext, avg, radius);
  const RestrictionReport rr = restriction_check(ext, tr, avg, radius, dr);
  const double def_outer = extension_defect(ext, tr, dr + 2);
  const double raw_defect = exhaustive_defect(raw, 2, std::min(dr, 4));
  const Quasimorphism numeric = homogenize_numeric(raw, cfg.budgets.homogenize_n, raw_defect);
  Json values = Json::array();
  for (const Word& g : ball(2, 2)) {
    values.push_back(Json{{"word", g.str()},
                          {"brooks", raw(g)},
                          {"homogenized", hb(g)},
                          {"numeric", numeric(g)},
                          {"error_bar", *numeric.defect_bound},
                          {"average", avg(g)},
                          {"transfer", tr(GElem{g, 0})}});
  }
  std::vector<Word> elems;
  for (const Word& g : ball(2, 3)) {
    if (!g.is_identity()) elems.push_back(g);
  }
  const std::vector<Word> conj = ball(2, 1);
  const auto hv = homogeneity_suite(hb, elems, conj, 4, 1e-12);
  const auto rv = homogeneity_suite(raw, elems, conj, 4, 1e-12);
  const bool bad = inv != 0.0 || rr.max_deviation != 0.0 || def_outer - rr.defect > 1.0 || !hv.empty();
  Json out{{"word", w.str()},
           {"extension", "F2 x| Z/2, a <-> b"},
           {"invariance_deviation", inv},
           {"restriction", Json{{"radius", radius}, {"words", rr.words}, {"max_deviation", rr.max_deviation}}},
           {"extension_defect", Json{{"radius", dr}, {"value", rr.defect}, {"outer_radius", dr + 2}, {"outer_value", def_outer}}},
           {"raw_defect", raw_defect},
           {"homogeneity_violations", hv.size()},
           {"raw_homogeneity_violations", rv.size()},
           {"values", values}};
  out["status"] = status_of(bad);
  return out;
}

const std::map<std::string, std::function<Json(const ExperimentConfig&)>>& table() {
  static const std::map<std::string, std::function<Json(const ExperimentConfig&)>> t{
      {"axioms", run_axioms}, {"contract", run_contract}, {"qm", run_qm},         {"rank1", run_rank1},
      {"schottky", run_schottky}, {"wpd", run_wpd},       {"equiv", run_equiv},   {"algebra", run_algebra},
  };
  return t;
}

// ---------------------------------------------------------------------------
// Replay
// ---------------------------------------------------------------------------

void collect_witnesses(const Json& j, std::vector<const Json*>& out) {
  if (j.is_object()) {
    if (j.contains("witness_type")) out.push_back(&j);
    for (const auto& [k, v] : j.items()) {
      if (k != "ball" || !j.contains("witness_type")) collect_witnesses(v, out);
    }
  } else if (j.is_array()) {
    for (const Json& v : j) collect_witnesses(v, out);
  }
}

bool close(double a, double b, double eps) { return std::abs(a - b) <= std::max(eps, 1e-9 * (1.0 + std::abs(b))); }

bool replay_one(const ExperimentConfig& cfg, const Json& w, std::unique_ptr<ExpresswaySystem>& sys) {
  const ModelSpace& space = cfg.space;
  const double eps = space.tolerance();
  const std::string type = w.at("witness_type").get<std::string>();
  if (type == "ball") {
    const Segment seg = seg_from(space, w.at("segment"));
    BallProbe p;
    p.center = point_from_json(space, w.at("center"));
    p.radius = w.at("radius").get<double>();
    p.diameter = w.at("diameter").get<double>();
    return replay_witness(space, seg, p, w.at("B").get<double>(), w.at("samples").get<std::size_t>());
  }
  if (type == "rank_one") {
    const RankOneCertificate c = rank_one_test(space, cfg.group, parse_word(w.at("g"), "g"), cfg.basepoint,
                                               w.at("B").get<double>(), w.at("n").get<int>(), certify_budget(cfg));
    return c.refuted && c.failing_n == w.at("n").get<int>() && c.reason == w.at("reason").get<std::string>();
  }
  if (type == "lambda" || type == "defect_pair") {
    if (!sys) sys = std::make_unique<ExpresswaySystem>(space, cfg.group, cfg.word, cfg.basepoint, ledger_of(cfg), policy_of(cfg));
    if (type == "lambda") {
      const double v = modified_length(*sys, point_from_json(space, w.at("a")), point_from_json(space, w.at("b"))).value;
      return close(v, w.at("value").get<double>(), eps);
    }
    const Word g = parse_word(w.at("g"), "g");
    const Word h = parse_word(w.at("h"), "h");
    const double v = std::abs(phi_sigma(*sys, multiply(g, h)) - phi_sigma(*sys, g) - phi_sigma(*sys, h));
    return close(v, w.at("value").get<double>(), eps);
  }
  if (type == "dd") {
    const Segment seg = seg_from(space, w.at("segment"));
    const Point x = point_from_json(space, w.at("x"));
    const Point x2 = point_from_json(space, w.at("x2"));
    const double gap = distance(space, project(space, x, seg).point, project(space, x2, seg).point);
    return close(gap, w.at("gap").get<double>(), eps) && gap >= w.at("bound").get<double>() - eps;
  }
  if (type == "ft") {
    const Segment seg = seg_from(space, w.at("segment"));
    const double d = distance_to_segment(space, point_from_json(space, w.at("point")), seg);
    return close(d, w.at("distance").get<double>(), eps) && d > w.at("bound").get<double>() + eps;
  }
  if (type == "lemma") {
    const ConstantLedger ledger = ledger_of(cfg);
    std::vector<Point> p;
    for (const Json& x : w.at("points")) p.push_back(point_from_json(space, x));
    const std::string lemma = w.at("lemma").get<std::string>();
    LemmaCheck c;
    if (lemma == "thin") c = check_thin_triangle(space, p.at(0), p.at(1), p.at(2), ledger);
    else if (lemma == "lemma1") c = check_reverse_triangle(space, p.at(0), p.at(1), p.at(2), ledger);
    else if (lemma == "cor23") c = check_cor23(space, geodesic(space, p.at(0), p.at(1)), geodesic(space, p.at(2), p.at(3)), ledger);
    else if (lemma == "variation") c = check_variation(space, geodesic(space, p.at(0), p.at(1)), geodesic(space, p.at(2), p.at(3)), ledger);
    else if (lemma == "stability") c = check_stability(space, geodesic(space, p.at(0), p.at(1)), p.at(2), p.at(3), w.at("D").get<double>(), ledger, reduced_budget());
    else return false;
    return c.violated() && close(c.value, w.at("value").get<double>(), eps);
  }
  if (type == "equiv") {
    const EquivWitness ew{parse_word(w.at("gamma"), "gamma"), w.at("m").get<int>(), w.at("n").get<int>(), 0.0};
    double measured = 0.0;
    const bool ok = equiv_holds(space, cfg.group, parse_word(w.at("g"), "g"), parse_word(w.at("h"), "h"),
                                cfg.basepoint, ew, w.at("K").get<double>(), 0.5, &measured);
    return ok && close(measured, w.at("hausdorff").get<double>(), eps);
  }
  if (type == "conjugate_powers") {
    return conjugacy_test(power(parse_word(w.at("g"), "g"), w.at("m").get<int>()),
                          power(parse_word(w.at("h"), "h"), w.at("n").get<int>()));
  }
  throw ConfigError("unknown witness type " + type);
}

}  // namespace

// ---------------------------------------------------------------------------

Json point_to_json(const ModelSpace& space, const Point& p) {
  switch (space.kind()) {
    case SpaceKind::Tree: {
      const TreePoint& t = p.tree();
      if (t.is_vertex()) return t.vertex.str();
      return Json{{"vertex", t.vertex.str()}, {"toward", std::string(1, letter_char(t.toward))}, {"offset", t.offset}};
    }
    case SpaceKind::HalfPlane: return Json::array({p.plane().x, p.plane().y});
    case SpaceKind::Euclidean: return Json(p.euclid().v);
    case SpaceKind::Product:
      return Json::array({point_to_json(space.left(), p.left()), point_to_json(space.right(), p.right())});
  }
  return nullptr;
}

Point point_from_json(const ModelSpace& space, const Json& j) {
  return as_config_error("point", [&]() -> Point {
    Point p;
    switch (space.kind()) {
      case SpaceKind::Tree:
        if (j.is_string()) {
          p = Point(tree_vertex(Word::parse(j.get<std::string>())));
        } else {
          const std::string t = j.at("toward").get<std::string>();
          if (t.size() != 1) throw ConfigError("toward must be a single letter");
          p = Point(tree_point(Word::parse(j.at("vertex").get<std::string>()), char_letter(t[0]), j.at("offset").get<double>()));
        }
        break;
      case SpaceKind::HalfPlane: {
        const auto v = j.get<std::vector<double>>();
        if (v.size() != 2) throw ConfigError("half-plane points need two coordinates");
        p = Point(PlanePoint{v[0], v[1]});
        break;
      }
      case SpaceKind::Euclidean: p = Point(EuclidPoint{j.get<std::vector<double>>()}); break;
      case SpaceKind::Product:
        if (!j.is_array() || j.size() != 2) throw ConfigError("product points need two factors");
        p = make_product_point(point_from_json(space.left(), j.at(0)), point_from_json(space.right(), j.at(1)));
        break;
    }
    validate(space, p);
    return p;
  });
}

ExperimentConfig parse_config(const Json& j, std::optional<std::uint64_t> seed, double budget_scale) {
  return as_config_error("config", [&] {
    if (!j.is_object()) throw ConfigError("config must be an object");
    if (!j.contains("schema") || j.at("schema") != kConfigSchema) throw ConfigError("config schema must be " + std::string(kConfigSchema));
    for (const char* key : {"space", "group", "word", "basepoint"}) {
      if (!j.contains(key)) throw ConfigError(std::string("config is missing ") + key);
    }
    ExperimentConfig cfg;
    const Json& consts = j.contains("constants") ? j.at("constants") : Json::object();
    cfg.C = get_number(consts, "C", 1.0);
    cfg.B = get_number(consts, "B", 1.0);
    if (cfg.C < 0.0 || !(cfg.B > 0.0)) throw ConfigError("constants need C >= 0 and B > 0");
    cfg.space = parse_space(j.at("space")).with_constant(cfg.C);
    if (j.contains("tolerance")) {
      const double tol = j.at("tolerance").get<double>();
      if (tol < 0.0) throw ConfigError("tolerance must be nonnegative");
      cfg.space = cfg.space.with_tolerance(tol);
    }
    cfg.group = parse_group(j.at("group"));
    cfg.word = parse_word(j.at("word"), "word");
    if (cfg.word.max_generator() > cfg.group.rank()) throw ConfigError("word uses a generator outside the group");
    cfg.basepoint = point_from_json(cfg.space, j.at("basepoint"));
    if (seed) {
      cfg.seed = *seed;
    } else if (j.contains("seed")) {
      if (!j.at("seed").is_number_unsigned()) throw ConfigError("seed must be a nonnegative integer");
      cfg.seed = j.at("seed").get<std::uint64_t>();
    }
    cfg.budgets = parse_budgets(j.contains("budgets") ? j.at("budgets") : Json(), budget_scale);
    cfg.echo = j;
    cfg.echo["seed"] = cfg.seed;
    cfg.echo["budgets"] = budgets_to_json(cfg.budgets);
    cfg.echo["tolerance"] = cfg.space.tolerance();
    cfg.echo["constants"] = Json{{"C", cfg.C}, {"B", cfg.B}};
    return cfg;
  });
}

ExperimentConfig load_config(const std::string& path, std::optional<std::uint64_t> seed, double budget_scale) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path);
  Json j;
  try {
    in >> j;
  } catch (const Json::exception& e) {
    throw ConfigError("malformed config " + path + ": " + e.what());
  }
  return parse_config(j, seed, budget_scale);
}

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names{"axioms", "contract", "qm", "rank1", "schottky", "wpd", "equiv", "algebra", "all"};
  return names;
}

RunResult run(const std::string& subcommand, const ExperimentConfig& cfg) {
  RunResult res;
  auto guard = [&](const std::function<Json(const ExperimentConfig&)>& f) {
    try {
      return f(cfg);
    } catch (const InputError& e) {
      throw ConfigError(e.what());
    } catch (const UnsupportedError& e) {
      return skipped(e.what());
    }
  };
  if (subcommand == "all") {
    res.body = Json::object();
    for (const auto& [name, f] : table()) {
      res.body[name] = guard(f);
      res.exit_code = std::max(res.exit_code, exit_of(res.body[name]));
    }
    return res;
  }
  const auto it = table().find(subcommand);
  if (it == table().end()) throw ConfigError("unknown subcommand " + subcommand);
  res.body = Json{{subcommand, guard(it->second)}};
  res.exit_code = exit_of(res.body[subcommand]);
  return res;
}

Json make_report(const ExperimentConfig& cfg, const std::string& subcommand, const RunResult& result,
                 double wall_clock_seconds) {
  return Json{{"schema", kReportSchema},
              {"subcommand", subcommand},
              {"config", cfg.echo},
              {"body", result.body},
              {"exit_status", result.exit_code},
              {"wall_clock_seconds", wall_clock_seconds}};
}

ReplayResult replay(const Json& report) {
  if (!report.is_object() || !report.contains("schema") || report.at("schema") != kReportSchema) {
    throw ConfigError("report schema must be " + std::string(kReportSchema));
  }
  if (!report.contains("config") || !report.contains("body")) throw ConfigError("report needs config and body");
  const ExperimentConfig cfg = parse_config(report.at("config"));
  std::vector<const Json*> ws;
  collect_witnesses(report.at("body"), ws);
  ReplayResult res;
  std::unique_ptr<ExpresswaySystem> sys;
  for (const Json* w : ws) {
    ++res.checked;
    bool ok = false;
    try {
      ok = replay_one(cfg, *w, sys);
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      res.failures.push_back(w->at("witness_type").get<std::string>() + ": " + e.what());
      res.ok = false;
      continue;
    }
    if (!ok) {
      res.ok = false;
      res.failures.push_back(w->at("witness_type").get<std::string>() + " did not reproduce: " + w->dump());
    }
  }
  return res;
}

}  // namespace qmorph
