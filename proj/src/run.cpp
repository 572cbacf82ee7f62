#include "isolab/run.hpp"

#include <algorithm>
#include <cmath>
#include <ctime>
#include <set>
#include <sstream>

#include "isolab/forests.hpp"
#include "isolab/harmonic.hpp"
#include "isolab/isoperimetry.hpp"
#include "isolab/relsim.hpp"
#include "isolab/rng.hpp"

namespace isolab {

nlohmann::json ball_to_json(const CayleyBall& ball) {
  nlohmann::json j;
  j["radius"] = ball.radius;
  nlohmann::json labels = nlohmann::json::array();
  for (const auto& v : ball.vertices) labels.push_back(element_label(ball.spec, v));
  j["vertices"] = labels;
  j["sphere"] = ball.sphere;
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& e : ball.edges) edges.push_back(nlohmann::json::array({e.u, e.v, e.label}));
  j["edges"] = edges;
  j["saturated_at"] = ball.saturated_at;
  if (ball.generates_group) j["generates"] = *ball.generates_group;
  return j;
}

namespace {

nlohmann::json config_echo(const RunConfig& c) {
  nlohmann::json j;
  j["command"] = c.command;
  if (!c.subcommand.empty()) j["subcommand"] = c.subcommand;
  j["group"] = c.group;
  j["gens"] = c.gens;
  j["radius"] = c.radius;
  j["max_size"] = c.max_size;
  j["mode"] = c.mode;
  j["samples"] = c.samples;
  j["seed"] = c.seed;
  j["format"] = c.format;
  j["assert"] = c.assert_upgrade;
  j["jobs"] = c.jobs;
  if (!c.sweep.empty()) j["sweep"] = c.sweep;
  if (c.target) j["target"] = *c.target;
  if (c.command == "relsim") {
    j["N"] = c.N;
    j["n"] = c.n;
    j["eps"] = c.eps;
    j["scenario"] = c.scenario;
    j["trials"] = c.trials;
    j["y"] = c.y_size;
    j["k"] = c.k;
    if (!c.delta.empty()) j["delta"] = c.delta;
  }
  return j;
}

struct GroupContext {
  GroupSpec spec;
  GeneratingSet gens;
};

GroupContext make_group(const RunConfig& c) {
  GroupContext ctx;
  ctx.spec = parse_group_spec(c.group);
  ctx.gens = c.gens.empty() ? default_generators(ctx.spec) : parse_generating_set(ctx.spec, c.gens);
  return ctx;
}

std::string gens_text(const GeneratingSet& gens) {
  std::string out;
  for (std::size_t i = 0; i < gens.words.size(); ++i) {
    if (i > 0) out += ",";
    out += gens.words[i];
  }
  return out;
}

void add_check(Report& rep, const std::string& name, bool asserted, bool passed,
               nlohmann::json values = {}) {
  rep.checks.push_back({name, asserted, passed, std::move(values)});
}

void run_ball(const RunConfig& c, Report& rep) {
  GroupContext ctx = make_group(c);
  CayleyBall ball = cayley_ball(ctx.spec, ctx.gens, c.radius);
  rep.payload = ball_to_json(ball);
  add_check(rep, "ball_constructed", true, true,
            {{"vertices", ball.vertices.size()}, {"edges", ball.edges.size()}});
}

std::vector<long long> ball_size_sequence(const CayleyBall& ball) {
  std::vector<long long> sizes(ball.radius + 1, 0);
  for (int s : ball.sphere) ++sizes[s];
  for (int i = 1; i <= ball.radius; ++i) sizes[i] += sizes[i - 1];
  // saturated balls stop growing early; keep the constant tail
  return sizes;
}

void run_cheeger(const RunConfig& c, Report& rep) {
  GroupContext ctx = make_group(c);
  CayleyBall ball = cayley_ball(ctx.spec, ctx.gens, c.radius);
  MinRatioResult best = min_ratio_exact(ball, c.max_size, 20'000'000, c.jobs);
  VertexSet a = make_vertex_set(ball, best.members);

  std::optional<double> growth;
  if (ball.radius >= 2) growth = growth_rate(ball_size_sequence(ball)).estimate;
  BoundaryReport board = check_comparisons(a, growth);

  nlohmann::json payload;
  payload["group"] = c.group;
  payload["gens"] = gens_text(ctx.gens);
  payload["radius"] = c.radius;
  payload["max_size"] = c.max_size;
  payload["minimizer"] = best.members;
  payload["ratio"] = rational_json(best.ratio);
  payload["folner"] = rational_json(board.folner_ratio);
  payload["kazhdan"] = board.kazhdan_value;
  payload["sets_visited"] = best.sets_visited;
  if (growth) payload["growth_estimate"] = *growth;
  rep.payload = payload;

  add_check(rep, "folner_le_ratio", true, board.folner_ratio <= board.ratio,
            {{"folner", rational_json(board.folner_ratio)}, {"ratio", rational_json(board.ratio)}});
  if (board.sandwich_checked)
    add_check(rep, "sandwich", true, board.sandwich_ok,
              {{"upper_factor", 2 * static_cast<long long>(ctx.gens.elements.size()) - 1}});
  else
    add_check(rep, "sandwich", false, false, {{"skipped", "isolated vertex in induced subgraph"}});
  add_check(rep, "kazhdan_le_sqrt_ratio", true, board.kazhdan_ok,
            {{"kazhdan", board.kazhdan_value}});
  // never asserted: a single-set ratio upper-bounds h_S and may exceed the
  // growth bound on the infimum
  if (board.growth_bound)
    add_check(rep, "growth_bound_info", false, true, {{"bound", *board.growth_bound}});
}

void run_profile(const RunConfig& c, Report& rep) {
  GroupContext ctx = make_group(c);
  std::vector<ProfileRow> rows = ratio_profile(ctx.spec, ctx.gens, c.radius);

  nlohmann::json payload;
  payload["group"] = c.group;
  payload["gens"] = gens_text(ctx.gens);
  payload["r_max"] = c.radius;
  nlohmann::json rows_json = nlohmann::json::array();
  bool monotone = true;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    rows_json.push_back({{"n", r.n},
                         {"ball", r.ball_size},
                         {"boundary", r.boundary},
                         {"ratio", rational_json(r.ratio)},
                         {"ratio_float", r.ratio.value()}});
    if (i > 0 && !(rows[i].ratio < rows[i - 1].ratio)) monotone = false;
  }
  payload["rows"] = rows_json;

  std::vector<long long> sizes{1};
  for (const auto& r : rows) sizes.push_back(r.ball_size);
  if (sizes.size() >= 3) {
    GrowthEstimate g = growth_rate(sizes);
    payload["growth_estimate"] = g.estimate;
    payload["growth_nth_root"] = g.nth_root;
  }
  rep.payload = payload;
  add_check(rep, "profile_monotone_decreasing", c.assert_upgrade, monotone);
}

void run_forest(const RunConfig& c, Report& rep) {
  GroupContext ctx = make_group(c);
  ForestMode mode = parse_forest_mode(c.mode);
  CayleyBall ball = cayley_ball(ctx.spec, ctx.gens, c.radius);
  DegreeStats stats = estimate_beta1(ctx.spec, ctx.gens, c.radius, mode, c.samples, c.seed, c.jobs);

  long long rsf_checked = 0, rsf_passed = 0;
  if (mode == ForestMode::Free && ball.interior_count > 0) {
    // identity ball B(1) and the whole interior as witness sets
    std::vector<std::vector<int>> witness_sets;
    std::vector<int> b1;
    for (int v = 0; v < static_cast<int>(ball.vertices.size()); ++v)
      if (ball.sphere[v] <= 1 && ball.interior(v)) b1.push_back(v);
    if (!b1.empty()) witness_sets.push_back(b1);
    std::vector<int> interior_all;
    for (int v = 0; v < static_cast<int>(ball.vertices.size()); ++v)
      if (ball.interior(v)) interior_all.push_back(v);
    witness_sets.push_back(interior_all);

    long long replicas = std::min<long long>(c.samples, 100);
    for (long long i = 0; i < replicas; ++i) {
      ForestSample f = ball_forest(ball, mode, Rng::child_seed(c.seed, i));
      for (const auto& w : witness_sets) {
        ++rsf_checked;
        if (check_rsf_inequality(f, make_vertex_set(ball, w))) ++rsf_passed;
      }
    }
  }

  nlohmann::json payload;
  payload["graph"] = {{"group", c.group},
                      {"gens", gens_text(ctx.gens)},
                      {"radius", c.radius},
                      {"vertices", ball.vertices.size()},
                      {"edges", ball.edges.size()},
                      {"interior", ball.interior_count}};
  payload["mode"] = c.mode;
  payload["samples"] = stats.samples;
  payload["mean_degree"] = stats.mean_degree;
  payload["variance"] = stats.variance;
  payload["ci99"] = stats.ci99_half;
  payload["cost_estimate"] = stats.cost_estimate;
  payload["beta1_estimate"] = stats.beta1_estimate;
  payload["beta1_ci99"] = stats.beta1_ci99_half;
  payload["rsf_checks_passed"] = rsf_passed;
  payload["rsf_checks_run"] = rsf_checked;
  rep.payload = payload;

  if (rsf_checked > 0)
    add_check(rep, "rsf_per_sample_inequality", true, rsf_passed == rsf_checked,
              {{"run", rsf_checked}, {"passed", rsf_passed}});
}

std::pair<int, int> parse_sweep(const std::string& sweep, int fallback) {
  if (sweep.empty()) return {fallback, fallback};
  auto colon = sweep.find(':');
  if (colon == std::string::npos) {
    int r = std::stoi(sweep);
    return {r, r};
  }
  int lo = std::stoi(sweep.substr(0, colon));
  int hi = std::stoi(sweep.substr(colon + 1));
  if (lo < 1 || hi < lo) throw std::invalid_argument("betti: bad sweep range '" + sweep + "'");
  return {lo, hi};
}

void run_betti(const RunConfig& c, Report& rep) {
  GroupContext ctx = make_group(c);
  auto [lo, hi] = parse_sweep(c.sweep, c.radius);

  nlohmann::json radii = nlohmann::json::array();
  nlohmann::json traces = nlohmann::json::array();
  nlohmann::json dims = nlohmann::json::array();
  double last_trace = 0;

  std::optional<CayleyBall> dense_ball;
  for (int r = lo; r <= hi; ++r) {
    CayleyBall ball = cayley_ball(ctx.spec, ctx.gens, r);
    ChainComplex cc = make_chain_complex(ball);
    HarmonicOptions opts;
    opts.build_basis = false;
    HarmonicSpace h = harmonic_projector(cc, opts);
    last_trace = h.center_trace();
    radii.push_back(r);
    traces.push_back(last_trace);
    dims.push_back(h.dim());
    if (cc.n_edges <= 2000) dense_ball = std::move(ball);
  }

  // restriction checks at the largest radius that still allows a dense basis
  nlohmann::json restr = nlohmann::json::array();
  bool restr_ok = true;
  if (dense_ball && dense_ball->radius >= 2) {
    ChainComplex cc = make_chain_complex(*dense_ball);
    HarmonicSpace h = harmonic_projector(cc);
    Rng rng(c.seed);
    int eligible_max = 0;
    std::vector<int> eligible;
    for (int v = 0; v < static_cast<int>(dense_ball->vertices.size()); ++v)
      if (dense_ball->sphere[v] <= dense_ball->radius - 2) eligible.push_back(v);
    eligible_max = static_cast<int>(eligible.size());
    for (int t = 0; t < 3 && eligible_max > 0; ++t) {
      std::set<int> a;
      std::uint64_t want = 1 + rng.below(std::min(eligible_max, 8));
      while (a.size() < want) a.insert(eligible[rng.below(eligible.size())]);
      VertexSet vs = make_vertex_set(*dense_ball, std::vector<int>(a.begin(), a.end()));
      RestrRankResult rr = restriction_rank_check(h, vs);
      restr_ok = restr_ok && rr.equal;
      restr.push_back({{"A", vs.members},
                       {"rank_AS", rr.rank_AS},
                       {"rank_bd", rr.rank_boundary},
                       {"gap", rr.gap_AS}});
    }
  }

  nlohmann::json payload;
  payload["group"] = c.group;
  payload["gens"] = gens_text(ctx.gens);
  payload["radii"] = radii;
  payload["center_trace"] = traces;
  payload["dims"] = dims;
  payload["restr_checks"] = restr;
  rep.payload = payload;

  add_check(rep, "restr_rank_equal", true, restr_ok);
  if (c.target)
    add_check(rep, "trace_near_target", c.assert_upgrade,
              std::abs(last_trace - *c.target) <= c.target_tol,
              {{"trace", last_trace}, {"target", *c.target}, {"tol", c.target_tol}});
}

void run_relsim_hzero(const RunConfig& c, Report& rep) {
  Rational eps = parse_rational(c.eps);
  HzeroGraphing hz = build_hzero_graphing(static_cast<int>(c.N), c.n, eps);
  WitnessFamily w = cycle_power_witnesses(static_cast<int>(c.N), c.n);
  Rational ratio = witness_ratio(hz.graphing, w);
  Rational bound(4, c.n + 1);
  Rational cost = hz.graphing.cost();
  Rational expected_cost = Rational(1) + Rational(hz.psi_domain_size, static_cast<long long>(c.N));
  MainIneqReport main = check_main_inequality(hz.graphing, w);
  bool segments = segment_intersection_ok(hz, c.n);

  nlohmann::json payload;
  payload["N"] = c.N;
  payload["n"] = c.n;
  payload["eps"] = c.eps;
  payload["psi_domain"] = hz.psi_domain_size;
  payload["cost"] = rational_json(cost);
  payload["cost_treeing"] = rational_json(main.cost_treeing);
  payload["witness_ratio"] = rational_json(ratio);
  payload["bound_4_over_n1"] = rational_json(bound);
  rep.payload = payload;

  add_check(rep, "cost_exact", true, cost == expected_cost,
            {{"cost", rational_json(cost)}, {"expected", rational_json(expected_cost)}});
  add_check(rep, "ratio_le_bound", true, ratio <= bound,
            {{"ratio", rational_json(ratio)}, {"bound", rational_json(bound)}});
  add_check(rep, "segment_intersection", true, segments);
  add_check(rep, "main_inequality", true, main.inequality_ok);
  add_check(rep, "treeing_degree_identity", true, main.degree_identity_ok);
}

void run_relsim_main_check(const RunConfig& c, Report& rep) {
  int N = static_cast<int>(std::max<long long>(c.N, 8));
  nlohmann::json trials = nlohmann::json::array();
  bool all_main = true, all_degree = true;

  if (c.scenario == "cycle") {
    Graphing g;
    g.n = N;
    g.maps.push_back(PartialInjection::cycle(N));
    WitnessFamily w = cycle_power_witnesses(N, std::min(c.n, N - 1));
    MainIneqReport r = check_main_inequality(g, w);
    all_main = r.inequality_ok;
    all_degree = r.degree_identity_ok;
    trials.push_back({{"cost_treeing", rational_json(r.cost_treeing)},
                      {"ratio", rational_json(r.ratio)},
                      {"classes", r.classes}});
  } else if (c.scenario == "random") {
    Rng rng(c.seed);
    for (int t = 0; t < c.trials; ++t) {
      Rng trial_rng = rng.child(static_cast<std::uint64_t>(t));
      Graphing g = random_graphing(N, 2, trial_rng);
      int count = 1 + static_cast<int>(trial_rng.below(std::min(N - 1, 8)));
      std::set<int> powers;
      while (static_cast<int>(powers.size()) < count)
        powers.insert(static_cast<int>(trial_rng.below(static_cast<std::uint64_t>(N))));
      WitnessFamily w =
          cycle_power_witnesses(N, std::vector<int>(powers.begin(), powers.end()));
      MainIneqReport r = check_main_inequality(g, w);
      all_main = all_main && r.inequality_ok;
      all_degree = all_degree && r.degree_identity_ok;
      trials.push_back({{"cost_treeing", rational_json(r.cost_treeing)},
                        {"ratio", rational_json(r.ratio)},
                        {"classes", r.classes}});
    }
  } else {
    throw std::invalid_argument("relsim main-check: unknown scenario '" + c.scenario + "'");
  }

  rep.payload = {{"N", N}, {"scenario", c.scenario}, {"trials", trials}};
  add_check(rep, "main_inequality", true, all_main);
  add_check(rep, "treeing_degree_identity", true, all_degree);
}

void run_relsim_compress(const RunConfig& c, Report& rep) {
  int N = static_cast<int>(c.N);
  long long y_size = c.y_size > 0 ? c.y_size : c.N / 2;
  int k = c.k > 0 ? c.k : 5;
  if (y_size < 2 || y_size > c.N)
    throw std::invalid_argument("relsim compress: need 2 <= y <= N");

  std::vector<int> y(y_size);
  for (long long i = 0; i < y_size; ++i) y[i] = static_cast<int>(i);

  Graphing k_on_y;
  k_on_y.n = N;
  PartialInjection sigma(N);
  for (long long i = 0; i < y_size; ++i)
    sigma.add(y[i], y[(i + 1) % y_size]);
  k_on_y.maps.push_back(sigma);

  std::vector<std::vector<int>> w_s;
  for (int j = 1; j <= k; ++j) {
    std::vector<int> perm(y_size);
    for (long long i = 0; i < y_size; ++i) perm[i] = static_cast<int>((i + j) % y_size);
    w_s.push_back(std::move(perm));
  }

  Rational delta = c.delta.empty() ? Rational(c.N - y_size, static_cast<long long>(c.n) * c.N)
                                   : parse_rational(c.delta);
  CompressReport cr = compress(k_on_y, y, w_s, c.n, delta);

  nlohmann::json payload;
  payload["N"] = cr.N;
  payload["n"] = cr.n;
  payload["k"] = cr.k;
  payload["mu_y"] = rational_json(cr.mu_y);
  payload["delta"] = rational_json(cr.delta);
  payload["nu_boundary_lifted"] = rational_json(cr.nu_boundary_lifted);
  payload["nu1_boundary_base"] = rational_json(cr.nu1_boundary_base);
  payload["bound"] = rational_json(cr.bound);
  payload["degenerate"] = cr.degenerate;
  rep.payload = payload;

  add_check(rep, "witnesses_disjoint", true, cr.witnesses_disjoint);
  add_check(rep, "witnesses_contained", true, cr.witnesses_contained);
  add_check(rep, "per_point_bounds", true, cr.per_point_ok);
  add_check(rep, "transfer_bound", true, cr.bound_ok);
}

std::string csv_profile(const Report& rep) {
  std::ostringstream out;
  out << "n,ball,boundary,ratio_num,ratio_den,ratio_float\n";
  for (const auto& row : rep.payload.at("rows")) {
    out << row.at("n").get<long long>() << "," << row.at("ball").get<long long>() << ","
        << row.at("boundary").get<long long>() << ","
        << row.at("ratio").at("num").get<long long>() << ","
        << row.at("ratio").at("den").get<long long>() << ","
        << format_double(row.at("ratio_float").get<double>()) << "\n";
  }
  return out.str();
}

}  // namespace

Report run(const RunConfig& config) {
  Report rep;
  rep.config = config_echo(config);
  if (config.with_timestamp) {
    char buf[64];
    std::time_t now = std::time(nullptr);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    rep.timestamp = buf;
  }

  if (config.command == "ball")
    run_ball(config, rep);
  else if (config.command == "cheeger")
    run_cheeger(config, rep);
  else if (config.command == "profile")
    run_profile(config, rep);
  else if (config.command == "forest")
    run_forest(config, rep);
  else if (config.command == "betti")
    run_betti(config, rep);
  else if (config.command == "relsim") {
    if (config.subcommand == "hzero")
      run_relsim_hzero(config, rep);
    else if (config.subcommand == "main-check")
      run_relsim_main_check(config, rep);
    else if (config.subcommand == "compress")
      run_relsim_compress(config, rep);
    else
      throw std::invalid_argument("relsim: unknown subcommand '" + config.subcommand +
                                  "' (expected hzero, main-check or compress)");
  } else {
    throw std::invalid_argument("unknown command '" + config.command + "'");
  }
  return rep;
}

std::string emit(const Report& report, const RunConfig& config) {
  if (config.format == "csv") {
    if (config.command != "profile")
      throw std::invalid_argument("csv output is only available for the profile command");
    return csv_profile(report);
  }
  if (config.format != "json")
    throw std::invalid_argument("unknown format '" + config.format + "'");
  return dump_json(report.to_json());
}

}  // namespace isolab
