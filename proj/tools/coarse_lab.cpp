#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "coarse/corona.hpp"
#include "coarse/errors.hpp"
#include "coarse/fixtures.hpp"
#include "coarse/hyperbolic.hpp"
#include "coarse/io.hpp"
#include "coarse/report.hpp"
#include "coarse/sperner.hpp"
#include "coarse/support.hpp"
#include "coarse/transforms.hpp"
#include "coarse/witnesses.hpp"

using namespace coarse;

namespace {

enum Exit { kOk = 0, kInvalid = 1, kFailed = 2, kResource = 3, kUsage = 64, kInternal = 70 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  // global
  std::string format = "json";
  std::string out;
  std::optional<std::uint64_t> seed;
  bool timing = false;

  // shared inputs
  std::vector<std::string> space, cover, entourage, op;
  std::string vector, decomposition, model, schedule, complex, grid;
  std::string pipeline;

  // numeric parameters
  std::optional<unsigned> n, m;
  std::optional<double> a, r, l;
  double extent = 20.0, step = 0.5, region = 10.0, length = 0.0, c = 1.0, tol = kSupportTolerance;
  double kappa = -1.0, lambda = 0.2, d = 1.0, radius = 30.0, window = 18.0;
  unsigned root = 0, depth = 200, resolution = 12, stability = 0, points = 64, trials = 100, blocks = 5;
  std::size_t nodes = 0, samples = 3000, clustered = 0, pairs = 10000;
  std::string metric = "max";
};

struct Context {
  Options opt;
  Report report;

  Json load(const std::string& path) {
    const std::string text = read_text_file(path);
    report.add_input(path, text);
    return parse_json(text, path);
  }
  std::uint64_t seed(const char* what) const {
    if (!opt.seed) throw UsageError(std::string(what) + " draws random data; pass --seed");
    return *opt.seed;
  }
  // Artifacts go to --out when given, otherwise into the report.
  void emit(const Json& artifact) {
    if (!opt.out.empty())
      write_text_file(opt.out, artifact.dump(2) + "\n");
    else
      report.result["artifact"] = artifact;
  }
};

Guarantee covers_guarantee(const Cover& c) {
  auto p = uncovered_point(c);
  return check_true("covers", !p, p ? Json{{"point", *p}} : Json(nullptr));
}

Json cover_artifact(const Cover& c, const Certificate& cert, const Space* embed = nullptr) {
  Json j = cover_to_json(c);
  if (embed) j["space"] = space_to_json(*embed);
  j["certificate"] = to_json(cert);
  return j;
}

Json stats_json(const Cover& c, const Entourage* e) {
  Json j;
  j["multiplicity"] = multiplicity(c);
  j["mesh"] = number(mesh(c));
  j["lebesgue"] = number(lebesgue_number(c));
  if (e) j["appetite"] = has_appetite(c, *e);
  if (c.families) j["families"] = c.family_count();
  j["sets"] = c.sets.size();
  return j;
}

// Space from --space, or from the "space" member of the cover file.
SpacePtr resolve_space(Context& ctx, const Json* cover_json, std::size_t which = 0) {
  if (ctx.opt.space.size() > which) return space_from_json(ctx.load(ctx.opt.space[which]));
  if (cover_json && cover_json->contains("space")) return space_from_json(cover_json->at("space"));
  throw UsageError("--space is required (the cover file carries no space)");
}

std::string need(const std::vector<std::string>& v, std::size_t i, const char* flag) {
  if (v.size() <= i) throw UsageError(std::string("missing ") + flag);
  return v[i];
}

std::string need(const std::string& v, const char* flag) {
  if (v.empty()) throw UsageError(std::string("missing ") + flag);
  return v;
}

// ---------------------------------------------------------------------------
// space, cover

void cmd_space_stats(Context& ctx) {
  SpacePtr s = space_from_json(ctx.load(need(ctx.opt.space, 0, "--space")));
  IndexSet all(s->size());
  for (Index i = 0; i < s->size(); ++i) all[i] = i;
  ctx.report.result = Json{{"kind", s->kind()}, {"size", s->size()}, {"diameter", number(s->diameter(all))}};
  if (s->size() <= 400) ctx.report.guarantees.push_back(check_le("pseudometric_defect", s->pseudometric_defect(), 1e-9));
}

void cmd_cover_stats(Context& ctx) {
  const Json cj = ctx.load(need(ctx.opt.cover, 0, "--cover"));
  SpacePtr s = resolve_space(ctx, &cj);
  Cover c = cover_from_json(cj, s);
  std::optional<Entourage> e;
  if (!ctx.opt.entourage.empty()) e = entourage_from_json(ctx.load(ctx.opt.entourage[0]), s);
  ctx.report.result = stats_json(c, e ? &*e : nullptr);
  ctx.report.guarantees.push_back(covers_guarantee(c));
  if (e) {
    auto v = appetite_violation(c, *e);
    ctx.report.guarantees.push_back(check_true("appetite", !v, v ? Json{{"point", *v}} : Json(nullptr)));
  }
}

// ---------------------------------------------------------------------------
// transform

void cmd_transform(Context& ctx, const std::string& which) {
  if (which == "product") {
    const Json uj = ctx.load(need(ctx.opt.cover, 0, "--cover (first factor)"));
    const Json vj = ctx.load(need(ctx.opt.cover, 1, "--cover (second factor)"));
    SpacePtr x = resolve_space(ctx, &uj, 0), y = resolve_space(ctx, &vj, 1);
    Cover u = cover_from_json(uj, x), v = cover_from_json(vj, y);
    Entourage ex = entourage_from_json(ctx.load(need(ctx.opt.entourage, 0, "--entourage (first factor)")), x);
    Entourage ey = entourage_from_json(ctx.load(need(ctx.opt.entourage, 1, "--entourage (second factor)")), y);
    if (ctx.opt.metric != "max" && ctx.opt.metric != "sum") throw UsageError("--metric must be max or sum");
    auto ps = std::make_shared<ProductSpace>(x, y, ctx.opt.metric == "max" ? ProductSpace::Metric::max
                                                                           : ProductSpace::Metric::sum);
    const unsigned n = ctx.opt.n.value_or(unsigned(multiplicity(u)) - 1);
    const unsigned m = ctx.opt.m.value_or(unsigned(multiplicity(v)) - 1);
    TransformResult r = product_refine(u, v, ps, ex, ey, n, m);
    ctx.report.absorb("product", r.certificate);
    ctx.report.result = stats_json(r.cover, nullptr);
    ctx.report.result["naive_multiplicity"] = (n + 1) * (m + 1);
    ctx.emit(cover_artifact(r.cover, r.certificate));
    return;
  }

  const Json cj = ctx.load(need(ctx.opt.cover, 0, "--cover"));
  SpacePtr s = resolve_space(ctx, &cj);
  Cover c = cover_from_json(cj, s);
  Entourage l = entourage_from_json(ctx.load(need(ctx.opt.entourage, 0, "--entourage")), s);
  TransformResult r;
  if (which == "colorize") {
    r = colorize(c, l, ctx.opt.n.value_or(unsigned(multiplicity(c)) - 1));
  } else if (which == "expand") {
    r = expand(c, l);
  } else {
    Cover b = cover_from_json(ctx.load(need(ctx.opt.cover, 1, "--cover (second piece)")), s);
    r = merge_union(c, b, l);
  }
  ctx.report.absorb(which, r.certificate);
  ctx.report.result = stats_json(r.cover, nullptr);
  const bool embed = cj.contains("space") && ctx.opt.space.empty();
  ctx.emit(cover_artifact(r.cover, r.certificate, embed ? s.get() : nullptr));
}

// ---------------------------------------------------------------------------
// witness

std::shared_ptr<const GridSpace> cube_grid(unsigned n, double extent, double step) {
  if (n == 0 || n > 3) throw InvalidInput("cube witness supports n in 1..3");
  return std::make_shared<GridSpace>(std::vector<double>(n, 0.0), std::vector<double>(n, extent), step);
}

void cmd_witness_cube(Context& ctx) {
  std::shared_ptr<const GridSpace> grid;
  if (!ctx.opt.grid.empty()) {
    grid = std::dynamic_pointer_cast<const GridSpace>(space_from_json(ctx.load(ctx.opt.grid)));
    if (!grid) throw InvalidInput("--grid must describe a grid space");
  } else {
    grid = cube_grid(ctx.opt.n.value_or(2), ctx.opt.extent, ctx.opt.step);
  }
  if (!ctx.opt.a) throw UsageError("missing --a");
  TransformResult r = cube_cover(grid, *ctx.opt.a);
  ctx.report.absorb("cube", r.certificate);
  ctx.report.result = stats_json(r.cover, nullptr);
  ctx.emit(cover_artifact(r.cover, r.certificate, grid.get()));
}

void cmd_witness_tree(Context& ctx) {
  SpacePtr tree;
  if (!ctx.opt.space.empty()) {
    tree = space_from_json(ctx.load(ctx.opt.space[0]));
  } else {
    if (ctx.opt.nodes == 0) throw UsageError("pass --space or --nodes");
    Rng rng(ctx.seed("random tree"));
    tree = random_tree(rng, ctx.opt.nodes);
  }
  if (!ctx.opt.l) throw UsageError("missing --l");
  TreeCover t = tree_cover(tree, *ctx.opt.l, ctx.opt.root);
  ctx.report.absorb("tree", t.result.certificate);
  ctx.report.result = stats_json(t.result.cover, nullptr);
  ctx.report.result["l_prime"] = t.l_prime;
  ctx.emit(cover_artifact(t.result.cover, t.result.certificate, tree.get()));
}

void cmd_witness_ray(Context& ctx) {
  const double length = ctx.opt.length > 0 ? ctx.opt.length : 2.0 * ctx.opt.region;
  auto line = std::make_shared<GridSpace>(std::vector<double>{0.0}, std::vector<double>{length}, ctx.opt.step);
  Entourage e = !ctx.opt.entourage.empty() ? entourage_from_json(ctx.load(ctx.opt.entourage[0]), line)
                                           : Entourage::radius(line, ctx.opt.r.value_or(1.0), true);
  RayCellCover rc = ray_cell_cover(ctx.opt.n.value_or(1), e, ctx.opt.region);
  ctx.report.absorb("ray", rc.result.certificate);
  ctx.report.result = stats_json(rc.result.cover, nullptr);
  ctx.report.result["shell_bounds"] = rc.kappa;
  ctx.emit(cover_artifact(rc.result.cover, rc.result.certificate, rc.space.get()));
}

void cmd_witness_star(Context& ctx) {
  SimplicialComplex k = complex_from_json(ctx.load(need(ctx.opt.complex, "--complex")));
  const unsigned declared = ctx.opt.stability ? ctx.opt.stability : std::max(1u, k.stability());
  StarCover sc = star_cover(k, declared, ctx.opt.resolution);
  ctx.report.absorb("star", sc.result.certificate);
  ctx.report.result = stats_json(sc.result.cover, nullptr);
  ctx.report.result["stability"] = sc.stability;
  ctx.report.result["lambda"] = sc.lambda;
  ctx.emit(cover_artifact(sc.result.cover, sc.result.certificate, sc.space.get()));
}

struct HyperbolicRun {
  HyperbolicParams params;
  LiftCover lift;
};

HyperbolicRun run_hyperbolic(Context& ctx, const std::string& stage) {
  const Options& o = ctx.opt;
  const double l = o.l.value_or(5.0);
  const unsigned n = o.n.value_or(2);
  std::shared_ptr<const HyperbolicSpace> sample;
  if (!o.space.empty()) {
    sample = std::dynamic_pointer_cast<const HyperbolicSpace>(space_from_json(ctx.load(o.space[0])));
    if (!sample) throw InvalidInput("--space must be a hyperbolic_polar sample");
  } else {
    Rng rng(ctx.seed("hyperbolic disk sample"));
    sample = hyperbolic_disk_sample(rng, o.kappa, o.radius, o.samples, o.clustered);
  }
  HyperbolicRun run{hyperbolic_params(o.kappa, o.lambda, o.d, l, n), {}};
  SphereAtlas atlas(o.kappa, run.params.rho, o.lambda, o.d, n);
  run.lift = sphere_cover_lift(atlas, sample, run.params.N, l);
  ctx.report.absorb(stage, run.lift.result.certificate);
  ctx.report.result["rho"] = run.params.rho;
  ctx.report.result["N"] = run.params.N;
  ctx.report.result["sample_size"] = sample->size();
  ctx.report.result["stats"] = stats_json(run.lift.result.cover, nullptr);
  return run;
}

void cmd_witness_hyperbolic(Context& ctx) {
  HyperbolicRun run = run_hyperbolic(ctx, "lift");
  Json art = cover_artifact(run.lift.result.cover, run.lift.result.certificate);
  art["labels"] = run.lift.labels;
  ctx.emit(art);
}

void cmd_witness_sperner(Context& ctx) {
  const Json g = ctx.load(need(ctx.opt.grid, "--grid"));
  unsigned n = 0, q = 0;
  std::vector<unsigned> labels;
  try {
    n = g.at("n").get<unsigned>();
    q = g.at("q").get<unsigned>();
    if (g.contains("labels")) labels = g.at("labels").get<std::vector<unsigned>>();
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("malformed sperner grid: ") + e.what());
  }
  SimplexGrid grid(n, q);
  if (labels.empty()) {
    // Largest vertex of the carrier face.
    for (std::size_t i = 0; i < grid.vertex_count(); ++i) {
      const auto b = grid.barycentric(i);
      unsigned lab = 0;
      for (unsigned k = 0; k <= n; ++k)
        if (b[k] > 0) lab = k;
      labels.push_back(lab);
    }
  }
  grid.set_labels(std::move(labels));
  SpernerResult res = sperner_find(grid);
  Json cell = Json::array();
  for (std::size_t v : res.cell) cell.push_back(grid.vertex(v));
  ctx.report.result = Json{{"cell", cell}, {"fully_labelled", res.fully_labelled}};
  ctx.report.guarantees.push_back(check_true("fully_labelled_cell_found", !res.cell.empty()));
  ctx.report.guarantees.push_back(
      check_eq("fully_labelled_count_parity", (long long)(res.fully_labelled % 2), 1));
}

struct LowerBoundRun {
  PnSample sample;
  Cover cover;
  LowerBoundCertificate cert;
};

LowerBoundRun run_lowerbound(Context& ctx, const std::string& stage, const Cover* given) {
  const Options& o = ctx.opt;
  const unsigned n = o.n.value_or(2);
  const unsigned m = o.m.value_or(4);
  LowerBoundRun run{pn_sample(n, o.window, m), {}, {}};
  if (given) {
    run.cover = *given;
    run.cover.space = run.sample.space;
  } else {
    const double a = o.a.value_or(2.0 * (n + 1) * (1.0 + 2.0 / m));
    std::vector<double> shift(n, 0.0);
    if (o.seed) {
      Rng rng(*o.seed);
      for (auto& s : shift) s = rng.uniform(0.0, a);
    }
    run.cover = shifted_cube_cover(run.sample.space, a, shift);
  }
  run.cert = simplex_lower_bound_check(run.cover, run.sample);
  ctx.report.absorb(stage, run.cert.checks);
  ctx.report.guarantees.push_back(
      check_true(stage + "/certificate_reverified", verify_lower_bound(run.cover, run.cert, n)));
  ctx.report.result["certificate"] = Json{{"point", run.cert.point}, {"sets", run.cert.sets}};
  ctx.report.result["point_coordinates"] = run.sample.space->coord(run.cert.point);
  ctx.report.result["r"] = run.cert.r;
  ctx.report.result["resolution"] = run.cert.resolution;
  ctx.report.result["fully_labelled"] = run.cert.fully_labelled;
  return run;
}

void cmd_witness_lowerbound(Context& ctx) {
  std::optional<Cover> given;
  if (!ctx.opt.cover.empty()) {
    const Json cj = ctx.load(ctx.opt.cover[0]);
    PnSample sample = pn_sample(ctx.opt.n.value_or(2), ctx.opt.window, ctx.opt.m.value_or(4));
    if (!ctx.opt.space.empty()) {
      SpacePtr s = space_from_json(ctx.load(ctx.opt.space[0]));
      auto e = std::dynamic_pointer_cast<const EuclideanSpace>(s);
      bool same = e && e->size() == sample.space->size();
      for (Index i = 0; same && i < e->size(); ++i)
        for (std::size_t k = 0; same && k < e->dim(); ++k)
          same = std::abs(e->coord(i)[k] - sample.space->coord(i)[k]) <= 1e-12;
      if (!same) throw InvalidInput("--space is not the P_n sample for the given --n, --window and --m");
    }
    given = cover_from_json(cj, sample.space);
  }
  LowerBoundRun run = run_lowerbound(ctx, "lowerbound", given ? &*given : nullptr);
  if (!given) ctx.emit(cover_artifact(run.cover, {}, run.sample.space.get()));
}

// ---------------------------------------------------------------------------
// support

void absorb_calculus(Context& ctx, const std::string& stage, const CalculusReport& rep) {
  ctx.report.absorb(stage, rep.inclusions);
  Json sens = Json::array();
  for (auto [a, b] : rep.sensitive) sens.push_back({a, b});
  ctx.report.result["tolerance_sensitive_pairs"] = sens;
}

void cmd_support_verify(Context& ctx) {
  Decomposition d = decomposition_from_json(ctx.load(need(ctx.opt.decomposition, "--decomposition")));
  Matrix s = operator_from_json(ctx.load(need(ctx.opt.op, 0, "--op")), &d);
  Matrix t = ctx.opt.op.size() > 1 ? operator_from_json(ctx.load(ctx.opt.op[1]), &d) : s;
  Vector u = !ctx.opt.vector.empty() ? vector_from_json(ctx.load(ctx.opt.vector))
                                     : Vector::Ones(Eigen::Index(d.total_dim()));
  if (u.size() != Eigen::Index(d.total_dim())) throw InvalidInput("vector length does not match the decomposition");
  CalculusReport rep = check_calculus(s, t, u, d, ctx.opt.tol);
  absorb_calculus(ctx, "calculus", rep);
  if (d.block_count() <= 10) ctx.report.absorb("pvm", pvm_axioms(d));
  Json supp = Json::array();
  for (auto [a, b] : support_operator(s, d, ctx.opt.tol).pairs) supp.push_back({a, b});
  ctx.report.result["support"] = supp;
  if (!ctx.opt.entourage.empty()) {
    Entourage e = entourage_from_json(ctx.load(ctx.opt.entourage[0]), d.quotient());
    ctx.report.guarantees.push_back(check_true("controlled", is_controlled(s, d, e, ctx.opt.tol)));
  }
}

// ---------------------------------------------------------------------------
// corona

void cmd_corona_equiv(Context& ctx) {
  CompactificationModel m = model_from_json(ctx.load(need(ctx.opt.model, "--model")));
  EquivalenceReport rep = check_equivalence(m);
  ctx.report.absorb("equivalence", rep.certificate);
  ctx.report.result = Json{{"depth", m.depth()}, {"f_table", rep.f_table}, {"g_table", rep.g_table}};
}

void cmd_corona_check(Context& ctx) {
  CompactificationModel m = model_from_json(ctx.load(need(ctx.opt.model, "--model")));
  Entourage e = entourage_from_json(ctx.load(need(ctx.opt.entourage, 0, "--entourage")), m.ambient());
  CcVerdict v = check_cc_entourage(m, e, ctx.opt.c);
  Json rho = Json::array();
  for (double x : v.rho) rho.push_back(number(x));
  ctx.report.result = Json{{"controlled", v.controlled}, {"rho", rho}, {"c", v.c}, {"tail_start", v.tail_start}};
  if (v.failing_level) ctx.report.result["failing_level"] = *v.failing_level;
  ctx.report.guarantees.push_back(check_true(
      "controlled", v.controlled, v.failing_level ? Json{{"level", *v.failing_level}} : Json(nullptr)));
}

void run_dimcover(Context& ctx, const std::string& stage, const ScheduleSpec& spec, unsigned depth) {
  DimCover dc = corona_dim_cover(spec.schedule, spec.delta, spec.e_n, depth);
  ctx.report.absorb(stage, dc.result.certificate);
  ctx.report.result[stage] = stats_json(dc.result.cover, nullptr);
  ctx.report.result[stage]["l"] = dc.l;
  ctx.report.result[stage]["k"] = dc.k;
  if (stage == "dimcover") ctx.emit(cover_artifact(dc.result.cover, dc.result.certificate));
}

void cmd_corona_dimcover(Context& ctx) {
  ScheduleSpec spec = schedule_from_json(ctx.load(need(ctx.opt.schedule, "--schedule")), ctx.opt.depth);
  run_dimcover(ctx, "dimcover", spec, ctx.opt.depth);
}

// ---------------------------------------------------------------------------
// pipelines

void pipeline_asdim_upper(Context& ctx) {
  const Options& o = ctx.opt;
  std::shared_ptr<const GridSpace> grid;
  const std::string which = o.space.empty() ? "grid1d" : o.space[0];
  if (which == "grid1d")
    grid = cube_grid(1, 100.0, 1.0);
  else if (which == "grid2d")
    grid = cube_grid(2, 60.0, 1.0);
  else {
    grid = std::dynamic_pointer_cast<const GridSpace>(space_from_json(ctx.load(which)));
    if (!grid) throw InvalidInput("asdim-upper needs a grid space");
  }
  const double r = o.r.value_or(1.0);
  const unsigned n = unsigned(grid->dim());
  const double h = grid->step();
  // Lebesgue of the cube cover exceeds the (n+1)-fold colouring reach 2r(n+1).
  const double a = o.a.value_or(2.0 * (n + 1) * (2.0 * r * (n + 1) + 2.0 * h));
  ctx.report.result["a"] = a;
  ctx.report.result["r"] = r;

  TransformResult cube = cube_cover(grid, a);
  ctx.report.absorb("cube", cube.certificate);
  TransformResult col = colorize(cube.cover, Entourage::radius(grid, 2.0 * r, true), n);
  ctx.report.absorb("colorize", col.certificate);
  const Entourage l = Entourage::radius(grid, r, true);
  TransformResult ex = expand(col.cover, l);
  ctx.report.absorb("expand", ex.certificate);

  ctx.report.result["stats"] = stats_json(ex.cover, &l);
  Guarantee cov = covers_guarantee(ex.cover);
  cov.name = "stats/covers";
  ctx.report.guarantees.push_back(cov);
  auto v = appetite_violation(ex.cover, l);
  ctx.report.guarantees.push_back(check_true("stats/appetite", !v, v ? Json{{"point", *v}} : Json(nullptr)));
  if (!o.out.empty()) write_text_file(o.out, cover_artifact(ex.cover, ex.certificate, grid.get()).dump(2) + "\n");
}

void pipeline_hyperbolic_full(Context& ctx) {
  HyperbolicRun run = run_hyperbolic(ctx, "lift");
  const Options& o = ctx.opt;
  Rng rng(ctx.seed("hyperbolic-full") ^ 0x5bd1e995ULL);
  Guarantee con = contraction_check(o.kappa, run.params.rho, o.radius, o.pairs, rng);
  con.name = "theta/" + con.name;
  ctx.report.guarantees.push_back(con);
  const double delta = o.lambda / o.l.value_or(5.0);
  const unsigned max_k = std::max(1u, unsigned(o.radius / run.params.rho));
  Guarantee lip = lipschitz_check(o.kappa, run.params.rho, delta, max_k, o.pairs, rng);
  lip.name = "theta/" + lip.name;
  ctx.report.guarantees.push_back(lip);
}

void pipeline_corona_full(Context& ctx) {
  const Options& o = ctx.opt;
  EquivalenceReport ri = check_equivalence(interval_model(64));
  ctx.report.absorb("equivalence_interval", ri.certificate);
  EquivalenceReport rd = check_equivalence(disk_model(16, 24));
  ctx.report.absorb("equivalence_disk", rd.certificate);
  Json sj = {{"corona", "circle"},
             {"points", o.points},
             {"delta", {{"kind", "harmonic"}, {"c", 2.0}}},
             {"e_n", {{"kind", "band"}, {"width", 1.0}}}};
  ScheduleSpec spec = schedule_from_json(sj, o.depth);
  run_dimcover(ctx, "dimcover", spec, o.depth);
}

void pipeline_support_suite(Context& ctx) {
  const Options& o = ctx.opt;
  Rng rng(ctx.seed("support-suite"));
  std::map<std::string, std::pair<long long, Json>> failures;
  std::vector<std::string> order;
  for (unsigned t = 0; t < o.trials; ++t) {
    Decomposition d = random_decomposition(rng, 2 + rng.below(o.blocks + 3), 3, true);
    Matrix s = random_operator(rng, d, 1), tm = random_operator(rng, d, 2);
    Vector u = random_vector(rng, d), v = random_vector(rng, d);
    CalculusReport rep = check_calculus(s, tm, u, d, o.tol, &v);
    for (const auto& g : rep.inclusions) {
      auto [it, fresh] = failures.try_emplace(g.name, 0, nullptr);
      if (fresh) order.push_back(g.name);
      if (!g.pass) {
        if (it->second.first == 0) it->second.second = Json{{"trial", t}, {"witness", g.witness}};
        ++it->second.first;
      }
    }
  }
  for (const auto& name : order) {
    Guarantee g = check_eq("calculus/" + name + "/failed_trials", failures[name].first, 0);
    g.witness = failures[name].second;
    ctx.report.guarantees.push_back(g);
  }
  Decomposition small = random_decomposition(rng, std::min(o.blocks, 5u), 3, true);
  ctx.report.absorb("pvm", pvm_axioms(small));
  long long adj_failed = 0;
  for (unsigned t = 0; t < 10; ++t) {
    AdjointFixture f = random_adjoint_fixture(rng, 2 + rng.below(4));
    AdjointResult ar = induce_adjoint(f.source, f.target, f.f, f.phi, f.t, o.tol);
    if (!all_pass(ar.certificate)) ++adj_failed;
  }
  ctx.report.guarantees.push_back(check_eq("adjoint/failed_trials", adj_failed, 0));
  ctx.report.result["trials"] = o.trials;
}

void cmd_pipeline(Context& ctx) {
  const std::string& id = ctx.opt.pipeline;
  ctx.report.result["pipeline"] = id;
  if (id == "asdim-upper")
    pipeline_asdim_upper(ctx);
  else if (id == "asdim-lower")
    run_lowerbound(ctx, "lowerbound", nullptr);
  else if (id == "hyperbolic-full")
    pipeline_hyperbolic_full(ctx);
  else if (id == "corona-full")
    pipeline_corona_full(ctx);
  else if (id == "support-suite")
    pipeline_support_suite(ctx);
  else
    throw UsageError("unknown pipeline '" + id + "'");
}

// ---------------------------------------------------------------------------

int run(int argc, char** argv) {
  Context ctx;
  Options& o = ctx.opt;
  CLI::App app{"coarse_lab: finite-sample constructions from coarse geometry, with verified guarantees"};
  app.fallthrough();
  app.require_subcommand(1);
  app.add_option("--format", o.format, "json (default) or summary")->check(CLI::IsMember({"json", "summary"}));
  app.add_option("-o,--out", o.out, "artifact output file");
  app.add_option("--seed", o.seed, "seed for the splitmix64 generator");
  app.add_flag("--timing", o.timing, "include wall time in the report");

  auto inputs = [&](CLI::App* c) {
    c->add_option("--space", o.space, "space JSON (repeat for products)");
    c->add_option("--cover", o.cover, "cover JSON (repeat for union/product)");
    c->add_option("--entourage", o.entourage, "entourage JSON (repeat for products)");
  };

  CLI::App* space = app.add_subcommand("space", "space utilities")->require_subcommand(1);
  CLI::App* space_stats = space->add_subcommand("stats", "size, diameter and pseudometric defect");
  space_stats->add_option("--space", o.space)->required();

  CLI::App* cover = app.add_subcommand("cover", "cover statistics")->require_subcommand(1);
  CLI::App* cover_stats = cover->add_subcommand("stats", "multiplicity, mesh, Lebesgue number, appetite");
  inputs(cover_stats);

  CLI::App* transform = app.add_subcommand("transform", "cover transformations")->require_subcommand(1);
  std::vector<std::pair<std::string, CLI::App*>> transforms;
  for (const char* name : {"colorize", "expand", "union", "product"}) {
    CLI::App* t = transform->add_subcommand(name);
    inputs(t);
    t->add_option("--n", o.n);
    t->add_option("--m", o.m);
    t->add_option("--metric", o.metric, "product metric: max (default) or sum");
    transforms.emplace_back(name, t);
  }

  CLI::App* witness = app.add_subcommand("witness", "explicit cover witnesses")->require_subcommand(1);
  CLI::App* w_cube = witness->add_subcommand("cube", "cube cover of a grid sample of R^n");
  w_cube->add_option("--n", o.n);
  w_cube->add_option("--a", o.a);
  w_cube->add_option("--extent", o.extent);
  w_cube->add_option("--step", o.step);
  w_cube->add_option("--grid", o.grid, "grid space JSON instead of --n/--extent/--step");
  CLI::App* w_tree = witness->add_subcommand("tree", "two-family cover of a tree");
  w_tree->add_option("--space", o.space);
  w_tree->add_option("--nodes", o.nodes, "random tree size (needs --seed)");
  w_tree->add_option("--l", o.l);
  w_tree->add_option("--root", o.root);
  CLI::App* w_ray = witness->add_subcommand("ray", "ray-cell cover of [0,region]^n");
  w_ray->add_option("--n", o.n);
  w_ray->add_option("--region", o.region);
  w_ray->add_option("--length", o.length, "extent of the 1-D ray sample (default 2*region)");
  w_ray->add_option("--step", o.step);
  w_ray->add_option("--r", o.r, "closed radius entourage on the ray (default 1)");
  w_ray->add_option("--entourage", o.entourage);
  CLI::App* w_hyp = witness->add_subcommand("hyperbolic", "sphere-cover lift on a hyperbolic disk sample");
  auto hyper_opts = [&](CLI::App* c) {
    c->add_option("--space", o.space);
    c->add_option("--kappa", o.kappa);
    c->add_option("--lambda", o.lambda);
    c->add_option("--d", o.d);
    c->add_option("--l", o.l);
    c->add_option("--n", o.n);
    c->add_option("--radius", o.radius);
    c->add_option("--samples", o.samples);
    c->add_option("--clustered", o.clustered);
  };
  hyper_opts(w_hyp);
  CLI::App* w_star = witness->add_subcommand("star", "open-star cover of a simplicial complex");
  w_star->add_option("--complex", o.complex)->required();
  w_star->add_option("--stability", o.stability);
  w_star->add_option("--resolution", o.resolution);
  CLI::App* w_sperner = witness->add_subcommand("sperner", "fully labelled cell of a Kuhn subdivision");
  w_sperner->add_option("--grid", o.grid)->required();
  CLI::App* w_lower = witness->add_subcommand("lowerbound", "point of P_n in n+1 sets of a bounded cover");
  w_lower->add_option("--space", o.space);
  w_lower->add_option("--cover", o.cover);
  w_lower->add_option("--n", o.n);
  w_lower->add_option("--m", o.m, "lattice refinement (sample step 1/m)");
  w_lower->add_option("--window", o.window);
  w_lower->add_option("--a", o.a, "cube edge when no cover is given");

  CLI::App* support = app.add_subcommand("support", "support calculus")->require_subcommand(1);
  CLI::App* s_verify = support->add_subcommand("verify", "check the support calculus on given operators");
  s_verify->add_option("--decomposition", o.decomposition)->required();
  s_verify->add_option("--op", o.op, "operator JSON (S, optionally T)")->required();
  s_verify->add_option("--vector", o.vector);
  s_verify->add_option("--entourage", o.entourage, "entourage over the block quotient");
  s_verify->add_option("--tol", o.tol);

  CLI::App* corona = app.add_subcommand("corona", "compactification models")->require_subcommand(1);
  CLI::App* c_equiv = corona->add_subcommand("equiv", "f/g tables and closeness bounds");
  c_equiv->add_option("--model", o.model)->required();
  CLI::App* c_check = corona->add_subcommand("check", "controlled-at-the-corona test of an entourage");
  c_check->add_option("--model", o.model)->required();
  c_check->add_option("--entourage", o.entourage)->required();
  c_check->add_option("--c", o.c);
  CLI::App* c_dim = corona->add_subcommand("dimcover", "cover of corona x {0..depth}");
  c_dim->add_option("--schedule", o.schedule)->required();
  c_dim->add_option("--depth", o.depth);

  CLI::App* pipeline = app.add_subcommand("pipeline", "predefined verification chains");
  pipeline->add_option("id", o.pipeline, "asdim-upper | asdim-lower | hyperbolic-full | corona-full | support-suite")
      ->required();
  hyper_opts(pipeline);
  pipeline->add_option("--r", o.r);
  pipeline->add_option("--a", o.a);
  pipeline->add_option("--m", o.m);
  pipeline->add_option("--window", o.window);
  pipeline->add_option("--pairs", o.pairs);
  pipeline->add_option("--points", o.points);
  pipeline->add_option("--depth", o.depth);
  pipeline->add_option("--trials", o.trials);
  pipeline->add_option("--blocks", o.blocks);
  pipeline->add_option("--tol", o.tol);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  ctx.report.command.push_back("coarse_lab");
  for (int i = 1; i < argc; ++i) ctx.report.command.push_back(argv[i]);

  const auto start = std::chrono::steady_clock::now();
  try {
    if (*space_stats)
      cmd_space_stats(ctx);
    else if (*cover_stats)
      cmd_cover_stats(ctx);
    else if (*w_cube)
      cmd_witness_cube(ctx);
    else if (*w_tree)
      cmd_witness_tree(ctx);
    else if (*w_ray)
      cmd_witness_ray(ctx);
    else if (*w_hyp)
      cmd_witness_hyperbolic(ctx);
    else if (*w_star)
      cmd_witness_star(ctx);
    else if (*w_sperner)
      cmd_witness_sperner(ctx);
    else if (*w_lower)
      cmd_witness_lowerbound(ctx);
    else if (*s_verify)
      cmd_support_verify(ctx);
    else if (*c_equiv)
      cmd_corona_equiv(ctx);
    else if (*c_check)
      cmd_corona_check(ctx);
    else if (*c_dim)
      cmd_corona_dimcover(ctx);
    else if (*pipeline)
      cmd_pipeline(ctx);
    else
      for (auto& [name, t] : transforms)
        if (*t) cmd_transform(ctx, name);
  } catch (const UsageError& e) {
    std::cerr << "coarse_lab: usage: " << e.what() << "\n";
    return kUsage;
  } catch (const InvalidInput& e) {
    std::cerr << "coarse_lab: invalid input: " << e.what() << "\n";
    return kInvalid;
  } catch (const ContractViolation& e) {
    std::cerr << "coarse_lab: contract violation: " << e.what() << "\n";
    return kFailed;
  } catch (const ResourceLimit& e) {
    std::cerr << "coarse_lab: resource limit: " << e.what() << "\n";
    return kResource;
  } catch (const InternalError& e) {
    std::cerr << "coarse_lab: internal error: " << e.what() << "\n";
    return kInternal;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "coarse_lab: invalid input: " << e.what() << "\n";
    return kInvalid;
  }
  if (o.timing)
    ctx.report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  if (o.format == "summary")
    std::cout << report_summary(ctx.report);
  else
    std::cout << report_json(ctx.report).dump(2) << "\n";
  return ctx.report.pass() ? kOk : kFailed;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "coarse_lab: internal error: " << e.what() << "\n";
    return kInternal;
  }
}
