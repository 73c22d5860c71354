#include "coarse/hyperbolic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <string>

#include "coarse/errors.hpp"

namespace coarse {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap(double phi) {
  double w = std::fmod(phi, kTwoPi);
  if (w < 0) w += kTwoPi;
  if (w >= kTwoPi) w = 0.0;
  return w;
}

double log_bound(double s, double ratio) { return (2.0 / s) * std::max(1.0, std::log(ratio)); }

}  // namespace

HyperbolicParams hyperbolic_params(double kappa, double lambda, double d, double l, unsigned n) {
  if (!(kappa < 0)) throw InvalidInput("kappa must be negative");
  if (!(lambda > 0) || !(d > 0) || !(l > 0) || n == 0) throw InvalidInput("lambda, D, L and n must be positive");
  const double s = std::sqrt(-kappa);
  const double rho_gap = log_bound(s, 2.0 * d / lambda);
  HyperbolicParams p;
  for (long j = 1;; ++j) {
    const double rho = double(j) / 100.0;
    if (rho * n > d && rho * n > rho_gap && rho > 2.0 * l) {
      p.rho = rho;
      break;
    }
  }
  const double n_gap = log_bound(s, 2.0 * l / lambda);
  for (unsigned big = 2;; ++big) {
    const double reach = double(big - 1) * p.rho;
    if (reach > 2.0 * l && reach > n_gap) {
      p.N = big;
      break;
    }
  }
  return p;
}

double lipschitz_gap(double kappa, double delta) {
  if (!(kappa < 0) || !(delta > 0)) throw InvalidInput("lipschitz gap needs kappa < 0 and delta > 0");
  return log_bound(std::sqrt(-kappa), 2.0 / delta);
}

Polar radial_projection(const Polar& x, unsigned k, double rho) {
  const double target = double(k) * rho;
  if (x.first < target)
    throw InvalidInput("point at radius " + std::to_string(x.first) + " lies inside D_" + std::to_string(k));
  return {target, x.second};
}

double circle_ball_halfwidth(double kappa, double r, double t) {
  const double s = std::sqrt(-kappa);
  const double den = std::sinh(s * r);
  if (den <= 0) return std::numbers::pi;
  const double q = std::sinh(s * t / 2.0) / den;
  if (q >= 1.0) return std::numbers::pi;
  return 2.0 * std::asin(q);
}

SphereAtlas::SphereAtlas(double kappa, double rho, double lambda, double d, unsigned n_colors)
    : kappa_(kappa), rho_(rho), lambda_(lambda), d_(d), n_(n_colors) {
  if (!(kappa < 0)) throw InvalidInput("kappa must be negative");
  if (!(rho > 0) || !(lambda > 0) || !(d > 0) || n_colors == 0)
    throw InvalidInput("atlas needs positive rho, lambda, D and colour count");
}

SphereAtlas::Sphere SphereAtlas::sphere(unsigned k) const {
  {
    std::lock_guard lock(mu_);
    if (k < spheres_.size() && spheres_[k]) return *spheres_[k];
  }
  Sphere sp;
  sp.radius = double(k) * rho_;
  const double s = std::sqrt(-kappa_);
  if (k == 0 || 2.0 * sp.radius <= d_) {
    sp.whole = true;
    sp.m = 1;
    sp.spacing = kTwoPi;
    sp.width = kTwoPi;
  } else {
    const double alpha = 2.0 * std::asin(std::min(1.0, std::sinh(s * d_ / 2.0) / std::sinh(s * sp.radius)));
    const double beta = circle_ball_halfwidth(kappa_, sp.radius, lambda_);
    const double hi = alpha - 2.0 * beta;
    const double lo = n_ >= 2 ? 2.0 * beta / double(n_ - 1) : kTwoPi * 2.0;
    if (!(hi > 0) || n_ < 2)
      throw ContractViolation("no arc layout on sphere k=" + std::to_string(k) + " with Lebesgue " +
                              std::to_string(lambda_) + " and mesh " + std::to_string(d_));
    const double groups = std::ceil(kTwoPi / (double(n_) * hi));
    sp.m = std::size_t(groups) * n_;
    sp.spacing = kTwoPi / double(sp.m);
    if (sp.spacing < lo)
      throw ContractViolation("no arc layout on sphere k=" + std::to_string(k) + ": spacing " +
                              std::to_string(sp.spacing) + " below the colour bound " + std::to_string(lo));
    sp.width = std::min(double(n_) * sp.spacing, alpha);
  }
  std::lock_guard lock(mu_);
  if (spheres_.size() <= k) spheres_.resize(k + 1);
  spheres_[k] = sp;
  return sp;
}

double SphereAtlas::arc_start(unsigned k, std::size_t j) const {
  const Sphere sp = sphere(k);
  if (sp.whole) return 0.0;
  return wrap(double(j) * sp.spacing - sp.width / 2.0);
}

bool SphereAtlas::arc_contains(unsigned k, std::size_t j, double phi) const {
  const Sphere sp = sphere(k);
  if (sp.whole) return j == 0;
  return wrap(phi - arc_start(k, j)) < sp.width;
}

std::vector<std::optional<std::size_t>> SphereAtlas::arcs_at(unsigned k, double phi) const {
  std::vector<std::optional<std::size_t>> out(n_);
  const Sphere sp = sphere(k);
  if (sp.whole) {
    out[0] = 0;
    return out;
  }
  phi = wrap(phi);
  const long top = long(std::floor((phi + sp.width / 2.0) / sp.spacing));
  for (long step = -1; step <= long(n_) + 1; ++step) {
    long j = (top - step) % long(sp.m);
    if (j < 0) j += long(sp.m);
    if (arc_contains(k, std::size_t(j), phi)) {
      auto& slot = out[family(std::size_t(j))];
      if (!slot || *slot > std::size_t(j)) slot = std::size_t(j);
    }
  }
  return out;
}

std::size_t SphereAtlas::theta_choice(unsigned k, std::size_t j) const {
  const Sphere target = sphere(k);
  if (target.whole) return 0;
  const Sphere outer = sphere(k + n_);
  auto fail = [&](const std::string& why) {
    return ContractViolation("no arc on sphere k=" + std::to_string(k) + " contains the projection of arc " +
                             std::to_string(j) + " of sphere k=" + std::to_string(k + n_) + ": " + why);
  };
  if (outer.whole) throw fail("the outer arc is the whole circle");
  const double start = arc_start(k + n_, j);
  const double mid = wrap(start + outer.width / 2.0);
  const double beta = circle_ball_halfwidth(kappa_, target.radius, lambda_);
  const long top = long(std::floor((mid + target.width / 2.0) / target.spacing));
  std::optional<std::size_t> best;
  for (long step = -1; step <= long(n_) + 1; ++step) {
    long c = (top - step) % long(target.m);
    if (c < 0) c += long(target.m);
    const double off = wrap(mid - beta - arc_start(k, std::size_t(c)));
    if (off + 2.0 * beta <= target.width && (!best || std::size_t(c) < *best)) best = std::size_t(c);
  }
  if (!best) throw fail("no arc contains the lambda-ball around the projected midpoint");
  const double off = wrap(start - arc_start(k, *best));
  if (off + outer.width > target.width + 1e-14) throw fail("the chosen arc misses part of the projected arc");
  return *best;
}

Cover sphere_sample_cover(const SphereAtlas& atlas, unsigned k, std::size_t count) {
  if (count == 0) throw InvalidInput("sphere sample needs at least one point");
  const double radius = double(k) * atlas.rho();
  if (k == 0) count = 1;
  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = 0; i < count; ++i) pts.emplace_back(radius, kTwoPi * double(i) / double(count));
  auto space = std::make_shared<HyperbolicSpace>(atlas.kappa(), std::move(pts));
  std::map<std::size_t, IndexSet> arcs;
  for (Index p = 0; p < space->size(); ++p)
    for (const auto& a : atlas.arcs_at(k, space->polar(p).second))
      if (a) arcs[*a].push_back(p);
  std::vector<std::vector<IndexSet>> fams(atlas.n_colors());
  for (auto& [j, set] : arcs) fams[atlas.family(j)].push_back(std::move(set));
  fams.erase(std::remove_if(fams.begin(), fams.end(), [](const auto& f) { return f.empty(); }), fams.end());
  return colored_cover(space, std::move(fams));
}

LiftCover sphere_cover_lift(const SphereAtlas& atlas, const std::shared_ptr<const HyperbolicSpace>& sample,
                            unsigned big_n, double l) {
  if (!sample) throw InvalidInput("lift needs a hyperbolic sample");
  if (std::abs(sample->kappa() - atlas.kappa()) > 1e-12) throw InvalidInput("sample and atlas curvature differ");
  const unsigned n = atlas.n_colors();
  const double rho = atlas.rho();
  const double s = std::sqrt(-atlas.kappa());
  const double reach = double(big_n) * rho - rho;
  const bool params_ok = rho * n > atlas.mesh_bound() &&
                         rho * n > log_bound(s, 2.0 * atlas.mesh_bound() / atlas.lambda()) && rho > 2.0 * l &&
                         big_n >= 1 && reach > 2.0 * l && reach > log_bound(s, 2.0 * l / atlas.lambda());
  if (!params_ok) throw ContractViolation("(rho, N) violate the parameter bounds for the atlas and L");

  std::map<std::pair<unsigned, std::size_t>, std::size_t> slot;  // (k, arc) -> set id; (0, 0) is the core
  LiftCover out;
  std::vector<IndexSet> sets;
  auto id_of = [&](unsigned k, std::size_t arc) {
    auto [it, fresh] = slot.emplace(std::make_pair(k, arc), sets.size());
    if (fresh) {
      sets.emplace_back();
      out.labels.push_back(k == 0 ? std::string("core") : std::to_string(k) + ":" + std::to_string(arc));
    }
    return it->second;
  };
  for (Index p = 0; p < sample->size(); ++p) {
    const auto [r, phi] = sample->polar(p);
    const auto t = unsigned(std::floor(r / rho));
    if (t < big_n + n) {
      sets[id_of(0, 0)].push_back(p);
      continue;
    }
    const unsigned u = t - big_n;
    const unsigned k = n * (u / n);
    const unsigned j = u - k + 1;
    const auto arcs = atlas.arcs_at(k, phi);
    std::vector<std::size_t> mine;
    for (unsigned f = 0; f < n; ++f) {
      if (!arcs[f]) continue;
      if (f + 1 <= j) mine.push_back(id_of(k, *arcs[f]));
      if (f + 1 >= j) {
        const unsigned below = k - n;
        mine.push_back(below == 0 ? id_of(0, 0) : id_of(below, atlas.theta_choice(below, *arcs[f])));
      }
    }
    std::sort(mine.begin(), mine.end());
    mine.erase(std::unique(mine.begin(), mine.end()), mine.end());
    for (std::size_t id : mine) sets[id].push_back(p);
  }
  Cover c;
  c.space = sample;
  c.sets = std::move(sets);
  out.result.cover = std::move(c);
  auto& cert = out.result.certificate;
  cert.push_back(check_true("covers", !uncovered_point(out.result.cover).has_value()));
  cert.push_back(check_le("multiplicity", double(multiplicity(out.result.cover)), double(n + 1)));
  cert.push_back(check_le("mesh", mesh(out.result.cover), 2.0 * (big_n + 2.0 * n) * rho + atlas.mesh_bound(), 1e-9));
  cert.push_back(check_ge("lebesgue", lebesgue_number(out.result.cover), l, 1e-9));
  return out;
}

}  // namespace coarse

namespace coarse {

Guarantee contraction_check(double kappa, double rho, double max_radius, std::size_t pairs, Rng& rng) {
  if (!(rho > 0) || max_radius < rho) throw InvalidInput("contraction check needs 0 < rho <= max_radius");
  const unsigned top_k = unsigned(std::floor(max_radius / rho));
  double worst = -std::numeric_limits<double>::infinity();
  Json witness = nullptr;
  for (std::size_t t = 0; t < pairs; ++t) {
    const unsigned k = 1 + unsigned(rng.below(top_k));
    const double lo = double(k) * rho;
    const Polar x{rng.uniform(lo, max_radius), rng.uniform(0.0, 2.0 * std::numbers::pi)};
    // Half the pairs are close together, where cancellation would show first.
    const bool near = rng.chance(0.5);
    const Polar y = near ? Polar{std::clamp(x.first + rng.uniform(-1.0, 1.0), lo, max_radius),
                                 x.second + rng.uniform(-1e-3, 1e-3)}
                         : Polar{rng.uniform(lo, max_radius), rng.uniform(0.0, 2.0 * std::numbers::pi)};
    const Polar px = radial_projection(x, k, rho), py = radial_projection(y, k, rho);
    const double before = hyperbolic_distance(kappa, x.first, x.second, y.first, y.second);
    const double after = hyperbolic_distance(kappa, px.first, px.second, py.first, py.second);
    if (after - before > worst) {
      worst = after - before;
      witness = Json{{"k", k}, {"x", {x.first, x.second}}, {"y", {y.first, y.second}}};
    }
  }
  Guarantee g = check_le("theta_contraction", worst, 0.0, 1e-9);
  if (!g.pass) g.witness = witness;
  return g;
}

Guarantee lipschitz_check(double kappa, double rho, double delta, unsigned max_k, std::size_t pairs, Rng& rng) {
  if (!(delta > 0) || max_k == 0) throw InvalidInput("lipschitz check needs delta > 0 and max_k >= 1");
  const double gap = lipschitz_gap(kappa, delta);
  const double s = std::sqrt(-kappa);
  double worst = 0.0;
  std::size_t used = 0;
  Json witness = nullptr;
  for (std::size_t t = 0; t < pairs; ++t) {
    const unsigned k = 1 + unsigned(rng.below(max_k));
    const double a = gap * rng.uniform(1.0 + 1e-9, 1.5);
    const double r = double(k) * rho + a;
    // Angular spread up to about twice the angle subtending a chord of length a.
    const double span = std::min(std::numbers::pi, 4.0 * std::asin(std::min(1.0, std::sinh(s * a / 2) / std::sinh(s * r))));
    const double phi = rng.uniform(0.0, 2.0 * std::numbers::pi);
    const double psi = phi + rng.uniform(-span, span);
    const double d = hyperbolic_distance(kappa, r, phi, r, psi);
    if (!(d < a) || d == 0.0) continue;
    ++used;
    const double proj = hyperbolic_distance(kappa, double(k) * rho, phi, double(k) * rho, psi);
    if (proj / d > worst) {
      worst = proj / d;
      witness = Json{{"k", k}, {"a", a}, {"phi", {phi, psi}}};
    }
  }
  Guarantee g = check_le("theta_delta_lipschitz", worst, delta);
  g.claimed["gap"] = gap;
  g.claimed["pairs_in_condition"] = used;
  if (!g.pass) g.witness = witness;
  if (used == 0) {
    g.pass = false;
    g.witness = "no sampled pair met the gap condition";
  }
  return g;
}

}  // namespace coarse
