#include "coarse/corona.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <deque>
#include <limits>
#include <numbers>
#include <string>

#include "coarse/errors.hpp"

namespace coarse {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

CompactificationModel::CompactificationModel(SpacePtr ambient, IndexSet corona)
    : ambient_(std::move(ambient)), corona_(std::move(corona)) {
  if (!ambient_) throw InvalidInput("model needs an ambient space");
  normalize(corona_);
  for (Index c : corona_) ambient_->check_index(c);
  if (corona_.empty()) throw InvalidInput("model needs a non-empty corona sample");
  for (Index p = 0; p < ambient_->size(); ++p)
    if (!contains(corona_, p)) interior_.push_back(p);
  if (interior_.empty()) throw InvalidInput("model needs a non-empty interior sample");
  const std::size_t n = ambient_->size();
  dc_.assign(n, 0.0);
  nearest_.assign(n, 0);
  level_.assign(n, 0);
  for (Index p = 0; p < n; ++p) {
    double best = kInf;
    Index arg = corona_.front();
    for (Index c : corona_) {
      const double d = ambient_->dist(p, c);
      if (d < best) {
        best = d;
        arg = c;
      }
    }
    dc_[p] = best;
    nearest_[p] = arg;
  }
  for (Index p : interior_) {
    const double d = dc_[p];
    if (!(d > kDistanceTolerance))
      throw InvalidInput("interior point " + std::to_string(p) + " lies on the corona");
    unsigned i = unsigned(std::max(1.0, std::ceil(1.0 / d)));
    while (i > 1 && d >= 1.0 / (i - 1) - kDistanceTolerance) --i;
    while (d < 1.0 / i - kDistanceTolerance) ++i;
    level_[p] = i;
    depth_ = std::max(depth_, i);
  }
}

unsigned CompactificationModel::level(Index p) const {
  if (is_corona(p)) throw InvalidInput("corona point " + std::to_string(p) + " has no level");
  return level_[p];
}

bool CompactificationModel::in_level(Index p, unsigned i) const { return !is_corona(p) && level_[p] <= i; }

IndexSet CompactificationModel::level_points(unsigned i) const {
  IndexSet out;
  for (Index p : interior_)
    if (level_[p] <= i) out.push_back(p);
  return out;
}

double CompactificationModel::a(unsigned i) const {
  const IndexSet xi = level_points(i);
  if (xi.empty()) return kInf;
  double worst = 0.0;
  for (Index c : corona_) {
    double best = kInf;
    for (Index x : xi) best = std::min(best, ambient_->dist(x, c));
    worst = std::max(worst, best);
  }
  return worst;
}

std::optional<unsigned> CompactificationModel::n_of(unsigned i) const {
  const double ai = a(i);
  if (ai >= 1.0 - kDistanceTolerance) return std::nullopt;
  if (ai <= 0.0) return UINT_MAX;
  unsigned n = unsigned(std::ceil(1.0 / ai));
  while (n > 0 && !(ai < 1.0 / n - kDistanceTolerance)) --n;
  if (n == 0) return std::nullopt;
  return n;
}

CompactificationModel interval_model(std::size_t steps) {
  if (steps < 2) throw InvalidInput("interval model needs at least 2 steps");
  std::vector<std::vector<double>> pts;
  for (std::size_t j = 0; j <= steps; ++j) pts.push_back({double(j) / double(steps)});
  return CompactificationModel(std::make_shared<EuclideanSpace>(std::move(pts)), {Index(steps)});
}

CompactificationModel disk_model(std::size_t rings, std::size_t per_ring) {
  if (rings < 2 || per_ring < 3) throw InvalidInput("disk model needs >= 2 rings and >= 3 points per ring");
  std::vector<std::vector<double>> pts{{0.0, 0.0}};
  for (std::size_t j = 1; j <= rings; ++j) {
    const double r = double(j) / double(rings);
    for (std::size_t t = 0; t < per_ring; ++t) {
      const double phi = 2.0 * std::numbers::pi * double(t) / double(per_ring);
      pts.push_back({r * std::cos(phi), r * std::sin(phi)});
    }
  }
  IndexSet corona;
  for (std::size_t t = 0; t < per_ring; ++t) corona.push_back(Index(1 + (rings - 1) * per_ring + t));
  return CompactificationModel(std::make_shared<EuclideanSpace>(std::move(pts)), std::move(corona));
}

Index map_f(const CompactificationModel& m, Index c, unsigned n) {
  if (!m.is_corona(c)) throw InvalidInput("f needs a corona point, got " + std::to_string(c));
  const IndexSet xn = m.level_points(n);
  if (xn.empty()) throw InvalidInput("X_" + std::to_string(n) + " is empty on the sample");
  Index arg = xn.front();
  double best = kInf;
  for (Index x : xn) {
    const double d = m.ambient()->dist(x, c);
    if (d < best) {
      best = d;
      arg = x;
    }
  }
  return arg;
}

std::pair<Index, unsigned> map_g(const CompactificationModel& m, Index x) {
  if (m.is_corona(x)) throw InvalidInput("g needs an interior point, got " + std::to_string(x));
  return {m.nearest_corona(x), m.level(x)};
}

EquivalenceReport check_equivalence(const CompactificationModel& m) {
  EquivalenceReport rep;
  rep.f_table = Json::array();
  rep.g_table = Json::array();
  const auto& sp = *m.ambient();

  double worst_fg = 0.0;  // measured / bound
  Json fg_witness = nullptr;
  bool fg_ok = true;
  for (Index x : m.interior()) {
    const auto [c, i] = map_g(m, x);
    rep.g_table.push_back({x, c, i});
    if (i < 2) continue;
    const double d = sp.dist(map_f(m, c, i), x);
    const double bound = 2.0 / double(i - 1);
    worst_fg = std::max(worst_fg, d / bound);
    if (d > bound + kDistanceTolerance && fg_ok) {
      fg_ok = false;
      fg_witness = Json{{"x", x}, {"level", i}, {"distance", d}, {"bound", bound}};
    }
  }
  Guarantee fg = check_true("fg_close_to_identity", fg_ok, fg_witness);
  fg.claimed = Json{{"le", "2/(i-1)"}};
  fg.measured = Json{{"max_ratio", worst_fg}};
  rep.certificate.push_back(std::move(fg));

  bool gf_ok = true;
  Json gf_witness = nullptr;
  std::size_t checked = 0;
  for (unsigned k = 1; k <= m.depth(); ++k) {
    if (m.level_points(k).empty()) continue;
    const double ak = m.a(k);
    const auto nk = m.n_of(k);
    for (Index c : m.corona()) {
      const Index y = map_f(m, c, k);
      rep.f_table.push_back({c, k, y});
      if (!nk) continue;
      const auto [c2, k2] = map_g(m, y);
      ++checked;
      const bool lower = *nk == UINT_MAX || k2 >= *nk + 1;
      const bool ok = lower && k2 <= k && sp.dist(c, c2) <= 2.0 * ak + kDistanceTolerance;
      if (!ok && gf_ok) {
        gf_ok = false;
        gf_witness = Json{{"c", c}, {"k", k}, {"g_f", {c2, k2}}, {"n_k", *nk}, {"a_k", ak}};
      }
    }
  }
  Guarantee gf = check_true("gf_band_bounds", gf_ok, gf_witness);
  gf.claimed = Json{{"band", "n_k+1 <= k~ <= k"}, {"shift", "d(c,c~) <= 2 a_k"}};
  gf.measured = Json{{"checked", checked}};
  rep.certificate.push_back(std::move(gf));
  return rep;
}

CcVerdict check_cc_entourage(const CompactificationModel& m, const Entourage& e, double c) {
  if (e.space() != m.ambient() && e.space()->size() != m.ambient()->size())
    throw InvalidInput("entourage does not live on the model's ambient sample");
  CcVerdict v;
  v.c = c;
  const unsigned depth = m.depth();
  std::vector<double> best(depth + 2, 0.0);  // by max level of the pair
  for (auto [x, y] : e.pairs()) {
    if (m.is_corona(x) || m.is_corona(y))
      throw InvalidInput("pair (" + std::to_string(x) + "," + std::to_string(y) + ") touches the corona");
    const unsigned lv = std::max(m.level(x), m.level(y));
    best[lv] = std::max(best[lv], m.ambient()->dist(x, y));
  }
  v.rho.assign(depth, 0.0);
  double suffix = 0.0;
  for (unsigned i = depth; i >= 1; --i) {
    suffix = std::max(suffix, best[i + 1]);
    v.rho[i - 1] = suffix;
  }
  v.tail_start = std::max(1u, (depth + 1) / 2);
  v.controlled = true;
  for (unsigned i = v.tail_start; i <= depth; ++i)
    if (v.rho[i - 1] > c / double(i) + kDistanceTolerance) {
      v.controlled = false;
      v.failing_level = i;
      break;
    }
  return v;
}

CoronaCoverSchedule::CoronaCoverSchedule(SpacePtr corona, unsigned n, Generator gen)
    : space_(std::move(corona)), n_(n), gen_(std::move(gen)) {
  if (!space_ || space_->size() == 0) throw InvalidInput("schedule needs a non-empty corona sample");
  if (n_ == 0) throw InvalidInput("schedule needs at least one family");
}

const Cover& CoronaCoverSchedule::cover(unsigned k) const {
  if (k == 0) throw InvalidInput("schedule levels start at 1");
  {
    std::lock_guard lock(*mu_);
    if (auto it = cache_.find(k); it != cache_.end()) return *it->second.first;
  }
  auto c = std::make_shared<Cover>(gen_(k));
  const std::string at = " at k=" + std::to_string(k);
  if (c->space != space_) throw ContractViolation("schedule cover lives on another space" + at);
  check_well_formed(*c);
  if (uncovered_point(*c)) throw ContractViolation("schedule cover misses a point" + at);
  if (!c->families || c->family_count() > n_) throw ContractViolation("schedule cover needs at most n families" + at);
  if (disjointness_violation(*c, Entourage::diagonal(space_)))
    throw ContractViolation("schedule cover has overlapping sets in one family" + at);
  if (mesh(*c) > 1.0 / double(k) + kDistanceTolerance) throw ContractViolation("schedule cover mesh exceeds 1/k" + at);
  const double leb = lebesgue_number(*c);
  std::lock_guard lock(*mu_);
  auto& slot = cache_[k];
  if (!slot.first) slot = {c, leb};
  return *slot.first;
}

double CoronaCoverSchedule::lebesgue(unsigned k) const {
  cover(k);
  std::lock_guard lock(*mu_);
  return cache_.at(k).second;
}

CoronaCoverSchedule circle_schedule(std::size_t points) {
  if (points < 4 || points % 2 != 0) throw InvalidInput("circle schedule needs an even point count >= 4");
  std::vector<std::vector<double>> pts;
  for (std::size_t t = 0; t < points; ++t) {
    const double phi = 2.0 * std::numbers::pi * double(t) / double(points);
    pts.push_back({std::cos(phi), std::sin(phi)});
  }
  auto space = std::make_shared<EuclideanSpace>(std::move(pts));
  const double h = 2.0 * std::numbers::pi / double(points);
  auto chord = [](double a) { return 2.0 * std::sin(std::min(a, std::numbers::pi) / 2.0); };
  auto gen = [space, points, h, chord](unsigned k) {
    const double cap = 1.0 / double(k);
    std::size_t t = 0;
    for (std::size_t cand = 1; 2 * cand < points && points % (2 * cand) == 0; cand *= 2)
      if (chord(double(2 * cand - 1) * h) <= cap) t = cand;
    std::vector<std::vector<IndexSet>> fams(2);
    if (t == 0) {
      for (std::size_t p = 0; p < points; ++p) fams[p % 2].push_back({Index(p)});
    } else {
      const std::size_t runs = points / t;
      for (std::size_t r = 0; r < runs; ++r) {
        IndexSet s;
        for (std::size_t q = 0; q < 2 * t; ++q) s.push_back(Index((r * t + q) % points));
        normalize(s);
        fams[r % 2].push_back(std::move(s));
      }
    }
    return colored_cover(space, fams);
  };
  return CoronaCoverSchedule(space, 2, gen);
}

CoronaCoverSchedule point_schedule() {
  auto space = std::make_shared<EuclideanSpace>(std::vector<std::vector<double>>{{0.0}});
  return CoronaCoverSchedule(space, 1, [space](unsigned) { return colored_cover(space, {{IndexSet{0}}}); });
}

DimCover corona_dim_cover(const CoronaCoverSchedule& s, const std::vector<double>& delta, const Entourage& e_n,
                          unsigned depth) {
  const std::size_t window = std::size_t(depth) + 1;
  if (delta.size() != window) throw InvalidInput("delta needs one value per m in 0..depth");
  for (std::size_t m = 0; m < window; ++m) {
    if (!(delta[m] >= 0)) throw InvalidInput("delta must be non-negative");
    if (m > 0 && delta[m] > delta[m - 1] + kDistanceTolerance)
      throw InvalidInput("delta must be non-increasing (fails at m=" + std::to_string(m) + ")");
  }
  if (!e_n.space() || e_n.space()->size() != window) throw InvalidInput("e_n must live on {0..depth}");
  const unsigned n = s.n();

  // Shells of K_0 = {0}, K_k = E_N[K_{k-1}] with E_N = e_n u e_n^{-1} u Delta_1.
  const Entourage en = symmetrize(e_n);
  DimCover out;
  out.shell.assign(window, UINT_MAX);
  out.shell[0] = 0;
  std::deque<Index> queue{0};
  while (!queue.empty()) {
    const Index a = queue.front();
    queue.pop_front();
    IndexSet next = en.of(a);
    if (a > 0) next.push_back(a - 1);
    if (a + 1 < window) next.push_back(a + 1);
    for (Index b : next)
      if (out.shell[b] == UINT_MAX) {
        out.shell[b] = out.shell[a] + 1;
        queue.push_back(b);
      }
  }
  const long top = long(*std::max_element(out.shell.begin(), out.shell.end()));

  // l_0 = 1, 1/l_i <= L(V_{l_{i-1}}), l_i > l_{i-1}.
  out.l.push_back(1);
  auto l_at = [&](std::size_t i) {
    while (out.l.size() <= i) {
      const unsigned prev = out.l.back();
      const double leb = s.lebesgue(prev);
      if (!(leb > 0)) throw ContractViolation("Lebesgue chain breaks: L(V_k) = 0 at k=" + std::to_string(prev));
      unsigned next = prev + 1;
      if (std::isfinite(leb)) next = std::max(next, unsigned(std::ceil(1.0 / leb - 1e-12)));
      while (1.0 / next > leb) ++next;
      out.l.push_back(next);
    }
    return out.l[i];
  };
  // k_i > k_{i-1} + 2n with delta_m < 1/l_{i+2} for m outside K_{k_i - 2}.
  out.k.clear();
  long prev_k = 0;  // k_{-2}
  for (long i = -1;; ++i) {
    const double cap = 1.0 / double(l_at(std::size_t(i + 2)));
    long ki = prev_k + 2 * long(n) + 1;
    for (;; ++ki) {
      bool ok = true;
      for (std::size_t m = 0; m < window && ok; ++m)
        if (long(out.shell[m]) > ki - 2 && !(delta[m] < cap)) ok = false;
      if (ok) break;
    }
    out.k.push_back(ki);
    prev_k = ki;
    if (i >= 0 && ki >= top) break;
  }
  auto k_of = [&](long i) { return i < -1 ? 0L : out.k[std::size_t(i + 1)]; };
  const long last = long(out.k.size()) - 2;  // largest i with k_i defined

  // Covers V_{l_i} and the refinement maps phi_i : V_{l_i} -> V_{l_{i-1}}.
  auto family_of = [](const Cover& c) {
    std::vector<unsigned> fam(c.sets.size(), 0);
    if (c.families)
      for (std::size_t f = 0; f < c.families->size(); ++f)
        for (std::size_t idx : (*c.families)[f]) fam[idx] = unsigned(f);
    return fam;
  };
  const auto& cs = *s.space();
  std::vector<std::vector<std::size_t>> phi(std::size_t(last) + 2);
  for (long i = 1; i <= last + 1; ++i) {
    const Cover& fine = s.cover(l_at(std::size_t(i)));
    const Cover& coarse_cover = s.cover(l_at(std::size_t(i - 1)));
    const double lam = s.lebesgue(l_at(std::size_t(i - 1)));
    auto& map = phi[std::size_t(i)];
    for (std::size_t w = 0; w < fine.sets.size(); ++w) {
      const IndexSet& ws = fine.sets[w];
      Index centre = ws.front();
      double radius = kInf;
      for (Index a : ws) {
        double r = 0.0;
        for (Index b : ws) r = std::max(r, cs.dist(a, b));
        if (r < radius) {
          radius = r;
          centre = a;
        }
      }
      IndexSet ball;
      for (Index p = 0; p < cs.size(); ++p)
        if (cs.dist(p, centre) < lam) ball.push_back(p);
      const IndexSet want = set_union(ws, ball);
      std::optional<std::size_t> pick;
      for (std::size_t v = 0; v < coarse_cover.sets.size() && !pick; ++v)
        if (is_subset(want, coarse_cover.sets[v])) pick = v;
      for (std::size_t v = 0; v < coarse_cover.sets.size() && !pick; ++v)
        if (is_subset(ws, coarse_cover.sets[v])) pick = v;
      if (!pick)
        throw ContractViolation("no set of V_" + std::to_string(l_at(std::size_t(i - 1))) + " contains set " +
                                std::to_string(w) + " of V_" + std::to_string(l_at(std::size_t(i))));
      map.push_back(*pick);
    }
  }

  auto space = std::make_shared<ProductSpace>(s.space(), std::make_shared<GridSpace>(std::vector<double>{0.0},
                                                                                      std::vector<double>{double(depth)}, 1.0),
                                              ProductSpace::Metric::max);
  out.space = space;
  auto band = [&](long lo, long hi) {  // {m : lo < shell(m) <= hi}
    IndexSet ms;
    for (std::size_t m = 0; m < window; ++m)
      if (long(out.shell[m]) > lo && long(out.shell[m]) <= hi) ms.push_back(Index(m));
    return ms;
  };
  auto add_product = [&](IndexSet& dst, const IndexSet& xs, const IndexSet& ms) {
    for (Index x : xs)
      for (Index m : ms) dst.push_back(space->pair_index(x, m));
  };
  std::vector<IndexSet> sets;
  {
    const Cover& v0 = s.cover(out.l[0]);
    const auto fam = family_of(v0);
    IndexSet u0;
    for (std::size_t v = 0; v < v0.sets.size(); ++v)
      add_product(u0, v0.sets[v], band(-1, k_of(0) + 2 * long(fam[v] + 1)));
    normalize(u0);
    sets.push_back(std::move(u0));
  }
  for (long i = 1; i <= last; ++i) {
    const Cover& vi = s.cover(l_at(std::size_t(i)));
    const Cover& prev = s.cover(l_at(std::size_t(i - 1)));
    const Cover& next = s.cover(l_at(std::size_t(i + 1)));
    const auto fam = family_of(vi);
    const auto fam_prev = family_of(prev);
    for (std::size_t v = 0; v < vi.sets.size(); ++v) {
      const long jp = long(fam_prev[phi[std::size_t(i)][v]]) + 1;
      const long jv = long(fam[v]) + 1;
      IndexSet breve;
      for (std::size_t w = 0; w < next.sets.size(); ++w)
        if (phi[std::size_t(i + 1)][w] == v) breve = set_union(breve, next.sets[w]);
      IndexSet u;
      add_product(u, vi.sets[v], band(k_of(i - 1) + 2 * jp - 2, k_of(i)));
      add_product(u, breve, band(k_of(i), k_of(i) + 2 * jv));
      normalize(u);
      if (!u.empty()) sets.push_back(std::move(u));
    }
  }
  Cover cover;
  cover.space = space;
  cover.sets = std::move(sets);

  // Appetite entourage.
  std::vector<IndexSet> nb(space->size());
  for (Index x = 0; x < cs.size(); ++x)
    for (Index m = 0; m < window; ++m) {
      IndexSet ms = en.of(m);
      ms.push_back(m);
      normalize(ms);
      IndexSet& dst = nb[space->pair_index(x, m)];
      for (Index m2 : ms) {
        const double cap = delta[std::max(m, m2)];
        for (Index y = 0; y < cs.size(); ++y)
          if ((y == x && m2 == m) || cs.dist(x, y) < cap) dst.push_back(space->pair_index(y, m2));
      }
      normalize(dst);
    }
  out.e = Entourage::from_neighbourhoods(space, std::move(nb));

  // d_m bookkeeping.
  double d0 = 1.0;
  for (Index a = 0; a < cs.size(); ++a)
    for (Index b = 0; b < cs.size(); ++b) d0 = std::max(d0, cs.dist(a, b));
  out.d.assign(window, d0);
  for (std::size_t m = 0; m < window; ++m)
    for (long i = 2; i <= last; ++i)
      if (long(out.shell[m]) > k_of(i - 1) && long(out.shell[m]) <= k_of(i)) out.d[m] = 1.0 / double(out.l[std::size_t(i - 2)]);
  std::optional<std::size_t> rising;
  for (std::size_t m = 1; m < window && !rising; ++m)
    if (out.d[m] > out.d[m - 1]) rising = m;
  Json bound_witness = nullptr;
  for (std::size_t u = 0; u < cover.sets.size() && bound_witness.is_null(); ++u) {
    std::vector<std::pair<Index, Index>> pts;  // (m, x)
    for (Index p : cover.sets[u])
      if (long(out.shell[space->second_index(p)]) > k_of(-1))
        pts.emplace_back(space->second_index(p), space->first_index(p));
    std::sort(pts.begin(), pts.end());
    std::vector<Index> seen;
    for (std::size_t a = 0; a < pts.size() && bound_witness.is_null();) {
      std::size_t b = a;
      while (b < pts.size() && pts[b].first == pts[a].first) seen.push_back(pts[b++].second);
      const double cap = out.d[pts[a].first];
      for (std::size_t q = a; q < b && bound_witness.is_null(); ++q)
        for (Index x : seen)
          if (cs.dist(x, pts[q].second) > cap + kDistanceTolerance)
            bound_witness = Json{{"set", u}, {"x", x}, {"y", pts[q].second}, {"m_y", pts[q].first}, {"d_m", cap}};
      a = b;
    }
  }
  // b_i = min index reachable from i through the projected Delta_U.
  out.b.assign(window, long(window));
  for (const auto& u : cover.sets) {
    if (u.empty()) continue;
    Index lo = Index(window), hi = 0;
    for (Index p : u) {
      lo = std::min(lo, space->second_index(p));
      hi = std::max(hi, space->second_index(p));
    }
    for (Index i = lo; i <= hi; ++i) out.b[i] = std::min<long>(out.b[i], lo);
  }

  auto& cert = out.result.certificate;
  out.result.cover = std::move(cover);
  const Cover& c = out.result.cover;
  cert.push_back(check_true("covers", !uncovered_point(c).has_value()));
  cert.push_back(check_le("multiplicity", double(multiplicity(c)), double(n + 1)));
  const auto bad = appetite_violation(c, out.e);
  cert.push_back(check_true("appetite_E", !bad, bad ? Json{{"point", *bad}} : Json(nullptr)));
  Guarantee dm = check_true("d_m_nonincreasing", !rising, rising ? Json{{"m", *rising}} : Json(nullptr));
  dm.measured = Json{{"first", out.d.front()}, {"floor", out.d.back()}};
  cert.push_back(std::move(dm));
  Guarantee within = check_true("delta_U_within_d_m", bound_witness.is_null(), bound_witness);
  within.measured = Json{{"b", out.b}};
  cert.push_back(std::move(within));
  return out;
}

}  // namespace coarse
