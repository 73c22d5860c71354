#include "coarse/entourage.hpp"

#include <algorithm>
#include <mutex>
#include <string>

#include "coarse/errors.hpp"

namespace coarse {

struct Entourage::Cache {
  std::once_flag once;
  std::vector<IndexSet> nb;
};

namespace {

void require_same_space(const Entourage& a, const Entourage& b) {
  if (a.space() != b.space()) throw InvalidInput("entourages live over different spaces");
}

void check_cap(std::size_t count) {
  if (count > kMaterializationCap)
    throw ResourceLimit("entourage exceeds the materialization cap of " + std::to_string(kMaterializationCap) +
                        " pairs");
}

}  // namespace

Entourage Entourage::radius(SpacePtr space, double r, bool closed) {
  if (!space) throw InvalidInput("entourage over null space");
  if (!(r >= 0)) throw InvalidInput("radius must be non-negative");
  Entourage e;
  e.kind_ = Kind::radius;
  e.space_ = std::move(space);
  e.r_ = r;
  e.closed_ = closed;
  e.cache_ = std::make_shared<Cache>();
  return e;
}

Entourage Entourage::diagonal(SpacePtr space) {
  const std::size_t n = space->size();
  std::vector<IndexSet> nb(n);
  for (std::size_t i = 0; i < n; ++i) nb[i] = {Index(i)};
  return from_neighbourhoods(std::move(space), std::move(nb));
}

Entourage Entourage::from_pairs(SpacePtr space, const std::vector<std::pair<Index, Index>>& pairs,
                                bool symmetric_closure) {
  if (!space) throw InvalidInput("entourage over null space");
  std::vector<IndexSet> nb(space->size());
  for (auto [x, a] : pairs) {
    space->check_index(x);
    space->check_index(a);
    nb[a].push_back(x);
    if (symmetric_closure) nb[x].push_back(a);
  }
  for (auto& s : nb) normalize(s);
  return from_neighbourhoods(std::move(space), std::move(nb));
}

Entourage Entourage::from_neighbourhoods(SpacePtr space, std::vector<IndexSet> nb) {
  if (!space) throw InvalidInput("entourage over null space");
  if (nb.size() != space->size()) throw InvalidInput("neighbourhood table size does not match space");
  std::size_t count = 0;
  for (auto& s : nb) {
    normalize(s);
    if (!s.empty()) space->check_index(s.back());
    count += s.size();
  }
  check_cap(count);
  Entourage e;
  e.kind_ = Kind::pairs;
  e.space_ = std::move(space);
  e.cache_ = std::make_shared<Cache>();
  std::call_once(e.cache_->once, [&] { e.cache_->nb = std::move(nb); });
  return e;
}

Entourage Entourage::product(SpacePtr product_space, const Entourage& ex, const Entourage& ey) {
  auto ps = std::dynamic_pointer_cast<const ProductSpace>(product_space);
  if (!ps) throw InvalidInput("product entourage needs a product space");
  if (ps->first() != ex.space() || ps->second() != ey.space())
    throw InvalidInput("product entourage factors do not match the product space");
  Entourage e;
  e.kind_ = Kind::product;
  e.space_ = std::move(product_space);
  e.ex_ = std::make_shared<const Entourage>(ex);
  e.ey_ = std::make_shared<const Entourage>(ey);
  e.cache_ = std::make_shared<Cache>();
  return e;
}

bool Entourage::contains(Index x, Index y) const {
  switch (kind_) {
    case Kind::radius: {
      double d = space_->dist(x, y);
      return closed_ ? d <= r_ + kDistanceTolerance : d < r_ - kDistanceTolerance;
    }
    case Kind::product: {
      const auto& ps = static_cast<const ProductSpace&>(*space_);
      return ex_->contains(ps.first_index(x), ps.first_index(y)) &&
             ey_->contains(ps.second_index(x), ps.second_index(y));
    }
    case Kind::pairs:
      break;
  }
  return coarse::contains(cache_->nb[y], x);
}

IndexSet Entourage::of(Index a) const {
  space_->check_index(a);
  switch (kind_) {
    case Kind::radius:
      return space_->ball(a, r_, closed_);
    case Kind::product: {
      const auto& ps = static_cast<const ProductSpace&>(*space_);
      IndexSet fx = ex_->of(ps.first_index(a));
      IndexSet fy = ey_->of(ps.second_index(a));
      IndexSet out;
      out.reserve(fx.size() * fy.size());
      for (Index x : fx)
        for (Index y : fy) out.push_back(ps.pair_index(x, y));
      return out;
    }
    case Kind::pairs:
      break;
  }
  return cache_->nb[a];
}

IndexSet Entourage::image(const IndexSet& a) const {
  if (a.empty()) return {};
  if (kind_ == Kind::pairs || a.size() == 1) {
    IndexSet out;
    for (Index x : a) {
      const IndexSet s = of(x);
      out.insert(out.end(), s.begin(), s.end());
    }
    normalize(out);
    return out;
  }
  std::vector<char> mark(space_->size(), 0);
  for (Index x : a)
    for (Index y : of(x)) mark[y] = 1;
  IndexSet out;
  for (std::size_t i = 0; i < mark.size(); ++i)
    if (mark[i]) out.push_back(Index(i));
  return out;
}

const std::vector<IndexSet>& Entourage::neighbourhoods() const {
  std::call_once(cache_->once, [this] {
    const std::size_t n = space_->size();
    std::vector<IndexSet> nb(n);
    std::size_t count = 0;
    for (std::size_t a = 0; a < n; ++a) {
      nb[a] = of(Index(a));
      count += nb[a].size();
      check_cap(count);
    }
    cache_->nb = std::move(nb);
  });
  return cache_->nb;
}

std::size_t Entourage::pair_count() const {
  std::size_t c = 0;
  for (const auto& s : neighbourhoods()) c += s.size();
  return c;
}

std::vector<std::pair<Index, Index>> Entourage::pairs() const {
  std::vector<std::pair<Index, Index>> out;
  const auto& nb = neighbourhoods();
  for (std::size_t a = 0; a < nb.size(); ++a)
    for (Index x : nb[a]) out.emplace_back(x, Index(a));
  std::sort(out.begin(), out.end());
  return out;
}

bool Entourage::is_symmetric() const {
  if (kind_ == Kind::radius) return true;
  if (kind_ == Kind::product) return ex_->is_symmetric() && ey_->is_symmetric();
  const auto& nb = neighbourhoods();
  for (std::size_t a = 0; a < nb.size(); ++a)
    for (Index x : nb[a])
      if (!coarse::contains(nb[x], Index(a))) return false;
  return true;
}

bool Entourage::subset_of(const Entourage& other) const {
  require_same_space(*this, other);
  const std::size_t n = space_->size();
  for (std::size_t a = 0; a < n; ++a)
    for (Index x : of(Index(a)))
      if (!other.contains(x, Index(a))) return false;
  return true;
}

bool Entourage::contains_diagonal() const {
  for (std::size_t a = 0; a < space_->size(); ++a)
    if (!contains(Index(a), Index(a))) return false;
  return true;
}

// ---------------------------------------------------------------------------

Entourage compose(const Entourage& e1, const Entourage& e2) {
  require_same_space(e1, e2);
  const std::size_t n = e1.space()->size();
  std::vector<IndexSet> nb(n);
  std::size_t count = 0;
  for (std::size_t z = 0; z < n; ++z) {
    nb[z] = e1.image(e2.of(Index(z)));
    count += nb[z].size();
    check_cap(count);
  }
  return Entourage::from_neighbourhoods(e1.space(), std::move(nb));
}

Entourage power(const Entourage& e, unsigned k) {
  if (k == 0) return Entourage::diagonal(e.space());
  if (k == 1) return e;
  Entourage acc = e;
  for (unsigned i = 1; i < k; ++i) acc = compose(acc, e);
  return acc;
}

Entourage inverse(const Entourage& e) {
  const auto& nb = e.neighbourhoods();
  std::vector<IndexSet> inv(nb.size());
  for (std::size_t a = 0; a < nb.size(); ++a)
    for (Index x : nb[a]) inv[x].push_back(Index(a));
  return Entourage::from_neighbourhoods(e.space(), std::move(inv));
}

Entourage unite(const Entourage& e1, const Entourage& e2) {
  require_same_space(e1, e2);
  const std::size_t n = e1.space()->size();
  std::vector<IndexSet> nb(n);
  for (std::size_t a = 0; a < n; ++a) nb[a] = set_union(e1.of(Index(a)), e2.of(Index(a)));
  return Entourage::from_neighbourhoods(e1.space(), std::move(nb));
}

Entourage symmetrize(const Entourage& e) { return unite(e, inverse(e)); }

// ---------------------------------------------------------------------------

void PointMap::validate() const {
  if (!source || !target) throw InvalidInput("point map with null space");
  if (table.size() != source->size())
    throw InvalidInput("point map table has " + std::to_string(table.size()) + " entries for " +
                       std::to_string(source->size()) + " source points");
  for (Index v : table) target->check_index(v);
}

PointMap identity_map(SpacePtr s) {
  PointMap f{s, s, {}};
  f.table.resize(s->size());
  for (std::size_t i = 0; i < f.table.size(); ++i) f.table[i] = Index(i);
  return f;
}

Entourage transport(const PointMap& f, const Entourage& e, Direction dir) {
  f.validate();
  if (dir == Direction::push) {
    if (e.space() != f.source) throw InvalidInput("push-forward needs an entourage over the map's source");
    std::vector<IndexSet> nb(f.target->size());
    const auto& src = e.neighbourhoods();
    for (std::size_t a = 0; a < src.size(); ++a)
      for (Index x : src[a]) nb[f(Index(a))].push_back(f(x));
    return Entourage::from_neighbourhoods(f.target, std::move(nb));
  }
  if (e.space() != f.target) throw InvalidInput("pull-back needs an entourage over the map's target");
  std::vector<IndexSet> preimage(f.target->size());
  for (std::size_t i = 0; i < f.table.size(); ++i) preimage[f.table[i]].push_back(Index(i));
  std::vector<IndexSet> nb(f.source->size());
  std::size_t count = 0;
  for (std::size_t a = 0; a < nb.size(); ++a) {
    for (Index y : e.of(f(Index(a)))) nb[a].insert(nb[a].end(), preimage[y].begin(), preimage[y].end());
    count += nb[a].size();
    check_cap(count);
  }
  return Entourage::from_neighbourhoods(f.source, std::move(nb));
}

UniformityReport uniformity_modulus(const PointMap& f, const std::vector<double>& radii, const PointMap* g) {
  if (radii.empty()) throw InvalidInput("uniformity modulus needs at least one radius");
  f.validate();
  UniformityReport rep;
  const std::size_t n = f.source->size();
  for (double r : radii) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j)
        if (f.source->dist(Index(i), Index(j)) <= r + kDistanceTolerance)
          s = std::max(s, f.target->dist(f(Index(i)), f(Index(j))));
    rep.modulus.emplace_back(r, s);
  }
  if (g) {
    g->validate();
    if (g->source != f.source || g->target != f.target) throw InvalidInput("closeness needs maps with equal spaces");
    double c = 0.0;
    for (std::size_t i = 0; i < n; ++i) c = std::max(c, f.target->dist(f(Index(i)), (*g)(Index(i))));
    rep.closeness = c;
  }
  return rep;
}

}  // namespace coarse
