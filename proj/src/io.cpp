#include "coarse/io.hpp"

#include <fstream>
#include <sstream>

#include "coarse/errors.hpp"

namespace coarse {

namespace {

// Runs a parser, turning JSON type and key errors into InvalidInput.
template <class F>
auto guarded(const char* what, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("malformed ") + what + ": " + e.what());
  }
}

std::vector<std::pair<Index, Index>> pair_list(const Json& arr) {
  std::vector<std::pair<Index, Index>> out;
  for (const auto& p : arr) {
    if (!p.is_array() || p.size() != 2) throw InvalidInput("pairs must be [i,j] arrays");
    out.emplace_back(p[0].get<Index>(), p[1].get<Index>());
  }
  return out;
}

}  // namespace

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json parse_json(const std::string& text, const std::string& what) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput("cannot parse " + what + ": " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot write " + path);
  out << text;
}

SpacePtr space_from_json(const Json& j) {
  return guarded("space", [&]() -> SpacePtr {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "matrix") return std::make_shared<MatrixSpace>(j.at("dist").get<std::vector<std::vector<double>>>());
    if (kind == "grid") {
      auto mn = j.at("min").get<std::vector<double>>();
      auto mx = j.at("max").get<std::vector<double>>();
      if (j.contains("dim") && j.at("dim").get<std::size_t>() != mn.size())
        throw InvalidInput("grid dim does not match min/max");
      return std::make_shared<GridSpace>(std::move(mn), std::move(mx), j.at("step").get<double>());
    }
    if (kind == "tree")
      return std::make_shared<TreeSpace>(pair_list(j.at("edges")), j.value("nodes", std::size_t(0)));
    if (kind == "hyperbolic_polar") {
      std::vector<std::pair<double, double>> pts;
      for (const auto& p : j.at("points")) pts.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
      return std::make_shared<HyperbolicSpace>(j.at("kappa").get<double>(), std::move(pts));
    }
    if (kind == "euclidean")
      return std::make_shared<EuclideanSpace>(j.at("points").get<std::vector<std::vector<double>>>());
    throw InvalidInput("unknown space kind '" + kind + "'");
  });
}

Json space_to_json(const Space& s) {
  if (auto g = dynamic_cast<const GridSpace*>(&s))
    return Json{{"kind", "grid"}, {"dim", g->dim()}, {"min", g->min()}, {"max", g->max()}, {"step", g->step()}};
  if (auto t = dynamic_cast<const TreeSpace*>(&s)) {
    Json edges = Json::array();
    for (auto [a, b] : t->edges()) edges.push_back({a, b});
    return Json{{"kind", "tree"}, {"edges", edges}, {"nodes", t->size()}};
  }
  if (auto h = dynamic_cast<const HyperbolicSpace*>(&s)) {
    Json pts = Json::array();
    for (auto [r, phi] : h->points()) pts.push_back({r, phi});
    return Json{{"kind", "hyperbolic_polar"}, {"kappa", h->kappa()}, {"points", pts}};
  }
  if (auto e = dynamic_cast<const EuclideanSpace*>(&s)) {
    Json pts = Json::array();
    for (Index i = 0; i < e->size(); ++i) pts.push_back(e->coord(i));
    return Json{{"kind", "euclidean"}, {"points", pts}};
  }
  Json rows = Json::array();
  for (Index i = 0; i < s.size(); ++i) {
    Json row = Json::array();
    for (Index k = 0; k < s.size(); ++k) row.push_back(s.dist(i, k));
    rows.push_back(std::move(row));
  }
  return Json{{"kind", "matrix"}, {"dist", rows}};
}

Entourage entourage_from_json(const Json& j, const SpacePtr& space) {
  return guarded("entourage", [&]() {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "radius") return Entourage::radius(space, j.at("r").get<double>(), j.value("closed", false));
    if (kind == "pairs") return Entourage::from_pairs(space, pair_list(j.at("pairs")), true);
    throw InvalidInput("unknown entourage kind '" + kind + "'");
  });
}

Json entourage_to_json(const Entourage& e) {
  if (e.kind() == Entourage::Kind::radius) return Json{{"kind", "radius"}, {"r", e.r()}, {"closed", e.closed()}};
  Json pairs = Json::array();
  for (auto [a, b] : e.pairs()) pairs.push_back({a, b});
  return Json{{"kind", "pairs"}, {"pairs", pairs}};
}

Cover cover_from_json(const Json& j, const SpacePtr& space) {
  return guarded("cover", [&]() {
    Cover c;
    c.space = space;
    for (const auto& s : j.at("sets")) {
      IndexSet set = s.get<IndexSet>();
      normalize(set);
      c.sets.push_back(std::move(set));
    }
    if (j.contains("families") && !j.at("families").is_null())
      c.families = j.at("families").get<std::vector<std::vector<std::size_t>>>();
    if (j.contains("domain") && !j.at("domain").is_null()) {
      IndexSet d = j.at("domain").get<IndexSet>();
      normalize(d);
      c.domain = std::move(d);
    }
    check_well_formed(c);
    return c;
  });
}

Json cover_to_json(const Cover& c) {
  Json j;
  j["sets"] = c.sets;
  if (c.families) j["families"] = *c.families;
  if (c.domain) j["domain"] = *c.domain;
  return j;
}

Decomposition decomposition_from_json(const Json& j) {
  return guarded("decomposition", [&]() {
    auto blocks = j.at("blocks").get<std::vector<IndexSet>>();
    auto dims = j.at("dims").get<std::vector<std::size_t>>();
    SpacePtr space;
    if (j.contains("space")) {
      space = space_from_json(j.at("space"));
    } else {
      std::size_t n = 0;
      for (const auto& b : blocks)
        for (Index p : b) n = std::max<std::size_t>(n, std::size_t(p) + 1);
      space = std::make_shared<FunctionSpace>(n, [](Index a, Index b) { return a == b ? 0.0 : 1.0; }, "discrete");
    }
    std::optional<double> bound;
    if (j.contains("mesh_bound")) bound = j.at("mesh_bound").get<double>();
    return Decomposition(space, std::move(blocks), std::move(dims), bound);
  });
}

Matrix operator_from_json(const Json& j, const Decomposition* d) {
  return guarded("operator", [&]() {
    const auto dims = j.at("dims").get<std::vector<std::size_t>>();
    if (d && dims != d->dims()) throw InvalidInput("operator block dims do not match the decomposition");
    std::size_t total = 0;
    for (auto v : dims) total += v;
    const auto re = j.at("re").get<std::vector<std::vector<double>>>();
    std::vector<std::vector<double>> im;
    if (j.contains("im")) im = j.at("im").get<std::vector<std::vector<double>>>();
    if (re.size() != total || (!im.empty() && im.size() != total))
      throw InvalidInput("operator matrix must be " + std::to_string(total) + "x" + std::to_string(total));
    Matrix m = Matrix::Zero(Eigen::Index(total), Eigen::Index(total));
    for (std::size_t r = 0; r < total; ++r) {
      if (re[r].size() != total || (!im.empty() && im[r].size() != total))
        throw InvalidInput("operator row " + std::to_string(r) + " has the wrong length");
      for (std::size_t c = 0; c < total; ++c)
        m(Eigen::Index(r), Eigen::Index(c)) = std::complex<double>(re[r][c], im.empty() ? 0.0 : im[r][c]);
    }
    return m;
  });
}

Json operator_to_json(const Matrix& m, const std::vector<std::size_t>& dims) {
  Json re = Json::array(), im = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json rr = Json::array(), ii = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      rr.push_back(m(r, c).real());
      ii.push_back(m(r, c).imag());
    }
    re.push_back(std::move(rr));
    im.push_back(std::move(ii));
  }
  return Json{{"dims", dims}, {"re", re}, {"im", im}};
}

Vector vector_from_json(const Json& j) {
  return guarded("vector", [&]() {
    const auto re = j.at("re").get<std::vector<double>>();
    std::vector<double> im;
    if (j.contains("im")) im = j.at("im").get<std::vector<double>>();
    if (!im.empty() && im.size() != re.size()) throw InvalidInput("vector re/im lengths differ");
    Vector v(Eigen::Index(re.size()));
    for (std::size_t i = 0; i < re.size(); ++i) v(Eigen::Index(i)) = std::complex<double>(re[i], im.empty() ? 0.0 : im[i]);
    return v;
  });
}

CompactificationModel model_from_json(const Json& j) {
  return guarded("model", [&]() {
    const std::string kind = j.value("kind", std::string("explicit"));
    if (kind == "interval") return interval_model(j.at("steps").get<std::size_t>());
    if (kind == "disk") return disk_model(j.at("rings").get<std::size_t>(), j.at("per_ring").get<std::size_t>());
    if (kind == "explicit") return CompactificationModel(space_from_json(j.at("space")), j.at("corona").get<IndexSet>());
    throw InvalidInput("unknown model kind '" + kind + "'");
  });
}

ScheduleSpec schedule_from_json(const Json& j, unsigned depth) {
  return guarded("schedule", [&]() {
    const std::string corona = j.at("corona").get<std::string>();
    if (corona != "circle" && corona != "point") throw InvalidInput("unknown corona '" + corona + "'");
    CoronaCoverSchedule sched = corona == "circle" ? circle_schedule(j.at("points").get<std::size_t>()) : point_schedule();

    std::vector<double> delta(std::size_t(depth) + 1);
    const Json& dj = j.at("delta");
    if (dj.is_array()) {
      auto given = dj.get<std::vector<double>>();
      if (given.empty()) throw InvalidInput("delta list is empty");
      for (std::size_t m = 0; m < delta.size(); ++m) delta[m] = given[std::min(m, given.size() - 1)];
    } else if (dj.at("kind").get<std::string>() == "harmonic") {
      const double c = dj.at("c").get<double>();
      for (std::size_t m = 0; m < delta.size(); ++m) delta[m] = c / double(m + 1);
    } else {
      throw InvalidInput("unknown delta kind");
    }

    auto line = std::make_shared<GridSpace>(std::vector<double>{0.0}, std::vector<double>{double(depth)}, 1.0);
    const Json& ej = j.at("e_n");
    const std::string ek = ej.at("kind").get<std::string>();
    Entourage e_n;
    if (ek == "band")
      e_n = Entourage::radius(line, ej.at("width").get<double>(), true);
    else if (ek == "pairs")
      e_n = Entourage::from_pairs(line, pair_list(ej.at("pairs")), true);
    else
      throw InvalidInput("unknown e_n kind '" + ek + "'");
    return ScheduleSpec{std::move(sched), std::move(delta), std::move(e_n)};
  });
}

SimplicialComplex complex_from_json(const Json& j) {
  return guarded("complex", [&]() {
    SimplicialComplex k;
    k.vertex_count = j.at("vertices").get<std::size_t>();
    k.simplices = j.at("simplices").get<std::vector<std::vector<Index>>>();
    return k;
  });
}

}  // namespace coarse
