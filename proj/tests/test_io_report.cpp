#include <catch_amalgamated.hpp>

#include <filesystem>

#include "coarse/errors.hpp"
#include "coarse/io.hpp"
#include "coarse/report.hpp"
#include "coarse/witnesses.hpp"

using namespace coarse;

TEST_CASE("fnv1a64 known vectors") {
  CHECK(hex64(fnv1a64("")) == "cbf29ce484222325");
  CHECK(hex64(fnv1a64("a")) == "af63dc4c8601ec8c");
  CHECK(hex64(fnv1a64("foobar")) == "85944171f73967e8");
}

TEST_CASE("spaces round-trip through JSON") {
  std::vector<Json> specs{
      Json::parse(R"({"kind":"grid","dim":2,"min":[0,0],"max":[3,2],"step":0.5})"),
      Json::parse(R"({"kind":"tree","edges":[[0,1],[1,2],[1,3]]})"),
      Json::parse(R"({"kind":"hyperbolic_polar","kappa":-1,"points":[[0,0],[1,0.5],[2,3]]})"),
      Json::parse(R"({"kind":"euclidean","points":[[0,0],[3,4]]})"),
      Json::parse(R"({"kind":"matrix","dist":[[0,1,2],[1,0,1],[2,1,0]]})"),
  };
  for (const auto& j : specs) {
    SpacePtr s = space_from_json(j);
    SpacePtr back = space_from_json(space_to_json(*s));
    REQUIRE(back->size() == s->size());
    CHECK(back->kind() == s->kind());
    for (Index a = 0; a < s->size(); ++a)
      for (Index b = 0; b < s->size(); ++b) CHECK(back->dist(a, b) == Catch::Approx(s->dist(a, b)).margin(1e-12));
  }
}

TEST_CASE("malformed inputs are invalid") {
  CHECK_THROWS_AS(parse_json("{", "test"), InvalidInput);
  CHECK_THROWS_AS(space_from_json(Json::parse(R"({"kind":"blob"})")), InvalidInput);
  CHECK_THROWS_AS(space_from_json(Json::parse(R"({"kind":"grid","min":[0],"max":"x","step":1})")), InvalidInput);
  CHECK_THROWS_AS(space_from_json(Json::parse(R"({"kind":"matrix","dist":[[0,1],[2,0]]})")), InvalidInput);
  CHECK_THROWS_AS(read_text_file("/nonexistent/coarse.json"), InvalidInput);
  SpacePtr s = space_from_json(Json::parse(R"({"kind":"grid","min":[0],"max":[4],"step":1})"));
  CHECK_THROWS_AS(cover_from_json(Json::parse(R"({"sets":[[0,9]]})"), s), InvalidInput);
  CHECK_THROWS_AS(entourage_from_json(Json::parse(R"({"kind":"pairs","pairs":[[0,7]]})"), s), InvalidInput);
  CHECK_THROWS_AS(operator_from_json(Json::parse(R"({"dims":[1,1],"re":[[1,0]]})")), InvalidInput);
}

TEST_CASE("covers and entourages round-trip") {
  auto g = std::make_shared<GridSpace>(std::vector<double>{0, 0}, std::vector<double>{6, 6}, 1.0);
  TransformResult r = cube_cover(g, 12.0);
  Cover back = cover_from_json(cover_to_json(r.cover), g);
  CHECK(back.sets == r.cover.sets);
  CHECK(back.families == r.cover.families);
  CHECK(back.domain == r.cover.domain);

  Entourage e = entourage_from_json(Json::parse(R"({"kind":"pairs","pairs":[[0,1],[2,3]]})"), g);
  CHECK(e.contains(1, 0));
  CHECK(e.contains(3, 2));
  Entourage rt = entourage_from_json(entourage_to_json(e), g);
  CHECK(rt.pairs() == e.pairs());
  Entourage closed = entourage_from_json(Json::parse(R"({"kind":"radius","r":1,"closed":true})"), g);
  CHECK(closed.contains(0, 1));
  CHECK_FALSE(entourage_from_json(Json::parse(R"({"kind":"radius","r":1})"), g).contains(0, 1));
}

TEST_CASE("operators and decompositions load") {
  Decomposition d = decomposition_from_json(Json::parse(R"({"blocks":[[0],[1,2]],"dims":[1,2]})"));
  CHECK(d.total_dim() == 3);
  Matrix m = operator_from_json(
      Json::parse(R"({"dims":[1,2],"re":[[1,0,0],[0,1,0],[0,0,1]],"im":[[0,2,0],[0,0,0],[0,0,0]]})"), &d);
  CHECK(m(0, 1) == std::complex<double>(0, 2));
  Matrix back = operator_from_json(operator_to_json(m, d.dims()), &d);
  CHECK((back - m).norm() == 0.0);
  CHECK_THROWS_AS(operator_from_json(Json::parse(R"({"dims":[3],"re":[[1,0,0],[0,1,0],[0,0,1]]})"), &d),
                  InvalidInput);
}

TEST_CASE("files round-trip") {
  const auto path = std::filesystem::temp_directory_path() / "coarse_io_test.json";
  write_text_file(path.string(), "{\"a\": 1}");
  CHECK(parse_json(read_text_file(path.string()), "file")["a"] == 1);
  std::filesystem::remove(path);
}

TEST_CASE("report layout and verdict") {
  Report r;
  r.command = {"cover", "stats"};
  r.add_input("c.json", "");
  r.absorb("stats", {check_le("multiplicity", 2, 3), check_true("covers", true)});
  Json j = report_json(r);
  CHECK(j["inputs"]["c.json"] == "fnv1a64:cbf29ce484222325");
  CHECK(j["guarantees"].size() == 2);
  CHECK(j["guarantees"][0]["name"] == "stats/multiplicity");
  CHECK(j["pass"] == true);
  CHECK_FALSE(j.contains("wall_seconds"));
  std::vector<std::string> keys;
  for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
  CHECK(keys == std::vector<std::string>{"command", "inputs", "result", "guarantees", "pass"});
  CHECK(report_summary(r).find("ok: 2 guarantees") != std::string::npos);

  r.absorb("stats", {check_true("covers", false)});
  CHECK_THROWS_AS(report_json(r), InternalError);
  CHECK_FALSE(r.pass());
}

TEST_CASE("infinite values serialize as strings") {
  CHECK(number(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(number(1.5) == 1.5);
}
