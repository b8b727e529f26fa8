#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "bbl/errors.hpp"
#include "bbl/io.hpp"

using namespace bbl;
namespace fs = std::filesystem;

namespace {

ParseError literal_error(const std::string& text) {
  try {
    io::parse_set_literal(text);
  } catch (const ParseError& e) {
    return e;
  }
  FAIL("no parse error for " << text);
  return ParseError("", 0, 0);
}

}  // namespace

TEST_CASE("set literals") {
  const io::SetLiteral b = io::parse_set_literal("box:0,0,1,2");
  CHECK(b.kind == io::SetLiteral::Kind::box);
  CHECK(b.args == std::vector<double>{0, 0, 1, 2});
  const io::SetLiteral d = io::parse_set_literal("disk:0.5,-1e-1,2");
  CHECK(d.kind == io::SetLiteral::Kind::disk);
  CHECK(d.args[1] == -0.1);
  CHECK(io::parse_set_literal("ball:1,0,0.5").kind == io::SetLiteral::Kind::ball);
  const io::SetLiteral f = io::parse_set_literal("file:some/where.csv");
  CHECK(f.kind == io::SetLiteral::Kind::file);
  CHECK(f.path == "some/where.csv");

  CHECK(literal_error("box:0,0,x,1").column() == 9);
  CHECK(literal_error("cube:0,1").column() == 1);
  CHECK(literal_error("box:0,1,2").line() == 1);
  CHECK_THROWS_AS(io::parse_set_literal("disk:0,0,-1"), ParseError);
  CHECK_THROWS_AS(io::parse_set_literal("box:1,0"), ParseError);
  CHECK_THROWS_AS(io::parse_set_literal("box:0,0,0,0,0,0,1,1,1,1,1,1"), ParseError);
}

TEST_CASE("literal rasterization and bounds") {
  const GridPtr G = Grid::euclidean(2, {0, 0, 0}, 0.25, {8, 8, 1});
  const DiscreteSet A = io::rasterize(io::parse_set_literal("box:0,0,1,0.5"), G);
  CHECK(A.size() == 8);
  std::vector<double> lo, hi;
  io::literal_bounds(io::parse_set_literal("disk:1,2,0.5"), lo, hi);
  CHECK(lo == std::vector<double>{0.5, 1.5});
  CHECK(hi == std::vector<double>{1.5, 2.5});
}

TEST_CASE("grid CSV round trip") {
  const fs::path dir = fs::temp_directory_path() / "bbl_io_test";
  fs::create_directories(dir);
  for (const GridPtr& G : {Grid::euclidean(2, {-1, 0.5, 0}, 0.125, {5, 3, 1}),
                           Grid::sphere(ModelSpace::sphere(2, 4), 6, 8),
                           Grid::hyperbolic_polar(ModelSpace::hyperbolic(2, -1), 1.5, 4, 6)}) {
    std::vector<double> v(G->size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = i % 3 ? 0.1 * i + 1.0 / 3 : 0;
    const std::string path = (dir / "grid.csv").string();
    io::write_grid_csv(path, *G, v);
    CHECK(fs::exists(io::header_path(path)));
    const io::GridFile back = io::read_grid_csv(path);
    CHECK(back.values == v);
    CHECK(back.grid->same_layout(*G));
    CHECK(back.grid->space() == G->space());
  }
  fs::remove_all(dir);
  CHECK(io::header_path("a/b.csv") == "a/b.json");
}

TEST_CASE("grid CSV errors carry positions") {
  const GridPtr G = Grid::euclidean(2, {0, 0, 0}, 1, {3, 2, 1});
  const io::json header = io::grid_header(*G);
  {
    std::istringstream in("1,2,3\n4,oops,6\n");
    try {
      io::parse_grid_csv(in, header);
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.line() == 2);
      CHECK(e.column() == 3);
    }
  }
  {
    std::istringstream in("1,2,3\n4,5\n");
    CHECK_THROWS_AS(io::parse_grid_csv(in, header), ParseError);
  }
  {
    std::istringstream in("1,2,3\n");
    CHECK_THROWS_AS(io::parse_grid_csv(in, header), ParseError);
  }
  {
    std::istringstream in("1,2,3\n4,-5,6\n");
    CHECK_THROWS(io::parse_grid_csv(in, header));
  }
  std::istringstream ok("1,2,3\n4,5,6\n");
  CHECK(io::parse_grid_csv(ok, header).values == std::vector<double>{1, 2, 3, 4, 5, 6});
}

TEST_CASE("json parse errors carry positions") {
  try {
    io::parse_json("{\n  \"a\": 1,\n  \"b\": ]\n}");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
    CHECK(e.column() == 8);
  }
  CHECK(io::parse_json("[1, 2]").size() == 2);
}

TEST_CASE("doubles keep 17 significant digits") {
  CHECK(io::format_double(0.1) == "0.10000000000000001");
  CHECK(io::format_double(1.0) == "1");
  const double x = 0.11438191683587326;
  CHECK(std::stod(io::format_double(x)) == x);
  const std::string s = io::dump(io::json{{"a", 1.0 / 3}, {"b", INFINITY}, {"c", NAN}}, -1);
  CHECK(s.find("0.33333333333333331") != std::string::npos);
  CHECK(s.find("\"inf\"") != std::string::npos);
  CHECK(s.find("\"nan\"") != std::string::npos);
}

TEST_CASE("clouds and spaces round trip") {
  const ModelSpace S = ModelSpace::sphere(2, 2);
  CHECK(io::space_from_json(io::space_json(S)) == S);
  const WeightedCloud c = uniform_cloud(S, {S.from_polar(0.3, 1), S.from_polar(1, 2)});
  const WeightedCloud back = io::cloud_from_json(io::parse_json(io::dump(io::cloud_json(c))));
  REQUIRE(back.size() == 2);
  // points are renormalized onto the model on input
  for (int k = 0; k < 3; ++k) CHECK(back.points[1][k] == doctest::Approx(c.points[1][k]).epsilon(1e-15));
  CHECK(back.masses == c.masses);
  CHECK_THROWS(io::space_from_json(io::parse_json("{\"kind\": \"torus\", \"n\": 2}")));
}
