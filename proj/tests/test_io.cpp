#include <doctest.h>

#include <hardy/io.hpp>
#include <hardy/solve.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "support.hpp"

using namespace hardy;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / "hardy_io_test";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("doubles round trip through text") {
  test::Gen g(71);
  for (int i = 0; i < 1000; ++i) {
    double x = g.uniform(-1, 1) * std::pow(10.0, g.integer(-300, 300));
    CHECK(std::strtod(format_double(x).c_str(), nullptr) == x);
  }
  CHECK(format_double(0.25) == "0.25");
}

TEST_CASE("csv layout") {
  auto p = scratch("t.csv");
  write_csv(p, {"a", "b"}, {{1, 0.5}, {2, 1.0 / 3.0}});
  CHECK(slurp(p) == "a,b\n1,0.5\n2,0.33333333333333331\n");
}

TEST_CASE("json for results") {
  auto d = Domain::interval(1);
  auto pr = validate_params(2, 0, 0);
  Assembler a(pr, d, test::mesh_ptr(d, 64, 0.7));
  auto r = minimize_p2(a);
  auto j = to_json(r);
  CHECK(j["j_value"].get<double>() == r.j_value);
  CHECK(j["converged"].get<bool>());
  auto p = scratch("r.json");
  write_json(p, j);
  auto text = slurp(p);
  CHECK(text.back() == '\n');
  CHECK(Json::parse(text) == j);
  auto m = to_json(*a.mesh());
  CHECK(m["n_elements"].get<std::size_t>() == 64);
}
