#include "tsd/params_io.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

using namespace tsd;

TEST_CASE("TSD parameters round-trip through JSON") {
  const TsdParams p(0.1, 0.3, 1.0 / 3.0, 2.5, 0.7, 1e-3);
  auto j = parse_json(dump(to_json(p)));
  j.erase("family");
  const auto back = tsd_params_from_json(j);
  CHECK(back == p);
}

TEST_CASE("family shorthands") {
  CHECK(tsd_params_from_json(parse_json(R"({"family":"bgd","m1":1,"lambda1":1,"m2":1,"lambda2":2})")) == bgd(1, 1, 1, 2));
  CHECK(tsd_params_from_json(parse_json(R"({"family":"vgd","m":2,"lambda1":1,"lambda2":3})")) == vgd(2, 1, 3));
  CHECK(tsd_params_from_json(parse_json(R"({"family":"svgd","m":2,"lambda":3})")) == svgd(2, 3));
  CHECK(tsd_params_from_json(parse_json(R"({"lambda2":6,"alpha2":0.5,"m2":5,"lambda1":3,"alpha1":0.2,"m1":1})")) ==
        TsdParams(1, 0.2, 3, 5, 0.5, 6));
}

TEST_CASE("bad parameter documents are config errors") {
  CHECK_THROWS_AS(tsd_params_from_json(parse_json(R"({"m1":1,"alpha1":0.2,"lambda1":1,"m2":1,"alpha2":0.2,"lambda2":1,"x":0})")), ConfigError);
  CHECK_THROWS_AS(tsd_params_from_json(parse_json(R"({"m1":1,"alpha1":0.2})")), ConfigError);
  CHECK_THROWS_AS(tsd_params_from_json(parse_json(R"({"family":"svgd","m":1,"lambda":-1})")), ConfigError);
  CHECK_THROWS_AS(tsd_params_from_json(parse_json(R"({"family":"gamma","m":1})")), ConfigError);
  CHECK_THROWS_AS(tsd_params_from_json(parse_json(R"({"family":"svgd","m":"1","lambda":1})")), ConfigError);
  CHECK_THROWS_AS(parse_json("{not json"), ConfigError);
  CHECK_THROWS_AS(stable_params_from_json(parse_json(R"({"m1":1,"m2":1,"alpha":0.3,"beta":0})")), ConfigError);
}

TEST_CASE("doubles are written with 17 significant digits and read back exactly") {
  const double values[] = {0.1, 1.0 / 3.0, 2.0 / 3.0, 1e-300, 6.02214076e23, -0.0, 5.0};
  for (double v : values) {
    const auto text = dump(Json{{"v", v}}, 0);
    CHECK(parse_json(text)["v"].get<double>() == v);
  }
  CHECK(dump(Json{{"v", 0.1}}, 0) == R"({"v":0.10000000000000001})");
  CHECK(dump(Json{{"v", 2.0}}, 0) == R"({"v":2.0})");
  CHECK(dump(Json{{"v", std::numeric_limits<double>::quiet_NaN()}}, 0) == R"({"v":null})");
  CHECK(dump(Json{{"n", 3}}, 0) == R"({"n":3})");
}

TEST_CASE("CSV has a header row and LF line endings") {
  const auto csv = to_csv({"x", "y"}, {{0.1, 2.0}, {-1.5, 1e-20}});
  CHECK(csv == "x,y\n0.10000000000000001,2\n-1.5,9.9999999999999995e-21\n");
  CHECK(csv.find('\r') == std::string::npos);
}

TEST_CASE("atomic writes and the output directory override") {
  const auto dir = std::filesystem::temp_directory_path() / "tsd_params_io_test";
  std::filesystem::remove_all(dir);
  ::setenv("TSD_OUTPUT_DIR", dir.c_str(), 1);
  const auto path = output_path("sub/report.json");
  CHECK(path == dir / "sub/report.json");
  write_atomic(path, "first");
  write_atomic(path, "second");
  std::ifstream in(path);
  std::stringstream s;
  s << in.rdbuf();
  CHECK(s.str() == "second");
  CHECK_FALSE(std::filesystem::exists(path.string() + ".tmp"));
  CHECK(output_path("/abs/file") == std::filesystem::path("/abs/file"));
  ::unsetenv("TSD_OUTPUT_DIR");
  CHECK(output_path("x.json") == std::filesystem::path("x.json"));
  std::filesystem::remove_all(dir);
}
