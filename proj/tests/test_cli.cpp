#include <doctest.h>

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "latrule/cli.hpp"
#include "latrule/lattice.hpp"
#include "latrule/zaremba.hpp"

using namespace latrule;
using nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> data_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line))
    if (!line.empty() && line[0] != '#') lines.push_back(line);
  return lines;
}

}  // namespace

TEST_CASE("points round trip") {
  auto r = run({"points", "--family", "rank1", "--n", "4", "--gen", "1", "--dim", "2"});
  REQUIRE(r.code == cli::kOk);
  auto lines = data_lines(r.out);
  REQUIRE(lines.size() == 5);
  CHECK(lines[0] == "x1,x2");
  CHECK(lines[2] == "0.25,0.25");

  auto k = run({"points", "--family", "kronecker", "--n", "21", "--alpha", "golden"});
  REQUIRE(k.code == cli::kOk);
  auto klines = data_lines(k.out);
  PointSet ps = enumerate_points(LatticeSpec::kronecker(21, {CertifiedReal::golden_ratio()}));
  REQUIRE(klines.size() == ps.size() + 1);
  for (std::size_t i = 0; i < ps.size(); ++i) {
    double x = 0, y = 0;
    REQUIRE(std::sscanf(klines[i + 1].c_str(), "%lf,%lf", &x, &y) == 2);
    CHECK(x == doctest::Approx(static_cast<double>(ps.coordinate(i, 0))).epsilon(1e-15));
    CHECK(y == doctest::Approx(static_cast<double>(ps.coordinate(i, 1))).epsilon(1e-15));
  }
}

TEST_CASE("zaremba round trip") {
  auto r = run({"zaremba", "--family", "rank1", "--n", "5", "--gen", "2", "--dim", "2"});
  REQUIRE(r.code == cli::kOk);
  json j = json::parse(r.out);
  CHECK(j["rho"] == 2);
  CHECK(j["rho_exact"] == "2");
  CHECK(j["exact"] == true);
  CHECK(j["method"] == "index");

  auto b = run({"zaremba", "--family", "rank1", "--n", "144", "--gen", "89", "--brute"});
  REQUIRE(b.code == cli::kOk);
  json jb = json::parse(b.out);
  CHECK(jb["rho"] == 55);
  CHECK(jb["method"] == "brute");

  auto g = run({"zaremba", "--family", "kronecker", "--n", "1000", "--alpha", "golden"});
  REQUIRE(g.code == cli::kOk);
  json jg = json::parse(g.out);
  auto direct = zaremba_index(LatticeSpec::kronecker(1000, {CertifiedReal::golden_ratio()}));
  CHECK(jg["rho"].get<double>() == static_cast<double>(direct.rho));
  CHECK(jg["rho_exact"].is_null());
}

TEST_CASE("cfrac output") {
  auto r = run({"cfrac", "--rational", "3/5"});
  REQUIRE(r.code == cli::kOk);
  json j = json::parse(r.out);
  CHECK(j["canonical"]["expansion"] == "[0; 1, 1, 2]");
  CHECK(j["canonical"]["K"] == "2");
  CHECK(j["variant"]["expansion"] == "[0; 1, 1, 1, 1]");
  CHECK(j["variant"]["K"] == "1");
  CHECK(j["convergents"].size() == 3);

  auto s = run({"cfrac", "--real", "sqrt2", "--depth", "4"});
  REQUIRE(s.code == cli::kOk);
  json js = json::parse(s.out);
  CHECK(js["convergents"][0]["p"] == "3");
  CHECK(js["convergents"][3]["q"] == "29");
}

TEST_CASE("census, bound, converge and search") {
  auto c = run({"dyadic-census", "--family", "rank1", "--n", "5", "--gen", "2", "--mmax", "3"});
  REQUIRE(c.code == cli::kOk);
  auto cl = data_lines(c.out);
  CHECK(cl[0] == "m1,m2,|m|1,count,bound");
  CHECK(cl.size() == 11);

  auto b = run({"bound", "--family", "rank1", "--n", "144", "--gen", "89", "--s", "2", "--p", "2", "--theta", "2"});
  REQUIRE(b.code == cli::kOk);
  json jb = json::parse(b.out);
  CHECK(jb["rho"] == 55);
  CHECK(jb["bound_sum"].get<double>() > 0);
  CHECK(jb["Mmax"] == 23);

  auto v = run({"converge", "--rule", "fibonacci", "--integrand", "bump:2", "--nmin", "8", "--nmax", "14"});
  REQUIRE(v.code == cli::kOk);
  auto vl = data_lines(v.out);
  CHECK(vl.size() == 8);
  CHECK(v.out.find("# slope=") != std::string::npos);

  auto s = run({"search-gen", "--n", "5", "--dim", "2", "--mode", "full"});
  REQUIRE(s.code == cli::kOk);
  auto sl = data_lines(s.out);
  REQUIRE(sl.size() == 2);
  CHECK(sl[0] == "g1,rho,witness1,witness2");
  CHECK(sl[1].rfind("2,2,", 0) == 0);
}

TEST_CASE("output is independent of the thread count") {
  std::vector<std::string> base{"dyadic-census", "--family", "rank1", "--n", "377", "--gen", "233", "--mmax", "10"};
  auto one = base, four = base;
  one.insert(one.begin(), {"--threads", "1"});
  four.insert(four.begin(), {"--threads", "4"});
  CHECK(run(one).out == run(four).out);
  std::vector<std::string> z{"zaremba", "--family", "kronecker", "--n", "500", "--alpha", "sqrtprimes:2,3"};
  auto z1 = z, z4 = z;
  z1.insert(z1.begin(), {"--threads", "1"});
  z4.insert(z4.begin(), {"--threads", "4"});
  CHECK(run(z1).out == run(z4).out);
}

TEST_CASE("output file") {
  const std::string path = "cli_test_points.csv";
  auto r = run({"--output", path, "points", "--family", "rank1", "--n", "4", "--gen", "1"});
  REQUIRE(r.code == cli::kOk);
  CHECK(r.out.empty());
  std::ifstream in(path);
  std::stringstream buf;
  buf << in.rdbuf();
  CHECK(data_lines(buf.str()).size() == 5);
  std::remove(path.c_str());
}

TEST_CASE("exit codes") {
  CHECK(run({}).code == cli::kInvalidArgument);
  CHECK(run({"bogus"}).code == cli::kInvalidArgument);
  CHECK(run({"--help"}).code == cli::kOk);
  CHECK(run({"--version"}).code == cli::kOk);
  CHECK(run({"zaremba", "--family", "rank1", "--n", "0", "--gen", "1"}).code == cli::kInvalidArgument);
  CHECK(run({"cfrac", "--rational", "1/0"}).code == cli::kInvalidArgument);
  CHECK(run({"cfrac"}).code == cli::kInvalidArgument);
  CHECK(run({"search-gen", "--n", "100", "--dim", "5", "--mode", "full"}).code == cli::kResourceLimit);
  CHECK(run({"converge", "--rule", "fibonacci", "--integrand", "bump:2", "--nmin", "8", "--nmax", "9"}).code ==
        cli::kInvalidArgument);
  auto bad = run({"points", "--family", "rank1", "--n", "5"});
  CHECK(bad.code == cli::kInvalidArgument);
  CHECK(bad.err.find("--gen") != std::string::npos);
}
