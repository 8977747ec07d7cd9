#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "motzkin/cli.hpp"

using namespace motzkin;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = cli::run_command(args, out, err);
  return {code, out.str(), err.str()};
}

Json json_of(const Run& r) { return Json::parse(r.out); }

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("motzkin_cli_test_" + name)).string();
}

}  // namespace

TEST(Cli, DimsTable) {
  auto r = run({"dims", "--n", "4", "--kmax", "5"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "1,3,8,21,55,144\n");
  auto r3 = run({"dims", "--n", "3", "--kmax", "5"});
  EXPECT_EQ(r3.out, "1,2,3,4,5,6\n");
  auto j = json_of(run({"dims", "--n", "4", "--kmax", "3", "--format", "json"}));
  EXPECT_EQ(j["motzkin_basis"], Json::parse("[1,2,9,51]"));
}

TEST(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"dims", "--n", "four"}).code, 2);
  EXPECT_EQ(run({"dims", "--format", "xml"}).code, 2);
  EXPECT_EQ(run({"fock", "teleport"}).code, 2);
  EXPECT_EQ(run({"presentation", "--k", "3", "--lambda", "1/0"}).code, 2);
  auto bad = run({"eval", "t1 *", "--k", "2"});
  EXPECT_EQ(bad.code, 2);
  EXPECT_NE(bad.err.find("offset 4"), std::string::npos);
  EXPECT_EQ(run({"pair", "make", "--family", "iii", "--n", "6", "--r", "1", "--lambda", "1/5"}).code, 2);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(Cli, PresentationAndJonesWenzl) {
  auto r = run({"presentation", "--k", "3", "--lambda", "1/3"});
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(json_of(r)["passed"].get<bool>());
  auto jw = run({"jw", "--k", "3", "--lambda", "1/4", "--export"});
  EXPECT_EQ(jw.code, 0);
  auto j = json_of(jw);
  EXPECT_EQ(element_from_json(j["element"]), jones_wenzl(3, Rational(1, 4)));
}

TEST(Cli, EvalExactZero) {
  auto r = run({"eval", "t1*t1 - t1", "--k", "2"});
  EXPECT_EQ(r.code, 0);
  auto j = json_of(r);
  EXPECT_TRUE(j["is_zero"].get<bool>());
  EXPECT_TRUE(j["result"]["terms"].empty());

  auto nonzero = run({"eval", "t1", "--k", "2"});
  EXPECT_EQ(nonzero.code, 0);
  EXPECT_FALSE(json_of(nonzero)["is_zero"].get<bool>());
  EXPECT_EQ(run({"eval", "t1", "--k", "2", "--expect-zero"}).code, 1);
  EXPECT_EQ(run({"eval", "t1*t2*t1 - 1/9*t1", "--k", "3", "--expect-zero"}).code, 0);
}

TEST(Cli, EvalRepresentationMode) {
  auto r = run({"eval", "p1*p1 - p1", "--k", "2", "--mode", "rep", "--n", "4", "--r", "1", "--lambda", "1/4",
                "--expect-zero"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_LT(json_of(r)["result"]["frobenius_norm"].get<double>(), 1e-12);
  auto g = run({"eval", "g2*p1", "--k", "2", "--mode", "rep", "--n", "3", "--family", "i", "--lambda", "1/3",
                "--expect-zero"});
  EXPECT_EQ(g.code, 0) << g.err;
}

TEST(Cli, PairMakeValidateRoundTrip) {
  auto made = run({"pair", "make", "--family", "iii", "--n", "4", "--r", "1", "--lambda", "1/4"});
  ASSERT_EQ(made.code, 0);
  auto path = temp_path("pair.json");
  {
    std::ofstream f(path);
    f << made.out;
  }
  auto v = run({"pair", "validate", "--pair", path});
  EXPECT_EQ(v.code, 0) << v.out;
  // a broken pair fails validation
  auto j = json_of(made);
  j["b"][0] = Json::array({1.0, 0.0});
  {
    std::ofstream f(path);
    f << j.dump();
  }
  EXPECT_EQ(run({"pair", "validate", "--pair", path}).code, 1);
  std::filesystem::remove(path);
  EXPECT_EQ(run({"pair", "validate", "--pair", temp_path("missing.json")}).code, 2);
}

TEST(Cli, ExplicitEntries) {
  auto p = build_example_pair(PairFamily::I, 3, 0, Rational(1, 3));
  std::vector<std::string> args = {"pair", "validate", "--n", "3", "--lambda", "1/3", "--a"};
  for (const auto& z : p.a) args.push_back(std::to_string(z.real()) + ":" + std::to_string(z.imag()));
  args.push_back("--b");
  for (const auto& z : p.b) args.push_back(std::to_string(z.real()));
  // six printed digits are not enough for 1e-12, so loosen the tolerance
  args.insert(args.end(), {"--tol", "1e-5"});
  EXPECT_EQ(run(args).code, 0);
  EXPECT_EQ(run({"pair", "validate", "--n", "3", "--a", "1", "--b", "1"}).code, 2);
  EXPECT_EQ(run({"pair", "validate", "--n", "1", "--a", "x", "--b", "1"}).code, 2);
}

TEST(Cli, RepresentationCommands) {
  EXPECT_EQ(run({"rep", "check", "--n", "3", "--family", "i", "--lambda", "1/3", "--k", "3"}).code, 0);
  auto f = run({"rep", "faithful", "--n", "4", "--r", "1", "--lambda", "1/4", "--k", "2"});
  EXPECT_EQ(f.code, 0);
  EXPECT_EQ(json_of(f)["span_dimension"], 9);
}

TEST(Cli, FockCommands) {
  EXPECT_EQ(run({"fock", "toeplitz", "--n", "4", "--r", "1", "--lambda", "1/4", "--levels", "5", "--tol", "1e-9"}).code,
            0);
  auto b = run({"fock", "build", "--n", "4", "--lambda", "1/4", "--levels", "3", "--matrix-units", "--format", "csv"});
  EXPECT_EQ(b.code, 0);
  EXPECT_EQ(b.out,
            "k,dim_H,rank_G,dim_H_squared,matrix_unit_dim\n0,1,1,1,1\n1,3,3,9,9\n2,8,8,64,64\n3,21,21,441,441\n");
  EXPECT_EQ(run({"fock", "matrix-units", "--n", "4", "--lambda", "1/4", "--k", "2"}).code, 0);
  auto rev = json_of(run({"fock", "reverse", "--n", "3", "--family", "i", "--lambda", "1/3", "--levels", "3"}));
  EXPECT_EQ(rev["rows"][0]["coefficient"], "1/2");
  EXPECT_EQ(run({"fock", "ideal", "--n", "4", "--lambda", "1/4"}).code, 0);
  auto cp = run({"fock", "cp-asymptotics", "--n", "4", "--lambda", "1/4", "--levels", "6"});
  EXPECT_EQ(cp.code, 0);
  EXPECT_EQ(json_of(cp)["rows"].size(), 5u);
  // a non-generic truncation is refused cleanly
  EXPECT_EQ(run({"fock", "toeplitz", "--n", "4", "--lambda", "1/2", "--levels", "3"}).code, 2);
}

TEST(Cli, DeterministicOutput) {
  const std::vector<std::vector<std::string>> commands = {
      {"fock", "toeplitz", "--n", "4", "--lambda", "1/4", "--levels", "4"},
      {"jw", "--k", "3", "--export"},
      {"basis", "--k", "3"},
      {"pair", "make", "--n", "5", "--r", "2", "--lambda", "1/5"},
  };
  for (const auto& c : commands) {
    auto a = run(c), b = run(c);
    EXPECT_EQ(a.out, b.out);
    EXPECT_FALSE(a.out.empty());
  }
  auto j = run({"fock", "reverse", "--n", "4", "--lambda", "1/4", "--levels", "3"}).out;
  EXPECT_NE(j.find("e-"), std::string::npos);
  EXPECT_EQ(j.find(' '), std::string::npos);
}

TEST(Cli, WritesToOutPath) {
  auto path = temp_path("dims.csv");
  auto r = run({"dims", "--n", "4", "--kmax", "2", "--out", path});
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());
  std::ifstream f(path);
  std::string line;
  std::getline(f, line);
  EXPECT_EQ(line, "1,3,8");
  std::filesystem::remove(path);
}

TEST(Json, SortedKeysAndFixedFloats) {
  Json j{{"b", 1.5}, {"a", Json::array({1, "x", true, nullptr})}, {"c", 1e300 * 1e300}};
  EXPECT_EQ(dump_json(j), R"({"a":[1,"x",true,null],"b":1.500000000000e+00,"c":null})");
}

TEST(Json, PairRoundTrip) {
  auto p = build_example_pair(PairFamily::III, 5, 2, Rational(1, 5));
  auto q = pair_from_json(Json::parse(dump_json(to_json(p))));
  EXPECT_EQ(q.n, p.n);
  EXPECT_EQ(q.lambda, p.lambda);
  for (int i = 0; i < p.n; ++i) {
    EXPECT_NEAR(std::abs(q.a[i] - p.a[i]), 0, 1e-11);
    EXPECT_NEAR(std::abs(q.b[i] - p.b[i]), 0, 1e-11);
  }
  EXPECT_THROW(pair_from_json(Json::parse(R"({"n":2})")), ParameterError);
}

TEST(Json, ElementRoundTrip) {
  auto g = jones_wenzl(3, Rational(1, 3));
  EXPECT_EQ(element_from_json(Json::parse(dump_json(to_json(g)))), g);
  EXPECT_THROW(element_from_json(Json::parse(R"({"width":2})")), DomainError);
}
