#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <functional>

#include "qproj/cli.hpp"

using namespace qproj::cli;

namespace {

const char* kSmall = R"(
name = "small"

[algebra]
generators = ["x", "y"]
relations = ["x*y-y*x"]
truncation = 5
)";

std::string with(const std::string& extra) { return std::string(kSmall) + extra; }

}  // namespace

TEST_CASE("manifest parsing") {
  Manifest m = parse_manifest(kSmall);
  CHECK(m.name == "small");
  CHECK(m.generators == std::vector<std::string>{"x", "y"});
  CHECK(m.degrees == std::vector<int>{1, 1});
  CHECK(m.truncation == 5);
  CHECK_FALSE(m.mf.has_value());

  Manifest f = parse_manifest(with(R"(
[matrix_factorization]
f = "x*y"
P = [["x"]]
Q = [["y"]]
mode = "pair"

[pipeline]
helix_window = [-1, 3]
nu = ["y", "x"]
)"));
  REQUIRE(f.mf.has_value());
  CHECK_FALSE(f.mf->squares);
  CHECK(f.pipeline.helix_window == std::make_pair(-1, 3));

  Manifest mm = parse_manifest(with(R"(
[module.M]
generator_degrees = [0]
relation_degrees = [1, 1]
matrix = [["x", "y"]]
)"));
  REQUIRE(mm.modules.size() == 1);
  CHECK(mm.modules[0].name == "M");
}

TEST_CASE("manifest rejections") {
  CHECK_THROWS_AS(parse_manifest(with("colour = 1\n")), UsageError);
  CHECK_THROWS_AS(parse_manifest(with("[pipeline]\nperiodd = 4\n")), UsageError);
  CHECK_THROWS_AS(parse_manifest(with("[central]\nelement = \"x*q\"\n")), UsageError);
  CHECK_THROWS_AS(parse_manifest(with("[construction]\nkind = \"magic\"\n")), UsageError);
  CHECK_THROWS_AS(parse_manifest(with("[automorphism]\nimages = [\"x\"]\n")), UsageError);
  CHECK_THROWS_AS(parse_manifest(with("[pipeline]\nhelix_window = [3, 1]\n")), UsageError);
  CHECK_THROWS_AS(parse_manifest("[algebra\n"), UsageError);
  CHECK_THROWS_AS(parse_manifest("name = \"no algebra\"\n"), UsageError);
  CHECK_THROWS_AS(parse_manifest(with("[module.M]\ngenerator_degrees = [0]\nrelation_degrees = [1]\nmatrix = "
                                      "[[\"x\", \"y\"]]\n")),
                  UsageError);
}

TEST_CASE("windows and digests") {
  CHECK(parse_window("-4..8") == std::make_pair(-4, 8));
  CHECK(parse_window("0..0") == std::make_pair(0, 0));
  CHECK_THROWS_AS(parse_window("3"), UsageError);
  CHECK_THROWS_AS(parse_window("5..1"), UsageError);
  CHECK_THROWS_AS(parse_window("a..b"), UsageError);
  CHECK(fnv1a_hex("") == "cbf29ce484222325");
  CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
}

TEST_CASE("running commands") {
  Manifest m = parse_manifest(kSmall);
  Outcome h = run("hilbert", m, {});
  CHECK(h.exit_code == exit_ok);
  CHECK(h.report["result"]["series"] == Json({1, 2, 3, 4, 5, 6}));
  CHECK(h.report["result"]["closed_form"] == "1/(1-t)^2");
  CHECK(h.report["certified_up_to_degree"] == 5);
  CHECK(h.report["manifest"]["digest"] == fnv1a_hex(m.text));

  Options o;
  o.truncation = 3;
  CHECK(run("hilbert", m, o).report["result"]["series"] == Json({1, 2, 3, 4}));

  CHECK(run("nonsense", m, {}).exit_code == exit_usage);
  CHECK(run("mf-verify", m, {}).exit_code == exit_usage);
  Options bad_field;
  bad_field.field = "r";
  CHECK(run("hilbert", m, bad_field).exit_code == exit_usage);
  Options missing;
  CHECK(run("veronese", m, missing).exit_code == exit_usage);
  Options r2;
  r2.args = {"r=2"};
  CHECK(run("veronese", m, r2).report["result"]["series"] == Json({1, 3, 5}));

  Outcome reg = run("regularity", m, {});
  CHECK(reg.exit_code == exit_ok);
  CHECK(reg.report["result"]["d"] == 2);
  CHECK(reg.report["result"]["ell"] == 2);

  Options p;
  p.field = "p:7";
  CHECK(run("hilbert", m, p).exit_code == exit_ok);
}

TEST_CASE("user modules and matrix factorizations") {
  Manifest m = parse_manifest(with(R"(
[central]
element = "x*y"
quotient = false

[matrix_factorization]
f = "x*y"
P = [["x"]]
Q = [["y"]]

[module.M]
generator_degrees = [0]
relation_degrees = [1]
matrix = [["x"]]
)"));
  CHECK(run("mf-verify", m, {}).exit_code == exit_ok);
  Options o;
  o.args = {"M", "X"};
  Outcome iso = run("iso", m, o);
  CHECK(iso.exit_code == exit_ok);
  CHECK(iso.report["result"]["isomorphic"] == true);
  o.args = {"X", "Y"};
  CHECK(run("iso", m, o).exit_code == exit_failed);
  o.args = {"M(1)"};
  Outcome res = run("resolve", m, o);
  CHECK(res.exit_code == exit_ok);
  CHECK(res.report["result"]["euler_identity"] == true);
  o.args = {"Z"};
  CHECK(run("resolve", m, o).exit_code == exit_usage);

  Manifest bad = parse_manifest(with(R"(
[matrix_factorization]
f = "x*y"
P = [["x"]]
Q = [["x"]]
)"));
  CHECK(run("mf-verify", bad, {}).exit_code == exit_failed);
}

TEST_CASE("emit") {
  Manifest m = parse_manifest(kSmall);
  Json rep = run("hilbert", m, {}).report;
  const std::string j = emit(rep, "json");
  CHECK(Json::parse(j) == rep);
  CHECK(j == emit(run("hilbert", m, {}).report, "json"));
  std::function<bool(const Json&)> has_float = [&](const Json& v) {
    if (v.is_number_float()) return true;
    if (v.is_structured())
      for (const auto& e : v)
        if (has_float(e)) return true;
    return false;
  };
  CHECK_FALSE(has_float(rep));
  const std::string t = emit(rep, "table");
  CHECK(t.find("closed_form") != std::string::npos);
  CHECK_THROWS_AS(emit(rep, "xml"), UsageError);
}
