#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <locale>
#include <sstream>

#include "dsa/io/config.hpp"
#include "dsa/io/csv.hpp"
#include "dsa/io/run.hpp"

using namespace dsa;
using namespace dsa::io;

namespace {

std::string config_path(const std::string& stem) { return std::string(DSA_CONFIG_DIR) + "/" + stem + ".json"; }

std::string config_error(const std::string& text) {
  try {
    parse_config(text);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::config);
    return e.what();
  }
  FAIL("expected a config error for: " << text);
  return {};
}

struct CommaDecimal : std::numpunct<char> {
  char do_decimal_point() const override { return ','; }
  char do_thousands_sep() const override { return '.'; }
  std::string do_grouping() const override { return "\3"; }
};

bool contains(const std::string& s, const std::string& part) { return s.find(part) != std::string::npos; }

}  // namespace

TEST_CASE("parse a valid config") {
  auto c = parse_config(R"({
    "command": "classify",
    "potential": {"family": "geometric", "V": 1},
    "comparison": {"family": "constant", "V": 1},
    "range": [1, 420],
    "tol": 1e-9
  })");
  REQUIRE(c.command.has_value());
  CHECK(*c.command == Command::classify);
  CHECK(c.potential == PotentialSpec::geometric(1.0, 1.0, true));
  REQUIRE(c.comparison.has_value());
  CHECK(*c.comparison == PotentialSpec::constant(1.0));
  CHECK(c.lo == 1);
  CHECK(c.hi == 420);
  CHECK(c.tol == 1e-9);
  CHECK(c.digest.size() == 16);

  auto s = parse_config(R"({"potential": {"family": "shifted", "base": {"family": "threshold", "alpha": 1}, "E": 0.5},
                            "range": [1, 10], "seed": [1, 2]})");
  CHECK(!s.command.has_value());
  CHECK(s.potential(3) == PotentialSpec::threshold(1.0)(3) - 0.5);
  REQUIRE(s.seed.has_value());
  CHECK((*s.seed)[1] == 2.0);

  auto sp = parse_config(R"({"potential": {"family": "sparse", "base": {"family": "constant", "V": 1},
                             "powers_of_two": {"W": 0.5, "max_exponent": 4}}, "range": [1, 20]})");
  CHECK(sp.potential(16) == doctest::Approx(1.0 + 0.5 / 256.0));

  auto r = parse_config(R"({"potential": {"family": "random", "low": 0.5, "high": 3, "seed": 11, "length": 20},
                            "range": [1, 10]})");
  REQUIRE(r.random_seeds.size() == 1);
  CHECK(r.random_seeds[0] == 11);
}

TEST_CASE("config errors name the offending field") {
  auto range = config_error(R"({"potential": {"family": "constant", "V": 1}, "range": [5, 4]})");
  CHECK(contains(range, "range"));
  auto fam = config_error(R"({"potential": {"family": "quartic"}, "range": [1, 4]})");
  CHECK(contains(fam, "potential.family"));
  CHECK(contains(fam, "quartic"));
  auto unknown = config_error(R"({"potential": {"family": "constant", "V": 1, "Vee": 2}, "range": [1, 4]})");
  CHECK(contains(unknown, "potential.Vee"));
  auto top = config_error(R"({"potential": {"family": "constant", "V": 1}, "range": [1, 4], "colour": 1})");
  CHECK(contains(top, "colour"));
  auto syntax = config_error("{\n  \"potential\": {\"family\": \"constant\", \"V\": 1},\n  \"range\": [1, 4]\n  \"tol\": 1\n}");
  CHECK(contains(syntax, "line 4"));
  CHECK(contains(syntax, "column"));
  CHECK(contains(config_error(R"({"range": [1, 4]})"), "potential"));
  CHECK(contains(config_error(R"({"potential": {"family": "constant", "V": 1}, "range": [1, 4], "tol": -1})"), "tol"));
  CHECK(contains(config_error(R"({"potential": {"family": "constant", "V": 1}, "range": [1, 4], "command": "fly"})"),
                 "command"));
  CHECK(contains(config_error(R"({"potential": {"family": "geometric", "V": -2}, "range": [1, 4]})"), "potential"));
  CHECK(contains(config_error(R"({"potential": {"family": "constant", "V": 1}, "range": [1, 4], "trajectory": "seed"})"),
                 "coefficient_seed"));
  CHECK_THROWS_AS(load_config("/nonexistent/dir/config.json"), Error);
}

TEST_CASE("config digest") {
  std::string text = R"({"potential": {"family": "constant", "V": 1}, "range": [1, 4]})";
  CHECK(parse_config(text).digest == parse_config(text).digest);
  CHECK(parse_config(text).digest == config_digest(text));
  CHECK(parse_config(text).digest != parse_config(text + " ").digest);
  // FNV-1a 64 of the empty string
  CHECK(config_digest("") == "cbf29ce484222325");
  CHECK(config_digest("a") == "af63dc4c8601ec8c");
}

TEST_CASE("classify the worked example through run") {
  auto t = run(load_config(config_path("example61_classify")));
  CHECK(t.find_meta("verdict") == "generic");
  auto n = t.column("n");
  auto sigma = t.column("sigma");
  REQUIRE(sigma.size() == 420);
  CHECK(sigma[0] == doctest::Approx(1.0).epsilon(1e-12));
  double x = (3.0 - std::sqrt(5.0)) / 2.0;
  CHECK(sigma[1] == doctest::Approx(x * x - std::pow(x, 4)).epsilon(1e-12));
  // the table carries the parity structure: odd and even subsequences settle separately
  CHECK(std::abs(sigma[400] - sigma[398]) <= 1e-12);
  CHECK(std::abs(sigma[401] - sigma[399]) <= 1e-12);
  CHECK(std::abs(sigma[401] - sigma[400]) > 0.5);
  CHECK(n[0] == 1.0);
}

TEST_CASE("green on V = 1 through run") {
  auto t = run(load_config(config_path("constant_green")));
  auto g = t.column("G_nn");
  auto v = t.column("V_recovered");
  auto lower = t.column("lower");
  auto upper = t.column("upper");
  REQUIRE(g.size() == 40);
  for (std::size_t i = 0; i < g.size(); ++i) {
    CHECK(g[i] == doctest::Approx(0.4472136).epsilon(1e-7));
    CHECK(lower[i] < g[i]);
    CHECK(g[i] < upper[i]);
  }
  for (std::size_t i = 1; i + 1 < v.size(); ++i) CHECK(v[i] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("solve with a zero seed") {
  auto t = run(load_config(config_path("solve_zero_seed")));
  auto psi = t.column("psi");
  REQUIRE(psi.size() == 50);
  for (double p : psi) CHECK(p == 0.0);
}

TEST_CASE("module errors carry the command") {
  auto c = parse_config(R"({"command": "solve", "potential": {"family": "constant", "V": -1},
                            "range": [1, 40], "tail_pad": 64})");
  try {
    run(c);
    FAIL("expected non-convergence");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::non_convergence);
    CHECK(contains(e.what(), "solve"));
  }
  auto nocmd = parse_config(R"({"potential": {"family": "constant", "V": 1}, "range": [1, 4]})");
  CHECK_THROWS_AS(run(nocmd), Error);
}

TEST_CASE("number formatting") {
  CHECK(format_number(0.0) == "0");
  CHECK(format_number(-0.0) == "0");
  CHECK(format_number(1.0) == "1");
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(1e-300) == "1e-300");
  CHECK(format_number(NAN) == "nan");
  CHECK(format_number(INFINITY) == "inf");
  CHECK(format_number(-INFINITY) == "-inf");
  for (double v : {0.4472135954999579, 1.0 / 3.0, -2.5e17, 6.02214076e23}) CHECK(std::stod(format_number(v)) == v);
  CHECK(csv_field("plain") == "plain");
  CHECK(csv_field("a,b") == "\"a,b\"");
  CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
  CHECK(csv_field("two\nlines") == "\"two\nlines\"");
}

TEST_CASE("csv layout") {
  ResultTable empty;
  empty.columns = {"n", "psi"};
  empty.meta("command", "solve");
  CHECK(to_csv(empty) == "# command: solve\nn,psi\n");

  ResultTable t;
  t.columns = {"n", "a", "b"};
  t.meta("note", "x, y");
  t.meta("value", 0.25);
  t.warnings.push_back("careful");
  t.add_row(-3, {1.5, NAN});
  t.add_row(12, {0.0, 1e-20});
  CHECK(to_csv(t) == "# note: x, y\n# value: 0.25\n# warning: careful\nn,a,b\n-3,1.5,nan\n12,0,1e-20\n");
  CHECK_THROWS_AS(t.add_row(1, {1.0}), Error);

  auto dir = std::filesystem::temp_directory_path() / "dsa_csv_test";
  std::filesystem::create_directories(dir);
  auto file = (dir / "out.csv").string();
  emit_csv(t, file);
  std::ifstream in(file, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(ss.str() == to_csv(t));
  CHECK_THROWS_AS(emit_csv(t, (dir / "missing" / "out.csv").string()), Error);
}

TEST_CASE("output is byte-identical and locale independent") {
  for (const char* stem : {"example61_classify", "constant_green", "ortho_free", "random_green"}) {
    auto cfg = load_config(config_path(stem));
    auto a = to_csv(run(cfg));
    auto b = to_csv(run(cfg));
    CHECK(a == b);
    // a comma-decimal, grouping global locale must not leak into the output
    std::locale saved = std::locale::global(std::locale(std::locale::classic(), new CommaDecimal));
    auto c = to_csv(run(cfg));
    std::locale::global(saved);
    CHECK(a == c);
  }
}
