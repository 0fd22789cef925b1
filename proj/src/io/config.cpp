#include "dsa/io/config.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace dsa::io {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw Error(ErrorKind::config, path + ": " + msg);
}

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

// Object reader that records consumed keys so leftovers can be rejected by path.
class Fields {
 public:
  Fields(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail(path_.empty() ? "<root>" : path_, "expected an object");
  }

  bool has(const std::string& k) const { return j_.contains(k); }

  const json& get(const std::string& k) {
    seen_.insert(k);
    if (!j_.contains(k)) fail(join(path_, k), "missing required field");
    return j_.at(k);
  }

  double number(const std::string& k) {
    const json& v = get(k);
    if (!v.is_number()) fail(join(path_, k), "expected a number");
    double d = v.get<double>();
    if (!std::isfinite(d)) fail(join(path_, k), "expected a finite number");
    return d;
  }
  double number(const std::string& k, double dflt) { return has(k) ? number(k) : dflt; }

  long integer(const std::string& k) {
    const json& v = get(k);
    if (!v.is_number_integer()) fail(join(path_, k), "expected an integer");
    return v.get<long>();
  }

  bool boolean(const std::string& k, bool dflt) {
    if (!has(k)) return dflt;
    const json& v = get(k);
    if (!v.is_boolean()) fail(join(path_, k), "expected true or false");
    return v.get<bool>();
  }

  std::string string(const std::string& k) {
    const json& v = get(k);
    if (!v.is_string()) fail(join(path_, k), "expected a string");
    return v.get<std::string>();
  }

  std::vector<double> numbers(const std::string& k) {
    const json& v = get(k);
    if (!v.is_array()) fail(join(path_, k), "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number()) fail(join(path_, k) + "[" + std::to_string(i) + "]", "expected a number");
      out.push_back(v[i].get<double>());
    }
    return out;
  }

  std::vector<long> integers(const std::string& k) {
    const json& v = get(k);
    if (!v.is_array()) fail(join(path_, k), "expected an array of integers");
    std::vector<long> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number_integer())
        fail(join(path_, k) + "[" + std::to_string(i) + "]", "expected an integer");
      out.push_back(v[i].get<long>());
    }
    return out;
  }

  std::array<double, 2> pair(const std::string& k) {
    auto v = numbers(k);
    if (v.size() != 2) fail(join(path_, k), "expected exactly two numbers");
    return {v[0], v[1]};
  }

  std::string path(const std::string& k) const { return join(path_, k); }

  void finish() const {
    for (const auto& [k, v] : j_.items())
      if (!seen_.count(k)) fail(join(path_, k), "unknown key");
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

PotentialSpec parse_potential(const json& j, const std::string& path, RunConfig& cfg) {
  Fields f(j, path);
  std::string family = f.string("family");
  long origin = f.has("origin") ? f.integer("origin") : 1;
  auto base = [&]() { return parse_potential(f.get("base"), f.path("base"), cfg); };
  auto wrap = [&](auto build) -> PotentialSpec {
    try {
      return build();
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::config) throw;
      fail(path, e.what());
    }
  };
  PotentialSpec out = PotentialSpec::constant(0.0);
  if (family == "constant") {
    double v = f.number("V");
    out = PotentialSpec::constant(v, origin);
  } else if (family == "power_decay") {
    double g = f.number("gamma");
    std::vector<double> tail = f.has("tail") ? f.numbers("tail") : std::vector<double>{};
    out = wrap([&] { return PotentialSpec::power_decay(g, tail, origin); });
  } else if (family == "threshold") {
    double a = f.number("alpha");
    out = wrap([&] { return PotentialSpec::threshold(a, origin); });
  } else if (family == "sparse") {
    if (f.has("origin")) fail(f.path("origin"), "sparse potentials take the origin of their base");
    PotentialSpec b = base();
    if (f.has("powers_of_two")) {
      Fields p(f.get("powers_of_two"), f.path("powers_of_two"));
      double W = p.number("W");
      long k = p.integer("max_exponent");
      p.finish();
      if (k < 0 || k > 40) fail(f.path("powers_of_two.max_exponent"), "must lie in [0, 40]");
      out = wrap([&] { return PotentialSpec::sparse_powers_of_two(b, W, static_cast<int>(k)); });
    } else {
      auto sites = f.integers("sites");
      auto amps = f.numbers("amplitudes");
      if (sites.size() != amps.size()) fail(f.path("amplitudes"), "length must match sites");
      std::map<long, double> m;
      for (std::size_t i = 0; i < sites.size(); ++i) m[sites[i]] += amps[i];
      out = wrap([&] { return PotentialSpec::sparse(b, m); });
    }
  } else if (family == "fluctuating") {
    out = PotentialSpec::fluctuating(f.number("a"), origin);
  } else if (family == "table") {
    auto v = f.numbers("values");
    out = wrap([&] { return PotentialSpec::table(v, origin); });
  } else if (family == "shifted") {
    if (f.has("origin")) fail(f.path("origin"), "shifted potentials take the origin of their base");
    PotentialSpec b = base();
    out = PotentialSpec::shifted(b, f.number("E"));
  } else if (family == "reflected") {
    if (f.has("origin")) fail(f.path("origin"), "reflected potentials take the origin of their base");
    out = PotentialSpec::reflected(base());
  } else if (family == "geometric") {
    double v = f.number("V");
    double amp = f.number("amplitude", 1.0);
    bool alt = f.boolean("alternating", true);
    out = wrap([&] { return PotentialSpec::geometric(v, amp, alt, origin); });
  } else if (family == "random") {
    double lo = f.number("low"), hi = f.number("high");
    long seed = f.integer("seed");
    long length = f.integer("length");
    if (seed < 0) fail(f.path("seed"), "must be nonnegative");
    cfg.random_seeds.push_back(static_cast<std::uint64_t>(seed));
    out = wrap([&] {
      return PotentialSpec::random(lo, hi, static_cast<std::uint64_t>(seed), length, origin);
    });
  } else {
    fail(f.path("family"), "unknown family \"" + family + "\"");
  }
  f.finish();
  return out;
}

std::string line_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

template <typename E>
E pick(Fields& f, const std::string& key, std::initializer_list<std::pair<const char*, E>> opts,
       E dflt) {
  if (!f.has(key)) return dflt;
  std::string s = f.string(key);
  std::string names;
  for (const auto& [name, value] : opts) {
    if (s == name) return value;
    names += names.empty() ? name : std::string(", ") + name;
  }
  fail(f.path(key), "unknown value \"" + s + "\" (expected one of " + names + ")");
}

}  // namespace

const char* to_string(Command c) {
  switch (c) {
    case Command::solve: return "solve";
    case Command::compare: return "compare";
    case Command::classify: return "classify";
    case Command::green: return "green";
    case Command::agmon: return "agmon";
    case Command::ortho: return "ortho";
  }
  return "unknown";
}

std::optional<Command> command_from_string(std::string_view s) {
  for (Command c : {Command::solve, Command::compare, Command::classify, Command::green,
                    Command::agmon, Command::ortho})
    if (s == to_string(c)) return c;
  return std::nullopt;
}

std::string config_digest(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

RunConfig parse_config(std::string_view text) {
  json j;
  try {
    j = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    std::string what = e.what();
    auto pos = what.find("parse error");
    throw Error(ErrorKind::config, "syntax error at " + line_column(text, e.byte) + ": " +
                                       (pos == std::string::npos ? what : what.substr(pos)));
  }
  RunConfig cfg;
  cfg.digest = config_digest(text);
  Fields f(j, "");
  if (f.has("command")) {
    std::string c = f.string("command");
    cfg.command = command_from_string(c);
    if (!cfg.command) fail("command", "unknown command \"" + c + "\"");
  }
  cfg.potential = parse_potential(f.get("potential"), "potential", cfg);
  if (f.has("comparison")) cfg.comparison = parse_potential(f.get("comparison"), "comparison", cfg);

  auto range = f.integers("range");
  if (range.size() != 2) fail("range", "expected [lo, hi]");
  if (range[1] < range[0]) fail("range", "empty range [" + std::to_string(range[0]) + ", " +
                                             std::to_string(range[1]) + "]");
  cfg.lo = range[0];
  cfg.hi = range[1];

  cfg.tol = f.number("tol", cfg.tol);
  if (!(cfg.tol > 0)) fail("tol", "must be positive");
  cfg.neumann_tol = f.number("neumann_tol", cfg.neumann_tol);
  if (!(cfg.neumann_tol > 0)) fail("neumann_tol", "must be positive");
  if (f.has("seed")) cfg.seed = f.pair("seed");
  if (f.has("tail_pad")) {
    cfg.tail_pad = f.integer("tail_pad");
    if (*cfg.tail_pad < 1) fail("tail_pad", "must be at least 1");
  }
  if (f.has("C")) {
    cfg.C = f.number("C");
    if (!(*cfg.C > 0)) fail("C", "must be positive");
  }
  cfg.energy = f.number("energy", 0.0);
  cfg.variant = pick<AgmonVariant>(f, "variant",
                                   {{"k_a_form", AgmonVariant::k_a_form},
                                    {"lg_form", AgmonVariant::lg_form},
                                    {"simplified_form", AgmonVariant::simplified_form}},
                                   AgmonVariant::lg_form);
  cfg.regime = pick<Regime>(f, "regime",
                            {{"bounded_slow", Regime::bounded_slow},
                             {"bounded_general", Regime::bounded_general},
                             {"unbounded", Regime::unbounded}},
                            Regime::bounded_slow);
  cfg.strategy = pick<JStrategy>(f, "strategy",
                                 {{"canonical", JStrategy::canonical},
                                  {"geometric_mean", JStrategy::geometric_mean},
                                  {"arithmetic_mean", JStrategy::arithmetic_mean},
                                  {"skip_pairs", JStrategy::skip_pairs}},
                                 JStrategy::canonical);
  if (f.has("basis")) {
    cfg.basis = f.string("basis");
    static const std::set<std::string> ok{"auto", "exponential", "numeric", "lg", "dirichlet"};
    if (!ok.count(cfg.basis)) fail("basis", "unknown basis \"" + cfg.basis + "\"");
  }
  if (f.has("trajectory")) {
    cfg.trajectory = f.string("trajectory");
    if (cfg.trajectory != "neumann" && cfg.trajectory != "seed")
      fail("trajectory", "expected \"neumann\" or \"seed\"");
  }
  if (f.has("coefficient_seed")) cfg.coefficient_seed = f.pair("coefficient_seed");
  if (f.has("seed_index")) cfg.seed_index = f.integer("seed_index");
  if (cfg.trajectory == "seed" && !cfg.coefficient_seed)
    fail("coefficient_seed", "required when trajectory is \"seed\"");
  if (f.has("burn_in")) {
    cfg.burn_in = f.integer("burn_in");
    if (cfg.burn_in < 0) fail("burn_in", "must be nonnegative");
  }
  if (f.has("output")) cfg.output = f.string("output");
  f.finish();
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot open config " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace dsa::io
