#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "dsa/io/config.hpp"
#include "dsa/io/csv.hpp"
#include "dsa/io/run.hpp"

namespace {

int exit_code(dsa::ErrorKind k) {
  switch (k) {
    case dsa::ErrorKind::config:
    case dsa::ErrorKind::io: return 1;
    default: return 2;
  }
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += (c == '\n' || c == '\r') ? ' ' : c;
  }
  return out + "\"";
}

void report(const std::string& kind, const std::string& command, std::optional<long> index,
            const std::string& msg) {
  std::cerr << "dsa: error kind=" << kind << " command=" << (command.empty() ? "-" : command)
            << " index=" << (index ? std::to_string(*index) : "-") << " msg=" << quote(msg)
            << std::endl;
}

std::pair<long, long> parse_range(const std::string& s) {
  auto colon = s.find(':');
  if (colon == std::string::npos) throw dsa::Error(dsa::ErrorKind::config, "range: expected a:b");
  try {
    std::size_t p1 = 0, p2 = 0;
    std::string a = s.substr(0, colon), b = s.substr(colon + 1);
    long lo = std::stol(a, &p1), hi = std::stol(b, &p2);
    if (p1 != a.size() || p2 != b.size()) throw std::invalid_argument("trailing characters");
    if (hi < lo) throw dsa::Error(dsa::ErrorKind::config, "range: empty range " + s);
    return {lo, hi};
  } catch (const std::logic_error&) {
    throw dsa::Error(dsa::ErrorKind::config, "range: expected integers a:b, got " + s);
  }
}

void setup_logging() {
  auto logger = spdlog::stderr_color_mt("dsa");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("[%l] %v");
  spdlog::set_level(spdlog::level::warn);
  if (const char* lvl = std::getenv("DSA_LOG")) spdlog::set_level(spdlog::level::from_str(lvl));
}

}  // namespace

int main(int argc, char** argv) {
  setup_logging();
  CLI::App app{"Discrete Schrodinger asymptotics toolkit"};
  app.require_subcommand(1);
  std::string config_path, out_path, range;
  double tol = 0;
  for (const char* name : {"solve", "compare", "classify", "green", "agmon", "ortho"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "JSON run configuration")->required();
    sub->add_option("--out", out_path, "CSV destination (default: config output, else stdout)");
    sub->add_option("--tol", tol, "override the configured tolerance");
    sub->add_option("--range", range, "override the configured range as a:b");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    report("usage", "", std::nullopt, e.what());
    return 1;
  }

  std::string command = app.get_subcommands().front()->get_name();
  try {
    spdlog::debug("loading {}", config_path);
    dsa::io::RunConfig cfg = dsa::io::load_config(config_path);
    auto c = dsa::io::command_from_string(command);
    if (cfg.command && cfg.command != c)
      throw dsa::Error(dsa::ErrorKind::config,
                       std::string("command: config is for ") + dsa::io::to_string(*cfg.command));
    cfg.command = c;
    if (tol != 0) {
      if (!(tol > 0)) throw dsa::Error(dsa::ErrorKind::config, "tol: must be positive");
      cfg.tol = tol;
    }
    if (!range.empty()) std::tie(cfg.lo, cfg.hi) = parse_range(range);

    spdlog::info("running {} on [{}, {}]", command, cfg.lo, cfg.hi);
    dsa::io::ResultTable table = dsa::io::run(cfg);
    for (const auto& w : table.warnings) spdlog::warn("{}", w);

    std::string dest = !out_path.empty() ? out_path : cfg.output.value_or("");
    if (dest.empty() || dest == "-")
      dsa::io::emit_csv(table, std::cout);
    else
      dsa::io::emit_csv(table, dest);
    spdlog::info("wrote {} rows", table.rows.size());
  } catch (const dsa::Error& e) {
    report(dsa::to_string(e.kind()), command, e.index(), e.what());
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    report("internal", command, std::nullopt, e.what());
    return 2;
  }
  return 0;
}
