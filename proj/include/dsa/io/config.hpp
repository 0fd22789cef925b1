#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dsa/green_agmon.hpp"
#include "dsa/liouville_green.hpp"
#include "dsa/potential.hpp"

namespace dsa::io {

enum class Command { solve, compare, classify, green, agmon, ortho };

const char* to_string(Command c);
std::optional<Command> command_from_string(std::string_view s);

struct RunConfig {
  std::optional<Command> command;
  PotentialSpec potential = PotentialSpec::constant(0.0);
  std::optional<PotentialSpec> comparison;
  long lo = 1, hi = 1;
  double tol = 1e-10;
  double neumann_tol = 1e-12;
  // solve: (psi_lo, psi_{lo+1}); absent means the subdominant solution.
  std::optional<std::array<double, 2>> seed;
  std::optional<long> tail_pad;
  std::optional<double> C;
  double energy = 0;
  AgmonVariant variant = AgmonVariant::lg_form;
  Regime regime = Regime::bounded_slow;
  JStrategy strategy = JStrategy::canonical;
  std::string basis = "auto";
  std::string trajectory = "neumann";
  std::optional<std::array<double, 2>> coefficient_seed;
  std::optional<long> seed_index;
  long burn_in = 10;
  std::optional<std::string> output;
  // FNV-1a 64 of the config bytes, hex.
  std::string digest;
  // Seeds of random potential families, for the metadata block.
  std::vector<std::uint64_t> random_seeds;
};

std::string config_digest(std::string_view bytes);

// Throws Error(config) naming the offending path, or line and column for syntax errors.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string& path);

}  // namespace dsa::io
