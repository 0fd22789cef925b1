#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace dsa {

enum class ErrorKind {
  window,
  domain,
  degenerate_root,
  zero_wronskian,
  non_convergence,
  overflow,
  invariant_violation,
  config,
  io,
};

inline const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::window: return "window";
    case ErrorKind::domain: return "domain";
    case ErrorKind::degenerate_root: return "degenerate_root";
    case ErrorKind::zero_wronskian: return "zero_wronskian";
    case ErrorKind::non_convergence: return "non_convergence";
    case ErrorKind::overflow: return "overflow";
    case ErrorKind::invariant_violation: return "invariant_violation";
    case ErrorKind::config: return "config";
    case ErrorKind::io: return "io";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what, std::optional<long> index = {})
      : std::runtime_error(what), kind_(kind), index_(index) {}

  ErrorKind kind() const noexcept { return kind_; }
  // Lattice index at which the failure was detected, when there is one.
  std::optional<long> index() const noexcept { return index_; }

 private:
  ErrorKind kind_;
  std::optional<long> index_;
};

}  // namespace dsa
