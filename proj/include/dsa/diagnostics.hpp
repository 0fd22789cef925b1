#pragma once

#include <string>
#include <vector>

#include "dsa/lattice.hpp"

namespace dsa {

// Finite-range stand-in for an infinite-tail summability hypothesis.
struct TailDiagnostic {
  std::string name;
  double total = 0;
  // Increase of the partial sums over the last quarter of the window.
  double last_quarter = 0;
  double threshold = 0.1;
  bool decelerating = true;

  double ratio() const { return total == 0 ? 0.0 : last_quarter / total; }
  std::string describe() const;
};

// Partial sums of |terms| must gain less than threshold * total over the last quarter.
TailDiagnostic deceleration(const std::string& name, const Sequence& terms,
                            double threshold = 0.1);

// Same test on the running supremum of |values|, used for "sup is finite".
TailDiagnostic bounded_sup(const std::string& name, const Sequence& values,
                           double threshold = 0.1);

// Limit estimate from the last two quarters of a window.
struct TailLimit {
  double mean = 0;
  // |mean(last quarter) - mean(previous quarter)|.
  double drift = 0;
  bool is_zero() const { return std::abs(mean) <= 10.0 * drift; }
};

TailLimit tail_limit(const Sequence& values);
TailLimit tail_limit(const Sequence& values, long lo, long hi);

}  // namespace dsa
