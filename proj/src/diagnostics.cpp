#include "dsa/diagnostics.hpp"

#include <cmath>
#include <locale>
#include <sstream>

namespace dsa {

namespace {

long quarter_start(long lo, long hi) { return hi - std::max(1L, (hi - lo + 1) / 4); }

}  // namespace

std::string TailDiagnostic::describe() const {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os.precision(6);
  os << name << ": partial sum " << total << ", last-quarter share " << ratio()
     << (decelerating ? " (decelerating)" : " (not decelerating)");
  return os.str();
}

TailDiagnostic deceleration(const std::string& name, const Sequence& terms, double threshold) {
  TailDiagnostic d;
  d.name = name;
  d.threshold = threshold;
  long cut = quarter_start(terms.lo(), terms.hi());
  double before = 0;
  for (long n = terms.lo(); n <= terms.hi(); ++n) {
    d.total += std::abs(terms.at(n));
    if (n == cut) before = d.total;
  }
  if (!std::isfinite(d.total)) {
    d.decelerating = false;
    d.last_quarter = d.total;
    return d;
  }
  d.last_quarter = d.total - before;
  d.decelerating = d.total == 0 || d.last_quarter < threshold * d.total;
  return d;
}

TailDiagnostic bounded_sup(const std::string& name, const Sequence& values, double threshold) {
  TailDiagnostic d;
  d.name = name;
  d.threshold = threshold;
  long cut = quarter_start(values.lo(), values.hi());
  double sup = 0, before = 0;
  for (long n = values.lo(); n <= values.hi(); ++n) {
    sup = std::max(sup, std::abs(values.at(n)));
    if (n == cut) before = sup;
  }
  d.total = sup;
  if (!std::isfinite(sup)) {
    d.decelerating = false;
    d.last_quarter = sup;
    return d;
  }
  d.last_quarter = sup - before;
  d.decelerating = sup == 0 || d.last_quarter < threshold * sup;
  return d;
}

TailLimit tail_limit(const Sequence& values) { return tail_limit(values, values.lo(), values.hi()); }

TailLimit tail_limit(const Sequence& values, long lo, long hi) {
  if (hi - lo + 1 < 2) throw Error(ErrorKind::window, "tail limit needs at least two points");
  long q = std::max(1L, (hi - lo + 1) / 4);
  auto mean = [&](long a, long b) {
    double s = 0;
    for (long n = a; n <= b; ++n) s += values.at(n);
    return s / static_cast<double>(b - a + 1);
  };
  TailLimit t;
  double last = mean(hi - q + 1, hi);
  double prev = mean(std::max(lo, hi - 2 * q + 1), hi - q);
  t.mean = last;
  t.drift = std::abs(last - prev);
  return t;
}

}  // namespace dsa
