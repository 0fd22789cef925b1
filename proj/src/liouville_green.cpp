#include "dsa/liouville_green.hpp"

#include <cmath>
#include <limits>

namespace dsa {

namespace {

// V at n, with indices below the origin (and past a finite table) clamped to the nearest value.
double v_clamped(const PotentialSpec& V, long n) {
  n = std::max(n, V.origin());
  if (auto last = V.last_index()) n = std::min(n, *last);
  return V(n);
}

void require_range(const PotentialSpec& V, long lo, long hi) {
  if (lo < V.origin())
    throw Error(ErrorKind::window, "range starts below the potential origin", lo);
  if (hi - lo < 2) throw Error(ErrorKind::window, "comparison model needs at least three sites");
}

double log_cz(const Sequence& D, long anchor, double d_inf) {
  double acc = -0.25 * std::log(d_inf);
  for (long k = anchor + 1; k <= D.hi(); k += 2) acc += 0.5 * (std::log(D.at(k)) - std::log(D.at(k - 1)));
  return acc;
}

// z_n = C_z^{sigma_n} / sqrt(R_n), sigma_n = -1 when n has the anchor's parity.
Sequence z_from_D(const Sequence& D, long anchor, double log_c, long lo, long hi) {
  Sequence logR = alternating_log_product(D, anchor);
  Sequence z(lo, hi);
  for (long n = lo; n <= hi; ++n) {
    double sigma = ((n - anchor) % 2 == 0) ? -1.0 : 1.0;
    z.at(n) = std::exp(sigma * log_c - 0.5 * logR.at(n));
  }
  return z;
}

void add_diagnostic(ComparisonModel& m, TailDiagnostic d) {
  if (!d.decelerating) m.warnings.push_back("l1 diagnostic failed: " + d.describe());
  m.diagnostics.push_back(std::move(d));
}

// Fills V_tilde, the defect and the defect diagnostic.
void finish(ComparisonModel& m, const PotentialSpec& V) {
  long lo = m.lo() + 1, hi = m.hi() - 1;
  m.v_tilde = Sequence(lo, hi);
  m.defect = Sequence(lo, hi);
  for (long n = lo; n <= hi; ++n) {
    m.v_tilde.at(n) = comparison_potential(m, n);
    if (m.regime == Regime::unbounded) {
      auto eps = [&](long k) {
        double d = (V(k) + 2.0) * (v_clamped(V, k - 1) + 2.0);
        return 4.0 / (m.b.at(k) * std::sqrt(d) + d);
      };
      double wn = V(n) + 2.0;
      m.defect.at(n) = 0.5 * wn * (eps(n + 1) + eps(n));
    } else {
      m.defect.at(n) = m.v_tilde.at(n) - V(n);
    }
  }
  add_diagnostic(m, deceleration("|V_tilde - V|", m.defect));
}

}  // namespace

const char* to_string(Regime r) {
  switch (r) {
    case Regime::bounded_slow: return "bounded_slow";
    case Regime::bounded_general: return "bounded_general";
    case Regime::unbounded: return "unbounded";
  }
  return "unknown";
}

const char* to_string(JStrategy s) {
  switch (s) {
    case JStrategy::canonical: return "canonical";
    case JStrategy::geometric_mean: return "geometric_mean";
    case JStrategy::arithmetic_mean: return "arithmetic_mean";
    case JStrategy::skip_pairs: return "skip_pairs";
  }
  return "unknown";
}

double s_from_b(double b) {
  if (!(std::abs(b) > 2.0))
    throw Error(ErrorKind::degenerate_root, "|b| must exceed 2, got " + std::to_string(b));
  return (b + std::copysign(std::sqrt(b * b - 4.0), b)) / 2.0;
}

Sequence alternating_log_product(const Sequence& D, long anchor) {
  Sequence logR(anchor, D.hi());
  double prev = 0;
  for (long n = anchor; n <= D.hi(); ++n) {
    double d = D.at(n);
    if (!(d > 0)) throw Error(ErrorKind::domain, "nonpositive factor b^2 - 4", n);
    prev = std::log(d) - prev;
    logR.at(n) = prev;
  }
  return logR;
}

double cz_constant(const PotentialSpec& V, long lo, long hi, std::optional<double> v_inf) {
  require_range(V, lo, hi);
  long a = V.origin();
  Sequence D(a, hi);
  for (long k = a; k <= hi; ++k) {
    double v = V(k);
    D.at(k) = v * (v + 4.0);
    if (!(D.at(k) > 0)) throw Error(ErrorKind::domain, "nonpositive factor V(V+4)", k);
  }
  double vi = v_inf.value_or(V(hi));
  double d_inf = vi * (vi + 4.0);
  if (!(d_inf > 0)) throw Error(ErrorKind::domain, "nonpositive limit factor V_inf(V_inf+4)");
  return std::exp(log_cz(D, a, d_inf));
}

ComparisonModel build_bounded_slow(const PotentialSpec& V, long lo, long hi, double C) {
  require_range(V, lo, hi);
  if (!(C > 0)) throw Error(ErrorKind::domain, "lower bound C must be positive");
  long a = V.origin();
  ComparisonModel m;
  m.regime = Regime::bounded_slow;
  Sequence D(a, hi);
  for (long k = a; k <= hi; ++k) {
    double v = V(k);
    if (!(v > 0)) throw Error(ErrorKind::domain, "bounded_slow needs V > 0", k);
    D.at(k) = v * (v + 4.0);
  }
  m.b = Sequence(lo, hi);
  m.S = Sequence(lo, hi);
  long below = 0;
  for (long n = lo; n <= hi; ++n) {
    double v = V(n);
    if (v < C) ++below;
    m.b.at(n) = v + 2.0;
    m.S.at(n) = (v + 2.0 + std::sqrt(D.at(n))) / 2.0;
  }
  if (below > 0)
    m.warnings.push_back(std::to_string(below) + " sites with V below the supplied bound C");
  double lc = log_cz(D, a, D.at(hi));
  m.c_z = std::exp(lc);
  m.z = z_from_D(D, a, lc, lo, hi);

  Sequence slope(lo, hi - 1);
  for (long n = lo; n < hi; ++n) slope.at(n) = static_cast<double>(n) * (V(n + 1) - V(n));
  add_diagnostic(m, deceleration("n |V_{n+1} - V_n|", slope));
  finish(m, V);
  return m;
}

Sequence j_sequence(const PotentialSpec& V, JStrategy strategy, long lo, long hi) {
  Sequence J(lo, hi);
  auto q = [](double v) { return v * (v + 4.0); };  // (V+2)^2 - 4
  for (long n = lo; n <= hi; ++n) {
    double v = v_clamped(V, n);
    double j2 = 0;
    switch (strategy) {
      case JStrategy::canonical: j2 = q(v); break;
      case JStrategy::geometric_mean: {
        double u = v_clamped(V, n + 1);
        j2 = u * v + 2.0 * (u + v);
        break;
      }
      case JStrategy::arithmetic_mean: j2 = 0.5 * (q(v) + q(v_clamped(V, n - 1))); break;
      case JStrategy::skip_pairs: {
        long k = (n % 2 == 0) ? n : n - 1;
        j2 = q(v_clamped(V, k));
        break;
      }
    }
    if (!(j2 > 0))
      throw Error(ErrorKind::domain,
                  std::string("strategy ") + to_string(strategy) + " gives J <= 0", n);
    J.at(n) = std::sqrt(j2);
  }
  return J;
}

ComparisonModel build_bounded_general(const PotentialSpec& V, JStrategy strategy, long lo,
                                      long hi) {
  require_range(V, lo, hi);
  long a = V.origin();
  ComparisonModel m;
  m.regime = Regime::bounded_general;
  m.strategy = strategy;
  Sequence J = j_sequence(V, strategy, a - 1, hi);
  Sequence D(a, hi);
  for (long k = a; k <= hi; ++k) D.at(k) = J.at(k) * J.at(k - 1);
  m.b = Sequence(lo, hi);
  m.S = Sequence(lo, hi);
  for (long n = lo; n <= hi; ++n) {
    double root = std::sqrt(D.at(n));
    m.b.at(n) = std::sqrt(D.at(n) + 4.0);
    if (!(m.b.at(n) > 2.0)) throw Error(ErrorKind::degenerate_root, "b_n <= 2", n);
    m.S.at(n) = (m.b.at(n) + root) / 2.0;
  }
  double lc = log_cz(D, a, D.at(hi));
  m.c_z = std::exp(lc);
  m.z = z_from_D(D, a, lc, lo, hi);

  Sequence db(lo, hi - 1);
  for (long n = lo; n < hi; ++n) db.at(n) = m.b.at(n + 1) - m.b.at(n);
  add_diagnostic(m, deceleration("|b_{n+1} - b_n|", db));
  finish(m, V);
  return m;
}

ComparisonModel build_unbounded(const PotentialSpec& V, long lo, long hi) {
  require_range(V, lo, hi);
  ComparisonModel m;
  m.regime = Regime::unbounded;
  m.c_z = 1.0;
  m.b = Sequence(lo, hi);
  m.S = Sequence(lo, hi);
  m.z = Sequence(lo, hi);
  long nonpositive = 0;
  for (long n = lo - 1; n <= hi + 1; ++n) {
    double v = v_clamped(V, n);
    if (!(v > -2.0)) throw Error(ErrorKind::domain, "unbounded builder needs V > -2", n);
    if (n >= lo && n <= hi && !(v > 0)) ++nonpositive;
  }
  if (nonpositive > 0)
    m.warnings.push_back(std::to_string(nonpositive) + " sites with V <= 0");
  for (long n = lo; n <= hi; ++n) {
    double w = V(n) + 2.0, wp = v_clamped(V, n - 1) + 2.0;
    double d = w * wp;
    m.b.at(n) = std::sqrt(d + 4.0);
    m.S.at(n) = (std::sqrt(d) + std::sqrt(4.0 + d)) / 2.0;
    m.z.at(n) = 1.0 / std::sqrt(w);
  }
  Sequence terms(lo, hi);
  for (long n = lo; n <= hi; ++n) {
    double v = V(n), up = v_clamped(V, n + 1), dn = v_clamped(V, n - 1);
    terms.at(n) = (std::pow(up, -1.5) + std::pow(dn, -1.5)) / std::sqrt(v);
    if (!std::isfinite(terms.at(n))) terms.at(n) = std::numeric_limits<double>::infinity();
  }
  add_diagnostic(m, deceleration("summation V_n^{-1/2}(V_{n+1}^{-3/2} + V_{n-1}^{-3/2})", terms));
  finish(m, V);
  return m;
}

double comparison_potential(const ComparisonModel& m, long n) {
  double z = m.z.at(n), zp = m.z.at(n + 1), zm = m.z.at(n - 1);
  if (z == 0) throw Error(ErrorKind::domain, "z vanishes", n);
  double sp = m.S.at(n + 1), s = m.S.at(n);
  double plus_form = (zp / z) * sp + (zm / z) / s;
  double minus_form = (zp / z) / sp + (zm / z) * s;
  double scale = std::max(std::abs(plus_form), std::abs(minus_form));
  if (std::abs(plus_form - minus_form) > 1e-10 * scale)
    throw Error(ErrorKind::invariant_violation,
                "phi+ and phi- forms of the comparison potential disagree", n);
  return plus_form - 2.0;
}

LogBasis lg_log_basis(const ComparisonModel& m, long lo, long hi) {
  if (lo < m.lo() || hi > m.hi() || hi < lo)
    throw Error(ErrorKind::window, "basis range outside the model window");
  LogBasis out{Sequence(lo, hi), Sequence(lo, hi)};
  double acc = 0;
  for (long n = lo; n <= hi; ++n) {
    if (n > lo) acc += std::log(m.S.at(n));
    double lz = std::log(m.z.at(n));
    out.log_plus.at(n) = lz + acc;
    out.log_minus.at(n) = lz - acc;
  }
  return out;
}

Basis lg_basis(const ComparisonModel& m, long lo, long hi) {
  LogBasis lb = lg_log_basis(m, lo, hi);
  Sequence plus(lo, hi), minus(lo, hi);
  for (long n = lo; n <= hi; ++n) {
    plus.at(n) = std::exp(lb.log_plus.at(n));
    minus.at(n) = std::exp(lb.log_minus.at(n));
    if (!std::isfinite(plus.at(n)))
      throw Error(ErrorKind::overflow, "dominant member overflows at " + std::to_string(n), n);
    if (minus.at(n) == 0)
      throw Error(ErrorKind::overflow, "subdominant member underflows at " + std::to_string(n), n);
  }
  return Basis(std::move(plus), std::move(minus));
}

}  // namespace dsa
