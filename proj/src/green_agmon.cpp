#include "dsa/green_agmon.hpp"

#include <cmath>

namespace dsa {

namespace {

void require_positive(const GreenDiagonal& g, long n) {
  if (!(g.g.at(n) > 0))
    throw Error(ErrorKind::domain, "nonpositive Green diagonal at " + std::to_string(n), n);
}

}  // namespace

double green_matrix(const Basis& basis, long m, long n) {
  long a = std::min(m, n), b = std::max(m, n);
  return basis.plus().at(a) * basis.minus().at(b) / basis.wronskian();
}

GreenDiagonal make_green_diagonal(Sequence g) {
  GreenDiagonal d;
  long lo = g.lo(), hi = g.hi();
  d.z = Sequence(lo, hi);
  for (long n = lo; n <= hi; ++n) {
    if (!(g.at(n) > 0))
      throw Error(ErrorKind::domain, "nonpositive Green diagonal at " + std::to_string(n), n);
    d.z.at(n) = std::sqrt(g.at(n));
  }
  d.g = std::move(g);
  if (hi > lo) {
    d.s_z = Sequence(lo + 1, hi);
    for (long n = lo + 1; n <= hi; ++n) d.s_z.at(n) = s_from_diag(d, n);
  } else {
    d.s_z = Sequence(lo, lo, std::nan(""));
  }
  return d;
}

GreenDiagonal green_diagonal(const Basis& basis, long lo, long hi) {
  Sequence g(lo, hi);
  for (long n = lo; n <= hi; ++n) g.at(n) = green_matrix(basis, n, n);
  return make_green_diagonal(std::move(g));
}

double s_from_diag(const GreenDiagonal& g, long n) {
  require_positive(g, n);
  require_positive(g, n - 1);
  double zz = std::sqrt(g.g.at(n)) * std::sqrt(g.g.at(n - 1));
  return (1.0 + std::sqrt(1.0 + 4.0 * zz * zz)) / (2.0 * zz);
}

Basis basis_from_diag(const GreenDiagonal& g, long m, long hi) {
  if (m < g.lo() || hi > g.hi() || hi <= m)
    throw Error(ErrorKind::window, "basis range outside the diagonal window");
  Sequence plus(m, hi), minus(m, hi);
  double acc = 0;
  for (long n = m; n <= hi; ++n) {
    require_positive(g, n);
    if (n > m) acc += std::log(s_from_diag(g, n));
    double lz = 0.5 * std::log(g.g.at(n));
    plus.at(n) = std::exp(lz + acc);
    minus.at(n) = std::exp(lz - acc);
    if (!std::isfinite(plus.at(n)) || minus.at(n) == 0)
      throw Error(ErrorKind::overflow, "reconstructed basis not representable", n);
  }
  return Basis(std::move(plus), std::move(minus));
}

double potential_from_diag(const GreenDiagonal& g, long n) {
  require_positive(g, n - 1);
  require_positive(g, n);
  require_positive(g, n + 1);
  double gn = g.g.at(n);
  return (std::sqrt(1.0 + 4.0 * gn * g.g.at(n + 1)) + std::sqrt(1.0 + 4.0 * gn * g.g.at(n - 1))) /
             (2.0 * gn) -
         2.0;
}

double k_a_constant(double C) {
  if (!(C > 0)) throw Error(ErrorKind::domain, "C must be positive");
  double t = 2.0 / (C * (C + 2.0));
  return std::sqrt(1.0 + t * t) + t;
}

DiagBounds diag_bounds(const PotentialSpec& V, double C, long lo, long hi) {
  if (!(C > 0)) throw Error(ErrorKind::domain, "C must be positive");
  DiagBounds b{Sequence(lo, hi), Sequence(lo, hi), k_a_constant(C), std::sqrt(1.0 + 4.0 / (C * C))};
  for (long n = lo; n <= hi; ++n) {
    double v = V(n);
    if (!(v > C))
      throw Error(ErrorKind::domain,
                  "min V over the range must exceed C; V = " + std::to_string(v) + " at " +
                      std::to_string(n),
                  n);
    b.lower.at(n) = 1.0 / (v + 2.0);
    b.upper.at(n) = b.k_a / (v + 2.0);
  }
  return b;
}

const char* to_string(AgmonVariant v) {
  switch (v) {
    case AgmonVariant::k_a_form: return "k_a_form";
    case AgmonVariant::lg_form: return "lg_form";
    case AgmonVariant::simplified_form: return "simplified_form";
  }
  return "unknown";
}

double agmon_step(const PotentialSpec& V, long l, AgmonVariant variant, double C) {
  double v = V(l);
  if (!(v > 0)) throw Error(ErrorKind::domain, "Agmon distance needs V > 0", l);
  switch (variant) {
    case AgmonVariant::k_a_form: return std::log(v + 2.0) - std::log(k_a_constant(C));
    case AgmonVariant::lg_form: return std::log((v + 2.0 + std::sqrt(v * (v + 4.0))) / 2.0);
    case AgmonVariant::simplified_form: return std::log1p(v);
  }
  return 0;
}

double agmon_distance(const PotentialSpec& V, long m, long n, AgmonVariant variant, double C) {
  if (n < m) throw Error(ErrorKind::window, "agmon_distance needs m <= n");
  double d = 0;
  for (long l = m + 1; l <= n; ++l) d += agmon_step(V, l, variant, C);
  return d;
}

AgmonReport agmon_report(const PotentialSpec& V, const Sequence& log_abs_minus,
                         const std::vector<std::pair<long, long>>& pairs, AgmonVariant variant,
                         double C) {
  AgmonReport r;
  r.variant = variant;
  if (C > 0) r.k_a = k_a_constant(C);
  r.pairs = pairs;
  for (const auto& [m, n] : pairs) r.distances.push_back(agmon_distance(V, m, n, variant, C));
  long lo = log_abs_minus.lo(), hi = log_abs_minus.hi();
  r.distance_from_lo = Sequence(lo, hi);
  r.envelope = Sequence(lo, hi);
  double d = 0;
  for (long n = lo; n <= hi; ++n) {
    if (n > lo) d += agmon_step(V, n, variant, C);
    r.distance_from_lo.at(n) = d;
    r.envelope.at(n) = std::exp(d + log_abs_minus.at(n));
    r.envelope_sup = std::max(r.envelope_sup, r.envelope.at(n));
  }
  return r;
}

}  // namespace dsa
