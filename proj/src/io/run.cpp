#include "dsa/io/run.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dsa/dichotomy.hpp"
#include "dsa/green_agmon.hpp"
#include "dsa/io/csv.hpp"
#include "dsa/liouville_green.hpp"
#include "dsa/orthopoly.hpp"
#include "dsa/perturbation.hpp"
#include "dsa/recurrence.hpp"

namespace dsa::io {

void ResultTable::add_row(long n, std::vector<double> values) {
  if (values.size() + 1 != columns.size())
    throw Error(ErrorKind::invariant_violation, "row width does not match the header", n);
  rows.push_back({n, std::move(values)});
}

void ResultTable::meta(const std::string& key, const std::string& value) {
  metadata.emplace_back(key, value);
}

void ResultTable::meta(const std::string& key, double value) { meta(key, format_number(value)); }

std::string ResultTable::find_meta(const std::string& key) const {
  for (const auto& [k, v] : metadata)
    if (k == key) return v;
  return {};
}

std::vector<double> ResultTable::column(const std::string& name) const {
  auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) throw Error(ErrorKind::domain, "no column " + name);
  std::size_t j = static_cast<std::size_t>(it - columns.begin());
  std::vector<double> out;
  for (const auto& r : rows) out.push_back(j == 0 ? double(r.n) : r.values[j - 1]);
  return out;
}

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

double at_or_nan(const Sequence& s, long n) { return s.contains(n) ? s.at(n) : nan; }

std::optional<double> constant_value(const PotentialSpec& V) {
  if (auto c = std::get_if<PotentialSpec::Constant>(&V.family())) return c->value;
  return std::nullopt;
}

void require_origin(const PotentialSpec& V, long n, const std::string& what) {
  if (n < V.origin())
    throw Error(ErrorKind::window, what + " starts at " + std::to_string(n) +
                                       ", below the potential origin " +
                                       std::to_string(V.origin()));
}

void add_diagnostics(ResultTable& t, const std::vector<TailDiagnostic>& ds) {
  for (const auto& d : ds) {
    t.meta("diagnostic", d.describe());
    if (!d.decelerating) t.warnings.push_back("l1 diagnostic failed: " + d.describe());
  }
}

template <typename Scalar>
SubdominantResult<Scalar> subdominant(const RunConfig& cfg, const PotentialSpec& V, long lo,
                                      long hi) {
  if (cfg.tail_pad) return backward_subdominant<Scalar>(V, lo, hi, *cfg.tail_pad, cfg.tol);
  return backward_subdominant_adaptive<Scalar>(V, lo, hi, cfg.tol);
}

// Basis for the unperturbed equation on [lo, hi].
Basis reference_basis(const RunConfig& cfg, const PotentialSpec& V0, long lo, long hi,
                      ResultTable& t) {
  std::string kind = cfg.basis;
  auto c = constant_value(V0);
  if (kind == "auto") kind = (c && (*c > 0 || *c < -4)) ? "exponential" : "numeric";
  if (kind == "exponential") {
    if (!c) throw Error(ErrorKind::config, "basis: exponential basis needs a constant comparison");
    t.meta("basis", "exponential");
    return exponential_basis(*c, lo, hi);
  }
  if (kind == "numeric") {
    auto sub = subdominant<double>(cfg, V0, lo, hi);
    t.meta("basis", "numeric");
    t.meta("subdominant_agreement", sub.agreement);
    t.meta("tail_pad", std::to_string(sub.tail_pad));
    Sequence plus = second_solution(sub.values, lo, hi);
    return Basis(std::move(plus), std::move(sub.values));
  }
  throw Error(ErrorKind::config, "basis: \"" + kind + "\" is not available for this command");
}

CoefficientTrajectory trajectory(const RunConfig& cfg, const PerturbationPair& pair, long lo,
                                 long hi, ResultTable& t) {
  if (cfg.trajectory == "seed") {
    long ns = cfg.seed_index.value_or(lo);
    Eigen::Vector2d seed((*cfg.coefficient_seed)[0], (*cfg.coefficient_seed)[1]);
    t.meta("trajectory", "seed at " + std::to_string(ns));
    return propagate(pair, ns, seed, lo, hi);
  }
  ContractionThreshold th = contraction_threshold(pair, lo, hi);
  auto traj = neumann_solve(pair, th.N, hi, cfg.neumann_tol);
  t.meta("trajectory", "neumann");
  t.meta("contraction_N", std::to_string(th.N));
  t.meta("kappa", th.kappa);
  t.meta("contraction_bound", th.bound);
  t.meta("iterations", std::to_string(traj.iterations));
  if (!traj.increments.empty()) t.meta("last_increment", traj.increments.back());
  t.meta("edge_tail", traj.edge_tail);
  return traj;
}

void run_solve(const RunConfig& cfg, ResultTable& t) {
  const PotentialSpec& V = cfg.potential;
  t.columns = {"n", "V", "psi", "residual"};
  if (cfg.hi <= cfg.lo) throw Error(ErrorKind::window, "solve needs at least two sites");
  Sequence psi;
  if (cfg.seed) {
    require_origin(V, cfg.lo + 1, "recursion");
    psi = forward_solve(V, cfg.lo, (*cfg.seed)[0], (*cfg.seed)[1], cfg.hi);
    t.meta("seed", format_number((*cfg.seed)[0]) + " " + format_number((*cfg.seed)[1]));
  } else {
    require_origin(V, cfg.lo + 1, "recursion");
    auto sub = subdominant<long double>(cfg, V, cfg.lo, cfg.hi);
    t.meta("solution", "subdominant, normalized to 1 at range start");
    t.meta("subdominant_agreement", sub.agreement);
    t.meta("tail_pad", std::to_string(sub.tail_pad));
    psi = sub.values.cast<double>();
  }
  double worst = 0;
  for (long n = cfg.lo; n <= cfg.hi; ++n) {
    double r = nan;
    if (n > cfg.lo && n < cfg.hi) {
      r = relative_residual(V, psi, n);
      worst = std::max(worst, r);
    }
    double v = n >= V.origin() ? V(n) : nan;
    t.add_row(n, {v, psi.at(n), r});
  }
  t.meta("max_relative_residual", worst);
}

ComparisonModel build_model(const RunConfig& cfg, const PotentialSpec& V) {
  switch (cfg.regime) {
    case Regime::bounded_slow: {
      double C = cfg.C.value_or(std::numeric_limits<double>::infinity());
      if (!cfg.C)
        for (long n = cfg.lo; n <= cfg.hi; ++n) C = std::min(C, V(n));
      return build_bounded_slow(V, cfg.lo, cfg.hi, C);
    }
    case Regime::bounded_general: return build_bounded_general(V, cfg.strategy, cfg.lo, cfg.hi);
    case Regime::unbounded: return build_unbounded(V, cfg.lo, cfg.hi);
  }
  throw Error(ErrorKind::config, "regime: unknown");
}

void run_compare(const RunConfig& cfg, ResultTable& t) {
  const PotentialSpec& V = cfg.potential;
  require_origin(V, cfg.lo, "range");
  t.columns = {"n", "V", "V_tilde", "beta", "a_plus", "a_minus", "psi_minus", "residual"};
  if (cfg.hi - cfg.lo < 4) throw Error(ErrorKind::window, "compare needs at least five sites");
  ComparisonModel model = build_model(cfg, V);
  t.meta("regime", to_string(model.regime));
  if (model.strategy) t.meta("strategy", to_string(*model.strategy));
  t.meta("c_z", model.c_z);
  add_diagnostics(t, model.diagnostics);
  for (const auto& w : model.warnings)
    if (w.rfind("l1 diagnostic failed", 0) != 0) t.warnings.push_back(w);

  long lo = model.v_tilde.lo(), hi = model.v_tilde.hi();
  std::vector<double> vt(model.v_tilde.values().data(),
                         model.v_tilde.values().data() + model.v_tilde.size());
  PotentialSpec V0 = PotentialSpec::table(vt, lo);
  Basis basis = lg_basis(model, lo, hi);
  t.meta("wronskian", basis.wronskian());
  t.meta("wronskian_drift", basis.wronskian_drift());
  Sequence diff(lo, hi);
  for (long n = lo; n <= hi; ++n) diff.at(n) = -model.defect.at(n);
  PerturbationPair pair = make_pair(V, V0, basis, diff);

  std::optional<CoefficientTrajectory> traj;
  try {
    traj = trajectory(cfg, pair, lo, hi, t);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::non_convergence || cfg.trajectory == "seed") throw;
    t.warnings.push_back(std::string("contraction threshold not found: ") + e.what());
  }
  std::optional<Sequence> psi;
  if (traj) psi = synthesize_solution(*traj, basis);
  double worst = 0;
  for (long n = lo; n <= hi; ++n) {
    double a_p = nan, a_m = nan, p = nan, r = nan;
    if (traj && psi->contains(n)) {
      a_p = traj->a_plus.at(n);
      a_m = traj->a_minus.at(n);
      p = psi->at(n);
      if (psi->contains(n - 1) && psi->contains(n + 1)) {
        r = relative_residual(V, *psi, n);
        worst = std::max(worst, r);
      }
    }
    t.add_row(n, {V(n), model.v_tilde.at(n), pair.beta.at(n), a_p, a_m, p, r});
  }
  if (traj) t.meta("max_relative_residual", worst);
}

void run_classify(const RunConfig& cfg, ResultTable& t) {
  if (!cfg.comparison) throw Error(ErrorKind::config, "comparison: required by classify");
  const PotentialSpec& V = cfg.potential;
  const PotentialSpec& V0 = *cfg.comparison;
  require_origin(V, cfg.lo, "range");
  require_origin(V0, cfg.lo, "range");
  t.columns = {"n",        "beta",    "sigma",  "pi_plus", "pi_minus",
               "a_plus",   "a_minus", "f_plus", "f_minus"};
  if (cfg.hi - cfg.lo < 8) throw Error(ErrorKind::window, "classify needs at least nine sites");
  Basis basis = reference_basis(cfg, V0, cfg.lo, cfg.hi, t);
  t.meta("wronskian", basis.wronskian());
  PerturbationPair pair = make_pair(V, V0, basis);
  auto traj = trajectory(cfg, pair, cfg.lo, cfg.hi, t);
  long start = traj.start(), end = traj.end();
  auto prods = triangular_products(pair, start, end);
  auto f = f_coefficients(traj, prods);
  auto verdict = classify(traj, prods, pair, start, end);

  t.meta("verdict", to_string(verdict.kind));
  auto opt = [&](const char* key, const std::optional<double>& v) {
    if (v) t.meta(key, *v);
  };
  opt("f_plus_inf", verdict.f_plus_inf);
  opt("f_minus_inf", verdict.f_minus_inf);
  opt("a_plus_inf", verdict.a_plus_inf);
  opt("a_minus_inf", verdict.a_minus_inf);
  opt("limit_uncertainty", verdict.limit_uncertainty);
  if (verdict.collapse_index) t.meta("collapse_index", std::to_string(*verdict.collapse_index));
  t.meta("sup_sigma", verdict.sup_sigma);
  t.meta("sup_coupling", verdict.sup_coupling);
  t.meta("sigma_bounded", verdict.sigma_bounded ? "true" : "false");
  if (!verdict.certified_hypothesis.empty())
    t.meta("certified_hypothesis", verdict.certified_hypothesis);
  add_diagnostics(t, verdict.diagnostics);
  for (const auto& note : verdict.notes) t.meta("note", note);

  for (long n = start; n <= end; ++n)
    t.add_row(n, {pair.beta.at(n), prods.sigma.at(n), prods.pi_plus.at(n), prods.pi_minus.at(n),
                  traj.a_plus.at(n), traj.a_minus.at(n), f.f_plus.at(n), f.f_minus.at(n)});
}

// phi+ vanishing just left of the range and phi- decaying (or vanishing past a finite table).
Basis green_basis(const RunConfig& cfg, const PotentialSpec& V, long lo, long hi, ResultTable& t) {
  auto c = constant_value(V);
  std::string kind = cfg.basis;
  if (kind == "auto") kind = (c && (*c > 0 || *c < -4)) ? "exponential" : "dirichlet";
  if (kind == "exponential") {
    if (!c) throw Error(ErrorKind::config, "basis: exponential basis needs a constant potential");
    t.meta("basis", "exponential");
    return exponential_basis(*c, lo - 1, hi + 1);
  }
  if (kind != "dirichlet")
    throw Error(ErrorKind::config, "basis: \"" + kind + "\" is not available for green");
  require_origin(V, lo, "range");
  Sequence plus = forward_solve(V, lo - 1, 0.0, 1.0, hi + 1);
  Sequence minus;
  if (auto last = V.last_index()) {
    if (*last < hi + 1)
      throw Error(ErrorKind::window, "range must end before the last tabulated site " +
                                         std::to_string(*last));
    minus = detail::miller_run<double>(V, lo - 1, hi + 1, *last);
    t.meta("basis", "dirichlet, right edge " + std::to_string(*last + 1));
  } else {
    auto sub = subdominant<double>(cfg, V, lo - 1, hi + 1);
    minus = std::move(sub.values);
    t.meta("basis", "dirichlet left, subdominant right");
    t.meta("subdominant_agreement", sub.agreement);
    t.meta("tail_pad", std::to_string(sub.tail_pad));
  }
  return Basis(std::move(plus), std::move(minus));
}

void run_green(const RunConfig& cfg, ResultTable& t) {
  const PotentialSpec& V = cfg.potential;
  require_origin(V, cfg.lo, "range");
  t.columns = {"n", "V", "G_nn", "lower", "upper", "V_recovered", "S_z"};
  if (cfg.hi - cfg.lo < 2) throw Error(ErrorKind::window, "green needs at least three sites");
  Basis basis = green_basis(cfg, V, cfg.lo, cfg.hi, t);
  t.meta("wronskian", basis.wronskian());
  t.meta("wronskian_drift", basis.wronskian_drift());
  GreenDiagonal g = green_diagonal(basis, cfg.lo, cfg.hi);
  std::optional<DiagBounds> bounds;
  if (cfg.C) {
    bounds = diag_bounds(V, *cfg.C, cfg.lo, cfg.hi);
    t.meta("C", *cfg.C);
    t.meta("k_a", bounds->k_a);
  } else {
    t.warnings.push_back("C not set; upper bound column left empty");
  }
  double worst = 0;
  for (long n = cfg.lo; n <= cfg.hi; ++n) {
    double v = V(n);
    double rec = nan;
    if (n > cfg.lo && n < cfg.hi) {
      rec = potential_from_diag(g, n);
      worst = std::max(worst, std::abs(rec - v) / std::max(1.0, std::abs(v)));
    }
    double lower = bounds ? bounds->lower.at(n) : 1.0 / (v + 2.0);
    double upper = bounds ? bounds->upper.at(n) : nan;
    t.add_row(n, {v, g.g.at(n), lower, upper, rec, at_or_nan(g.s_z, n)});
  }
  t.meta("max_recovery_error", worst);
}

void run_agmon(const RunConfig& cfg, ResultTable& t) {
  const PotentialSpec& V = cfg.potential;
  require_origin(V, cfg.lo, "range");
  t.columns = {"n", "V", "d_A", "log_abs_psi", "envelope"};
  if (cfg.hi <= cfg.lo) throw Error(ErrorKind::window, "agmon needs at least two sites");
  if (cfg.variant == AgmonVariant::k_a_form && !cfg.C)
    throw Error(ErrorKind::config, "C: required by the k_a_form variant");
  auto sub = subdominant<long double>(cfg, V, cfg.lo, cfg.hi);
  Sequence la = log_abs(sub.values);
  double C = cfg.C.value_or(0.0);
  AgmonReport r = agmon_report(V, la, {{cfg.lo, cfg.hi}}, cfg.variant, C);
  t.meta("variant", to_string(cfg.variant));
  if (cfg.C) t.meta("k_a", r.k_a);
  t.meta("subdominant_agreement", sub.agreement);
  t.meta("tail_pad", std::to_string(sub.tail_pad));
  t.meta("distance", r.distances.front());
  t.meta("envelope_sup", r.envelope_sup);
  for (long n = cfg.lo; n <= cfg.hi; ++n)
    t.add_row(n, {V(n), r.distance_from_lo.at(n), la.at(n), r.envelope.at(n)});
}

void run_ortho(const RunConfig& cfg, ResultTable& t) {
  const PotentialSpec& V = cfg.potential;
  t.columns = {"n", "p", "q", "residual"};
  if (cfg.lo < 0) throw Error(ErrorKind::window, "ortho range counts degrees and starts at 0");
  long N = cfg.hi + 1;
  auto J = jacobi_from_potential(V, N);
  double x = cfg.energy;
  auto p = poly_first_kind(J, x, N);
  auto q = poly_second_kind(J, x, std::max(N, 1L));
  // f_{origin+j} = (-1)^j p_j solves the equation with V - E, with f_{origin-1} = 0.
  PotentialSpec VE = PotentialSpec::shifted(V, x);
  long o = V.origin();
  auto f = schrodinger_from_poly(p, o);
  double worst = 0;
  for (long j = cfg.lo; j <= cfg.hi; ++j) {
    long n = o + j;
    double fm = j == 0 ? 0.0 : f.at(n - 1);
    double r = -(f.at(n + 1) + fm - 2.0 * f.at(n)) + VE(n) * f.at(n);
    double scale = std::abs(f.at(n + 1)) + std::abs(fm) + std::abs(f.at(n));
    if (scale > 0) r /= scale;
    worst = std::max(worst, std::abs(r));
    t.add_row(j, {p.at(j), q.at(j), r});
  }
  t.meta("energy", x);
  t.meta("pairing", pairing(J, p, q, cfg.hi));
  t.meta("max_relative_residual", worst);
}

}  // namespace

ResultTable run(const RunConfig& cfg) {
  if (!cfg.command) throw Error(ErrorKind::config, "command: not set");
  ResultTable t;
  t.meta("command", to_string(*cfg.command));
  t.meta("config_digest", cfg.digest);
  t.meta("potential", cfg.potential.name());
  if (cfg.comparison) t.meta("comparison", cfg.comparison->name());
  t.meta("range", std::to_string(cfg.lo) + ":" + std::to_string(cfg.hi));
  t.meta("tol", cfg.tol);
  for (auto s : cfg.random_seeds) t.meta("random_seed", std::to_string(s));
  try {
    switch (*cfg.command) {
      case Command::solve: run_solve(cfg, t); break;
      case Command::compare: run_compare(cfg, t); break;
      case Command::classify: run_classify(cfg, t); break;
      case Command::green: run_green(cfg, t); break;
      case Command::agmon: run_agmon(cfg, t); break;
      case Command::ortho: run_ortho(cfg, t); break;
    }
  } catch (const Error& e) {
    throw Error(e.kind(), std::string(to_string(*cfg.command)) + ": " + e.what(), e.index());
  }
  return t;
}

}  // namespace dsa::io
