#include "dsa/dichotomy.hpp"

#include <cmath>
#include <limits>

namespace dsa {

namespace {

// First p0 such that values are exactly zero on [p0, hi], if any.
std::optional<long> zero_suffix(const Sequence& s, long lo, long hi) {
  if (s.at(hi) != 0.0) return std::nullopt;
  long p = hi;
  while (p > lo && s.at(p - 1) == 0.0) --p;
  return p;
}

double sign_of(double v) { return v > 0 ? 1.0 : (v < 0 ? -1.0 : 0.0); }

}  // namespace

const char* to_string(DichotomyCase c) {
  switch (c) {
    case DichotomyCase::finite_collapse_plus: return "finite_collapse_plus";
    case DichotomyCase::finite_collapse_minus: return "finite_collapse_minus";
    case DichotomyCase::sigma_driven: return "sigma_driven";
    case DichotomyCase::generic: return "generic";
    case DichotomyCase::unbounded_sigma_dominant: return "unbounded_sigma_dominant";
    case DichotomyCase::unbounded_sigma_vanishing_plus: return "unbounded_sigma_vanishing_plus";
    case DichotomyCase::hypotheses_not_met: return "hypotheses_not_met";
  }
  return "unknown";
}

Eigen::Matrix2d TriangularProducts::product(long n) const {
  Eigen::Matrix2d t;
  t << pi_plus.at(n), 0.0, sigma.at(n), pi_minus.at(n);
  return t;
}

Eigen::Matrix2d lower_factor(const PerturbationPair& pair, long n) {
  double p = pair.coupling_pm.at(n);
  Eigen::Matrix2d g;
  g << 1.0 + p, 0.0, -pair.coupling_pp.at(n), 1.0 - p;
  return g;
}

Eigen::Matrix2d upper_error(const PerturbationPair& pair, long n) {
  Eigen::Matrix2d e;
  e << 0.0, pair.coupling_mm.at(n), 0.0, 0.0;
  return e;
}

TriangularProducts triangular_products(const PerturbationPair& pair, long lo, long hi) {
  if (lo < pair.lo() || hi > pair.hi() || hi < lo)
    throw Error(ErrorKind::window, "product range outside the pair window");
  TriangularProducts t{Sequence(lo, hi), Sequence(lo, hi), Sequence(lo, hi), Sequence(lo, hi),
                       Sequence(lo, hi)};
  for (long n = lo; n <= hi; ++n) {
    double p = pair.coupling_pm.at(n);
    t.p_plus.at(n) = 1.0 + p;
    t.p_minus.at(n) = 1.0 - p;
    double q = pair.coupling_pp.at(n);
    if (n == lo) {
      t.sigma.at(n) = -q;
      t.pi_plus.at(n) = t.p_plus.at(n);
      t.pi_minus.at(n) = t.p_minus.at(n);
    } else {
      t.sigma.at(n) = -q * t.pi_plus.at(n - 1) + t.p_minus.at(n) * t.sigma.at(n - 1);
      t.pi_plus.at(n) = t.pi_plus.at(n - 1) * t.p_plus.at(n);
      t.pi_minus.at(n) = t.pi_minus.at(n - 1) * t.p_minus.at(n);
    }
  }
  return t;
}

FCoefficients f_coefficients(const CoefficientTrajectory& traj, const TriangularProducts& prods) {
  long lo = traj.start(), hi = traj.end();
  if (prods.lo() != lo || prods.hi() < hi - 1)
    throw Error(ErrorKind::window, "products must start at the trajectory start and cover it");
  FCoefficients f{Sequence(lo, hi), Sequence(lo, hi), Sequence(lo, hi)};
  f.f_plus.at(lo) = traj.a_plus.at(lo);
  f.f_minus.at(lo) = traj.a_minus.at(lo);
  for (long n = lo; n < hi; ++n) {
    double pp = prods.pi_plus.at(n), pm = prods.pi_minus.at(n);
    if (pp == 0 || pm == 0)
      throw Error(ErrorKind::domain, "triangular product vanishes", n);
    double fp = traj.a_plus.at(n + 1) / pp;
    f.f_plus.at(n + 1) = fp;
    f.f_minus.at(n + 1) = (traj.a_minus.at(n + 1) - prods.sigma.at(n) * fp) / pm;
  }
  for (long n = lo; n <= hi; ++n)
    f.r.at(n) = f.f_plus.at(n) == 0 ? std::numeric_limits<double>::quiet_NaN()
                                    : f.f_minus.at(n) / f.f_plus.at(n);
  return f;
}

DichotomyVerdict classify(const CoefficientTrajectory& traj, const TriangularProducts& prods,
                          const PerturbationPair& pair, long lo, long hi) {
  if (lo < traj.start() || hi > traj.end() || lo < prods.lo() || hi > prods.hi() || hi - lo < 7)
    throw Error(ErrorKind::window, "classification range must lie in the trajectory and products "
                                   "and hold at least eight sites");
  DichotomyVerdict v;
  const Basis& basis = pair.basis;
  double W = basis.wronskian();

  bool beta_zero = true;
  for (long n = lo; n <= hi; ++n)
    if (pair.sign_at(n) != 0) beta_zero = false;
  // Start of the suffix on which V = V0 exactly; zeros of a+- left of it are underflow.
  long exact_from = hi + 1;
  while (exact_from > lo && pair.sign_at(exact_from - 1) == 0) --exact_from;

  Sequence J(lo, hi), sigma = prods.sigma.slice(lo, hi);
  for (long n = lo; n <= hi; ++n) {
    J.at(n) = pair.coupling_pm.at(n) * W;
    v.sup_coupling = std::max(v.sup_coupling, std::abs(pair.coupling_pm.at(n)));
    v.sup_sigma = std::max(v.sup_sigma, std::abs(sigma.at(n)));
  }

  if (!beta_zero) {
    auto exact = [&](std::optional<long> z) -> std::optional<long> {
      if (!z || exact_from > hi) return std::nullopt;
      return std::max(*z, exact_from);
    };
    auto zm = exact(zero_suffix(traj.a_minus, lo, hi));
    if (zm && traj.a_plus.at(*zm) != 0) {
      v.kind = DichotomyCase::finite_collapse_plus;
      v.collapse_index = *zm;
      v.a_plus_inf = traj.a_plus.at(hi);
      v.limit_uncertainty = std::abs(traj.a_plus.at(hi) - traj.a_plus.at(*zm));
      return v;
    }
    auto zp = exact(zero_suffix(traj.a_plus, lo, hi));
    if (zp && traj.a_minus.at(*zp) != 0) {
      v.kind = DichotomyCase::finite_collapse_minus;
      v.collapse_index = *zp;
      v.a_minus_inf = traj.a_minus.at(hi);
      v.limit_uncertainty = std::abs(traj.a_minus.at(hi) - traj.a_minus.at(*zp));
      return v;
    }
  }

  TailDiagnostic dj = deceleration("sum |J_n|", J);
  v.diagnostics.push_back(dj);
  if (!dj.decelerating) {
    v.notes.push_back("sum |(V - V0) phi+ phi-| is not decelerating");
    return v;
  }
  if (!(v.sup_coupling < 1)) {
    v.notes.push_back("sup |beta phi+ phi-| is not below 1");
    return v;
  }

  FCoefficients f = f_coefficients(traj, prods);
  TailDiagnostic ds = bounded_sup("sup |Sigma_n|", sigma);
  v.diagnostics.push_back(ds);
  v.sigma_bounded = ds.decelerating;

  if (v.sigma_bounded) {
    Sequence phi2(lo, hi), dv(lo, hi);
    for (long n = lo; n <= hi; ++n) {
      double m = basis.minus().at(n);
      phi2.at(n) = m * m;
      dv.at(n) = pair.beta.at(n) * W;
    }
    TailDiagnostic d1 = deceleration("sum |phi-_n|^2", phi2);
    TailDiagnostic d2 = deceleration("sum |V_n - V0_n|", dv);
    v.diagnostics.push_back(d1);
    v.diagnostics.push_back(d2);
    if (d1.decelerating) v.certified_hypothesis = d1.name;
    else if (d2.decelerating) v.certified_hypothesis = d2.name;
    else {
      v.notes.push_back("neither summability disjunct is decelerating");
      return v;
    }
    TailLimit lp = tail_limit(f.f_plus, lo, hi);
    TailLimit lm = tail_limit(f.f_minus, lo, hi);
    v.f_plus_inf = lp.mean;
    v.f_minus_inf = lm.mean;
    v.limit_uncertainty = std::max(lp.drift, lm.drift);
    if (!lm.is_zero()) {
      v.kind = DichotomyCase::generic;
    } else if (!lp.is_zero()) {
      v.kind = DichotomyCase::sigma_driven;
    } else {
      v.kind = DichotomyCase::hypotheses_not_met;
      v.notes.push_back("both f limits vanish");
      v.f_plus_inf.reset();
      v.f_minus_inf.reset();
    }
    return v;
  }

  // Unbounded Sigma.
  double sign = 0;
  bool constant_sign = true;
  Sequence phi2sigma(lo, hi);
  for (long n = lo; n <= hi; ++n) {
    double s = sign_of(pair.coupling_pm.at(n)) *
               sign_of(basis.plus().at(n) * basis.minus().at(n)) * sign_of(W);
    if (s != 0) {
      if (sign == 0) sign = s;
      else if (s != sign) constant_sign = false;
    }
    double m = basis.minus().at(n);
    phi2sigma.at(n) = m * m * sigma.at(n);
  }
  TailDiagnostic dphi = bounded_sup("sup |(phi-_n)^2 Sigma_n|", phi2sigma);
  v.diagnostics.push_back(dphi);
  if (!constant_sign) {
    v.notes.push_back("V - V0 changes sign");
    return v;
  }
  if (!dphi.decelerating) {
    v.notes.push_back("(phi-)^2 Sigma is not bounded");
    return v;
  }
  v.certified_hypothesis = "sign-constant V - V0";
  TailLimit lp = tail_limit(f.f_plus, lo, hi);
  if (!lp.is_zero()) {
    v.kind = DichotomyCase::unbounded_sigma_dominant;
    v.f_plus_inf = lp.mean;
    v.limit_uncertainty = lp.drift;
    return v;
  }
  TailLimit ap = tail_limit(traj.a_plus, lo, hi);
  TailLimit am = tail_limit(traj.a_minus, lo, hi);
  if (ap.is_zero() && !am.is_zero()) {
    v.kind = DichotomyCase::unbounded_sigma_vanishing_plus;
    v.a_minus_inf = am.mean;
    v.limit_uncertainty = am.drift;
    return v;
  }
  v.notes.push_back("tail limits fit neither unbounded case");
  return v;
}

}  // namespace dsa
