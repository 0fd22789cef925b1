#include "dsa/perturbation.hpp"

#include <cmath>
#include <limits>

namespace dsa {

namespace {

SignedLog signed_log(double v) { return SignedLog::of(v); }

PerturbationPair assemble(const PotentialSpec& V, const PotentialSpec& V0, const Basis& basis,
                          const std::vector<SignedLog>& diff) {
  long lo = basis.lo(), hi = basis.hi();
  double W = basis.wronskian();
  if (W == 0) throw Error(ErrorKind::zero_wronskian, "zero Wronskian");
  PerturbationPair p{V, V0, basis, Sequence(lo, hi), Sequence(lo, hi), Sequence(lo, hi),
                     Sequence(lo, hi), {}};
  SignedLog inv_w = signed_log(1.0 / W);
  for (long n = lo; n <= hi; ++n) {
    SignedLog b = diff[static_cast<std::size_t>(n - lo)] * inv_w;
    p.difference_sign.push_back(b.sign);
    SignedLog fp = signed_log(basis.plus().at(n));
    SignedLog fm = signed_log(basis.minus().at(n));
    p.beta.at(n) = b.value();
    p.coupling_pm.at(n) = (b * fp * fm).value();
    p.coupling_mm.at(n) = (b * fm * fm).value();
    p.coupling_pp.at(n) = (b * fp * fp).value();
  }
  return p;
}

// Suffix sums of the contraction weights over [lo, hi].
struct Weights {
  Sequence kappa_tail, bound_tail;
};

Weights tail_weights(const PerturbationPair& pair, long lo, long hi) {
  if (lo < pair.lo() || hi > pair.hi() || hi < lo)
    throw Error(ErrorKind::window, "contraction range outside the pair window");
  const Sequence& fp = pair.basis.plus();
  const Sequence& fm = pair.basis.minus();
  // R_n = max_{n <= k <= m} (phi+_k / phi+_m)^2 over the suffix, the monotonicity defect of |phi+|.
  Sequence R(lo, hi);
  double suffix_min = std::numeric_limits<double>::infinity();
  double worst = 1.0;
  for (long n = hi; n >= lo; --n) {
    double a = std::abs(fp.at(n));
    suffix_min = std::min(suffix_min, a);
    if (suffix_min > 0) worst = std::max(worst, (a / suffix_min) * (a / suffix_min));
    else worst = std::numeric_limits<double>::infinity();
    R.at(n) = worst;
  }
  Weights w{Sequence(lo, hi), Sequence(lo, hi)};
  double k_acc = 0, b_acc = 0;
  for (long n = hi; n >= lo; --n) {
    double g = std::abs(fp.at(n) * fm.at(n));
    double ab = std::abs(pair.beta.at(n));
    double ap = std::abs(pair.coupling_pm.at(n));
    k_acc += ab + ap * g;
    double r = R.at(n);
    // |beta| max(1 + R|g|, |g| + R g^2), written through |beta g| to survive underflow of beta.
    double term = std::max(ab + r * ap, ap + r * ap * g);
    if (ab == 0 && ap == 0) term = 0;
    b_acc += term;
    w.kappa_tail.at(n) = k_acc;
    w.bound_tail.at(n) = b_acc;
  }
  return w;
}

double weighted_distance(const Sequence& dp, const Sequence& dm, const Sequence& fp) {
  double d = 0;
  for (long n = dp.lo(); n <= dp.hi(); ++n) {
    double f = fp.at(n);
    d = std::max(d, std::abs(dp.at(n) * f * f) + std::abs(dm.at(n)));
  }
  return d;
}

}  // namespace

PerturbationPair make_pair(const PotentialSpec& V, const PotentialSpec& V0, const Basis& basis) {
  std::vector<SignedLog> diff;
  for (long n = basis.lo(); n <= basis.hi(); ++n) diff.push_back(potential_difference(V, V0, n));
  return assemble(V, V0, basis, diff);
}

PerturbationPair make_pair(const PotentialSpec& V, const PotentialSpec& V0, const Basis& basis,
                           const Sequence& difference) {
  std::vector<SignedLog> diff;
  for (long n = basis.lo(); n <= basis.hi(); ++n) diff.push_back(signed_log(difference.at(n)));
  return assemble(V, V0, basis, diff);
}

Sequence beta(const PotentialSpec& V, const PotentialSpec& V0, const Basis& basis) {
  return make_pair(V, V0, basis).beta;
}

Eigen::Matrix2d step_matrix(const PerturbationPair& pair, long n) {
  double p = pair.coupling_pm.at(n);
  Eigen::Matrix2d m;
  m << 1.0 + p, pair.coupling_mm.at(n), -pair.coupling_pp.at(n), 1.0 - p;
  return m;
}

Eigen::Vector2d transfer_step(const Eigen::Vector2d& a, const PerturbationPair& pair, long n) {
  return step_matrix(pair, n) * a;
}

ContractionThreshold contraction_at(const PerturbationPair& pair, long N, long hi) {
  Weights w = tail_weights(pair, N, hi);
  return {N, w.kappa_tail.at(N), w.bound_tail.at(N)};
}

ContractionThreshold contraction_threshold(const PerturbationPair& pair, long lo, long hi,
                                           double target) {
  Weights w = tail_weights(pair, lo, hi);
  for (long n = lo; n <= hi; ++n)
    if (w.kappa_tail.at(n) < target) {
      // The bound must be recomputed with R restricted to [n, hi].
      return contraction_at(pair, n, hi);
    }
  throw Error(ErrorKind::non_convergence,
              "no contraction threshold: tail sum never drops below " + std::to_string(target) +
                  " on [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
}

CoefficientTrajectory neumann_solve(const PerturbationPair& pair, long N, long hi, double tol) {
  if (!(tol > 0)) throw Error(ErrorKind::domain, "tolerance must be positive");
  ContractionThreshold c = contraction_at(pair, N, hi);
  if (!(c.kappa < 1))
    throw Error(ErrorKind::non_convergence,
                "contraction constant " + std::to_string(c.kappa) + " is not below 1", N);
  if (!(c.bound < 1))
    throw Error(ErrorKind::non_convergence,
                "weighted-norm bound " + std::to_string(c.bound) + " is not below 1", N);
  int cap = c.bound == 0 ? 1 : static_cast<int>(std::ceil(std::log(tol) / std::log(c.bound))) + 1;
  cap = std::max(cap, 1);

  CoefficientTrajectory t;
  t.kappa = c.kappa;
  t.contraction_bound = c.bound;
  Sequence xp(N, hi, 0.0), xm(N, hi, 1.0);
  const Sequence& fp = pair.basis.plus();
  for (int it = 1; it <= cap; ++it) {
    Sequence np(N, hi), nm(N, hi);
    double sp = 0, sm = 0;
    for (long n = hi; n >= N; --n) {
      double p = pair.coupling_pm.at(n);
      sp += p * xp.at(n) + pair.coupling_mm.at(n) * xm.at(n);
      sm += -pair.coupling_pp.at(n) * xp.at(n) - p * xm.at(n);
      np.at(n) = -sp;
      nm.at(n) = 1.0 - sm;
    }
    Sequence dp = np, dm = nm;
    dp.values() -= xp.values();
    dm.values() -= xm.values();
    double d = weighted_distance(dp, dm, fp);
    xp = std::move(np);
    xm = std::move(nm);
    t.increments.push_back(d);
    t.iterations = it;
    if (d <= tol) {
      t.a_plus = std::move(xp);
      t.a_minus = std::move(xm);
      Weights w = tail_weights(pair, N, hi);
      long q = std::max(N, hi - (hi - N + 1) / 4);
      t.edge_tail = w.kappa_tail.at(q);
      return t;
    }
  }
  throw Error(ErrorKind::non_convergence,
              "Neumann iteration did not reach tolerance within " + std::to_string(cap) +
                  " iterations",
              N);
}

CoefficientTrajectory propagate(const PerturbationPair& pair, long n_seed,
                                const Eigen::Vector2d& seed, long lo, long hi) {
  if (lo < pair.lo() || hi > pair.hi() || n_seed < lo || n_seed > hi)
    throw Error(ErrorKind::window, "propagation range outside the pair window");
  CoefficientTrajectory t;
  t.a_plus = Sequence(lo, hi);
  t.a_minus = Sequence(lo, hi);
  Eigen::Vector2d a = seed;
  t.a_plus.at(n_seed) = a[0];
  t.a_minus.at(n_seed) = a[1];
  for (long n = n_seed; n < hi; ++n) {
    a = transfer_step(a, pair, n);
    t.a_plus.at(n + 1) = a[0];
    t.a_minus.at(n + 1) = a[1];
  }
  a = seed;
  for (long n = n_seed - 1; n >= lo; --n) {
    // (I + M)^{-1} = I - M because M^2 = 0.
    Eigen::Matrix2d inv = 2.0 * Eigen::Matrix2d::Identity() - step_matrix(pair, n);
    a = inv * a;
    t.a_plus.at(n) = a[0];
    t.a_minus.at(n) = a[1];
  }
  return t;
}

Sequence synthesize_solution(const CoefficientTrajectory& traj, const Basis& basis) {
  long lo = traj.start(), hi = traj.end();
  if (lo < basis.lo() || hi > basis.hi())
    throw Error(ErrorKind::window, "trajectory window is not covered by the basis");
  Sequence psi(lo, hi);
  for (long n = lo; n <= hi; ++n)
    psi.at(n) = traj.a_plus.at(n) * basis.plus().at(n) + traj.a_minus.at(n) * basis.minus().at(n);
  return psi;
}

double constraint_residual(const CoefficientTrajectory& traj, const Basis& basis, long n) {
  double fp = basis.plus().at(n - 1), fm = basis.minus().at(n - 1);
  double dp = traj.a_plus.at(n) - traj.a_plus.at(n - 1);
  double dm = traj.a_minus.at(n) - traj.a_minus.at(n - 1);
  double scale = std::abs(traj.a_plus.at(n - 1) * fp) + std::abs(traj.a_minus.at(n - 1) * fm);
  double r = dp * fp + dm * fm;
  return scale == 0 ? std::abs(r) : std::abs(r) / scale;
}

Sequence envelope_remainder(const Sequence& psi, const Sequence& phi_minus) {
  long lo = std::max(psi.lo(), phi_minus.lo()), hi = std::min(psi.hi(), phi_minus.hi());
  Sequence env = monotone_envelope(phi_minus.slice(lo, hi));
  Sequence r(lo, hi);
  for (long n = lo; n <= hi; ++n)
    r.at(n) = env.at(n) == 0 ? 0.0 : (psi.at(n) - phi_minus.at(n)) / env.at(n);
  return r;
}

double trench_J(const PotentialSpec& V, const PotentialSpec& V0, const Basis& basis, long n) {
  SignedLog d = potential_difference(V, V0, n);
  return (d * signed_log(basis.plus().at(n)) * signed_log(basis.minus().at(n))).value();
}

TrenchSeries trench_J_series(const PotentialSpec& V, const PotentialSpec& V0, const Basis& basis,
                             long lo, long hi) {
  Sequence J(lo, hi);
  for (long n = lo; n <= hi; ++n) J.at(n) = trench_J(V, V0, basis, n);
  return {J, deceleration("sum |J_n|", J)};
}

}  // namespace dsa
