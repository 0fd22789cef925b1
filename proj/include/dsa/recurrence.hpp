#pragma once

#include <cmath>
#include <limits>
#include <string>

#include "dsa/lattice.hpp"
#include "dsa/potential.hpp"

namespace dsa {

// psi on [n0, n_max] from (psi_{n0}, psi_{n0+1}) via psi_{n+1} = (2 + V_n) psi_n - psi_{n-1}.
template <typename Scalar = double>
LatticeSequence<Scalar> forward_solve(const PotentialSpec& V, long n0, Scalar psi0, Scalar psi1,
                                      long n_max) {
  if (n_max < n0 + 1) throw Error(ErrorKind::window, "forward_solve needs n_max >= n0 + 1");
  LatticeSequence<Scalar> psi(n0, n_max);
  psi.at(n0) = psi0;
  psi.at(n0 + 1) = psi1;
  for (long n = n0 + 1; n < n_max; ++n) {
    Scalar next = (Scalar(2) + Scalar(V(n))) * psi.at(n) - psi.at(n - 1);
    if (!std::isfinite(static_cast<double>(next)))
      throw Error(ErrorKind::overflow,
                  "forward recursion left the representable range at " + std::to_string(n + 1),
                  n + 1);
    psi.at(n + 1) = next;
  }
  return psi;
}

// ((-Delta + V) psi)_n.
template <typename Scalar>
Scalar residual(const PotentialSpec& V, const LatticeSequence<Scalar>& psi, long n) {
  return -second_difference(psi, n) + Scalar(V(n)) * psi.at(n);
}

// Residual scaled by |psi_{n-1}| + |psi_n| + |psi_{n+1}|; zero when all three vanish.
template <typename Scalar>
double relative_residual(const PotentialSpec& V, const LatticeSequence<Scalar>& psi, long n) {
  Scalar scale = std::abs(psi.at(n - 1)) + std::abs(psi.at(n)) + std::abs(psi.at(n + 1));
  if (scale == Scalar(0)) return 0.0;
  return static_cast<double>(std::abs(residual(V, psi, n)) / scale);
}

template <typename Scalar>
double max_relative_residual(const PotentialSpec& V, const LatticeSequence<Scalar>& psi) {
  double worst = 0;
  for (long n = psi.lo() + 1; n < psi.hi(); ++n)
    worst = std::max(worst, relative_residual(V, psi, n));
  return worst;
}

template <typename Scalar>
struct SubdominantResult {
  LatticeSequence<Scalar> values;
  // Largest pointwise relative difference between the pad and 2*pad runs.
  double agreement;
  long tail_pad;
};

namespace detail {

// Backward recursion from (psi_top, psi_{top+1}) = (1, 0), normalized to 1 at n_lo.
template <typename Scalar>
LatticeSequence<Scalar> miller_run(const PotentialSpec& V, long n_lo, long n_hi, long top) {
  const Scalar big = std::sqrt(std::numeric_limits<Scalar>::max());
  LatticeSequence<Scalar> out(n_lo, n_hi);
  Scalar next(0), cur(1);
  if (top <= n_hi) out.at(top) = cur;
  for (long n = top; n > n_lo; --n) {
    Scalar prev = (Scalar(2) + Scalar(V(n))) * cur - next;
    next = cur;
    cur = prev;
    if (n - 1 <= n_hi) out.at(n - 1) = cur;
    if (std::abs(cur) > big) {
      Scalar s = Scalar(1) / big;
      cur *= s;
      next *= s;
      for (long k = std::max(n - 1, n_lo); k <= n_hi; ++k) out.at(k) *= s;
    }
  }
  Scalar first = out.at(n_lo);
  if (first == Scalar(0) || !std::isfinite(first))
    throw Error(ErrorKind::non_convergence, "backward recursion vanished at the left edge", n_lo);
  out.values() /= first;
  return out;
}

}  // namespace detail

// Minimal solution on [n_lo, n_hi] by Miller backward recursion, validated by tail doubling.
template <typename Scalar = double>
SubdominantResult<Scalar> backward_subdominant(const PotentialSpec& V, long n_lo, long n_hi,
                                               long tail_pad, double tol = 1e-10) {
  if (tail_pad < 1) throw Error(ErrorKind::domain, "tail_pad must be >= 1");
  if (n_hi <= n_lo) throw Error(ErrorKind::window, "backward_subdominant needs n_hi > n_lo");
  auto a = detail::miller_run<Scalar>(V, n_lo, n_hi, n_hi + tail_pad);
  auto b = detail::miller_run<Scalar>(V, n_lo, n_hi, n_hi + 2 * tail_pad);
  const Scalar tiny = std::numeric_limits<Scalar>::min();
  double agreement = 0;
  for (long n = n_lo; n <= n_hi; ++n) {
    Scalar x = a.at(n), y = b.at(n);
    Scalar scale = std::max(std::abs(x), std::abs(y));
    if (scale <= tiny) continue;
    agreement = std::max(agreement, static_cast<double>(std::abs(x - y) / scale));
  }
  if (!(agreement <= tol))
    throw Error(ErrorKind::non_convergence,
                "tail doubling agreement " + std::to_string(agreement) + " exceeds tolerance " +
                    std::to_string(tol) + " with tail_pad " + std::to_string(tail_pad));
  return {std::move(b), agreement, 2 * tail_pad};
}

// Doubles the pad from initial_pad until the agreement meets tol or max_pad is exceeded.
template <typename Scalar = double>
SubdominantResult<Scalar> backward_subdominant_adaptive(const PotentialSpec& V, long n_lo,
                                                        long n_hi, double tol = 1e-10,
                                                        long initial_pad = 32,
                                                        long max_pad = 1L << 22) {
  for (long pad = initial_pad;; pad *= 2) {
    try {
      return backward_subdominant<Scalar>(V, n_lo, n_hi, pad, tol);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::non_convergence || 2 * pad > max_pad) throw;
    }
  }
}

// {x^-n, x^n} for V constant outside [-4, 0]; Wronskian 1/x - x.
template <typename Scalar = double>
SolutionBasis<Scalar> exponential_basis(double v, long lo, long hi) {
  Scalar x = Scalar(small_root(v));
  LatticeSequence<Scalar> plus(lo, hi), minus(lo, hi);
  for (long n = lo; n <= hi; ++n) {
    minus.at(n) = std::pow(x, Scalar(n));
    plus.at(n) = std::pow(x, Scalar(-n));
    if (!std::isfinite(static_cast<double>(plus.at(n))) || minus.at(n) == Scalar(0))
      throw Error(ErrorKind::overflow, "exponential basis not representable at " +
                                           std::to_string(n), n);
  }
  return SolutionBasis<Scalar>(std::move(plus), std::move(minus));
}

}  // namespace dsa
