#pragma once

#include <cmath>
#include <string>
#include <utility>

#include <Eigen/Core>

#include "dsa/error.hpp"

namespace dsa {

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

// A finite window [n_lo, n_hi] of values addressed by absolute lattice index.
template <typename Scalar>
class LatticeSequence {
 public:
  LatticeSequence() : n_lo_(0), values_(Vector<Scalar>::Zero(1)) {}

  LatticeSequence(long n_lo, long n_hi, Scalar fill = Scalar(0)) : n_lo_(n_lo) {
    if (n_hi < n_lo)
      throw Error(ErrorKind::window, "empty window [" + std::to_string(n_lo) + ", " +
                                         std::to_string(n_hi) + "]");
    values_ = Vector<Scalar>::Constant(n_hi - n_lo + 1, fill);
  }

  LatticeSequence(long n_lo, Vector<Scalar> values) : n_lo_(n_lo), values_(std::move(values)) {
    if (values_.size() < 1) throw Error(ErrorKind::window, "empty window");
  }

  long lo() const { return n_lo_; }
  long hi() const { return n_lo_ + static_cast<long>(values_.size()) - 1; }
  long size() const { return static_cast<long>(values_.size()); }
  bool contains(long n) const { return n >= lo() && n <= hi(); }

  const Scalar& at(long n) const {
    check(n);
    return values_[n - n_lo_];
  }
  Scalar& at(long n) {
    check(n);
    return values_[n - n_lo_];
  }
  const Scalar& operator[](long n) const { return at(n); }
  Scalar& operator[](long n) { return at(n); }

  const Vector<Scalar>& values() const { return values_; }
  Vector<Scalar>& values() { return values_; }

  LatticeSequence slice(long a, long b) const {
    check(a);
    check(b);
    if (b < a) throw Error(ErrorKind::window, "empty slice");
    return LatticeSequence(a, Vector<Scalar>(values_.segment(a - n_lo_, b - a + 1)));
  }

  template <typename Other>
  LatticeSequence<Other> cast() const {
    return LatticeSequence<Other>(n_lo_, Vector<Other>(values_.template cast<Other>()));
  }

 private:
  void check(long n) const {
    if (!contains(n))
      throw Error(ErrorKind::window,
                  "index " + std::to_string(n) + " outside window [" + std::to_string(lo()) +
                      ", " + std::to_string(hi()) + "]",
                  n);
  }

  long n_lo_;
  Vector<Scalar> values_;
};

using Sequence = LatticeSequence<double>;

template <typename Scalar>
Scalar second_difference(const LatticeSequence<Scalar>& f, long n) {
  return f.at(n + 1) + f.at(n - 1) - Scalar(2) * f.at(n);
}

enum class Direction { plus, minus };

template <typename Scalar>
Scalar nabla(const LatticeSequence<Scalar>& f, long n, Direction d) {
  return d == Direction::plus ? f.at(n + 1) - f.at(n) : f.at(n) - f.at(n - 1);
}

// Reflection psi_n -> (-1)^n psi_n, the solution side of V -> -4 - V.
template <typename Scalar>
LatticeSequence<Scalar> reflect_symmetry(const LatticeSequence<Scalar>& psi) {
  LatticeSequence<Scalar> out = psi;
  for (long n = psi.lo(); n <= psi.hi(); ++n)
    if (n % 2 != 0) out.at(n) = -psi.at(n);
  return out;
}

// Reduction of order: psi+_m = 0, psi+_n = psi-_n * sum_{k=m}^{n-1} 1/(psi-_k psi-_{k+1}).
template <typename Scalar>
LatticeSequence<Scalar> second_solution(const LatticeSequence<Scalar>& minus, long m, long M) {
  if (M <= m) throw Error(ErrorKind::window, "second_solution needs M > m");
  for (long k = m; k <= M; ++k)
    if (minus.at(k) == Scalar(0))
      throw Error(ErrorKind::domain, "subdominant solution vanishes at " + std::to_string(k), k);
  LatticeSequence<Scalar> plus(m, M);
  Scalar acc(0);
  for (long n = m + 1; n <= M; ++n) {
    acc += Scalar(1) / (minus.at(n - 1) * minus.at(n));
    plus.at(n) = minus.at(n) * acc;
  }
  return plus;
}

template <typename Scalar>
Scalar wronskian(const LatticeSequence<Scalar>& minus, const LatticeSequence<Scalar>& plus,
                 long n) {
  return minus.at(n) * plus.at(n + 1) - minus.at(n + 1) * plus.at(n);
}

// Pair of solutions (phi+, phi-) of one equation together with their Wronskian.
template <typename Scalar>
class SolutionBasis {
 public:
  SolutionBasis(LatticeSequence<Scalar> plus, LatticeSequence<Scalar> minus)
      : plus_(std::move(plus)), minus_(std::move(minus)) {
    lo_ = std::max(plus_.lo(), minus_.lo());
    hi_ = std::min(plus_.hi(), minus_.hi());
    if (hi_ <= lo_) throw Error(ErrorKind::window, "basis members share fewer than two indices");
    w_ = dsa::wronskian(minus_, plus_, lo_);
    if (w_ == Scalar(0) || !std::isfinite(static_cast<double>(w_)))
      throw Error(ErrorKind::zero_wronskian, "basis members are linearly dependent", lo_);
    drift_ = 0;
    for (long n = lo_ + 1; n < hi_; ++n) {
      double d = static_cast<double>(std::abs(dsa::wronskian(minus_, plus_, n) - w_) / std::abs(w_));
      if (d > drift_) drift_ = d;
    }
  }

  const LatticeSequence<Scalar>& plus() const { return plus_; }
  const LatticeSequence<Scalar>& minus() const { return minus_; }
  Scalar wronskian() const { return w_; }
  Scalar wronskian(long n) const { return dsa::wronskian(minus_, plus_, n); }
  // Largest relative departure of W(n) from W(lo) over the shared window.
  double wronskian_drift() const { return drift_; }
  long lo() const { return lo_; }
  long hi() const { return hi_; }

 private:
  LatticeSequence<Scalar> plus_, minus_;
  Scalar w_;
  double drift_;
  long lo_, hi_;
};

using Basis = SolutionBasis<double>;

template <typename Scalar>
SolutionBasis<Scalar> reflect_symmetry(const SolutionBasis<Scalar>& b) {
  return SolutionBasis<Scalar>(reflect_symmetry(b.plus()), reflect_symmetry(b.minus()));
}

// Suffix maximum max_{m >= n} |f_m| within the window.
template <typename Scalar>
LatticeSequence<Scalar> monotone_envelope(const LatticeSequence<Scalar>& f) {
  LatticeSequence<Scalar> env(f.lo(), f.hi());
  Scalar run(0);
  for (long n = f.hi(); n >= f.lo(); --n) {
    run = std::max(run, Scalar(std::abs(f.at(n))));
    env.at(n) = run;
  }
  return env;
}

// Sign and natural log of the magnitude; sign 0 encodes an exact zero.
struct SignedLog {
  int sign = 0;
  double log_abs = -INFINITY;

  static SignedLog of(double v) {
    if (v == 0) return {};
    return {v > 0 ? 1 : -1, std::log(std::abs(v))};
  }
  double value() const { return sign == 0 ? 0.0 : sign * std::exp(log_abs); }
  SignedLog operator*(const SignedLog& o) const {
    if (sign == 0 || o.sign == 0) return {};
    return {sign * o.sign, log_abs + o.log_abs};
  }
};

}  // namespace dsa
