#pragma once

#include <string>

#include <Eigen/Core>

#include "dsa/lattice.hpp"
#include "dsa/potential.hpp"

namespace dsa {

// Off-diagonal a_n (n >= 0, a_0 := 1 by convention) and diagonal b_n (n >= 1) of a Jacobi matrix.
template <typename Scalar>
struct JacobiData {
  LatticeSequence<Scalar> a, b;

  JacobiData(LatticeSequence<Scalar> a_, LatticeSequence<Scalar> b_)
      : a(std::move(a_)), b(std::move(b_)) {
    for (long n = a.lo(); n <= a.hi(); ++n)
      if (!(a.at(n) > Scalar(0)))
        throw Error(ErrorKind::domain, "Jacobi off-diagonal must be positive", n);
  }

  // Largest degree N such that p_0..p_N can be formed.
  long max_degree() const { return std::min(a.hi(), b.hi()); }
};

template <typename Scalar = double>
JacobiData<Scalar> constant_jacobi(Scalar a, Scalar b, long N) {
  return {LatticeSequence<Scalar>(0, N + 1, a), LatticeSequence<Scalar>(1, N + 1, b)};
}

// a_n = 1 and b_{j+1} = V_{origin + j} + 2, so degree j sits at lattice site origin + j.
// Evaluate the returned data at x = E.
JacobiData<double> jacobi_from_potential(const PotentialSpec& V, long N);

// p_0 .. p_N with x p_n = a_{n+1} p_{n+1} + b_{n+1} p_n + a_n p_{n-1}, p_{-1} = 0.
template <typename Scalar>
LatticeSequence<Scalar> poly_first_kind(const JacobiData<Scalar>& J, Scalar x, long N) {
  if (N < 0) throw Error(ErrorKind::domain, "degree must be nonnegative");
  if (N > J.max_degree()) throw Error(ErrorKind::window, "Jacobi data too short for degree", N);
  LatticeSequence<Scalar> p(0, N);
  p.at(0) = Scalar(1);
  Scalar prev(0);
  for (long n = 0; n < N; ++n) {
    Scalar next = ((x - J.b.at(n + 1)) * p.at(n) - J.a.at(n) * prev) / J.a.at(n + 1);
    prev = p.at(n);
    p.at(n + 1) = next;
  }
  return p;
}

// Monic P_n with x P_n = P_{n+1} + b_{n+1} P_n + a_n^2 P_{n-1}.
template <typename Scalar>
LatticeSequence<Scalar> poly_monic(const JacobiData<Scalar>& J, Scalar x, long N) {
  if (N < 0) throw Error(ErrorKind::domain, "degree must be nonnegative");
  LatticeSequence<Scalar> P(0, N);
  P.at(0) = Scalar(1);
  Scalar prev(0);
  for (long n = 0; n < N; ++n) {
    Scalar a = J.a.at(n);
    Scalar next = (x - J.b.at(n + 1)) * P.at(n) - a * a * prev;
    prev = P.at(n);
    P.at(n + 1) = next;
  }
  return P;
}

// A_{n+1}(x) = a_{n+1}^{-1} [[x - b_{n+1}, -1], [a_{n+1}^2, 0]], acting on (p_n, a_n p_{n-1}).
template <typename Scalar>
Eigen::Matrix<Scalar, 2, 2> transfer_matrix(const JacobiData<Scalar>& J, Scalar x, long n) {
  Scalar a = J.a.at(n + 1);
  Eigen::Matrix<Scalar, 2, 2> A;
  A << (x - J.b.at(n + 1)) / a, Scalar(-1) / a, a, Scalar(0);
  return A;
}

// Transfer-propagated solution from (q_0, a_0 q_{-1}) = (0, -1).
template <typename Scalar>
LatticeSequence<Scalar> poly_second_kind(const JacobiData<Scalar>& J, Scalar x, long N) {
  if (N < 1) throw Error(ErrorKind::domain, "second-kind polynomials need N >= 1");
  if (N > J.max_degree()) throw Error(ErrorKind::window, "Jacobi data too short for degree", N);
  LatticeSequence<Scalar> q(0, N);
  Eigen::Matrix<Scalar, 2, 1> state(Scalar(0), Scalar(-1));
  q.at(0) = state[0];
  for (long n = 0; n < N; ++n) {
    state = transfer_matrix(J, x, n) * state;
    q.at(n + 1) = state[0];
  }
  return q;
}

// a_n (p_n q_{n-1} - p_{n-1} q_n), constant in n; at n = 0 it uses p_{-1} = 0 and a_0 q_{-1} = -1.
template <typename Scalar>
Scalar pairing(const JacobiData<Scalar>& J, const LatticeSequence<Scalar>& p,
               const LatticeSequence<Scalar>& q, long n) {
  if (n == 0) return p.at(0) * Scalar(-1) - Scalar(0) * q.at(0);
  return J.a.at(n) * (p.at(n) * q.at(n - 1) - p.at(n - 1) * q.at(n));
}

// The Schrodinger solution carried by p: f_{origin + j} = (-1)^j p_j.
LatticeSequence<double> schrodinger_from_poly(const LatticeSequence<double>& p, long origin);

}  // namespace dsa
