#pragma once

#include <optional>
#include <vector>

#include <Eigen/Core>

#include "dsa/diagnostics.hpp"
#include "dsa/lattice.hpp"
#include "dsa/potential.hpp"

namespace dsa {

// V, V0 and a basis for V0. The couplings beta phi^a phi^b are formed in log space so that
// tiny beta against large phi+ keeps full precision.
struct PerturbationPair {
  PotentialSpec V, V0;
  Basis basis;
  Sequence beta;
  Sequence coupling_pm;  // beta phi+ phi-
  Sequence coupling_mm;  // beta (phi-)^2
  Sequence coupling_pp;  // beta (phi+)^2
  // Exact sign of V - V0 per site (0 only for a true zero, never for underflow).
  std::vector<int> difference_sign;

  long lo() const { return beta.lo(); }
  long hi() const { return beta.hi(); }
  int sign_at(long n) const { return difference_sign.at(static_cast<std::size_t>(n - lo())); }
};

PerturbationPair make_pair(const PotentialSpec& V, const PotentialSpec& V0, const Basis& basis);
// Same, with V - V0 supplied on the basis window (for differences known more accurately
// than the subtraction of the two potentials).
PerturbationPair make_pair(const PotentialSpec& V, const PotentialSpec& V0, const Basis& basis,
                           const Sequence& difference);

// beta_n = (V_n - V0_n) / W on the basis window.
Sequence beta(const PotentialSpec& V, const PotentialSpec& V0, const Basis& basis);

// I + M_n.
Eigen::Matrix2d step_matrix(const PerturbationPair& pair, long n);
// (I + M_n) a with a = (a+, a-).
Eigen::Vector2d transfer_step(const Eigen::Vector2d& a, const PerturbationPair& pair, long n);

struct ContractionThreshold {
  long N = 0;
  // Tail sum of |beta| (1 + |phi+ phi-|^2) from N to the right edge.
  double kappa = 0;
  // Operator-norm bound of the truncated series in the weighted norm; never below kappa.
  double bound = 0;
};

// Smallest N in [lo, hi] whose tail sum is below target.
ContractionThreshold contraction_threshold(const PerturbationPair& pair, long lo, long hi,
                                           double target = 0.5);
// Both tail quantities for a given N.
ContractionThreshold contraction_at(const PerturbationPair& pair, long N, long hi);

struct CoefficientTrajectory {
  Sequence a_plus, a_minus;
  std::optional<double> kappa;
  double contraction_bound = 0;
  int iterations = 0;
  // Weighted-norm distances between successive iterates.
  std::vector<double> increments;
  // Tail-sum weight of the last quarter of the window, a proxy for the truncated remainder.
  double edge_tail = 0;

  long start() const { return a_plus.lo(); }
  long end() const { return a_plus.hi(); }
  Eigen::Vector2d at(long n) const { return {a_plus.at(n), a_minus.at(n)}; }
};

// Fixed point of a = (0, 1) - M a on [N, hi], the series truncated at hi.
CoefficientTrajectory neumann_solve(const PerturbationPair& pair, long N, long hi,
                                    double tol = 1e-12);

// Trajectory through `seed` at n_seed, stepped forward by I + M and backward by I - M.
CoefficientTrajectory propagate(const PerturbationPair& pair, long n_seed,
                                const Eigen::Vector2d& seed, long lo, long hi);

// psi_n = a+_n phi+_n + a-_n phi-_n.
Sequence synthesize_solution(const CoefficientTrajectory& traj, const Basis& basis);

// (a+_n - a+_{n-1}) phi+_{n-1} + (a-_n - a-_{n-1}) phi-_{n-1}, relative to the size of psi_{n-1}.
double constraint_residual(const CoefficientTrajectory& traj, const Basis& basis, long n);

// r_n with psi_n = phi-_n + r_n max_{m >= n} |phi-_m|.
Sequence envelope_remainder(const Sequence& psi, const Sequence& phi_minus);

// J_n = phi+_n phi-_n (V_n - V0_n).
double trench_J(const PotentialSpec& V, const PotentialSpec& V0, const Basis& basis, long n);

struct TrenchSeries {
  Sequence J;
  TailDiagnostic diagnostic;
};
TrenchSeries trench_J_series(const PotentialSpec& V, const PotentialSpec& V0, const Basis& basis,
                             long lo, long hi);

}  // namespace dsa
