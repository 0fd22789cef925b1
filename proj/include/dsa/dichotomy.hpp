#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "dsa/diagnostics.hpp"
#include "dsa/perturbation.hpp"

namespace dsa {

// Running product G_n ... G_start = [[pi+, 0], [sigma, pi-]].
struct TriangularProducts {
  Sequence sigma, pi_plus, pi_minus;
  Sequence p_plus, p_minus;  // 1 +- beta phi+ phi-

  long lo() const { return sigma.lo(); }
  long hi() const { return sigma.hi(); }
  Eigen::Matrix2d product(long n) const;
};

// Lower triangular part G_n of I + M_n.
Eigen::Matrix2d lower_factor(const PerturbationPair& pair, long n);
// Upper error part E_n = I + M_n - G_n.
Eigen::Matrix2d upper_error(const PerturbationPair& pair, long n);

// Sigma seeded at lo as -beta (phi+)^2, the window-relative base case.
TriangularProducts triangular_products(const PerturbationPair& pair, long lo, long hi);

struct FCoefficients {
  Sequence f_plus, f_minus;
  // f-/f+, NaN where f+ vanishes.
  Sequence r;

  std::optional<double> ratio(long n) const {
    double v = r.at(n);
    if (std::isnan(v)) return std::nullopt;
    return v;
  }
};

// Solves a_{n+1} = T_n f_{n+1} with f at the window start equal to a.
FCoefficients f_coefficients(const CoefficientTrajectory& traj, const TriangularProducts& prods);

enum class DichotomyCase {
  finite_collapse_plus,
  finite_collapse_minus,
  sigma_driven,
  generic,
  unbounded_sigma_dominant,
  unbounded_sigma_vanishing_plus,
  hypotheses_not_met,
};

const char* to_string(DichotomyCase c);

struct DichotomyVerdict {
  DichotomyCase kind = DichotomyCase::hypotheses_not_met;
  // Populated only when the case defines them.
  std::optional<double> f_plus_inf, f_minus_inf, a_plus_inf, a_minus_inf;
  // Drift of the corresponding tail estimate.
  std::optional<double> limit_uncertainty;
  // First index of an exact collapse.
  std::optional<long> collapse_index;
  double sup_sigma = 0;
  double sup_coupling = 0;
  bool sigma_bounded = true;
  // Which disjunct of the summability hypothesis was certified, if any.
  std::string certified_hypothesis;
  std::vector<TailDiagnostic> diagnostics;
  std::vector<std::string> notes;
};

DichotomyVerdict classify(const CoefficientTrajectory& traj, const TriangularProducts& prods,
                          const PerturbationPair& pair, long lo, long hi);

}  // namespace dsa
