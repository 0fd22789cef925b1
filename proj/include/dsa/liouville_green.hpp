#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dsa/diagnostics.hpp"
#include "dsa/lattice.hpp"
#include "dsa/potential.hpp"

namespace dsa {

enum class Regime { bounded_slow, bounded_general, unbounded };

// Choices of J_n for the general bounded builder.
enum class JStrategy { canonical, geometric_mean, arithmetic_mean, skip_pairs };

const char* to_string(Regime r);
const char* to_string(JStrategy s);

// Product-form comparison equation: phi_n = z_n prod S^{+-1} solves (-Delta + V_tilde) phi = 0.
struct ComparisonModel {
  Regime regime = Regime::bounded_slow;
  std::optional<JStrategy> strategy;
  Sequence b, S, z;
  double c_z = 1;
  // Defined on [lo + 1, hi - 1].
  Sequence v_tilde;
  // V_tilde - V on the same window, computed without cancellation in the unbounded regime.
  Sequence defect;
  std::vector<TailDiagnostic> diagnostics;
  std::vector<std::string> warnings;

  long lo() const { return z.lo(); }
  long hi() const { return z.hi(); }
};

// Larger-magnitude root of S + 1/S = b.
double s_from_b(double b);

// (V_inf (V_inf + 4))^{-1/4} times the paired ratio product over [origin, hi].
double cz_constant(const PotentialSpec& V, long lo, long hi,
                   std::optional<double> v_inf = std::nullopt);

ComparisonModel build_bounded_slow(const PotentialSpec& V, long lo, long hi, double C);
ComparisonModel build_bounded_general(const PotentialSpec& V, JStrategy strategy, long lo,
                                      long hi);
ComparisonModel build_unbounded(const PotentialSpec& V, long lo, long hi);

// J_n on [lo, hi] for the given strategy.
Sequence j_sequence(const PotentialSpec& V, JStrategy strategy, long lo, long hi);

// Alternating product D_n / D_{n-1} * D_{n-2} / ... down to `anchor`, in log form.
Sequence alternating_log_product(const Sequence& D, long anchor);

// V_tilde_n from the phi+ form; throws invariant_violation if the phi- form disagrees.
double comparison_potential(const ComparisonModel& model, long n);

// Builders only produce z > 0 and S > 1, so both members are positive.
struct LogBasis {
  Sequence log_plus, log_minus;
};

// Basis as logarithms, anchored so that phi+-_lo = z_lo.
LogBasis lg_log_basis(const ComparisonModel& model, long lo, long hi);
// Same basis in plain values; throws overflow at the first unrepresentable index.
Basis lg_basis(const ComparisonModel& model, long lo, long hi);

}  // namespace dsa
