#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "dsa/lattice.hpp"
#include "dsa/potential.hpp"

namespace dsa {

// G_mn = phi+_min phi-_max / W.
double green_matrix(const Basis& basis, long m, long n);

// Diagonal G_nn with z = sqrt(g) and S^[z]_n on [lo + 1, hi].
struct GreenDiagonal {
  Sequence g, z, s_z;

  long lo() const { return g.lo(); }
  long hi() const { return g.hi(); }
};

// Validates g > 0 and derives z and S^[z].
GreenDiagonal make_green_diagonal(Sequence g);
GreenDiagonal green_diagonal(const Basis& basis, long lo, long hi);

// (1 + sqrt(1 + 4 z_n^2 z_{n-1}^2)) / (2 z_n z_{n-1}).
double s_from_diag(const GreenDiagonal& g, long n);

// phi+-_n = z_n prod_{k=m+1}^{n} (S^[z]_k)^{+-1} on [m, hi], products in log space.
Basis basis_from_diag(const GreenDiagonal& g, long m, long hi);

// V_n = [sqrt(1 + 4 g_n g_{n+1}) + sqrt(1 + 4 g_n g_{n-1})] / (2 g_n) - 2, the V > -2 branch.
double potential_from_diag(const GreenDiagonal& g, long n);

struct DiagBounds {
  Sequence lower, upper;
  double k_a = 0;
  // sqrt(1 + 4/C^2), the cruder constant.
  double k_simple = 0;
};

double k_a_constant(double C);
DiagBounds diag_bounds(const PotentialSpec& V, double C, long lo, long hi);

enum class AgmonVariant { k_a_form, lg_form, simplified_form };

const char* to_string(AgmonVariant v);

// Per-step term of d_A at site l.
double agmon_step(const PotentialSpec& V, long l, AgmonVariant variant, double C = 0);
// Sum of agmon_step over l in (m, n].
double agmon_distance(const PotentialSpec& V, long m, long n, AgmonVariant variant, double C = 0);

struct AgmonReport {
  AgmonVariant variant = AgmonVariant::lg_form;
  double k_a = 0;
  std::vector<std::pair<long, long>> pairs;
  std::vector<double> distances;
  // d_A(lo, n) and exp(d_A(lo, n)) |phi-_n| over the window.
  Sequence distance_from_lo, envelope;
  double envelope_sup = 0;
};

// log |phi-| is taken as input so that extended-precision subdominant solutions fit.
AgmonReport agmon_report(const PotentialSpec& V, const Sequence& log_abs_minus,
                         const std::vector<std::pair<long, long>>& pairs, AgmonVariant variant,
                         double C = 0);

template <typename Scalar>
Sequence log_abs(const LatticeSequence<Scalar>& f) {
  Sequence out(f.lo(), f.hi());
  for (long n = f.lo(); n <= f.hi(); ++n)
    out.at(n) = static_cast<double>(std::log(std::abs(f.at(n))));
  return out;
}

}  // namespace dsa
