#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "dsa/lattice.hpp"

namespace dsa {

// A real potential V_n on n >= origin, described by a named family.
class PotentialSpec {
 public:
  struct Constant {
    double value;
  };
  // V_n = gamma / n^2 + W_n with W read from an optional table starting at the origin.
  struct PowerDecay {
    double gamma;
    std::vector<double> tail;
  };
  // V_k = -2 + (k/(k+1))^alpha + (k/(k-1))^alpha, the second term dropped at k = 1.
  struct Threshold {
    double alpha;
  };
  struct Sparse {
    std::shared_ptr<const PotentialSpec> base;
    std::map<long, double> amplitudes;
  };
  // 1 at even n, n^exponent at odd n.
  struct Fluctuating {
    double exponent;
  };
  struct Table {
    std::vector<double> values;
  };
  struct Shifted {
    std::shared_ptr<const PotentialSpec> base;
    double energy;
  };
  struct Reflected {
    std::shared_ptr<const PotentialSpec> base;
  };
  // V_n = L + c s^n (1/x - x) x^(2n), x the small root of x + 1/x = 2 + L, s = -1 if alternating.
  struct Geometric {
    double limit;
    double amplitude;
    bool alternating;
  };
  // Table of uniform draws in [low, high) from a fixed seed.
  struct Random {
    double low, high;
    std::uint64_t seed;
    long length;
    std::vector<double> values;
  };

  using Family = std::variant<Constant, PowerDecay, Threshold, Sparse, Fluctuating, Table, Shifted,
                              Reflected, Geometric, Random>;

  static PotentialSpec constant(double v, long origin = 1);
  static PotentialSpec power_decay(double gamma, std::vector<double> tail = {}, long origin = 1);
  static PotentialSpec threshold(double alpha, long origin = 1);
  static PotentialSpec sparse(const PotentialSpec& base, std::map<long, double> amplitudes);
  // Amplitude W/n^2 at every power of two n = 2^k, k <= max_exponent, n >= origin.
  static PotentialSpec sparse_powers_of_two(const PotentialSpec& base, double W, int max_exponent);
  static PotentialSpec fluctuating(double exponent, long origin = 1);
  static PotentialSpec table(std::vector<double> values, long origin = 1);
  static PotentialSpec shifted(const PotentialSpec& base, double energy);
  static PotentialSpec reflected(const PotentialSpec& base);
  static PotentialSpec geometric(double limit, double amplitude = 1.0, bool alternating = true,
                                 long origin = 1);
  static PotentialSpec random(double low, double high, std::uint64_t seed, long length,
                              long origin = 1);

  double operator()(long n) const;
  long origin() const { return origin_; }
  const Family& family() const { return family_; }
  std::string name() const;
  // Last index with a defined value, if the family is finite.
  std::optional<long> last_index() const;

  // For families built as base + perturbation: the base, and the perturbation in signed-log form.
  std::optional<PotentialSpec> base() const;
  SignedLog perturbation(long n) const;

  friend bool operator==(const PotentialSpec& a, const PotentialSpec& b);

  // Values on [lo, hi] as a sequence.
  Sequence sample(long lo, long hi) const;

 private:
  PotentialSpec(Family f, long origin) : family_(std::move(f)), origin_(origin) {}

  Family family_;
  long origin_;
};

// V -> -4 - V.
PotentialSpec reflect_symmetry(const PotentialSpec& V);

// V_n - V0_n in signed-log form; exact when one potential is a structured perturbation of the other.
SignedLog potential_difference(const PotentialSpec& V, const PotentialSpec& V0, long n);

// Small root x of x + 1/x = 2 + v, |x| < 1; requires v outside [-4, 0].
double small_root(double v);

}  // namespace dsa
