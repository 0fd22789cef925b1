#include "dsa/potential.hpp"

#include <cmath>
#include <random>

namespace dsa {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

bool same(const std::shared_ptr<const PotentialSpec>& a,
          const std::shared_ptr<const PotentialSpec>& b) {
  return *a == *b;
}

// Uniform double in [0, 1) from the top 53 bits of a 64-bit Mersenne twister draw.
std::vector<double> uniform_draws(std::uint64_t seed, long length, double low, double high) {
  std::mt19937_64 gen(seed);
  std::vector<double> out(static_cast<std::size_t>(length));
  for (auto& v : out) {
    double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
    v = low + (high - low) * u;
  }
  return out;
}

}  // namespace

double small_root(double v) {
  if (v >= -4.0 && v <= 0.0)
    throw Error(ErrorKind::domain, "no real root pair with |x| < 1 for V in [-4, 0]");
  double b = 2.0 + v;
  double s = std::sqrt(b * b - 4.0);
  // Larger-magnitude root first, then invert to avoid cancellation.
  double big = (b + std::copysign(s, b)) / 2.0;
  return 1.0 / big;
}

PotentialSpec PotentialSpec::constant(double v, long origin) {
  return PotentialSpec(Constant{v}, origin);
}

PotentialSpec PotentialSpec::power_decay(double gamma, std::vector<double> tail, long origin) {
  if (origin < 1) throw Error(ErrorKind::domain, "power_decay requires origin >= 1");
  return PotentialSpec(PowerDecay{gamma, std::move(tail)}, origin);
}

PotentialSpec PotentialSpec::threshold(double alpha, long origin) {
  if (origin < 1) throw Error(ErrorKind::domain, "threshold requires origin >= 1");
  return PotentialSpec(Threshold{alpha}, origin);
}

PotentialSpec PotentialSpec::sparse(const PotentialSpec& base, std::map<long, double> amplitudes) {
  for (const auto& [site, amp] : amplitudes)
    if (site < base.origin())
      throw Error(ErrorKind::domain, "sparse site below origin", site);
  return PotentialSpec(Sparse{std::make_shared<const PotentialSpec>(base), std::move(amplitudes)},
                       base.origin());
}

PotentialSpec PotentialSpec::sparse_powers_of_two(const PotentialSpec& base, double W,
                                                  int max_exponent) {
  std::map<long, double> amps;
  for (int k = 0; k <= max_exponent; ++k) {
    long n = 1L << k;
    if (n >= base.origin()) amps[n] = W / (static_cast<double>(n) * static_cast<double>(n));
  }
  return sparse(base, std::move(amps));
}

PotentialSpec PotentialSpec::fluctuating(double exponent, long origin) {
  return PotentialSpec(Fluctuating{exponent}, origin);
}

PotentialSpec PotentialSpec::table(std::vector<double> values, long origin) {
  if (values.empty()) throw Error(ErrorKind::domain, "empty potential table");
  for (double v : values)
    if (!std::isfinite(v)) throw Error(ErrorKind::domain, "non-finite potential table entry");
  return PotentialSpec(Table{std::move(values)}, origin);
}

PotentialSpec PotentialSpec::shifted(const PotentialSpec& base, double energy) {
  return PotentialSpec(Shifted{std::make_shared<const PotentialSpec>(base), energy}, base.origin());
}

PotentialSpec PotentialSpec::reflected(const PotentialSpec& base) {
  if (auto* r = std::get_if<Reflected>(&base.family_)) return *r->base;
  return PotentialSpec(Reflected{std::make_shared<const PotentialSpec>(base)}, base.origin());
}

PotentialSpec PotentialSpec::geometric(double limit, double amplitude, bool alternating,
                                       long origin) {
  small_root(limit);
  return PotentialSpec(Geometric{limit, amplitude, alternating}, origin);
}

PotentialSpec PotentialSpec::random(double low, double high, std::uint64_t seed, long length,
                                    long origin) {
  if (length < 1) throw Error(ErrorKind::domain, "random potential needs length >= 1");
  if (!(high > low)) throw Error(ErrorKind::domain, "random potential needs high > low");
  return PotentialSpec(Random{low, high, seed, length, uniform_draws(seed, length, low, high)},
                       origin);
}

double PotentialSpec::operator()(long n) const {
  if (n < origin_)
    throw Error(ErrorKind::window,
                "potential evaluated at " + std::to_string(n) + " below origin " +
                    std::to_string(origin_),
                n);
  return std::visit(
      overloaded{
          [](const Constant& c) { return c.value; },
          [&](const PowerDecay& p) {
            double nn = static_cast<double>(n);
            double v = p.gamma / (nn * nn);
            std::size_t i = static_cast<std::size_t>(n - origin_);
            if (i < p.tail.size()) v += p.tail[i];
            return v;
          },
          [&](const Threshold& t) {
            double k = static_cast<double>(n);
            double v = -2.0 + std::pow(k / (k + 1.0), t.alpha);
            if (n > 1) v += std::pow(k / (k - 1.0), t.alpha);
            return v;
          },
          [&](const Sparse& s) {
            double v = (*s.base)(n);
            if (auto it = s.amplitudes.find(n); it != s.amplitudes.end()) v += it->second;
            return v;
          },
          [&](const Fluctuating& f) {
            return n % 2 == 0 ? 1.0 : std::pow(static_cast<double>(n), f.exponent);
          },
          [&](const Table& t) {
            std::size_t i = static_cast<std::size_t>(n - origin_);
            if (i >= t.values.size())
              throw Error(ErrorKind::window,
                          "potential table has no entry at " + std::to_string(n), n);
            return t.values[i];
          },
          [&](const Shifted& s) { return (*s.base)(n)-s.energy; },
          [&](const Reflected& r) { return -4.0 - (*r.base)(n); },
          [&](const Geometric& g) { return g.limit + perturbation(n).value(); },
          [&](const Random& r) {
            std::size_t i = static_cast<std::size_t>(n - origin_);
            if (i >= r.values.size())
              throw Error(ErrorKind::window,
                          "random potential has no entry at " + std::to_string(n), n);
            return r.values[i];
          },
      },
      family_);
}

std::string PotentialSpec::name() const {
  return std::visit(overloaded{
                        [](const Constant&) { return "constant"; },
                        [](const PowerDecay&) { return "power_decay"; },
                        [](const Threshold&) { return "threshold"; },
                        [](const Sparse&) { return "sparse"; },
                        [](const Fluctuating&) { return "fluctuating"; },
                        [](const Table&) { return "table"; },
                        [](const Shifted&) { return "shifted"; },
                        [](const Reflected&) { return "reflected"; },
                        [](const Geometric&) { return "geometric"; },
                        [](const Random&) { return "random"; },
                    },
                    family_);
}

std::optional<long> PotentialSpec::last_index() const {
  return std::visit(
      overloaded{
          [&](const Table& t) -> std::optional<long> {
            return origin_ + static_cast<long>(t.values.size()) - 1;
          },
          [&](const Random& r) -> std::optional<long> { return origin_ + r.length - 1; },
          [](const Sparse& s) { return s.base->last_index(); },
          [](const Shifted& s) { return s.base->last_index(); },
          [](const Reflected& r) { return r.base->last_index(); },
          [](const auto&) -> std::optional<long> { return std::nullopt; },
      },
      family_);
}

std::optional<PotentialSpec> PotentialSpec::base() const {
  return std::visit(overloaded{
                        [&](const Geometric& g) -> std::optional<PotentialSpec> {
                          return constant(g.limit, origin_);
                        },
                        [](const Sparse& s) -> std::optional<PotentialSpec> { return *s.base; },
                        [&](const PowerDecay& p) -> std::optional<PotentialSpec> {
                          if (p.tail.empty()) return std::nullopt;
                          return power_decay(p.gamma, {}, origin_);
                        },
                        [](const auto&) -> std::optional<PotentialSpec> { return std::nullopt; },
                    },
                    family_);
}

SignedLog PotentialSpec::perturbation(long n) const {
  if (n < origin_) throw Error(ErrorKind::window, "perturbation below origin", n);
  return std::visit(
      overloaded{
          [&](const Geometric& g) {
            if (g.amplitude == 0) return SignedLog{};
            double x = small_root(g.limit);
            double w = 1.0 / x - x;
            SignedLog out = SignedLog::of(g.amplitude * w);
            out.log_abs += 2.0 * static_cast<double>(n) * std::log(std::abs(x));
            if (g.alternating && n % 2 != 0) out.sign = -out.sign;
            return out;
          },
          [&](const Sparse& s) {
            auto it = s.amplitudes.find(n);
            return it == s.amplitudes.end() ? SignedLog{} : SignedLog::of(it->second);
          },
          [&](const PowerDecay& p) {
            std::size_t i = static_cast<std::size_t>(n - origin_);
            return i < p.tail.size() ? SignedLog::of(p.tail[i]) : SignedLog{};
          },
          [](const auto&) -> SignedLog {
            throw Error(ErrorKind::domain, "potential family has no base + perturbation form");
          },
      },
      family_);
}

bool operator==(const PotentialSpec& a, const PotentialSpec& b) {
  using P = PotentialSpec;
  if (a.origin_ != b.origin_ || a.family_.index() != b.family_.index()) return false;
  return std::visit(
      overloaded{
          [&](const P::Constant& x) { return x.value == std::get<P::Constant>(b.family_).value; },
          [&](const P::PowerDecay& x) {
            const auto& y = std::get<P::PowerDecay>(b.family_);
            return x.gamma == y.gamma && x.tail == y.tail;
          },
          [&](const P::Threshold& x) { return x.alpha == std::get<P::Threshold>(b.family_).alpha; },
          [&](const P::Sparse& x) {
            const auto& y = std::get<P::Sparse>(b.family_);
            return same(x.base, y.base) && x.amplitudes == y.amplitudes;
          },
          [&](const P::Fluctuating& x) {
            return x.exponent == std::get<P::Fluctuating>(b.family_).exponent;
          },
          [&](const P::Table& x) { return x.values == std::get<P::Table>(b.family_).values; },
          [&](const P::Shifted& x) {
            const auto& y = std::get<P::Shifted>(b.family_);
            return same(x.base, y.base) && x.energy == y.energy;
          },
          [&](const P::Reflected& x) { return same(x.base, std::get<P::Reflected>(b.family_).base); },
          [&](const P::Geometric& x) {
            const auto& y = std::get<P::Geometric>(b.family_);
            return x.limit == y.limit && x.amplitude == y.amplitude &&
                   x.alternating == y.alternating;
          },
          [&](const P::Random& x) {
            const auto& y = std::get<P::Random>(b.family_);
            return x.low == y.low && x.high == y.high && x.seed == y.seed && x.length == y.length;
          },
      },
      a.family_);
}

Sequence PotentialSpec::sample(long lo, long hi) const {
  Sequence s(lo, hi);
  for (long n = lo; n <= hi; ++n) s.at(n) = (*this)(n);
  return s;
}

PotentialSpec reflect_symmetry(const PotentialSpec& V) { return PotentialSpec::reflected(V); }

SignedLog potential_difference(const PotentialSpec& V, const PotentialSpec& V0, long n) {
  if (V == V0) return {};
  if (auto b = V.base(); b && *b == V0) return V.perturbation(n);
  if (auto b = V0.base(); b && *b == V) {
    SignedLog d = V0.perturbation(n);
    d.sign = -d.sign;
    return d;
  }
  return SignedLog::of(V(n) - V0(n));
}

}  // namespace dsa
