#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <random>

#include "dsa/orthopoly.hpp"
#include "dsa/recurrence.hpp"

using namespace dsa;

namespace {

// Relative residual of -f_{n+1} - f_{n-1} + (V_n + 2 - E) f_n with f_{origin - 1} = 0.
double max_schrodinger_residual(const PotentialSpec& V, double E, long N) {
  auto J = jacobi_from_potential(V, N);
  auto p = poly_first_kind(J, E, N);
  auto f = schrodinger_from_poly(p, V.origin());
  long o = V.origin();
  double worst = 0;
  for (long n = o; n < o + N; ++n) {
    double prev = n == o ? 0.0 : f.at(n - 1);
    double r = -f.at(n + 1) - prev + (V(n) + 2.0 - E) * f.at(n);
    double scale = std::abs(f.at(n + 1)) + std::abs(prev) + std::abs((V(n) + 2.0 - E) * f.at(n));
    worst = std::max(worst, scale == 0 ? std::abs(r) : std::abs(r) / scale);
  }
  return worst;
}

}  // namespace

TEST_CASE("jacobi data from a potential") {
  auto J = jacobi_from_potential(PotentialSpec::constant(1.0), 10);
  for (long n = 0; n <= 11; ++n) CHECK(J.a.at(n) == 1.0);
  for (long n = 1; n <= 11; ++n) CHECK(J.b.at(n) == 3.0);
  auto F = jacobi_from_potential(PotentialSpec::constant(0.0), 5);
  for (long n = 1; n <= 6; ++n) CHECK(F.b.at(n) == 2.0);
  auto T = jacobi_from_potential(PotentialSpec::threshold(1.0, 3), 4);
  CHECK(T.b.at(1) == PotentialSpec::threshold(1.0, 3)(3) + 2.0);
  CHECK_THROWS_AS(JacobiData<double>(LatticeSequence<double>(0, 3, 0.0), LatticeSequence<double>(1, 3, 1.0)),
                  Error);
}

TEST_CASE("free Jacobi polynomials") {
  // exact integers through the same recurrence
  auto Ji = constant_jacobi<std::int64_t>(1, 0, 50);
  auto pi = poly_first_kind<std::int64_t>(Ji, 2, 50);
  for (long n = 0; n <= 50; ++n) CHECK(pi.at(n) == n + 1);
  auto Jd = constant_jacobi<double>(1.0, 0.0, 50);
  auto pd = poly_first_kind(Jd, 2.0, 50);
  for (long n = 0; n <= 50; ++n) CHECK(std::abs(pd.at(n) - double(n + 1)) <= 1e-10);

  auto p3 = poly_first_kind(Jd, 3.0, 2);
  CHECK(p3.at(2) == 8.0);
  for (double x : {-1.5, 0.3, 2.7}) CHECK(poly_first_kind(Jd, x, 2).at(2) == doctest::Approx(x * x - 1.0));

  auto qd = poly_second_kind(Jd, 2.0, 20);
  CHECK(qd.at(0) == 0.0);
  CHECK(qd.at(1) == 1.0);
  for (long n = 0; n <= 20; ++n) CHECK(qd.at(n) == double(n));

  auto J3 = constant_jacobi<double>(1.0, 3.0, 12);
  auto per = poly_first_kind(J3, 3.0, 12);
  // x = b gives p_{n+1} = -p_{n-1}: the pattern 1, 0, -1, 0 repeats
  const double pattern[] = {1, 0, -1, 0};
  for (long n = 0; n <= 12; ++n) CHECK(per.at(n) == pattern[n % 4]);

  CHECK_THROWS_AS(poly_first_kind(Jd, 2.0, -1), Error);
  CHECK_THROWS_AS(poly_first_kind(Jd, 2.0, 60), Error);
  CHECK_THROWS_AS(poly_second_kind(Jd, 2.0, 0), Error);
}

TEST_CASE("transfer matrices") {
  auto Jf = constant_jacobi<double>(1.0, 0.0, 10);
  Eigen::Matrix2d rot;
  rot << 0, -1, 1, 0;
  CHECK((transfer_matrix(Jf, 0.0, 0) - rot).norm() == 0.0);
  auto J3 = constant_jacobi<double>(1.0, 3.0, 10);
  CHECK((transfer_matrix(J3, 3.0, 4) - rot).norm() == 0.0);

  std::mt19937_64 rng(8101);
  std::uniform_real_distribution<double> ua(0.5, 2.0), ub(-1.0, 1.0);
  LatticeSequence<double> a(0, 31), b(1, 31);
  for (long n = 0; n <= 31; ++n) a.at(n) = ua(rng);
  for (long n = 1; n <= 31; ++n) b.at(n) = ub(rng);
  JacobiData<double> J(a, b);
  double x = 0.37;
  auto p = poly_first_kind(J, x, 30);
  Eigen::Vector2d state(1.0, 0.0);
  for (long n = 0; n < 30; ++n) {
    state = transfer_matrix(J, x, n) * state;
    CHECK(state[0] == doctest::Approx(p.at(n + 1)).epsilon(1e-12));
    CHECK(state[1] == doctest::Approx(a.at(n + 1) * p.at(n)).epsilon(1e-12));
  }
  auto q = poly_second_kind(J, x, 30);
  double w0 = pairing(J, p, q, 0);
  CHECK(w0 == -1.0);
  for (long n = 1; n <= 30; ++n) CHECK(pairing(J, p, q, n) == doctest::Approx(w0).epsilon(1e-9));
}

TEST_CASE("monic and normalized recurrences coincide for a = 1") {
  std::mt19937_64 rng(8102);
  std::uniform_real_distribution<double> ub(-2.0, 2.0);
  for (int trial = 0; trial < 10; ++trial) {
    LatticeSequence<double> b(1, 21);
    for (long n = 1; n <= 21; ++n) b.at(n) = ub(rng);
    JacobiData<double> J(LatticeSequence<double>(0, 21, 1.0), b);
    double x = ub(rng);
    auto p = poly_first_kind(J, x, 20);
    auto P = poly_monic(J, x, 20);
    for (long n = 0; n <= 20; ++n) CHECK(P.at(n) == doctest::Approx(p.at(n)).epsilon(1e-12));
  }
}

TEST_CASE("polynomials carry Schrodinger solutions") {
  CHECK(max_schrodinger_residual(PotentialSpec::constant(1.0), 0.0, 40) <= 1e-10);
  CHECK(max_schrodinger_residual(PotentialSpec::constant(-2.0), 2.0, 50) <= 1e-10);
  CHECK(max_schrodinger_residual(PotentialSpec::threshold(1.0), 0.0, 200) <= 1e-10);
  CHECK(max_schrodinger_residual(PotentialSpec::fluctuating(1.0), 0.5, 60) <= 1e-10);
  CHECK(max_schrodinger_residual(PotentialSpec::power_decay(2.0, {}, 3), -0.7, 80) <= 1e-10);
  CHECK(max_schrodinger_residual(PotentialSpec::random(0.5, 3.0, 8103, 120), 1.1, 100) <= 1e-10);

  // the gauge turns p at x = E into a solution of the shifted equation
  auto V = PotentialSpec::power_decay(2.0);
  double E = 0.4;
  auto J = jacobi_from_potential(V, 30);
  auto f = schrodinger_from_poly(poly_first_kind(J, E, 30), V.origin());
  auto S = PotentialSpec::shifted(V, E);
  for (long n = 2; n < 31; ++n) CHECK(relative_residual(S, f, n) <= 1e-10);

  // p and q are independent: nonzero pairing on every fixture
  for (const auto& W : {PotentialSpec::constant(1.0), PotentialSpec::threshold(1.0), PotentialSpec::fluctuating(2.0)}) {
    auto JW = jacobi_from_potential(W, 25);
    auto p = poly_first_kind(JW, 0.3, 25);
    auto q = poly_second_kind(JW, 0.3, 25);
    CHECK(pairing(JW, p, q, 0) == -1.0);
    // constant up to the cancellation in a_n (p_n q_{n-1} - p_{n-1} q_n)
    for (long n = 1; n <= 25; ++n) {
      double scale = std::abs(p.at(n) * q.at(n - 1)) + std::abs(p.at(n - 1) * q.at(n));
      CHECK(std::abs(pairing(JW, p, q, n) + 1.0) <= 1e-13 * scale + 1e-13);
    }
  }
}
