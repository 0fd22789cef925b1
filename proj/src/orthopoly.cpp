#include "dsa/orthopoly.hpp"

namespace dsa {

JacobiData<double> jacobi_from_potential(const PotentialSpec& V, long N) {
  if (N < 0) throw Error(ErrorKind::domain, "degree must be nonnegative");
  LatticeSequence<double> a(0, N + 1, 1.0), b(1, N + 1);
  for (long j = 0; j <= N; ++j) b.at(j + 1) = V(V.origin() + j) + 2.0;
  return {std::move(a), std::move(b)};
}

LatticeSequence<double> schrodinger_from_poly(const LatticeSequence<double>& p, long origin) {
  LatticeSequence<double> f(origin + p.lo(), origin + p.hi());
  for (long j = p.lo(); j <= p.hi(); ++j) f.at(origin + j) = (j % 2 == 0) ? p.at(j) : -p.at(j);
  return f;
}

}  // namespace dsa
