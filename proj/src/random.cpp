#include "covdlm/random.hpp"

namespace covdlm {

Rng make_rng(std::uint64_t master, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(master), static_cast<std::uint32_t>(master >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return Rng(seq);
}

Vector standard_normal(Index n, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector z(n);
  for (Index i = 0; i < n; ++i) z(i) = normal(rng);
  return z;
}

Vector draw_normal(const Vector& mean, const SymMatrix& cov, Rng& rng) {
  return mean + covariance_root(cov).matrix() * standard_normal(mean.size(), rng);
}

}  // namespace covdlm
