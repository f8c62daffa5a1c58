#pragma once

#include <cstdint>
#include <random>

#include "covdlm/matops.hpp"

namespace covdlm {

using Rng = std::mt19937_64;

/// Independent stream `stream` derived from `master`; the same pair always
/// yields the same generator regardless of how many other streams exist.
Rng make_rng(std::uint64_t master, std::uint64_t stream = 0);

Vector standard_normal(Index n, Rng& rng);

/// mean + cov^{1/2} z with the symmetric PSD root.
Vector draw_normal(const Vector& mean, const SymMatrix& cov, Rng& rng);

}  // namespace covdlm
