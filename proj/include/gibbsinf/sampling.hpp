#pragma once

#include "gibbsinf/gibbs.hpp"
#include "gibbsinf/rng.hpp"

namespace gibbsinf {

/// Draws y = (y_1, ..., y_n) from mu: the first state block comes from the
/// stationary marginal, subsequent symbols from the forward conditional law,
/// both by inverse-CDF with ties resolved toward the smaller symbol. The
/// result is admissible by construction.
Word sample_orbit(const GibbsMeasure& m, int n, SeededStream& s);

/// Normalized adjacent-pair counts of w, q x q row-major; entries sum to 1.
std::vector<double> empirical_pair_frequencies(const Word& w, const SubshiftSpec& spec);

}  // namespace gibbsinf
