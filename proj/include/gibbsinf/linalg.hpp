#pragma once

#include <vector>

namespace gibbsinf {

struct PowerResult {
    double eigenvalue = 0.0;
    std::vector<double> vec;  // positive, scaled to max entry 1
    int iterations = 0;
};

/// Power iteration for the Perron root/vector of a nonnegative primitive matrix
/// (row-major, n x n). Deterministic all-ones start, Rayleigh-quotient stopping:
/// converged when the eigenvalue delta and the residual ||Mv - lambda v||_inf
/// both drop below tol. Throws NumericError after max_iter sweeps.
PowerResult power_iteration(int n, const std::vector<double>& m, double tol = 1e-13, int max_iter = 100000);

std::vector<double> transpose(int n, const std::vector<double>& m);

}  // namespace gibbsinf
