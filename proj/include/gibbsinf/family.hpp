#pragma once

#include <string>
#include <vector>

#include "gibbsinf/cocycle.hpp"
#include "gibbsinf/gibbs.hpp"

namespace gibbsinf {

/// Parameterized family of Gibbs measures over a finite node set (tensor grid
/// or explicit atoms). Node potentials are normalized on construction; the
/// injectivity diagnostic records the minimal pairwise sup-distance between
/// normalized jacobians (zero for the cocycle families, which share one base
/// measure and vary only the cocycle).
struct ParamFamily {
    SubshiftSpec spec;
    int param_dim = 1;
    std::vector<std::vector<double>> nodes;
    std::vector<std::string> labels;
    std::vector<GibbsMeasure> measures;
    std::vector<CocycleSpec> cocycles;  // nonempty only for cocycle families

    bool injective = true;
    double min_jacobian_gap = 0.0;

    int node_count() const { return static_cast<int>(nodes.size()); }
    const GibbsMeasure& measure(int i) const { return measures[static_cast<std::size_t>(i)]; }

    /// Index of the node at the given coordinates (exact match within 1e-12).
    int node_at(const std::vector<double>& coords) const;
};

/// Example family of 2-state Markov measures: column-stochastic matrices
/// [[a, 1-b], [1-a, b]] on an inclusive na x nb grid of (a, b).
ParamFamily family_markov_2x2(double a_lo, double a_hi, int na, double b_lo, double b_hi, int nb,
                              const GibbsOptions& opt = {});

/// Finite atom family of Bernoulli measures on the full shift; each atom is
/// (1-d coordinate, probability vector).
ParamFamily family_bernoulli_atoms(const std::vector<std::pair<double, std::vector<double>>>& atoms,
                                   const GibbsOptions& opt = {});

/// f_theta = log(theta J1 + (1-theta) J0) for normalized J0, J1; automatically
/// normalized since the transfer operator is linear in e^A. Midpoint grid on [0,1].
ParamFamily family_jacobian_mixture(const Potential& log_j0, const Potential& log_j1, int cells,
                                    const GibbsOptions& opt = {});

/// Rotated-hyperbolic cocycle grid: theta = (theta_1, theta_2) on the inclusive
/// n x n grid of [-eps, eps]^2, all nodes sharing the Bernoulli base measure.
ParamFamily family_cocycle_grid(double eps, int n_per_axis, const std::vector<double>& base_probs,
                                const GibbsOptions& opt = {});

/// Strictly positive weights over the family nodes, summing to 1.
struct PriorMeasure {
    std::vector<double> weights;
    std::vector<double> log_weights;
};

PriorMeasure prior_uniform(const ParamFamily& fam);
PriorMeasure prior_from_weights(std::vector<double> weights);

}  // namespace gibbsinf
