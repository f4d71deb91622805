#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "gibbsinf/family.hpp"
#include "gibbsinf/nonadditive.hpp"

namespace gibbsinf {

/// Decay-rate certificate around a sampling node theta0, computed from closed
/// forms on the grid:
///   rho_delta = max over nodes outside B_delta of h(mu_0) + int log J_theta dmu_0
///               (equivalently minus the smallest relative entropy outside;
///               this is also the asymptotic slope of log(1 - Pi_n(B_delta))),
///   d_delta   = prior-weighted relative entropy inside the ball,
///   composite = (rho_delta - h(mu_0)) + h(mu_0) Pi_0(B_delta) + d_delta + zeta,
///               the certified upper exponent of |Pi_n(B_delta | y) - 1|.
/// Empirical slope fields are filled by the experiment loop, not here.
struct RateReport {
    double rho_delta = 0.0;
    double d_delta = 0.0;
    double composite_exponent = 0.0;
    double zeta = 0.01;
    double entropy_theta0 = 0.0;
    double prior_ball_mass = 0.0;
    int nodes_inside = 0;
    int nodes_outside = 0;
    bool degenerate_family = false;  // all nodes carry the same measure

    double empirical_slope = std::numeric_limits<double>::quiet_NaN();
    double fit_r_squared = std::numeric_limits<double>::quiet_NaN();
    int window_min = 0, window_max = 0;
};

RateReport rate_bound_direct(const ParamFamily& fam, int theta0_node, const PriorMeasure& prior, double delta,
                             double zeta = 0.01);

enum class DecayTransform { log_of_value, log_of_one_minus_value };

/// Least-squares slope and R^2 of the transformed series against n on the
/// window [lo_frac * n_max, n_max]. Fewer than 4 finite points is a fit error.
std::pair<double, double> empirical_decay(const std::vector<std::pair<int, double>>& series, DecayTransform t,
                                          double window_lo_frac = 0.2);

/// Same fit for a series that is already in log space (log weights never leave
/// log space; 1 - mass saturates in double precision long before the dynamics
/// is over).
std::pair<double, double> empirical_decay_log(const std::vector<std::pair<int, double>>& log_series,
                                              double window_lo_frac = 0.2);

/// Depth-D Markov measure given by forward conditionals on admissible D-word
/// states; closed-form entropy and potential integrals make it the search
/// space for the deviation bounds.
GibbsMeasure markov_measure_from_conditionals(const SubshiftSpec& spec, int depth,
                                              const std::vector<double>& cond_rows, double tol = 1e-13);

struct LdpOptions {
    int restarts = 16;
    int iterations = 400;
    std::uint64_t seed = 20240229;
    std::uint64_t word_cap = 2'000'000;  // finite-n estimation guard for black-box constraints
    std::vector<int> estimate_n_list = {4, 6, 8, 10, 12};
};

struct LdpBound {
    double value = neg_inf;     // best feasible h(eta) + F(eta, Phi); a lower bound of the true sup
    bool feasible = false;
    double constraint_value = 0.0;  // F(eta, Psi) at the reported maximizer
    std::vector<double> conditionals;  // maximizing Markov conditionals (rows)
};

/// Lower bound of sup { h(eta) + int log J d eta : F(eta, Psi) >= threshold }
/// over depth-D Markov measures, by projected gradient ascent with seeded
/// restarts and a penalty ramp for the constraint. Returns -inf with
/// feasible=false when the constraint set is empty on the search space.
LdpBound ldp_rate_bound(const SequenceFamily& constraint, const Potential& normalized_potential, double threshold,
                        int depth, const LdpOptions& opt = {});

}  // namespace gibbsinf
