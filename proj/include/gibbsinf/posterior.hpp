#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "gibbsinf/family.hpp"
#include "gibbsinf/nonadditive.hpp"

namespace gibbsinf {

/// Immutable posterior snapshot at step n: log weights over the family nodes,
/// normalized so their log-sum-exp is 0. `log_partition` keeps the
/// pre-normalization log-sum-exp; for the direct scheme this equals log Z_n(y)
/// when the sampling measure was supplied, and the unnormalized variant
/// log sum_theta w_0(theta) mu_theta(C_n(y)) otherwise.
struct PosteriorState {
    const ParamFamily* family = nullptr;
    std::vector<double> log_weights;
    double log_partition = 0.0;
    int n = 0;
    std::int64_t sample_id = 0;
    bool mc_warning = false;
    std::vector<double> mc_std_errors;  // per node, empty on exact routes

    double weight(int node) const { return std::exp(log_weights[static_cast<std::size_t>(node)]); }
    int argmax_node() const;  // smallest index among maxima (lexicographic grid order)
};

/// Direct-observation update: log w(theta) = log w_0(theta) + log mu_theta([y]).
/// Throws DegeneratePosteriorError when y is inadmissible for every node.
PosteriorState posterior_direct(const PriorMeasure& prior, const ParamFamily& fam, const Word& y,
                                const GibbsMeasure* sampling_measure = nullptr);

/// Exponential-loss observable phi_n. The inner integral int e^{phi_n} dmu_theta
/// is computed exactly by weighted transfer-matrix powers when phi_n is the
/// Birkhoff sum of a locally constant function of x, and otherwise by seeded
/// Monte Carlo (log-sum-exp over samples) with a recorded standard error.
/// The Monte Carlo route hands phi exactly n symbols of x per sample.
struct LossSpec {
    std::vector<Potential> birkhoff;  // per node; empty selects the Monte Carlo route
    std::function<double(int node, int n, const Word& x, const Word& y)> phi;
    int mc_samples = 1024;
    double mc_se_warn = 0.25;  // nats; max node standard error above this sets mc_warning
    SeededStream mc_stream{};  // base stream; node substreams derive deterministically
};

PosteriorState posterior_exploss(const PriorMeasure& prior, const ParamFamily& fam, const LossSpec& loss,
                                 const Word& y);

/// Log-loss update: log w(theta) = log w_0(theta) + log psi_n(theta, y);
/// nonpositive psi_n is an input error (it would violate positivity of phi_n).
PosteriorState posterior_psi(const PriorMeasure& prior, const ParamFamily& fam, const PsiSpec& psi, const Word& y);

/// Posterior mass of the sup-norm ball of radius delta around `center`.
double mass_of_ball(const PosteriorState& st, std::span<const double> center, double delta);

/// log of the complement mass, as a log-sum-exp over the outside nodes; this is
/// the quantity decay fits consume (1 - mass saturates in double precision long
/// before the dynamics is done).
double complement_log_mass(const PosteriorState& st, std::span<const double> center, double delta);

struct GammaEstimate {
    double slope = 0.0;       // least-squares slope of log int e^{phi_n} against n
    double last_value = 0.0;  // value at the largest n, divided by n
    bool mc_warning = false;
};

/// Free-energy exponent data for assumption-(A1)-style limits.
GammaEstimate gamma_estimate(const ParamFamily& fam, const LossSpec& loss, int node, const Word& y,
                             const std::vector<int>& n_list);

/// Internal route shared by posterior_exploss and gamma_estimate:
/// log int e^{phi_n(theta, . , y)} dmu_theta per requested node.
std::vector<double> log_moment_per_node(const ParamFamily& fam, const LossSpec& loss, const Word& y, int n,
                                        std::vector<double>* std_errors);

}  // namespace gibbsinf
