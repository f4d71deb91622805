#pragma once

#include <span>
#include <vector>

#include "gibbsinf/potential.hpp"

namespace gibbsinf {

/// Gibbs (stationary word-Markov) measure of a normalized potential log J.
/// `marginal` is the stationary law of the state chain on admissible d-words,
/// d = max(depth-1, 1); `log_cond[u*q + a]` is the forward one-step law
/// log p(a | u) = log J(u a) + log marginal(tail(u a)) - log marginal(u).
/// Cylinder masses are exact: log mu([w]) = log marginal(w_{1..d}) + sum of
/// conditional terms.
struct GibbsMeasure {
    SubshiftSpec spec;
    Potential jacobian;  // normalized, pressure 0
    double log_lambda = 0.0;  // pressure removed from the defining potential

    int state_len = 1;  // d
    std::vector<Word> states;
    std::vector<double> marginal;
    std::vector<double> log_marginal;
    std::vector<int> state_of_rank;  // dense q^d lookup, -1 at inadmissible ranks
    std::vector<double> cond;        // dim x q
    std::vector<double> log_cond;    // dim x q, -inf at forbidden extensions
    std::vector<int> next_state;     // dim x q, -1 at forbidden extensions

    double gibbs_constant = 1.0;  // K >= 1; exact for product and Markov measures

    int state_index(std::span<const std::uint8_t> w) const {
        std::uint64_t r = 0;
        for (int i = 0; i < state_len; ++i) r = r * spec.alphabet() + w[static_cast<std::size_t>(i)];
        return state_of_rank[r];
    }
};

struct GibbsOptions {
    double tol = 1e-13;
    int gibbs_constant_max_len = 12;  // L0 for the Gibbs-ratio certificate
};

/// Normalizes p and builds the associated Gibbs measure: stationary marginal is
/// the left Perron eigenvector of the normalized transfer matrix; K is the max
/// of the Gibbs ratio and its inverse over admissible words up to L0 (a lower
/// bound certificate in general, exact for Markov measures).
GibbsMeasure gibbs_measure(const Potential& p, const GibbsOptions& opt = {});

/// log mu([w]) for an admissible word, exact in log space; -inf for
/// inadmissible or measure-zero words. Requires |w| >= depth-1.
double cylinder_log_measure(const GibbsMeasure& m, const Word& w);

/// Running log mu([w_1..w_n]) for every n in [d, |w|]; out[i] corresponds to the
/// prefix of length d+i. Used by the experiment loop to evaluate a whole
/// n-schedule in one pass.
std::vector<double> cylinder_log_measure_prefixes(const GibbsMeasure& m, const Word& w);

/// h(mu) = -sum over admissible k-words of mu([w]) log J(w).
double entropy(const GibbsMeasure& m);

/// Integral of a depth-<=max locally constant function against mu, as an exact
/// finite sum over admissible words of the reconciled depth.
double expectation(const GibbsMeasure& m, const Potential& p);

/// Kullback-Leibler divergence rate h(mu | mu_phi) = -h(mu) - int log J_phi dmu.
double relative_entropy(const GibbsMeasure& mu, const GibbsMeasure& mu_phi);

/// Cylinder-ratio estimator (1/n)[log mu([w]) - log mu_phi([w])] along a sample w.
double relative_entropy_empirical(const Word& mu_words, const GibbsMeasure& mu, const GibbsMeasure& mu_phi);

}  // namespace gibbsinf
