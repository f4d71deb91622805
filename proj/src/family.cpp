#include "gibbsinf/family.hpp"

#include <cmath>
#include <cstdio>

#include "gibbsinf/errors.hpp"
#include "gibbsinf/logspace.hpp"

namespace gibbsinf {

namespace {

std::string coord_label(const std::vector<double>& c) {
    std::string s;
    char buf[64];
    for (std::size_t i = 0; i < c.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.6g", c[i]);
        if (i) s += ",";
        s += buf;
    }
    return s;
}

void finish_family(ParamFamily& fam) {
    fam.labels.reserve(fam.nodes.size());
    if (fam.labels.empty())
        for (const auto& c : fam.nodes) fam.labels.push_back(coord_label(c));
    double gap = std::numeric_limits<double>::infinity();
    const int n = fam.node_count();
    for (int i = 0; i < n && gap > 0.0; ++i)
        for (int j = i + 1; j < n; ++j) {
            const double d = Potential::sup_distance(fam.measures[static_cast<std::size_t>(i)].jacobian,
                                                     fam.measures[static_cast<std::size_t>(j)].jacobian);
            gap = std::min(gap, d);
            if (gap == 0.0) break;
        }
    if (n < 2) gap = 0.0;
    fam.min_jacobian_gap = gap;
    fam.injective = n >= 2 && gap > 1e-12;
}

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> v(static_cast<std::size_t>(n));
    if (n == 1) {
        v[0] = 0.5 * (lo + hi);
        return v;
    }
    for (int i = 0; i < n; ++i) {
        const double x = lo + (hi - lo) * i / (n - 1);
        // snap to 12 decimals so grid coordinates and ball boundaries compare
        // the same way on every axis (0.35 vs 0.65 asymmetry otherwise)
        v[static_cast<std::size_t>(i)] = std::round(x * 1e12) / 1e12;
    }
    return v;
}

}  // namespace

int ParamFamily::node_at(const std::vector<double>& coords) const {
    for (int i = 0; i < node_count(); ++i) {
        const auto& c = nodes[static_cast<std::size_t>(i)];
        if (c.size() != coords.size()) continue;
        bool ok = true;
        for (std::size_t j = 0; j < c.size(); ++j)
            if (std::abs(c[j] - coords[j]) > 1e-12) {
                ok = false;
                break;
            }
        if (ok) return i;
    }
    throw InputError("node_at: no family node at the requested coordinates");
}

ParamFamily family_markov_2x2(double a_lo, double a_hi, int na, double b_lo, double b_hi, int nb,
                              const GibbsOptions& opt) {
    if (na < 1 || nb < 1) throw InputError("family_markov_2x2: grid counts must be >= 1");
    if (a_lo <= 0 || a_hi >= 1 || b_lo <= 0 || b_hi >= 1)
        throw InputError("family_markov_2x2: (a,b) must stay inside (0,1)");
    ParamFamily fam{SubshiftSpec::full_shift(2)};
    fam.param_dim = 2;
    for (double a : linspace(a_lo, a_hi, na))
        for (double b : linspace(b_lo, b_hi, nb)) {
            fam.nodes.push_back({a, b});
            // column-stochastic M = [[a, 1-b], [1-a, b]]; transition s->t has
            // probability M(t,s); stationary pi solves M pi = pi.
            const double pi1 = (1 - b) / (2 - a - b), pi2 = (1 - a) / (2 - a - b);
            const double P[2][2] = {{a, 1 - b}, {1 - a, b}};  // P[t][s]
            const double pi[2] = {pi1, pi2};
            std::vector<std::pair<Word, double>> entries;
            for (int s = 0; s < 2; ++s)
                for (int t = 0; t < 2; ++t)
                    entries.push_back({Word{static_cast<std::uint8_t>(s), static_cast<std::uint8_t>(t)},
                                       std::log(pi[s] * P[t][s] / pi[t])});
            fam.measures.push_back(gibbs_measure(Potential(fam.spec, 2, entries), opt));
        }
    finish_family(fam);
    return fam;
}

ParamFamily family_bernoulli_atoms(const std::vector<std::pair<double, std::vector<double>>>& atoms,
                                   const GibbsOptions& opt) {
    if (atoms.empty()) throw InputError("family_bernoulli_atoms: no atoms");
    const int q = static_cast<int>(atoms.front().second.size());
    ParamFamily fam{SubshiftSpec::full_shift(q)};
    fam.param_dim = 1;
    for (const auto& [coord, probs] : atoms) {
        if (static_cast<int>(probs.size()) != q) throw InputError("family_bernoulli_atoms: ragged probability vectors");
        double sum = 0.0;
        for (double p : probs) {
            if (!(p > 0.0)) throw InputError("family_bernoulli_atoms: probabilities must be > 0");
            sum += p;
        }
        if (std::abs(sum - 1.0) > 1e-9) throw InputError("family_bernoulli_atoms: probabilities must sum to 1");
        fam.nodes.push_back({coord});
        std::vector<std::pair<Word, double>> entries;
        for (int a = 0; a < q; ++a)
            entries.push_back({Word{static_cast<std::uint8_t>(a)}, std::log(probs[static_cast<std::size_t>(a)])});
        fam.measures.push_back(gibbs_measure(Potential(fam.spec, 1, entries), opt));
    }
    finish_family(fam);
    return fam;
}

ParamFamily family_jacobian_mixture(const Potential& log_j0, const Potential& log_j1, int cells,
                                    const GibbsOptions& opt) {
    if (cells < 1) throw InputError("family_jacobian_mixture: need >= 1 cells");
    if (!(log_j0.spec() == log_j1.spec()))
        throw InputError("family_jacobian_mixture: jacobians live on different subshifts");
    ParamFamily fam{log_j0.spec()};
    fam.param_dim = 1;
    const int q = fam.spec.alphabet();
    const int k = std::max(log_j0.depth(), log_j1.depth());
    std::uint64_t qk = 1;
    for (int i = 0; i < k; ++i) qk *= static_cast<std::uint64_t>(q);
    for (int c = 0; c < cells; ++c) {
        const double theta = (c + 0.5) / cells;  // midpoint grid on [0,1]
        fam.nodes.push_back({theta});
        std::vector<double> dense(qk, 0.0);
        for (const auto& w : admissible_words(fam.spec, k))
            dense[word_rank(w, q)] =
                std::log(theta * std::exp(log_j1.value(w)) + (1 - theta) * std::exp(log_j0.value(w)));
        fam.measures.push_back(gibbs_measure(Potential::from_dense(fam.spec, k, std::move(dense)), opt));
    }
    finish_family(fam);
    return fam;
}

ParamFamily family_cocycle_grid(double eps, int n_per_axis, const std::vector<double>& base_probs,
                                const GibbsOptions& opt) {
    if (eps <= 0) throw InputError("family_cocycle_grid: eps must be > 0");
    if (n_per_axis < 1) throw InputError("family_cocycle_grid: grid must have >= 1 node per axis");
    const int q = static_cast<int>(base_probs.size());
    if (q != 2) throw InputError("family_cocycle_grid: the rotated-hyperbolic cocycle uses 2 symbols");
    ParamFamily fam{SubshiftSpec::full_shift(2)};
    fam.param_dim = 2;
    std::vector<std::pair<Word, double>> entries;
    for (int a = 0; a < q; ++a)
        entries.push_back({Word{static_cast<std::uint8_t>(a)}, std::log(base_probs[static_cast<std::size_t>(a)])});
    const GibbsMeasure base = gibbs_measure(Potential(fam.spec, 1, entries), opt);
    for (double t1 : linspace(-eps, eps, n_per_axis))
        for (double t2 : linspace(-eps, eps, n_per_axis)) {
            fam.nodes.push_back({t1, t2});
            fam.measures.push_back(base);
            fam.cocycles.push_back(CocycleSpec::rotated_hyperbolic({t1, t2}));
        }
    finish_family(fam);
    return fam;
}

PriorMeasure prior_uniform(const ParamFamily& fam) {
    const int n = fam.node_count();
    if (n == 0) throw InputError("prior_uniform: empty family");
    PriorMeasure pr;
    pr.weights.assign(static_cast<std::size_t>(n), 1.0 / n);
    pr.log_weights.assign(static_cast<std::size_t>(n), -std::log(static_cast<double>(n)));
    return pr;
}

PriorMeasure prior_from_weights(std::vector<double> weights) {
    if (weights.empty()) throw InputError("prior_from_weights: empty weight vector");
    double sum = 0.0;
    for (double w : weights) {
        if (!(w > 0.0)) throw InputError("prior_from_weights: weights must be strictly positive");
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-12)
        for (double& w : weights) w /= sum;
    PriorMeasure pr;
    pr.log_weights.reserve(weights.size());
    for (double w : weights) pr.log_weights.push_back(std::log(w));
    pr.weights = std::move(weights);
    return pr;
}

}  // namespace gibbsinf
