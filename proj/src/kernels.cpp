#include "gibbsinf/kernels.hpp"

#include <algorithm>
#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "gibbsinf/errors.hpp"
#include "gibbsinf/logspace.hpp"
#include "gibbsinf/posterior.hpp"
#include "gibbsinf/sampling.hpp"

namespace gibbsinf {

void set_worker_count(int workers) {
#ifdef _OPENMP
    if (workers > 0) omp_set_num_threads(workers);
#else
    (void)workers;
#endif
}

std::vector<double> node_cylinder_loglik_serial(const ParamFamily& fam, const Word& y) {
    std::vector<double> out(static_cast<std::size_t>(fam.node_count()));
    for (int i = 0; i < fam.node_count(); ++i)
        out[static_cast<std::size_t>(i)] = cylinder_log_measure(fam.measure(i), y);
    return out;
}

std::vector<double> node_cylinder_loglik(const ParamFamily& fam, const Word& y) {
    std::vector<double> out(static_cast<std::size_t>(fam.node_count()));
#pragma omp parallel for schedule(static)
    for (int i = 0; i < fam.node_count(); ++i)
        out[static_cast<std::size_t>(i)] = cylinder_log_measure(fam.measure(i), y);
    return out;
}

double log_birkhoff_moment(const GibbsMeasure& m, const Potential& u, int n) {
    if (n < 1) throw InputError("log_birkhoff_moment: n must be >= 1");
    if (!(m.spec == u.spec())) throw InputError("log_birkhoff_moment: measure and potential subshifts differ");
    // combine log J + u at the common depth and take transfer powers
    const int k = std::max(m.jacobian.depth(), u.depth());
    const int q = m.spec.alphabet();
    std::uint64_t qk = 1;
    for (int i = 0; i < k; ++i) qk *= static_cast<std::uint64_t>(q);
    std::vector<double> dense(qk, 0.0);
    for (const auto& w : admissible_words(m.spec, k))
        dense[word_rank(w, q)] = m.jacobian.value(w) + u.value(w);
    const TransferMatrix tm = transfer_matrix(Potential::from_dense(m.spec, k, std::move(dense)));

    std::vector<double> v(static_cast<std::size_t>(tm.dim), 1.0), w(static_cast<std::size_t>(tm.dim));
    double log_scale = 0.0;
    for (int t = 0; t < n; ++t) {
        double vmax = 0.0;
        for (int i = 0; i < tm.dim; ++i) {
            double s = 0.0;
            const double* row = tm.entries.data() + static_cast<std::size_t>(i) * tm.dim;
            for (int j = 0; j < tm.dim; ++j) s += row[j] * v[static_cast<std::size_t>(j)];
            w[static_cast<std::size_t>(i)] = s;
            vmax = std::max(vmax, s);
        }
        if (vmax <= 0.0) return neg_inf;
        for (int i = 0; i < tm.dim; ++i) v[static_cast<std::size_t>(i)] = w[static_cast<std::size_t>(i)] / vmax;
        log_scale += std::log(vmax);
    }
    // integrate the iterate against mu over the transfer states
    double acc = neg_inf;
    for (int i = 0; i < tm.dim; ++i) {
        const double lm = cylinder_log_measure(m, tm.states[static_cast<std::size_t>(i)]);
        if (lm == neg_inf || v[static_cast<std::size_t>(i)] <= 0.0) continue;
        acc = log_add(acc, lm + std::log(v[static_cast<std::size_t>(i)]));
    }
    return acc + log_scale;
}

namespace {

// One node of the admissible word tree: chain state, carried product with
// extracted log scale, and the cylinder log-mass of the prefix.
struct TreeNode {
    int state;
    int depth;
    Mat2 prod;
    double renorm;
    double log_mu;
};

void accumulate_depth(const std::vector<int>& depth_slot, const TreeNode& t, std::vector<double>& sums) {
    const int slot = depth_slot[static_cast<std::size_t>(t.depth)];
    if (slot >= 0) sums[static_cast<std::size_t>(slot)] += std::exp(t.log_mu) * (std::log(spectral_norm(t.prod)) + t.renorm);
}

TreeNode extend(const GibbsMeasure& m, const CocycleSpec& c, const TreeNode& t, int symbol) {
    const int q = m.spec.alphabet();
    TreeNode n;
    n.state = m.next_state[static_cast<std::size_t>(t.state) * q + symbol];
    n.depth = t.depth + 1;
    n.prod = c.matrices[static_cast<std::size_t>(symbol)] * t.prod;
    n.renorm = t.renorm;
    n.log_mu = t.log_mu + m.log_cond[static_cast<std::size_t>(t.state) * q + symbol];
    const double mx = n.prod.max_abs();
    if (mx > 1e120) {
        n.prod.scale(1.0 / mx);
        n.renorm += std::log(mx);
    }
    return n;
}

void walk_subtree(const GibbsMeasure& m, const CocycleSpec& c, const std::vector<int>& depth_slot, int n_max,
                  const TreeNode& t, std::vector<double>& sums) {
    const int q = m.spec.alphabet();
    for (int a = 0; a < q; ++a) {
        if (m.next_state[static_cast<std::size_t>(t.state) * q + a] < 0) continue;
        const TreeNode n = extend(m, c, t, a);
        accumulate_depth(depth_slot, n, sums);
        if (n.depth < n_max) walk_subtree(m, c, depth_slot, n_max, n, sums);
    }
}

struct AnnealedPlan {
    std::vector<int> depth_slot;       // depth -> n_list slot or -1
    std::vector<TreeNode> frontier;    // subtree roots at the split depth
    std::vector<double> shallow_sums;  // contributions of depths <= split depth
    int n_max;
};

AnnealedPlan annealed_plan(const CocycleSpec& c, const GibbsMeasure& m, const std::vector<int>& n_list) {
    AnnealedPlan plan;
    plan.n_max = *std::max_element(n_list.begin(), n_list.end());
    plan.depth_slot.assign(static_cast<std::size_t>(plan.n_max) + 1, -1);
    for (std::size_t t = 0; t < n_list.size(); ++t) {
        if (n_list[t] < 1) throw InputError("annealed sums: n values must be >= 1");
        plan.depth_slot[static_cast<std::size_t>(n_list[t])] = static_cast<int>(t);
    }
    plan.shallow_sums.assign(n_list.size(), 0.0);

    // seed one tree node per chain state, accumulating the state-word products
    const int split = std::min(plan.n_max, 10);
    std::vector<TreeNode> level;
    for (int s = 0; s < static_cast<int>(m.states.size()); ++s) {
        const Word& sw = m.states[static_cast<std::size_t>(s)];
        TreeNode t{s, 0, Mat2::identity(), 0.0, m.log_marginal[static_cast<std::size_t>(s)]};
        for (std::size_t i = 0; i < sw.size(); ++i) {
            t.prod = c.matrices[static_cast<std::size_t>(sw[i])] * t.prod;
            t.depth = static_cast<int>(i) + 1;
            if (t.depth <= plan.n_max) accumulate_depth(plan.depth_slot, t, plan.shallow_sums);
        }
        if (t.depth < plan.n_max) level.push_back(t);
    }
    // breadth-first expansion to the split depth, accumulating along the way
    while (!level.empty() && level.front().depth < split) {
        std::vector<TreeNode> next;
        next.reserve(level.size() * 2);
        for (const TreeNode& t : level) {
            const int q = m.spec.alphabet();
            for (int a = 0; a < q; ++a) {
                if (m.next_state[static_cast<std::size_t>(t.state) * q + a] < 0) continue;
                TreeNode n = extend(m, c, t, a);
                accumulate_depth(plan.depth_slot, n, plan.shallow_sums);
                if (n.depth < plan.n_max) next.push_back(n);
            }
        }
        level = std::move(next);
    }
    plan.frontier = std::move(level);
    return plan;
}

std::vector<double> annealed_sums_impl(const CocycleSpec& c, const GibbsMeasure& m, const std::vector<int>& n_list,
                                       bool parallel) {
    AnnealedPlan plan = annealed_plan(c, m, n_list);
    const int f = static_cast<int>(plan.frontier.size());
    std::vector<std::vector<double>> partial(static_cast<std::size_t>(f),
                                             std::vector<double>(n_list.size(), 0.0));
    if (parallel) {
#pragma omp parallel for schedule(static)
        for (int i = 0; i < f; ++i)
            walk_subtree(m, c, plan.depth_slot, plan.n_max, plan.frontier[static_cast<std::size_t>(i)],
                         partial[static_cast<std::size_t>(i)]);
    } else {
        for (int i = 0; i < f; ++i)
            walk_subtree(m, c, plan.depth_slot, plan.n_max, plan.frontier[static_cast<std::size_t>(i)],
                         partial[static_cast<std::size_t>(i)]);
    }
    std::vector<double> sums = plan.shallow_sums;
    for (int i = 0; i < f; ++i)
        for (std::size_t t = 0; t < n_list.size(); ++t) sums[t] += partial[static_cast<std::size_t>(i)][t];
    return sums;
}

}  // namespace

std::vector<double> annealed_log_norm_sums(const CocycleSpec& c, const GibbsMeasure& m,
                                           const std::vector<int>& n_list) {
    return annealed_sums_impl(c, m, n_list, true);
}

std::vector<double> annealed_log_norm_sums_serial(const CocycleSpec& c, const GibbsMeasure& m,
                                                  const std::vector<int>& n_list) {
    return annealed_sums_impl(c, m, n_list, false);
}

namespace {

void mc_log_moments_impl(const ParamFamily& fam, const LossSpec& loss, const Word& y, int n,
                         std::vector<double>& out, std::vector<double>* std_errors, bool parallel) {
    const int nodes = fam.node_count();
    const int m = loss.mc_samples;
    out.assign(static_cast<std::size_t>(nodes), 0.0);
    if (std_errors) std_errors->assign(static_cast<std::size_t>(nodes), 0.0);

    auto node_value = [&](int i) {
        SeededStream s = loss.mc_stream.substream(static_cast<std::uint64_t>(i) + 1);
        std::vector<double> phis(static_cast<std::size_t>(m));
        for (int j = 0; j < m; ++j) {
            const Word x = sample_orbit(fam.measure(i), n, s);
            phis[static_cast<std::size_t>(j)] = loss.phi(i, n, x, y);
        }
        const double lme = log_sum_exp(phis) - std::log(static_cast<double>(m));
        double var = 0.0;
        for (double p : phis) {
            const double w = std::exp(p - lme);  // weights relative to their mean
            var += (w - 1.0) * (w - 1.0);
        }
        // delta method: sd(log of the mean) ~= sd(w) / sqrt(m)
        const double se = std::sqrt(var / (m > 1 ? m - 1 : 1)) / std::sqrt(static_cast<double>(m));
        out[static_cast<std::size_t>(i)] = lme;
        if (std_errors) (*std_errors)[static_cast<std::size_t>(i)] = se;
    };

    if (parallel) {
#pragma omp parallel for schedule(dynamic)
        for (int i = 0; i < nodes; ++i) node_value(i);
    } else {
        for (int i = 0; i < nodes; ++i) node_value(i);
    }
}

}  // namespace

void mc_log_moments(const ParamFamily& fam, const LossSpec& loss, const Word& y, int n, std::vector<double>& out,
                    std::vector<double>* std_errors) {
    mc_log_moments_impl(fam, loss, y, n, out, std_errors, true);
}

void mc_log_moments_serial(const ParamFamily& fam, const LossSpec& loss, const Word& y, int n,
                           std::vector<double>& out, std::vector<double>* std_errors) {
    mc_log_moments_impl(fam, loss, y, n, out, std_errors, false);
}

namespace {

std::vector<double> mc_log_norm_samples_impl(const CocycleSpec& c, const GibbsMeasure& m, int n, int samples,
                                             SeededStream stream, bool parallel) {
    std::vector<double> out(static_cast<std::size_t>(samples));
    auto one = [&](int j) {
        SeededStream s = stream.substream(static_cast<std::uint64_t>(j) + 1);
        const Word x = sample_orbit(m, n, s);
        out[static_cast<std::size_t>(j)] = log_product_norm(c, x);
    };
    if (parallel) {
#pragma omp parallel for schedule(static)
        for (int j = 0; j < samples; ++j) one(j);
    } else {
        for (int j = 0; j < samples; ++j) one(j);
    }
    return out;
}

}  // namespace

std::vector<double> mc_log_norm_samples(const CocycleSpec& c, const GibbsMeasure& m, int n, int samples,
                                        SeededStream stream) {
    return mc_log_norm_samples_impl(c, m, n, samples, stream, true);
}

std::vector<double> mc_log_norm_samples_serial(const CocycleSpec& c, const GibbsMeasure& m, int n, int samples,
                                               SeededStream stream) {
    return mc_log_norm_samples_impl(c, m, n, samples, stream, false);
}

}  // namespace gibbsinf
