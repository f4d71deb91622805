#include "gibbsinf/posterior.hpp"

#include <algorithm>
#include <cmath>

#include "gibbsinf/errors.hpp"
#include "gibbsinf/kernels.hpp"
#include "gibbsinf/linalg.hpp"
#include "gibbsinf/logspace.hpp"
#include "gibbsinf/sampling.hpp"

namespace gibbsinf {

int PosteriorState::argmax_node() const {
    int best = 0;
    for (int i = 1; i < static_cast<int>(log_weights.size()); ++i)
        if (log_weights[static_cast<std::size_t>(i)] > log_weights[static_cast<std::size_t>(best)]) best = i;
    return best;
}

namespace {

PosteriorState normalize_state(const ParamFamily& fam, std::vector<double> logw, int n) {
    const double lz = log_sum_exp(logw);
    if (lz == neg_inf)
        throw DegeneratePosteriorError("posterior: every node has zero likelihood at n=" + std::to_string(n));
    for (double& v : logw) v -= lz;
    PosteriorState st;
    st.family = &fam;
    st.log_weights = std::move(logw);
    st.log_partition = lz;
    st.n = n;
    return st;
}

}  // namespace

PosteriorState posterior_direct(const PriorMeasure& prior, const ParamFamily& fam, const Word& y,
                                const GibbsMeasure* sampling_measure) {
    if (static_cast<int>(prior.log_weights.size()) != fam.node_count())
        throw InputError("posterior_direct: prior and family sizes differ");
    const std::vector<double> ll = node_cylinder_loglik(fam, y);
    std::vector<double> logw(ll.size());
    for (std::size_t i = 0; i < ll.size(); ++i) logw[i] = prior.log_weights[i] + ll[i];
    PosteriorState st = normalize_state(fam, std::move(logw), static_cast<int>(y.size()));
    if (sampling_measure != nullptr) {
        const double lnu = cylinder_log_measure(*sampling_measure, y);
        st.log_partition -= lnu;  // log Z_n(y) with the cylinder loss against nu
    }
    return st;
}

std::vector<double> log_moment_per_node(const ParamFamily& fam, const LossSpec& loss, const Word& y, int n,
                                        std::vector<double>* std_errors) {
    const int nodes = fam.node_count();
    std::vector<double> out(static_cast<std::size_t>(nodes));
    if (std_errors) std_errors->assign(static_cast<std::size_t>(nodes), 0.0);

    if (!loss.birkhoff.empty()) {
        if (static_cast<int>(loss.birkhoff.size()) != nodes)
            throw InputError("posterior_exploss: one Birkhoff potential per node required");
        for (int i = 0; i < nodes; ++i)
            out[static_cast<std::size_t>(i)] =
                log_birkhoff_moment(fam.measure(i), loss.birkhoff[static_cast<std::size_t>(i)], n);
        return out;
    }

    if (!loss.phi) throw InputError("posterior_exploss: loss has neither Birkhoff potentials nor a phi evaluator");
    mc_log_moments(fam, loss, y, n, out, std_errors);
    return out;
}

PosteriorState posterior_exploss(const PriorMeasure& prior, const ParamFamily& fam, const LossSpec& loss,
                                 const Word& y) {
    if (static_cast<int>(prior.log_weights.size()) != fam.node_count())
        throw InputError("posterior_exploss: prior and family sizes differ");
    const int n = static_cast<int>(y.size());
    std::vector<double> se;
    const std::vector<double> lm = log_moment_per_node(fam, loss, y, n, &se);
    std::vector<double> logw(lm.size());
    for (std::size_t i = 0; i < lm.size(); ++i) logw[i] = prior.log_weights[i] + lm[i];
    PosteriorState st = normalize_state(fam, std::move(logw), n);
    if (loss.birkhoff.empty()) {
        st.mc_std_errors = se;
        double worst = 0.0;
        for (double v : se) worst = std::max(worst, v);
        st.mc_warning = worst > loss.mc_se_warn;
    }
    return st;
}

PosteriorState posterior_psi(const PriorMeasure& prior, const ParamFamily& fam, const PsiSpec& psi, const Word& y) {
    if (static_cast<int>(prior.log_weights.size()) != fam.node_count())
        throw InputError("posterior_psi: prior and family sizes differ");
    if (!psi.eval) throw InputError("posterior_psi: missing psi evaluator");
    const int n = static_cast<int>(y.size());
    std::vector<double> logw(static_cast<std::size_t>(fam.node_count()));
    for (int i = 0; i < fam.node_count(); ++i) {
        const double v = psi.eval(i, n, y);
        if (!(v > 0.0))
            throw InputError("posterior_psi: psi_n(theta, y) must be > 0 (node " + std::to_string(i) + ")");
        logw[static_cast<std::size_t>(i)] = prior.log_weights[static_cast<std::size_t>(i)] + std::log(v);
    }
    return normalize_state(fam, std::move(logw), n);
}

namespace {

bool in_ball(const std::vector<double>& node, std::span<const double> center, double delta) {
    double d = 0.0;
    for (std::size_t j = 0; j < node.size(); ++j) d = std::max(d, std::abs(node[j] - center[j]));
    return d < delta;
}

}  // namespace

double mass_of_ball(const PosteriorState& st, std::span<const double> center, double delta) {
    if (!(delta > 0.0)) throw InputError("mass_of_ball: delta must be > 0");
    double mass = 0.0;
    for (int i = 0; i < static_cast<int>(st.log_weights.size()); ++i)
        if (in_ball(st.family->nodes[static_cast<std::size_t>(i)], center, delta))
            mass += std::exp(st.log_weights[static_cast<std::size_t>(i)]);
    return std::min(mass, 1.0);
}

double complement_log_mass(const PosteriorState& st, std::span<const double> center, double delta) {
    if (!(delta > 0.0)) throw InputError("complement_log_mass: delta must be > 0");
    std::vector<double> out;
    for (int i = 0; i < static_cast<int>(st.log_weights.size()); ++i)
        if (!in_ball(st.family->nodes[static_cast<std::size_t>(i)], center, delta))
            out.push_back(st.log_weights[static_cast<std::size_t>(i)]);
    return log_sum_exp(out);
}

GammaEstimate gamma_estimate(const ParamFamily& fam, const LossSpec& loss, int node, const Word& y,
                             const std::vector<int>& n_list) {
    if (n_list.empty()) throw InputError("gamma_estimate: empty n list");
    for (std::size_t i = 1; i < n_list.size(); ++i)
        if (n_list[i] <= n_list[i - 1]) throw InputError("gamma_estimate: n list must be strictly increasing");
    if (n_list.back() > static_cast<int>(y.size())) throw InputError("gamma_estimate: max n exceeds |y|");

    GammaEstimate g;
    std::vector<double> xs, ys;
    for (int n : n_list) {
        std::vector<double> se;
        const std::vector<double> lm = log_moment_per_node(fam, loss, y, n, &se);
        xs.push_back(static_cast<double>(n));
        ys.push_back(lm[static_cast<std::size_t>(node)]);
        if (!se.empty() && se[static_cast<std::size_t>(node)] > loss.mc_se_warn) g.mc_warning = true;
    }
    // least squares slope of log-moment against n
    const std::size_t m = xs.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < m; ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    const double denom = m * sxx - sx * sx;
    g.slope = (m < 2 || denom == 0.0) ? ys.back() / xs.back() : (m * sxy - sx * sy) / denom;
    g.last_value = ys.back() / xs.back();
    return g;
}

}  // namespace gibbsinf
