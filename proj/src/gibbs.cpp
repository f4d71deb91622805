#include "gibbsinf/gibbs.hpp"

#include <algorithm>
#include <cmath>

#include "gibbsinf/errors.hpp"
#include "gibbsinf/linalg.hpp"
#include "gibbsinf/logspace.hpp"

namespace gibbsinf {

GibbsMeasure gibbs_measure(const Potential& p, const GibbsOptions& opt) {
    if (!p.spec().primitive()) throw InputError("gibbs_measure: subshift is not primitive");
    auto [jac, log_lambda] = normalize(p, opt.tol);
    const SubshiftSpec spec = jac.spec();
    const int q = spec.alphabet();
    const int k = jac.depth();
    const int d = std::max(k - 1, 1);

    const TransferMatrix tm = transfer_matrix(jac);
    const PowerResult left = power_iteration(tm.dim, transpose(tm.dim, tm.entries), opt.tol);

    GibbsMeasure m{spec, jac};
    m.log_lambda = log_lambda;
    m.state_len = d;
    m.states = tm.states;
    m.marginal.resize(tm.dim);
    double total = 0.0;
    for (double v : left.vec) total += v;
    for (int i = 0; i < tm.dim; ++i) m.marginal[i] = left.vec[static_cast<std::size_t>(i)] / total;
    m.log_marginal.resize(tm.dim);
    for (int i = 0; i < tm.dim; ++i) m.log_marginal[i] = std::log(m.marginal[i]);

    std::uint64_t qd = 1;
    for (int i = 0; i < d; ++i) qd *= static_cast<std::uint64_t>(q);
    m.state_of_rank.assign(qd, -1);
    for (int i = 0; i < tm.dim; ++i) m.state_of_rank[word_rank(m.states[i], q)] = i;

    m.cond.assign(static_cast<std::size_t>(tm.dim) * q, 0.0);
    m.log_cond.assign(static_cast<std::size_t>(tm.dim) * q, neg_inf);
    m.next_state.assign(static_cast<std::size_t>(tm.dim) * q, -1);
    Word ext(static_cast<std::size_t>(d) + 1);
    for (int u = 0; u < tm.dim; ++u) {
        const Word& uw = m.states[u];
        for (int i = 0; i < d; ++i) ext[static_cast<std::size_t>(i)] = uw[static_cast<std::size_t>(i)];
        for (int a = 0; a < q; ++a) {
            if (!spec.allowed(uw.back(), a)) continue;
            ext[static_cast<std::size_t>(d)] = static_cast<std::uint8_t>(a);
            const Word tail(ext.begin() + 1, ext.end());
            const int v = m.state_of_rank[word_rank(tail, q)];
            if (v < 0) continue;
            // forward law p(a|u) = mu([u a]) / mu([u]). For k >= 2 the states
            // are (k-1)-words and mu([u a]) = e^{J(u a)} marginal(tail), so the
            // marginal ratio enters; for k = 1 the extension factorizes and the
            // conditional is e^{J(a)} itself.
            double lc;
            if (k == 1) {
                lc = jac.value(std::span<const std::uint8_t>(&ext[static_cast<std::size_t>(d)], 1));
            } else {
                lc = jac.value(std::span<const std::uint8_t>(ext.data(), static_cast<std::size_t>(k))) +
                     m.log_marginal[v] - m.log_marginal[u];
            }
            m.log_cond[static_cast<std::size_t>(u) * q + a] = lc;
            m.cond[static_cast<std::size_t>(u) * q + a] = std::exp(lc);
            m.next_state[static_cast<std::size_t>(u) * q + a] = v;
        }
    }

    // Gibbs constant: max over words w (k <= |w| <= L0) of the ratio between
    // mu of the leading cylinder and the full Birkhoff weight over w, both ways.
    // The ratio depends only on trailing symbols, so lengths up to min(L0, 2k)
    // already realize the maximum; longer words repeat trailing patterns.
    double K = 1.0;
    const int len_lo = std::max(k, 2 * k - 2);  // shorter words leave the leading cylinder under-determined
    const int len_hi = std::max(len_lo, std::min(opt.gibbs_constant_max_len, 2 * k));
    for (int len = len_lo; len <= len_hi; ++len) {
        for (const auto& w : admissible_words(spec, len)) {
            const int n = len - k + 1;
            double birkhoff = 0.0;
            for (int j = 0; j < n; ++j)
                birkhoff += jac.value(std::span<const std::uint8_t>(w.data() + j, static_cast<std::size_t>(k)));
            const Word lead(w.begin(), w.begin() + n);
            const double lm = cylinder_log_measure(m, lead);
            if (lm == neg_inf) continue;
            const double r = std::exp(std::abs(lm - birkhoff));
            K = std::max(K, r);
        }
    }
    m.gibbs_constant = K;
    return m;
}

namespace {

// k = 1 needs no marginal factor beyond the first symbol; the unified
// prefix + conditional scan below covers every depth.
double scan_log_measure(const GibbsMeasure& m, const Word& w, std::vector<double>* prefixes) {
    const int d = m.state_len;
    const int q = m.spec.alphabet();
    const int n = static_cast<int>(w.size());
    if (n < m.jacobian.depth() - 1)
        throw InputError("cylinder_log_measure: word shorter than depth-1");
    if (n == 0) return 0.0;  // whole space
    if (n < d) {
        // depth k >= 2 with |w| == k-1 is handled below (n == d); only k==1
        // reaches here with n==0 which already returned.
        throw InputError("cylinder_log_measure: word shorter than state length");
    }
    for (std::uint8_t c : w)
        if (c >= q) throw InputError("cylinder_log_measure: symbol out of range");
    int u = m.state_index(std::span<const std::uint8_t>(w.data(), static_cast<std::size_t>(d)));
    double acc = (u >= 0) ? m.log_marginal[static_cast<std::size_t>(u)] : neg_inf;
    if (prefixes) prefixes->push_back(acc);
    for (int i = d; i < n; ++i) {
        if (u >= 0) {
            const int a = w[static_cast<std::size_t>(i)];
            acc += m.log_cond[static_cast<std::size_t>(u) * q + a];
            u = m.next_state[static_cast<std::size_t>(u) * q + a];
            if (u < 0) acc = neg_inf;
        }
        if (prefixes) prefixes->push_back(acc);
    }
    return acc;
}

}  // namespace

double cylinder_log_measure(const GibbsMeasure& m, const Word& w) { return scan_log_measure(m, w, nullptr); }

std::vector<double> cylinder_log_measure_prefixes(const GibbsMeasure& m, const Word& w) {
    std::vector<double> out;
    out.reserve(w.size());
    scan_log_measure(m, w, &out);
    return out;
}

double entropy(const GibbsMeasure& m) {
    const int k = m.jacobian.depth();
    double h = 0.0;
    for (const auto& w : admissible_words(m.spec, k)) {
        const double lm = cylinder_log_measure(m, w);
        if (lm == neg_inf) continue;
        h -= std::exp(lm) * m.jacobian.value(w);
    }
    return h;
}

double expectation(const GibbsMeasure& m, const Potential& p) {
    if (!(m.spec == p.spec())) throw InputError("expectation: measure and potential live on different subshifts");
    const int len = std::max({p.depth(), m.jacobian.depth(), m.state_len});
    double s = 0.0;
    for (const auto& w : admissible_words(m.spec, len)) {
        const double lm = cylinder_log_measure(m, w);
        if (lm == neg_inf) continue;
        s += std::exp(lm) * p.value(w);
    }
    return s;
}

double relative_entropy(const GibbsMeasure& mu, const GibbsMeasure& mu_phi) {
    if (!(mu.spec == mu_phi.spec)) throw InputError("relative_entropy: measures live on different subshifts");
    return -entropy(mu) - expectation(mu, mu_phi.jacobian);
}

double relative_entropy_empirical(const Word& mu_words, const GibbsMeasure& mu, const GibbsMeasure& mu_phi) {
    if (mu_words.empty()) throw InputError("relative_entropy_empirical: empty sample");
    const double a = cylinder_log_measure(mu, mu_words);
    const double b = cylinder_log_measure(mu_phi, mu_words);
    if (a == neg_inf || b == neg_inf) return neg_inf;
    return (a - b) / static_cast<double>(mu_words.size());
}

}  // namespace gibbsinf
