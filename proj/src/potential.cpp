#include "gibbsinf/potential.hpp"

#include <cmath>
#include <map>
#include <set>
#include <string>

#include "gibbsinf/errors.hpp"
#include "gibbsinf/linalg.hpp"

namespace gibbsinf {

namespace {

std::uint64_t pow_u64(int base, int exp) {
    std::uint64_t r = 1;
    for (int i = 0; i < exp; ++i) r *= static_cast<std::uint64_t>(base);
    return r;
}

}  // namespace

Potential::Potential(SubshiftSpec spec, int depth, const std::vector<std::pair<Word, double>>& entries)
    : Potential(std::move(spec), depth) {
    if (depth_ < 1) throw InputError("potential depth must be >= 1");
    dense_.assign(pow_u64(q_, depth_), 0.0);
    const auto words = admissible_words(spec_, depth_);
    std::set<std::uint64_t> wanted;
    for (const auto& w : words) wanted.insert(word_rank(w, q_));
    std::set<std::uint64_t> seen;
    for (const auto& [w, v] : entries) {
        if (static_cast<int>(w.size()) != depth_)
            throw InputError("potential entry \"" + word_to_string(w) + "\" has wrong length");
        const std::uint64_t r = word_rank(w, q_);
        if (!wanted.count(r))
            throw InputError("potential entry \"" + word_to_string(w) + "\" is not an admissible word");
        if (seen.count(r)) throw InputError("duplicate potential entry \"" + word_to_string(w) + "\"");
        if (!std::isfinite(v)) throw InputError("potential value for \"" + word_to_string(w) + "\" is not finite");
        seen.insert(r);
        dense_[r] = v;
    }
    if (seen.size() != wanted.size()) {
        std::string missing;
        for (const auto& w : words)
            if (!seen.count(word_rank(w, q_))) missing += (missing.empty() ? "" : ", ") + word_to_string(w);
        throw InputError("potential table is missing admissible words: " + missing);
    }
}

Potential Potential::constant(SubshiftSpec spec, int depth, double value) {
    Potential p(std::move(spec), depth);
    if (depth < 1) throw InputError("potential depth must be >= 1");
    p.dense_.assign(pow_u64(p.q_, depth), value);
    return p;
}

Potential Potential::from_dense(SubshiftSpec spec, int depth, std::vector<double> dense) {
    Potential p(std::move(spec), depth);
    if (depth < 1) throw InputError("potential depth must be >= 1");
    if (dense.size() != pow_u64(p.q_, depth)) throw InputError("dense potential table has wrong size");
    p.dense_ = std::move(dense);
    return p;
}

double Potential::sup_distance(const Potential& a, const Potential& b) {
    if (!(a.spec() == b.spec())) throw InputError("sup_distance: potentials live on different subshifts");
    const int k = std::max(a.depth(), b.depth());
    double d = 0.0;
    for (const auto& w : admissible_words(a.spec(), k)) d = std::max(d, std::abs(a.value(w) - b.value(w)));
    return d;
}

TransferMatrix transfer_matrix(const Potential& p) {
    const int k = p.depth();
    const int d = std::max(k - 1, 1);
    const auto& spec = p.spec();
    const int q = spec.alphabet();

    TransferMatrix tm;
    tm.state_len = d;
    tm.states = admissible_words(spec, d);
    tm.dim = static_cast<int>(tm.states.size());
    tm.entries.assign(static_cast<std::size_t>(tm.dim) * tm.dim, 0.0);

    std::map<std::uint64_t, int> rank_to_state;
    for (int i = 0; i < tm.dim; ++i) rank_to_state[word_rank(tm.states[i], q)] = i;

    Word kw(static_cast<std::size_t>(d) + 1);
    for (int u = 0; u < tm.dim; ++u) {
        const Word& uw = tm.states[u];
        for (int a = 0; a < q; ++a) {
            if (!spec.allowed(a, uw[0])) continue;
            // preimage state v = (a, u_1, ..., u_{d-1})
            Word vw;
            vw.reserve(d);
            vw.push_back(static_cast<std::uint8_t>(a));
            for (int i = 0; i + 1 < d; ++i) vw.push_back(uw[static_cast<std::size_t>(i)]);
            auto it = rank_to_state.find(word_rank(vw, q));
            if (it == rank_to_state.end()) continue;
            kw[0] = static_cast<std::uint8_t>(a);
            for (int i = 0; i < d; ++i) kw[static_cast<std::size_t>(i) + 1] = uw[static_cast<std::size_t>(i)];
            tm.entries[static_cast<std::size_t>(u) * tm.dim + it->second] = std::exp(p.value(kw));
        }
    }
    return tm;
}

double pressure(const Potential& p, double tol) {
    if (!p.spec().primitive()) throw InputError("pressure: subshift is not primitive");
    const TransferMatrix tm = transfer_matrix(p);
    return std::log(power_iteration(tm.dim, tm.entries, tol).eigenvalue);
}

std::pair<Potential, double> normalize(const Potential& p, double tol) {
    if (!p.spec().primitive()) throw InputError("normalize: subshift is not primitive");
    const auto& spec = p.spec();
    const int q = spec.alphabet();
    const int k = p.depth();
    const TransferMatrix tm = transfer_matrix(p);
    const PowerResult pr = power_iteration(tm.dim, tm.entries, tol);
    const double log_lambda = std::log(pr.eigenvalue);

    std::map<std::uint64_t, int> rank_to_state;
    for (int i = 0; i < tm.dim; ++i) rank_to_state[word_rank(tm.states[i], q)] = i;
    auto log_h = [&](const Word& w) { return std::log(pr.vec[static_cast<std::size_t>(rank_to_state.at(word_rank(w, q)))]); };

    if (k == 1) {
        bool full = true;
        for (int s = 0; s < q && full; ++s)
            for (int t = 0; t < q; ++t)
                if (!spec.allowed(s, t)) {
                    full = false;
                    break;
                }
        if (full) {
            // h is constant on full shifts; the correction cancels
            std::vector<double> dense(static_cast<std::size_t>(q));
            Word w(1);
            for (int a = 0; a < q; ++a) {
                w[0] = static_cast<std::uint8_t>(a);
                dense[static_cast<std::size_t>(a)] = p.value(w) - log_lambda;
            }
            return {Potential::from_dense(spec, 1, std::move(dense)), log_lambda};
        }
        // one symbol of lookahead is needed; the normalized jacobian has depth 2
        std::vector<double> dense(static_cast<std::size_t>(q) * q, 0.0);
        for (const auto& w : admissible_words(spec, 2)) {
            const Word a{w[0]}, b{w[1]};
            dense[word_rank(w, q)] = p.value(w) + log_h(a) - log_h(b) - log_lambda;
        }
        return {Potential::from_dense(spec, 2, std::move(dense)), log_lambda};
    }

    std::vector<double> dense(pow_u64(q, k), 0.0);
    for (const auto& w : admissible_words(spec, k)) {
        const Word prefix(w.begin(), w.end() - 1);
        const Word suffix(w.begin() + 1, w.end());
        dense[word_rank(w, q)] = p.value(w) + log_h(prefix) - log_h(suffix) - log_lambda;
    }
    return {Potential::from_dense(spec, k, std::move(dense)), log_lambda};
}

}  // namespace gibbsinf
