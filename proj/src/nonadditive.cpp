#include "gibbsinf/nonadditive.hpp"

#include <algorithm>
#include <cmath>

#include "gibbsinf/errors.hpp"
#include "gibbsinf/family.hpp"
#include "gibbsinf/sampling.hpp"

namespace gibbsinf {

FeketeLimit fekete_limit(const std::vector<std::pair<int, double>>& values) {
    if (values.empty()) throw InputError("fekete_limit: empty value list");
    for (std::size_t i = 1; i < values.size(); ++i)
        if (values[i].first <= values[i - 1].first) throw InputError("fekete_limit: n must be strictly increasing");
    FeketeLimit f;
    f.certified_min = std::numeric_limits<double>::infinity();
    for (const auto& [n, a] : values) f.certified_min = std::min(f.certified_min, a / n);
    f.last_value = values.back().second / values.back().first;

    // least-squares a_n = L n + b over the top half of the provided range
    const std::size_t lo = values.size() / 2;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const std::size_t m = values.size() - lo;
    for (std::size_t i = lo; i < values.size(); ++i) {
        const double x = values[i].first, y = values[i].second;
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double denom = m * sxx - sx * sx;
    f.extrapolated = (m < 2 || denom == 0.0) ? f.last_value : (m * sxy - sx * sy) / denom;
    return f;
}

namespace {

Word random_admissible_word(const SubshiftSpec& spec, int len, SeededStream& s) {
    const int q = spec.alphabet();
    Word w;
    w.reserve(static_cast<std::size_t>(len));
    for (int i = 0; i < len; ++i) {
        std::vector<int> opts;
        for (int a = 0; a < q; ++a)
            if (w.empty() || spec.allowed(w.back(), a)) opts.push_back(a);
        const std::size_t pick = static_cast<std::size_t>(s.next_double() * opts.size());
        w.push_back(static_cast<std::uint8_t>(opts[std::min(pick, opts.size() - 1)]));
    }
    return w;
}

}  // namespace

AlmostAdditiveReport check_almost_additive(const SequenceFamily& f, int n_max, int trials, SeededStream& s,
                                           const SubshiftSpec* domain) {
    if (n_max < 2) throw InputError("check_almost_additive: n_max must be >= 2");
    if (!f.eval) throw InputError("check_almost_additive: missing evaluator");
    AlmostAdditiveReport rep;
    rep.trials = trials;
    const SubshiftSpec spec = domain ? *domain : SubshiftSpec::full_shift(2);
    for (int t = 0; t < trials; ++t) {
        const int n = 1 + static_cast<int>(s.next_double() * (n_max - 1));
        const int m = 1 + static_cast<int>(s.next_double() * (n_max - 1));
        const Word w = random_admissible_word(spec, n + m, s);
        const Word shifted(w.begin() + n, w.end());
        const double whole = f.eval(n + m, {}, {}, w);
        const double first = f.eval(n, {}, {}, w);
        const double second = f.eval(m, {}, {}, shifted);
        const double viol = std::abs(whole - first - second) - f.declared_constant;
        if (viol > rep.max_violation) {
            rep.max_violation = viol;
            rep.witness_n = n;
            rep.witness_m = m;
            rep.witness_word = w;
        }
    }
    return rep;
}

std::vector<PsiStarEntry> psi_star(const ParamFamily& fam, const PsiSpec& psi, const GibbsMeasure& nu,
                                   const std::vector<int>& n_list, int replicas, SeededStream& s) {
    if (n_list.empty()) throw InputError("psi_star: empty n list");
    if (replicas < 1) throw InputError("psi_star: need >= 1 replicas");
    const int n_max = *std::max_element(n_list.begin(), n_list.end());
    std::vector<Word> samples;
    samples.reserve(static_cast<std::size_t>(replicas));
    for (int r = 0; r < replicas; ++r) {
        SeededStream rs = s.substream(static_cast<std::uint64_t>(r) + 1);
        samples.push_back(sample_orbit(nu, n_max, rs));
    }
    std::vector<PsiStarEntry> out;
    out.reserve(static_cast<std::size_t>(fam.node_count()));
    for (int node = 0; node < fam.node_count(); ++node) {
        std::vector<std::pair<int, double>> avg;
        double last_var = 0.0;
        for (int n : n_list) {
            double mean = 0.0;
            std::vector<double> vals;
            vals.reserve(samples.size());
            for (const Word& y : samples) {
                const Word prefix(y.begin(), y.begin() + n);
                const double v = psi.eval(node, n, prefix);
                if (!(v >= 0.0)) throw NumericError("psi_star: psi_n must be nonnegative");
                vals.push_back(v);
                mean += v;
            }
            mean /= static_cast<double>(vals.size());
            avg.push_back({n, mean});
            if (n == n_list.back()) {
                for (double v : vals) last_var += (v - mean) * (v - mean);
                last_var /= static_cast<double>(vals.size() > 1 ? vals.size() - 1 : 1);
            }
        }
        PsiStarEntry e;
        e.limit = fekete_limit(avg);
        e.std_error_last = std::sqrt(last_var / static_cast<double>(samples.size())) / n_list.back();
        out.push_back(e);
    }
    return out;
}

FreeEnergyReport free_energy(const GibbsMeasure& eta, const SequenceFamily& f, const std::vector<int>& n_list,
                             const FreeEnergyOptions& opt, SeededStream mc_stream) {
    if (n_list.empty()) throw InputError("free_energy: empty n list");
    if (!f.eval) throw InputError("free_energy: missing evaluator");
    const int q = eta.spec.alphabet();
    FreeEnergyReport rep;
    rep.std_errors.assign(n_list.size(), 0.0);
    for (std::size_t t = 0; t < n_list.size(); ++t) {
        const int n = n_list[t];
        double words = 1.0;
        for (int i = 0; i < n && words <= 1e18; ++i) words *= q;
        if (words <= static_cast<double>(opt.word_cap)) {
            double acc = 0.0;
            for (const auto& w : admissible_words(eta.spec, n)) {
                const double lm = cylinder_log_measure(eta, w);
                if (lm == neg_inf) continue;
                acc += std::exp(lm) * f.eval(n, {}, {}, w);
            }
            rep.values.push_back({n, acc / n});
        } else {
            rep.used_monte_carlo = true;
            SeededStream s = mc_stream.substream(static_cast<std::uint64_t>(n));
            double mean = 0.0;
            std::vector<double> vals(static_cast<std::size_t>(opt.mc_samples));
            for (int j = 0; j < opt.mc_samples; ++j) {
                const Word w = sample_orbit(eta, n, s);
                vals[static_cast<std::size_t>(j)] = f.eval(n, {}, {}, w);
                mean += vals[static_cast<std::size_t>(j)];
            }
            mean /= static_cast<double>(opt.mc_samples);
            double var = 0.0;
            for (double v : vals) var += (v - mean) * (v - mean);
            var /= static_cast<double>(opt.mc_samples > 1 ? opt.mc_samples - 1 : 1);
            rep.values.push_back({n, mean / n});
            rep.std_errors[t] = std::sqrt(var / opt.mc_samples) / n;
        }
    }
    std::vector<std::pair<int, double>> raw;
    raw.reserve(rep.values.size());
    for (const auto& [n, v] : rep.values) raw.push_back({n, v * n});
    rep.limit = fekete_limit(raw);
    return rep;
}

}  // namespace gibbsinf
