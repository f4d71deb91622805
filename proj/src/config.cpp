#include "gibbsinf/config.hpp"

#include <charconv>
#include <sstream>

#include "gibbsinf/errors.hpp"

namespace gibbsinf {

namespace {

std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream is(s);
    std::string tok;
    while (is >> tok) out.push_back(tok);
    return out;
}

bool parse_double(const std::string& s, double& v) {
    try {
        std::size_t pos = 0;
        v = std::stod(s, &pos);
        return pos == s.size();
    } catch (...) {
        return false;
    }
}

bool parse_int(const std::string& s, long long& v) {
    const char* b = s.data();
    const char* e = b + s.size();
    auto [p, ec] = std::from_chars(b, e, v);
    return ec == std::errc() && p == e;
}

struct Parser {
    std::vector<ConfigFault> faults;
    ExperimentConfig cfg;

    void fault(int line, const std::string& field, const std::string& msg) { faults.push_back({line, field, msg}); }

    bool want_double(int line, const std::string& field, const std::string& tok, double& v) {
        if (parse_double(tok, v)) return true;
        fault(line, field, "expected a number, got \"" + tok + "\"");
        return false;
    }
    bool want_int(int line, const std::string& field, const std::string& tok, long long& v) {
        if (parse_int(tok, v)) return true;
        fault(line, field, "expected an integer, got \"" + tok + "\"");
        return false;
    }
};

}  // namespace

std::vector<ConfigFault> validate_config(const std::string& text, ExperimentConfig* out) {
    Parser P;
    P.cfg.source_text = text;
    P.cfg.transitions.clear();
    std::string section;
    bool have_family = false, have_sampling = false;

    std::istringstream is(text);
    std::string raw;
    int lineno = 0;
    std::vector<std::tuple<int, std::string, std::string, std::string>> kvs;  // line, section, key, value
    while (std::getline(is, raw)) {
        ++lineno;
        std::string line = raw;
        if (const auto h = line.find('#'); h != std::string::npos) line = line.substr(0, h);
        // trim
        const auto b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos) continue;
        const auto e = line.find_last_not_of(" \t\r");
        line = line.substr(b, e - b + 1);
        if (line.front() == '[') {
            if (line.back() != ']') {
                P.fault(lineno, "section", "unterminated section header");
                continue;
            }
            section = line.substr(1, line.size() - 2);
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            P.fault(lineno, "line", "expected key = value");
            continue;
        }
        std::string key = line.substr(0, eq);
        std::string val = line.substr(eq + 1);
        auto trim = [](std::string& s) {
            const auto b2 = s.find_first_not_of(" \t");
            const auto e2 = s.find_last_not_of(" \t");
            s = (b2 == std::string::npos) ? "" : s.substr(b2, e2 - b2 + 1);
        };
        trim(key);
        trim(val);
        kvs.emplace_back(lineno, section, key, val);
    }

    auto& cfg = P.cfg;
    for (const auto& [ln, sec, key, val] : kvs) {
        const auto toks = split_ws(val);
        long long iv = 0;
        double dv = 0;
        if (sec == "experiment") {
            if (key == "name") cfg.name = val;
            else P.fault(ln, key, "unknown key in [experiment]");
        } else if (sec == "subshift") {
            if (key == "alphabet") {
                if (P.want_int(ln, key, val, iv)) cfg.alphabet = static_cast<int>(iv);
            } else if (key == "transitions") {
                cfg.transitions.clear();
                for (const auto& t : toks) {
                    if (t == "0" || t == "1")
                        cfg.transitions.push_back(static_cast<std::uint8_t>(t == "1"));
                    else
                        P.fault(ln, key, "transition entries must be 0 or 1");
                }
            } else
                P.fault(ln, key, "unknown key in [subshift]");
        } else if (sec == "family") {
            have_family = true;
            if (key == "type") {
                if (val == "markov_2x2") cfg.family_kind = FamilyKind::markov_2x2;
                else if (val == "bernoulli_atoms") cfg.family_kind = FamilyKind::bernoulli_atoms;
                else if (val == "jacobian_mixture") cfg.family_kind = FamilyKind::jacobian_mixture;
                else if (val == "cocycle") cfg.family_kind = FamilyKind::cocycle;
                else P.fault(ln, key, "unknown family type \"" + val + "\"");
            } else if (key == "a_range") {
                if (toks.size() == 3 && P.want_double(ln, key, toks[0], cfg.a_lo) &&
                    P.want_double(ln, key, toks[1], cfg.a_hi) && P.want_int(ln, key, toks[2], iv))
                    cfg.a_count = static_cast<int>(iv);
                else if (toks.size() != 3)
                    P.fault(ln, key, "expected: lo hi count");
            } else if (key == "b_range") {
                if (toks.size() == 3 && P.want_double(ln, key, toks[0], cfg.b_lo) &&
                    P.want_double(ln, key, toks[1], cfg.b_hi) && P.want_int(ln, key, toks[2], iv))
                    cfg.b_count = static_cast<int>(iv);
                else if (toks.size() != 3)
                    P.fault(ln, key, "expected: lo hi count");
            } else if (key == "atom") {
                if (toks.size() < 2) {
                    P.fault(ln, key, "expected: coordinate p1 p2 ...");
                } else {
                    double coord = 0;
                    std::vector<double> probs;
                    bool ok = P.want_double(ln, key, toks[0], coord);
                    for (std::size_t i = 1; i < toks.size(); ++i) {
                        double p = 0;
                        ok = P.want_double(ln, key, toks[i], p) && ok;
                        probs.push_back(p);
                    }
                    if (ok) cfg.atoms.push_back({coord, std::move(probs)});
                }
            } else if (key == "cells") {
                if (P.want_int(ln, key, val, iv)) cfg.mixture_cells = static_cast<int>(iv);
            } else if (key == "j0_depth") {
                if (P.want_int(ln, key, val, iv)) cfg.j0_depth = static_cast<int>(iv);
            } else if (key == "j1_depth") {
                if (P.want_int(ln, key, val, iv)) cfg.j1_depth = static_cast<int>(iv);
            } else if (key == "j0" || key == "j1") {
                auto& entries = (key == "j0") ? cfg.j0_entries : cfg.j1_entries;
                for (const auto& t : toks) {
                    const auto c = t.find(':');
                    if (c == std::string::npos) {
                        P.fault(ln, key, "expected word:value pairs");
                        continue;
                    }
                    double v2 = 0;
                    if (!P.want_double(ln, key, t.substr(c + 1), v2)) continue;
                    try {
                        entries.push_back({word_from_string(t.substr(0, c), cfg.alphabet), v2});
                    } catch (const InputError& ex) {
                        P.fault(ln, key, ex.what());
                    }
                }
            } else if (key == "epsilon") {
                if (P.want_double(ln, key, val, dv)) cfg.cocycle_eps = dv;
            } else if (key == "grid") {
                if (P.want_int(ln, key, val, iv)) cfg.cocycle_grid = static_cast<int>(iv);
            } else if (key == "base_probs") {
                cfg.cocycle_base_probs.clear();
                for (const auto& t : toks)
                    if (P.want_double(ln, key, t, dv)) cfg.cocycle_base_probs.push_back(dv);
            } else
                P.fault(ln, key, "unknown key in [family]");
        } else if (sec == "prior") {
            if (key == "type") {
                if (val != "uniform" && val != "weights") P.fault(ln, key, "prior type must be uniform or weights");
            } else if (key == "weights") {
                cfg.prior_weights.clear();
                for (const auto& t : toks)
                    if (P.want_double(ln, key, t, dv)) cfg.prior_weights.push_back(dv);
            } else
                P.fault(ln, key, "unknown key in [prior]");
        } else if (sec == "sampling") {
            have_sampling = true;
            if (key == "type") {
                if (val == "family_node") cfg.sampling_kind = ExperimentConfig::SamplingKind::family_node;
                else if (val == "bernoulli") cfg.sampling_kind = ExperimentConfig::SamplingKind::bernoulli;
                else if (val == "markov_2x2") cfg.sampling_kind = ExperimentConfig::SamplingKind::markov_2x2;
                else P.fault(ln, key, "unknown sampling type \"" + val + "\"");
            } else if (key == "node") {
                cfg.sampling_node_coords.clear();
                for (const auto& t : toks)
                    if (P.want_double(ln, key, t, dv)) cfg.sampling_node_coords.push_back(dv);
            } else if (key == "probs") {
                cfg.sampling_probs.clear();
                for (const auto& t : toks)
                    if (P.want_double(ln, key, t, dv)) cfg.sampling_probs.push_back(dv);
            } else if (key == "ab") {
                if (toks.size() == 2 && P.want_double(ln, key, toks[0], cfg.sampling_a) &&
                    P.want_double(ln, key, toks[1], cfg.sampling_b)) {
                } else if (toks.size() != 2)
                    P.fault(ln, key, "expected: a b");
            } else if (key == "n_schedule") {
                cfg.n_schedule.clear();
                for (const auto& t : toks)
                    if (P.want_int(ln, key, t, iv)) cfg.n_schedule.push_back(static_cast<int>(iv));
            } else if (key == "replicas") {
                if (P.want_int(ln, key, val, iv)) cfg.replicas = static_cast<int>(iv);
            } else if (key == "seed") {
                if (P.want_int(ln, key, val, iv)) cfg.seed = static_cast<std::uint64_t>(iv);
            } else
                P.fault(ln, key, "unknown key in [sampling]");
        } else if (sec == "loss") {
            if (key == "scheme") {
                if (val == "direct_cylinder") cfg.scheme = LossScheme::direct_cylinder;
                else if (val == "exp_almost_additive") cfg.scheme = LossScheme::exp_almost_additive;
                else if (val == "log_almost_additive") cfg.scheme = LossScheme::log_almost_additive;
                else P.fault(ln, key, "unknown loss scheme \"" + val + "\"");
            } else if (key == "observable") {
                cfg.loss_observable = val;
            } else if (key == "mc_samples") {
                if (P.want_int(ln, key, val, iv)) cfg.mc_samples = static_cast<int>(iv);
            } else
                P.fault(ln, key, "unknown key in [loss]");
        } else if (sec == "deviations") {
            if (key == "delta_ladder") {
                cfg.delta_ladder.clear();
                for (const auto& t : toks)
                    if (P.want_double(ln, key, t, dv)) cfg.delta_ladder.push_back(dv);
            } else if (key == "zeta") {
                if (P.want_double(ln, key, val, dv)) cfg.zeta = dv;
            } else if (key == "fit_window") {
                if (P.want_double(ln, key, val, dv)) cfg.fit_window_frac = dv;
            } else
                P.fault(ln, key, "unknown key in [deviations]");
        } else if (sec == "lyapunov") {
            if (key == "emit_grid") {
                cfg.emit_lyapunov_grid = (val == "true" || val == "1");
            } else if (key == "n_list") {
                cfg.lyapunov_n_list.clear();
                for (const auto& t : toks)
                    if (P.want_int(ln, key, t, iv)) cfg.lyapunov_n_list.push_back(static_cast<int>(iv));
            } else
                P.fault(ln, key, "unknown key in [lyapunov]");
        } else if (sec == "output") {
            if (key == "dir") cfg.out_dir = val;
            else P.fault(ln, key, "unknown key in [output]");
        } else if (sec.empty()) {
            P.fault(ln, key, "key outside any [section]");
        } else {
            P.fault(ln, key, "unknown section [" + sec + "]");
        }
    }

    // structural validation
    if (!have_family) P.fault(0, "family", "required");
    if (!have_sampling) P.fault(0, "sampling", "required");
    if (cfg.alphabet < 2) P.fault(0, "subshift.alphabet", "must be >= 2");
    if (cfg.transitions.empty())
        cfg.transitions.assign(static_cast<std::size_t>(cfg.alphabet) * cfg.alphabet, 1);
    if (cfg.transitions.size() != static_cast<std::size_t>(cfg.alphabet) * cfg.alphabet)
        P.fault(0, "subshift.transitions", "needs alphabet^2 entries");
    if (cfg.n_schedule.empty()) P.fault(0, "sampling.n_schedule", "required");
    for (std::size_t i = 1; i < cfg.n_schedule.size(); ++i)
        if (cfg.n_schedule[i] <= cfg.n_schedule[i - 1]) {
            P.fault(0, "sampling.n_schedule", "must be strictly increasing");
            break;
        }
    if (cfg.replicas < 1) P.fault(0, "sampling.replicas", "must be >= 1");
    if (cfg.family_kind == FamilyKind::bernoulli_atoms && cfg.atoms.empty() && have_family)
        P.fault(0, "family.atom", "at least one atom required");
    if (cfg.family_kind == FamilyKind::markov_2x2) {
        auto col_ok = [](double x) { return x > 0.0 && x < 1.0; };
        if (!col_ok(cfg.a_lo) || !col_ok(cfg.a_hi))
            P.fault(0, "family.a_range", "column 1 of M_(a,b) must stay stochastic: a in (0,1)");
        if (!col_ok(cfg.b_lo) || !col_ok(cfg.b_hi))
            P.fault(0, "family.b_range", "column 2 of M_(a,b) must stay stochastic: b in (0,1)");
    }
    if (cfg.family_kind == FamilyKind::bernoulli_atoms)
        for (const auto& [coord, probs] : cfg.atoms) {
            double sum = 0.0;
            bool pos = true;
            for (double p : probs) {
                sum += p;
                pos = pos && p > 0.0;
            }
            if (!pos || std::abs(sum - 1.0) > 1e-9)
                P.fault(0, "family.atom", "atom probabilities must be positive and sum to 1");
        }
    if (cfg.sampling_kind == ExperimentConfig::SamplingKind::bernoulli) {
        double sum = 0.0;
        bool pos = !cfg.sampling_probs.empty();
        for (double p : cfg.sampling_probs) {
            sum += p;
            pos = pos && p > 0.0;
        }
        if (!pos || std::abs(sum - 1.0) > 1e-9) P.fault(0, "sampling.probs", "must be positive and sum to 1");
    }
    if (cfg.sampling_kind == ExperimentConfig::SamplingKind::markov_2x2 &&
        (cfg.sampling_a <= 0 || cfg.sampling_a >= 1 || cfg.sampling_b <= 0 || cfg.sampling_b >= 1))
        P.fault(0, "sampling.ab", "columns must stay stochastic: a, b in (0,1)");
    if (cfg.sampling_kind == ExperimentConfig::SamplingKind::family_node && cfg.sampling_node_coords.empty())
        P.fault(0, "sampling.node", "required for type = family_node");
    if (cfg.scheme != LossScheme::direct_cylinder && cfg.loss_observable.empty())
        P.fault(0, "loss.observable", "required for non-direct schemes");
    if (cfg.scheme != LossScheme::direct_cylinder && cfg.family_kind != FamilyKind::cocycle && have_family)
        P.fault(0, "loss.scheme", "non-direct schemes need a cocycle family");
    if (!cfg.loss_observable.empty() && cfg.loss_observable != "cocycle_log_norm" &&
        cfg.loss_observable != "cocycle_annealed_log_norm")
        P.fault(0, "loss.observable", "unknown observable \"" + cfg.loss_observable + "\"");

    if (out && P.faults.empty()) *out = cfg;
    return P.faults;
}

ExperimentConfig parse_config(const std::string& text) {
    ExperimentConfig cfg;
    const auto faults = validate_config(text, &cfg);
    if (!faults.empty()) {
        std::string msg = "config faults:";
        for (const auto& f : faults)
            msg += "\n  line " + std::to_string(f.line) + ", " + f.field + ": " + f.message;
        throw InputError(msg);
    }
    return cfg;
}

ParamFamily build_family(const ExperimentConfig& cfg, const GibbsOptions& opt) {
    switch (cfg.family_kind) {
        case FamilyKind::markov_2x2:
            return family_markov_2x2(cfg.a_lo, cfg.a_hi, cfg.a_count, cfg.b_lo, cfg.b_hi, cfg.b_count, opt);
        case FamilyKind::bernoulli_atoms:
            return family_bernoulli_atoms(cfg.atoms, opt);
        case FamilyKind::jacobian_mixture: {
            const SubshiftSpec spec(cfg.alphabet, cfg.transitions);
            const Potential j0(spec, cfg.j0_depth, cfg.j0_entries);
            const Potential j1(spec, cfg.j1_depth, cfg.j1_entries);
            return family_jacobian_mixture(j0, j1, cfg.mixture_cells, opt);
        }
        case FamilyKind::cocycle:
            return family_cocycle_grid(cfg.cocycle_eps, cfg.cocycle_grid, cfg.cocycle_base_probs, opt);
    }
    throw InputError("build_family: unreachable family kind");
}

PriorMeasure build_prior(const ExperimentConfig& cfg, const ParamFamily& fam) {
    if (cfg.prior_weights.empty()) return prior_uniform(fam);
    if (static_cast<int>(cfg.prior_weights.size()) != fam.node_count())
        throw InputError("prior weights count differs from family node count");
    return prior_from_weights(cfg.prior_weights);
}

GibbsMeasure build_sampling_measure(const ExperimentConfig& cfg, const ParamFamily& fam, const GibbsOptions& opt) {
    switch (cfg.sampling_kind) {
        case ExperimentConfig::SamplingKind::family_node:
            return fam.measure(fam.node_at(cfg.sampling_node_coords));
        case ExperimentConfig::SamplingKind::bernoulli: {
            const SubshiftSpec spec = SubshiftSpec::full_shift(static_cast<int>(cfg.sampling_probs.size()));
            std::vector<std::pair<Word, double>> entries;
            for (std::size_t a = 0; a < cfg.sampling_probs.size(); ++a)
                entries.push_back({Word{static_cast<std::uint8_t>(a)}, std::log(cfg.sampling_probs[a])});
            return gibbs_measure(Potential(spec, 1, entries), opt);
        }
        case ExperimentConfig::SamplingKind::markov_2x2: {
            const ParamFamily one = family_markov_2x2(cfg.sampling_a, cfg.sampling_a, 1, cfg.sampling_b,
                                                      cfg.sampling_b, 1, opt);
            return one.measure(0);
        }
    }
    throw InputError("build_sampling_measure: unreachable sampling kind");
}

namespace {

const std::vector<std::pair<std::string, std::string>>& examples_impl() {
    static const std::vector<std::pair<std::string, std::string>> ex = {
        {"example_2_3",
         "[experiment]\n"
         "name = example_2_3\n"
         "[subshift]\n"
         "alphabet = 2\n"
         "[family]\n"
         "type = bernoulli_atoms\n"
         "atom = -1 0.333333333333333333 0.666666666666666667\n"
         "atom = 1 0.666666666666666667 0.333333333333333333\n"
         "[prior]\n"
         "type = uniform\n"
         "[sampling]\n"
         "type = bernoulli\n"
         "probs = 0.5 0.5\n"
         "n_schedule = 1000 2000 3000 4000 5000 6000 7000 8000 9000 10000\n"
         "replicas = 32\n"
         "seed = 1\n"
         "[loss]\n"
         "scheme = direct_cylinder\n"
         "[output]\n"
         "dir = out/example_2_3\n"},
        {"example_2_4",
         "[experiment]\n"
         "name = example_2_4\n"
         "[subshift]\n"
         "alphabet = 2\n"
         "[family]\n"
         "type = bernoulli_atoms\n"
         "atom = -1 0.333333333333333333 0.666666666666666667\n"
         "atom = 1 0.666666666666666667 0.333333333333333333\n"
         "[prior]\n"
         "type = uniform\n"
         "[sampling]\n"
         "type = bernoulli\n"
         "probs = 0.3 0.7\n"
         "n_schedule = 200 400 600 800 1000 1200 1400 1600 1800 2000\n"
         "replicas = 32\n"
         "seed = 1\n"
         "[loss]\n"
         "scheme = direct_cylinder\n"
         "[deviations]\n"
         "fit_window = 0.2\n"
         "[output]\n"
         "dir = out/example_2_4\n"},
        {"theorem_A_markov",
         "[experiment]\n"
         "name = theorem_A_markov\n"
         "[subshift]\n"
         "alphabet = 2\n"
         "[family]\n"
         "type = markov_2x2\n"
         "a_range = 0.2 0.8 21\n"
         "b_range = 0.2 0.8 21\n"
         "[prior]\n"
         "type = uniform\n"
         "[sampling]\n"
         "type = family_node\n"
         "node = 0.5 0.5\n"
         "n_schedule = 200 400 600 800 1000 1200 1400 1600 1800 2000\n"
         "replicas = 32\n"
         "seed = 1\n"
         "[loss]\n"
         "scheme = direct_cylinder\n"
         "[deviations]\n"
         "delta_ladder = 0.15\n"
         "zeta = 0.01\n"
         "fit_window = 0.2\n"
         "[output]\n"
         "dir = out/theorem_A_markov\n"},
        {"example_2_5",
         "[experiment]\n"
         "name = example_2_5\n"
         "[subshift]\n"
         "alphabet = 2\n"
         "[family]\n"
         "type = jacobian_mixture\n"
         "cells = 21\n"
         "j0_depth = 1\n"
         "j0 = 1:-1.0986122886681098 2:-0.4054651081081645\n"
         "j1_depth = 1\n"
         "j1 = 1:-0.4054651081081645 2:-1.0986122886681098\n"
         "[prior]\n"
         "type = uniform\n"
         "[sampling]\n"
         "type = bernoulli\n"
         "probs = 0.45 0.55\n"
         "n_schedule = 500 1000 1500 2000 2500 3000 3500 4000\n"
         "replicas = 32\n"
         "seed = 1\n"
         "[loss]\n"
         "scheme = direct_cylinder\n"
         "[deviations]\n"
         "delta_ladder = 0.12\n"
         "[output]\n"
         "dir = out/example_2_5\n"},
        {"example_2_6",
         "[experiment]\n"
         "name = example_2_6\n"
         "[subshift]\n"
         "alphabet = 2\n"
         "[family]\n"
         "type = cocycle\n"
         "epsilon = 0.1\n"
         "grid = 9\n"
         "base_probs = 0.5 0.5\n"
         "[prior]\n"
         "type = uniform\n"
         "[sampling]\n"
         "type = bernoulli\n"
         "probs = 0.5 0.5\n"
         "n_schedule = 100 200 300 400 500\n"
         "replicas = 32\n"
         "seed = 1\n"
         "[loss]\n"
         "scheme = exp_almost_additive\n"
         "observable = cocycle_log_norm\n"
         "mc_samples = 1024\n"
         "[lyapunov]\n"
         "emit_grid = true\n"
         "n_list = 2 4 6 8 10 12 14 16 18 20\n"
         "[output]\n"
         "dir = out/example_2_6\n"},
        {"example_2_7",
         "[experiment]\n"
         "name = example_2_7\n"
         "[subshift]\n"
         "alphabet = 2\n"
         "[family]\n"
         "type = cocycle\n"
         "epsilon = 0.1\n"
         "grid = 9\n"
         "base_probs = 0.5 0.5\n"
         "[prior]\n"
         "type = uniform\n"
         "[sampling]\n"
         "type = bernoulli\n"
         "probs = 0.5 0.5\n"
         "n_schedule = 2000 4000 6000 8000 10000\n"
         "replicas = 8\n"
         "seed = 1\n"
         "[loss]\n"
         "scheme = log_almost_additive\n"
         "observable = cocycle_annealed_log_norm\n"
         "mc_samples = 256\n"
         "[lyapunov]\n"
         "emit_grid = true\n"
         "n_list = 2 4 6 8 10 12 14 16 18 20\n"
         "[output]\n"
         "dir = out/example_2_7\n"},
    };
    return ex;
}

}  // namespace

const std::vector<std::pair<std::string, std::string>>& bundled_examples() { return examples_impl(); }

std::optional<std::string> bundled_example_text(const std::string& name) {
    for (const auto& [n, t] : examples_impl())
        if (n == name) return t;
    return std::nullopt;
}

}  // namespace gibbsinf
