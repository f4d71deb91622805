#include "gibbsinf/deviations.hpp"

#include <algorithm>
#include <cmath>

#include "gibbsinf/errors.hpp"
#include "gibbsinf/linalg.hpp"
#include "gibbsinf/logspace.hpp"
#include "gibbsinf/rng.hpp"

namespace gibbsinf {

namespace {

bool node_in_ball(const std::vector<double>& node, const std::vector<double>& center, double delta) {
    double d = 0.0;
    for (std::size_t j = 0; j < node.size(); ++j) d = std::max(d, std::abs(node[j] - center[j]));
    return d < delta;
}

}  // namespace

RateReport rate_bound_direct(const ParamFamily& fam, int theta0_node, const PriorMeasure& prior, double delta,
                             double zeta) {
    if (theta0_node < 0 || theta0_node >= fam.node_count()) throw InputError("rate_bound_direct: bad theta0 node");
    if (static_cast<int>(prior.weights.size()) != fam.node_count())
        throw InputError("rate_bound_direct: prior and family sizes differ");
    const auto& center = fam.nodes[static_cast<std::size_t>(theta0_node)];
    const GibbsMeasure& mu0 = fam.measure(theta0_node);

    RateReport rep;
    rep.zeta = zeta;
    rep.entropy_theta0 = entropy(mu0);
    rep.degenerate_family = !fam.injective;

    double rho = neg_inf;
    double d_delta = 0.0;
    double ball_mass = 0.0;
    for (int i = 0; i < fam.node_count(); ++i) {
        const bool inside = node_in_ball(fam.nodes[static_cast<std::size_t>(i)], center, delta);
        if (inside) {
            ++rep.nodes_inside;
            ball_mass += prior.weights[static_cast<std::size_t>(i)];
            d_delta += prior.weights[static_cast<std::size_t>(i)] * relative_entropy(mu0, fam.measure(i));
        } else {
            ++rep.nodes_outside;
            rho = std::max(rho, rep.entropy_theta0 + expectation(mu0, fam.measure(i).jacobian));
        }
    }
    if (rep.nodes_outside == 0) throw InputError("rate_bound_direct: B_delta covers every node");
    if (rep.nodes_inside == 0) throw InputError("rate_bound_direct: B_delta contains no node");
    rep.rho_delta = rho;
    rep.d_delta = d_delta;
    rep.prior_ball_mass = ball_mass;
    // decay certificate for 1 - Pi_n(B_delta):
    //   sup_{theta outside} int log J_theta dmu_0  +  h(mu_0) Pi_0(B_delta)  +  d_delta  +  zeta
    // with the first term equal to rho_delta - h(mu_0)
    rep.composite_exponent =
        (rho - rep.entropy_theta0) + rep.entropy_theta0 * ball_mass + d_delta + zeta;
    return rep;
}

namespace {

std::pair<double, double> fit_line(const std::vector<std::pair<int, double>>& pts) {
    const std::size_t m = pts.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& [x, y] : pts) {
        sx += x;
        sy += y;
        sxx += static_cast<double>(x) * x;
        sxy += x * y;
    }
    const double denom = m * sxx - sx * sx;
    const double slope = (m * sxy - sx * sy) / denom;
    const double intercept = (sy - slope * sx) / m;
    double ss_res = 0, ss_tot = 0;
    const double ybar = sy / m;
    for (const auto& [x, y] : pts) {
        const double f = slope * x + intercept;
        ss_res += (y - f) * (y - f);
        ss_tot += (y - ybar) * (y - ybar);
    }
    const double r2 = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
    return {slope, r2};
}

std::pair<double, double> decay_fit(const std::vector<std::pair<int, double>>& transformed, double lo_frac) {
    if (transformed.empty()) throw NumericError("empirical_decay: empty series");
    int n_max = 0;
    for (const auto& [n, v] : transformed) n_max = std::max(n_max, n);
    const double lo = lo_frac * n_max;
    std::vector<std::pair<int, double>> window;
    for (const auto& [n, v] : transformed)
        if (n >= lo && std::isfinite(v)) window.push_back({n, v});
    if (window.size() < 4) throw NumericError("empirical_decay: fewer than 4 finite points on the fit window");
    return fit_line(window);
}

}  // namespace

std::pair<double, double> empirical_decay(const std::vector<std::pair<int, double>>& series, DecayTransform t,
                                          double window_lo_frac) {
    std::vector<std::pair<int, double>> transformed;
    transformed.reserve(series.size());
    for (const auto& [n, v] : series) {
        const double x = (t == DecayTransform::log_of_value) ? v : 1.0 - v;
        transformed.push_back({n, x > 0 ? std::log(x) : neg_inf});
    }
    return decay_fit(transformed, window_lo_frac);
}

std::pair<double, double> empirical_decay_log(const std::vector<std::pair<int, double>>& log_series,
                                              double window_lo_frac) {
    return decay_fit(log_series, window_lo_frac);
}

GibbsMeasure markov_measure_from_conditionals(const SubshiftSpec& spec, int depth,
                                              const std::vector<double>& cond_rows, double tol) {
    if (depth < 1) throw InputError("markov_measure_from_conditionals: depth must be >= 1");
    const int q = spec.alphabet();
    const auto states = admissible_words(spec, depth);
    const int dim = static_cast<int>(states.size());
    if (cond_rows.size() != static_cast<std::size_t>(dim) * q)
        throw InputError("markov_measure_from_conditionals: conditional table has wrong size");

    // stationary distribution of the word chain (power iteration on its
    // transition matrix transposed)
    std::vector<int> rank_to_state(static_cast<std::size_t>(std::pow(q, depth)), -1);
    for (int i = 0; i < dim; ++i) rank_to_state[word_rank(states[static_cast<std::size_t>(i)], q)] = i;
    std::vector<double> chain(static_cast<std::size_t>(dim) * dim, 0.0);
    for (int u = 0; u < dim; ++u) {
        const Word& uw = states[static_cast<std::size_t>(u)];
        for (int a = 0; a < q; ++a) {
            if (!spec.allowed(uw.back(), a)) continue;
            Word tail(uw.begin() + 1, uw.end());
            tail.push_back(static_cast<std::uint8_t>(a));
            const int v = rank_to_state[word_rank(tail, q)];
            if (v < 0) continue;
            chain[static_cast<std::size_t>(v) * dim + u] += cond_rows[static_cast<std::size_t>(u) * q + a];
        }
    }
    const PowerResult pi = power_iteration(dim, chain, tol);
    double total = 0.0;
    for (double v : pi.vec) total += v;

    // jacobian of the stationary chain: J(u a) = pi(u) p(a|u) / pi(tail(u a))
    std::vector<double> dense(static_cast<std::size_t>(std::pow(q, depth + 1)), 0.0);
    bool supported_everywhere = true;
    for (int u = 0; u < dim; ++u) {
        const Word& uw = states[static_cast<std::size_t>(u)];
        for (int a = 0; a < q; ++a) {
            if (!spec.allowed(uw.back(), a)) continue;
            Word ext = uw;
            ext.push_back(static_cast<std::uint8_t>(a));
            Word tail(ext.begin() + 1, ext.end());
            const int v = rank_to_state[word_rank(tail, q)];
            const double p = cond_rows[static_cast<std::size_t>(u) * q + a];
            if (!(p > 0.0)) {
                supported_everywhere = false;
                dense[word_rank(ext, q)] = -1e9;  // effectively zero mass, keeps the table finite
                continue;
            }
            dense[word_rank(ext, q)] =
                std::log(pi.vec[static_cast<std::size_t>(u)] / total) + std::log(p) -
                std::log(pi.vec[static_cast<std::size_t>(v)] / total);
        }
    }
    (void)supported_everywhere;
    return gibbs_measure(Potential::from_dense(spec, depth + 1, std::move(dense)), GibbsOptions{tol, 4});
}

namespace {

// Markov-chain functionals in closed form over edge frequencies
struct ChainEval {
    const SubshiftSpec* spec;
    int depth;
    std::vector<Word> states;
    std::vector<int> rank_to_state;
    int dim;
    int q;

    explicit ChainEval(const SubshiftSpec& s, int d) : spec(&s), depth(d), q(s.alphabet()) {
        states = admissible_words(s, d);
        dim = static_cast<int>(states.size());
        rank_to_state.assign(static_cast<std::size_t>(std::pow(q, d)), -1);
        for (int i = 0; i < dim; ++i) rank_to_state[word_rank(states[static_cast<std::size_t>(i)], q)] = i;
    }

    bool edge_allowed(int u, int a) const { return spec->allowed(states[static_cast<std::size_t>(u)].back(), a); }

    std::vector<double> stationary(const std::vector<double>& p, double tol = 1e-12) const {
        std::vector<double> chain(static_cast<std::size_t>(dim) * dim, 0.0);
        for (int u = 0; u < dim; ++u)
            for (int a = 0; a < q; ++a) {
                if (!edge_allowed(u, a)) continue;
                Word tail(states[static_cast<std::size_t>(u)].begin() + 1, states[static_cast<std::size_t>(u)].end());
                tail.push_back(static_cast<std::uint8_t>(a));
                const int v = rank_to_state[word_rank(tail, q)];
                if (v < 0) continue;
                chain[static_cast<std::size_t>(v) * dim + u] += p[static_cast<std::size_t>(u) * q + a];
            }
        // power iteration with fixed sweeps; the chain is small and stochastic
        std::vector<double> pi(static_cast<std::size_t>(dim), 1.0 / dim), next(static_cast<std::size_t>(dim));
        for (int it = 0; it < 4000; ++it) {
            double diff = 0.0, total = 0.0;
            for (int i = 0; i < dim; ++i) {
                double s = 0.0;
                for (int j = 0; j < dim; ++j) s += chain[static_cast<std::size_t>(i) * dim + j] * pi[static_cast<std::size_t>(j)];
                next[static_cast<std::size_t>(i)] = s;
                total += s;
            }
            for (int i = 0; i < dim; ++i) {
                next[static_cast<std::size_t>(i)] /= total;
                diff = std::max(diff, std::abs(next[static_cast<std::size_t>(i)] - pi[static_cast<std::size_t>(i)]));
            }
            pi.swap(next);
            if (diff < tol) break;
        }
        return pi;
    }

    double entropy_of(const std::vector<double>& p, const std::vector<double>& pi) const {
        double h = 0.0;
        for (int u = 0; u < dim; ++u)
            for (int a = 0; a < q; ++a) {
                const double pa = p[static_cast<std::size_t>(u) * q + a];
                if (pa > 0.0 && edge_allowed(u, a)) h -= pi[static_cast<std::size_t>(u)] * pa * std::log(pa);
            }
        return h;
    }

    double integral_of(const Potential& pot, const std::vector<double>& p, const std::vector<double>& pi) const {
        // int pot d eta for pot of depth <= depth+1: sum over edges of
        // pi(u) p(a|u) pot(u a)
        double s = 0.0;
        Word ext(static_cast<std::size_t>(depth) + 1);
        for (int u = 0; u < dim; ++u) {
            const Word& uw = states[static_cast<std::size_t>(u)];
            for (int i = 0; i < depth; ++i) ext[static_cast<std::size_t>(i)] = uw[static_cast<std::size_t>(i)];
            for (int a = 0; a < q; ++a) {
                const double pa = p[static_cast<std::size_t>(u) * q + a];
                if (!(pa > 0.0) || !edge_allowed(u, a)) continue;
                ext[static_cast<std::size_t>(depth)] = static_cast<std::uint8_t>(a);
                s += pi[static_cast<std::size_t>(u)] * pa * pot.value(ext);
            }
        }
        return s;
    }
};

void project_row_to_simplex(double* row, const std::vector<bool>& allowed, int q) {
    // Euclidean projection onto the simplex over the allowed coordinates
    std::vector<double> v;
    for (int a = 0; a < q; ++a)
        if (allowed[static_cast<std::size_t>(a)]) v.push_back(row[a]);
    std::vector<double> u = v;
    std::sort(u.begin(), u.end(), std::greater<double>());
    double css = 0.0, theta = 0.0;
    for (int i = 0; i < static_cast<int>(u.size()); ++i) {
        css += u[static_cast<std::size_t>(i)];
        const double t = (css - 1.0) / (i + 1);
        if (u[static_cast<std::size_t>(i)] - t > 0) theta = t;
    }
    std::size_t j = 0;
    for (int a = 0; a < q; ++a) {
        if (!allowed[static_cast<std::size_t>(a)]) {
            row[a] = 0.0;
            continue;
        }
        row[a] = std::max(v[j] - theta, 0.0);
        ++j;
    }
}

}  // namespace

LdpBound ldp_rate_bound(const SequenceFamily& constraint, const Potential& normalized_potential, double threshold,
                        int depth, const LdpOptions& opt) {
    if (depth < 1) throw InputError("ldp_rate_bound: depth must be >= 1");
    const SubshiftSpec& spec = normalized_potential.spec();
    const int q = spec.alphabet();
    // the chain depth must carry both the potential and any closed-form
    // constraint terms
    int d = std::max(depth, normalized_potential.depth() - 1);
    if (constraint.linear_free_energy)
        for (const auto& [c, pot] : constraint.linear_free_energy->terms) d = std::max(d, pot.depth() - 1);
    d = std::max(d, 1);

    ChainEval ev(spec, d);
    const int vars = ev.dim * q;
    std::vector<std::vector<bool>> allowed(static_cast<std::size_t>(ev.dim), std::vector<bool>(q, false));
    for (int u = 0; u < ev.dim; ++u)
        for (int a = 0; a < q; ++a) allowed[static_cast<std::size_t>(u)][static_cast<std::size_t>(a)] = ev.edge_allowed(u, a);

    auto objective = [&](const std::vector<double>& p) {
        const std::vector<double> pi = ev.stationary(p);
        return ev.entropy_of(p, pi) + ev.integral_of(normalized_potential, p, pi);
    };
    auto constraint_value = [&](const std::vector<double>& p) {
        const std::vector<double> pi = ev.stationary(p);
        if (constraint.linear_free_energy) {
            double s = constraint.linear_free_energy->constant;
            for (const auto& [c, pot] : constraint.linear_free_energy->terms) s += c * ev.integral_of(pot, p, pi);
            return s;
        }
        // black-box family: finite-n free-energy estimate against the chain;
        // zero rows from the simplex projection get a support floor first
        std::vector<double> pc = p;
        for (int u = 0; u < ev.dim; ++u) {
            double sum = 0.0;
            for (int a = 0; a < q; ++a)
                if (ev.edge_allowed(u, a)) {
                    double& x = pc[static_cast<std::size_t>(u) * q + a];
                    x = std::max(x, 1e-12);
                    sum += x;
                }
            for (int a = 0; a < q; ++a)
                if (ev.edge_allowed(u, a)) pc[static_cast<std::size_t>(u) * q + a] /= sum;
        }
        GibbsMeasure eta = markov_measure_from_conditionals(spec, d, pc);
        FreeEnergyOptions fo;
        fo.word_cap = opt.word_cap;
        return free_energy(eta, constraint, opt.estimate_n_list, fo).limit.extrapolated;
    };

    const bool unconstrained = (threshold == neg_inf);
    LdpBound best;
    SeededStream rng{opt.seed, 0};
    for (int restart = 0; restart < opt.restarts; ++restart) {
        std::vector<double> p(static_cast<std::size_t>(vars), 0.0);
        for (int u = 0; u < ev.dim; ++u) {
            double sum = 0.0;
            for (int a = 0; a < q; ++a)
                if (allowed[static_cast<std::size_t>(u)][static_cast<std::size_t>(a)]) {
                    const double e = -std::log(1.0 - rng.next_double());
                    p[static_cast<std::size_t>(u) * q + a] = e;
                    sum += e;
                }
            for (int a = 0; a < q; ++a) p[static_cast<std::size_t>(u) * q + a] /= sum;
        }
        double kappa = unconstrained ? 0.0 : 10.0;
        for (int ramp = 0; ramp < (unconstrained ? 1 : 6); ++ramp) {
            auto merit = [&](const std::vector<double>& x) {
                double v = objective(x);
                if (!unconstrained) {
                    const double gap = threshold - constraint_value(x);
                    if (gap > 0) v -= kappa * gap * gap;
                }
                return v;
            };
            const double fd = 1e-7;
            double step = 0.25;
            for (int it = 0; it < opt.iterations; ++it) {
                std::vector<double> grad(static_cast<std::size_t>(vars), 0.0);
                for (int v = 0; v < vars; ++v) {
                    const int u = v / q, a = v % q;
                    if (!allowed[static_cast<std::size_t>(u)][static_cast<std::size_t>(a)]) continue;
                    std::vector<double> hi = p, lo = p;
                    hi[static_cast<std::size_t>(v)] += fd;
                    lo[static_cast<std::size_t>(v)] = std::max(lo[static_cast<std::size_t>(v)] - fd, 0.0);
                    grad[static_cast<std::size_t>(v)] = (merit(hi) - merit(lo)) / (hi[static_cast<std::size_t>(v)] - lo[static_cast<std::size_t>(v)]);
                }
                // backtracking on the merit keeps the update stable against the
                // penalty cliff when kappa is large
                const double m0 = merit(p);
                bool moved = false;
                for (int half = 0; half < 40; ++half) {
                    std::vector<double> trial = p;
                    for (int v = 0; v < vars; ++v) trial[static_cast<std::size_t>(v)] += step * grad[static_cast<std::size_t>(v)];
                    for (int u = 0; u < ev.dim; ++u)
                        project_row_to_simplex(trial.data() + static_cast<std::size_t>(u) * q,
                                               allowed[static_cast<std::size_t>(u)], q);
                    if (merit(trial) > m0) {
                        p.swap(trial);
                        moved = true;
                        break;
                    }
                    step *= 0.5;
                }
                if (!moved) break;          // no ascent direction at this scale
                step = std::min(step * 2.0, 0.25);
            }
            if (unconstrained) break;
            if (threshold - constraint_value(p) <= 1e-9) break;
            kappa *= 10.0;
        }
        const double cval = unconstrained ? 0.0 : constraint_value(p);
        const bool ok = unconstrained || (threshold - cval <= 1e-6);
        if (!ok) continue;
        const double val = objective(p);
        if (!best.feasible || val > best.value) {
            best.feasible = true;
            best.value = val;
            best.constraint_value = cval;
            best.conditionals = p;
        }
    }
    return best;
}

}  // namespace gibbsinf
