#include "gibbsinf/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>

#include "gibbsinf/cocycle.hpp"
#include "gibbsinf/csv.hpp"
#include "gibbsinf/errors.hpp"
#include "gibbsinf/kernels.hpp"
#include "gibbsinf/logspace.hpp"
#include "gibbsinf/sampling.hpp"

namespace gibbsinf {

std::string config_hash_hex(const std::string& text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

namespace {

struct ReplicaResult {
    Word y;
    // per schedule index: normalized log weights over the nodes
    std::vector<std::vector<double>> log_weights;
    std::vector<bool> mc_warnings;
};

// direct scheme: one cumulative likelihood scan per node, shared across the schedule
ReplicaResult run_replica_direct(const ParamFamily& fam, const PriorMeasure& prior, const GibbsMeasure& nu,
                                 const ExperimentConfig& cfg, int replica) {
    SeededStream s = SeededStream::replica(cfg.seed, static_cast<std::uint64_t>(replica));
    ReplicaResult rr;
    rr.y = sample_orbit(nu, cfg.n_schedule.back(), s);
    const int nodes = fam.node_count();
    // cumulative log-likelihood of every prefix, per node; entry j of a node's
    // scan is the prefix of length state_len + j
    std::vector<std::vector<double>> cums(static_cast<std::size_t>(nodes));
    for (int i = 0; i < nodes; ++i) cums[static_cast<std::size_t>(i)] = cylinder_log_measure_prefixes(fam.measure(i), rr.y);
    for (int n : cfg.n_schedule) {
        std::vector<double> logw(static_cast<std::size_t>(nodes));
        for (int i = 0; i < nodes; ++i) {
            const auto& c = cums[static_cast<std::size_t>(i)];
            const int idx = n - fam.measure(i).state_len;
            logw[static_cast<std::size_t>(i)] =
                prior.log_weights[static_cast<std::size_t>(i)] +
                (idx >= 0 && idx < static_cast<int>(c.size()) ? c[static_cast<std::size_t>(idx)] : neg_inf);
        }
        const double lz = log_sum_exp(logw);
        if (lz == neg_inf) throw DegeneratePosteriorError("run_experiment: all-node zero likelihood");
        for (double& v : logw) v -= lz;
        rr.log_weights.push_back(std::move(logw));
        rr.mc_warnings.push_back(false);
    }
    return rr;
}

// Loss schemes share one Monte Carlo layout: per node, mc_samples orbits of
// length n_max, the carried cocycle product renormalized as it grows, and the
// running log-norm recorded at every schedule point. Evaluating the whole
// schedule on shared orbits keeps each run inside its time budget and stays
// deterministic per (seed, replica, node, sample).
ReplicaResult run_replica_loss(const ParamFamily& fam, const PriorMeasure& prior, const GibbsMeasure& nu,
                               const ExperimentConfig& cfg, int replica) {
    SeededStream s = SeededStream::replica(cfg.seed, static_cast<std::uint64_t>(replica));
    ReplicaResult rr;
    rr.y = sample_orbit(nu, cfg.n_schedule.back(), s);
    const int nodes = fam.node_count();
    const int m = cfg.mc_samples;
    const std::size_t ts = cfg.n_schedule.size();
    const bool exp_scheme = cfg.scheme == LossScheme::exp_almost_additive;

    // schedule-point lookup by orbit position
    const int n_max = cfg.n_schedule.back();
    std::vector<int> slot_of(static_cast<std::size_t>(n_max) + 1, -1);
    for (std::size_t t = 0; t < ts; ++t) slot_of[static_cast<std::size_t>(cfg.n_schedule[t])] = static_cast<int>(t);

    SeededStream base = s.substream(exp_scheme ? 0x10C5 : 0x1D06);
    // log phi samples per (schedule, sample) for the current node
    std::vector<std::vector<double>> vals(ts, std::vector<double>(static_cast<std::size_t>(m)));
    std::vector<std::vector<double>> node_stat(ts, std::vector<double>(static_cast<std::size_t>(nodes)));
    std::vector<std::vector<double>> node_se(ts, std::vector<double>(static_cast<std::size_t>(nodes), 0.0));

    for (int i = 0; i < nodes; ++i) {
        const CocycleSpec& coc = fam.cocycles[static_cast<std::size_t>(i)];
        SeededStream ns = base.substream(static_cast<std::uint64_t>(i) + 1);
        for (int j = 0; j < m; ++j) {
            SeededStream os = ns.substream(static_cast<std::uint64_t>(j) + 1);
            const Word x = sample_orbit(fam.measure(i), n_max, os);
            Mat2 p = Mat2::identity();
            double renorm = 0.0;
            for (int step = 0; step < n_max; ++step) {
                p = coc.matrices[static_cast<std::size_t>(x[static_cast<std::size_t>(step)])] * p;
                if ((step + 1) % 32 == 0) {
                    const double sc = p.max_abs();
                    p.scale(1.0 / sc);
                    renorm += std::log(sc);
                }
                const int slot = slot_of[static_cast<std::size_t>(step) + 1];
                if (slot >= 0) vals[static_cast<std::size_t>(slot)][static_cast<std::size_t>(j)] =
                    renorm + std::log(spectral_norm(p));
            }
        }
        for (std::size_t t = 0; t < ts; ++t) {
            const auto& v = vals[t];
            if (exp_scheme) {
                const double lme = log_sum_exp(v) - std::log(static_cast<double>(m));
                double var = 0.0;
                for (double x : v) {
                    const double w = std::exp(x - lme);
                    var += (w - 1.0) * (w - 1.0);
                }
                node_stat[t][static_cast<std::size_t>(i)] = lme;
                node_se[t][static_cast<std::size_t>(i)] =
                    std::sqrt(var / (m > 1 ? m - 1 : 1)) / std::sqrt(static_cast<double>(m));
            } else {
                double mean = 0.0;
                for (double x : v) mean += x;
                node_stat[t][static_cast<std::size_t>(i)] = mean / static_cast<double>(m);
            }
        }
    }

    for (std::size_t t = 0; t < ts; ++t) {
        std::vector<double> logw(static_cast<std::size_t>(nodes));
        bool warn = false;
        for (int i = 0; i < nodes; ++i) {
            const double stat = node_stat[t][static_cast<std::size_t>(i)];
            if (exp_scheme) {
                logw[static_cast<std::size_t>(i)] = prior.log_weights[static_cast<std::size_t>(i)] + stat;
                warn = warn || node_se[t][static_cast<std::size_t>(i)] > 0.25;
            } else {
                if (!(stat > 0.0)) throw InputError("log_almost_additive: psi_n must be > 0");
                logw[static_cast<std::size_t>(i)] =
                    prior.log_weights[static_cast<std::size_t>(i)] + std::log(stat);
            }
        }
        const double lz = log_sum_exp(logw);
        for (double& v : logw) v -= lz;
        rr.log_weights.push_back(std::move(logw));
        rr.mc_warnings.push_back(warn);
    }
    return rr;
}

}  // namespace

RunManifest run_experiment(const ExperimentConfig& cfg) {
    namespace fs = std::filesystem;
    RunManifest man;
    man.config_hash = config_hash_hex(cfg.source_text);
    man.seed = cfg.seed;
    man.replicas = cfg.replicas;
    man.out_dir = cfg.out_dir;
    fs::create_directories(cfg.out_dir);

    const std::string manifest_path = cfg.out_dir + "/manifest.txt";
    int mc_warned = -1;  // count of (replica, n) states whose Monte Carlo spread tripped the flag
    auto write_manifest = [&](const std::string& completion) {
        std::ofstream m(manifest_path, std::ios::binary);
        m << "name: " << cfg.name << "\n";
        m << "config_hash: " << man.config_hash << "\n";
        m << "seed: " << man.seed << "\n";
        m << "replicas: " << man.replicas << "\n";
        m << "version: gibbsinf 0.1.0\n";
        m << "completion: " << completion << "\n";
        if (mc_warned >= 0) m << "mc_warnings: " << mc_warned << "\n";
        for (const auto& p : man.outputs) m << "output: " << p << "\n";
    };
    write_manifest("running");

    try {
        const ParamFamily fam = build_family(cfg);
        const PriorMeasure prior = build_prior(cfg, fam);
        const GibbsMeasure nu = build_sampling_measure(cfg, fam);
        const bool direct = cfg.scheme == LossScheme::direct_cylinder;
        if (!direct && fam.cocycles.empty())
            throw InputError("non-direct loss schemes need a cocycle family");

        std::vector<ReplicaResult> results(static_cast<std::size_t>(cfg.replicas), ReplicaResult{});
        // replica-level parallelism; inner kernels stay serial inside the team.
        // Exceptions must not escape the parallel region.
        std::string replica_error;
#pragma omp parallel for schedule(dynamic)
        for (int r = 0; r < cfg.replicas; ++r) {
            try {
                results[static_cast<std::size_t>(r)] =
                    direct ? run_replica_direct(fam, prior, nu, cfg, r) : run_replica_loss(fam, prior, nu, cfg, r);
            } catch (const std::exception& ex) {
#pragma omp critical
                replica_error = ex.what();
            }
        }
        if (!replica_error.empty()) throw NumericError("replica failed: " + replica_error);
        if (!direct) {
            mc_warned = 0;
            for (const auto& rr : results)
                for (bool w : rr.mc_warnings) mc_warned += w;
        }

        // posterior trajectories, long format
        const std::string traj_path = cfg.out_dir + "/posterior_trajectory.csv";
        {
            CsvWriter csv(traj_path);
            csv.field(std::string("n"));
            csv.field(std::string("sample_id"));
            for (int j = 0; j < fam.param_dim; ++j) csv.field("theta" + std::to_string(j + 1));
            csv.field(std::string("weight"));
            csv.endrow();
            for (int r = 0; r < cfg.replicas; ++r)
                for (std::size_t t = 0; t < cfg.n_schedule.size(); ++t)
                    for (int i = 0; i < fam.node_count(); ++i) {
                        csv.field(cfg.n_schedule[t]);
                        csv.field(static_cast<long long>(r));
                        for (double c : fam.nodes[static_cast<std::size_t>(i)]) csv.field(c);
                        csv.field(std::exp(results[static_cast<std::size_t>(r)].log_weights[t][static_cast<std::size_t>(i)]));
                        csv.endrow();
                    }
        }
        man.outputs.push_back(traj_path);

        // ball masses + decay fits when a ladder is configured (direct runs
        // sampling from a family node)
        if (!cfg.delta_ladder.empty() && cfg.sampling_kind == ExperimentConfig::SamplingKind::family_node) {
            const int theta0 = fam.node_at(cfg.sampling_node_coords);
            const auto& center = fam.nodes[static_cast<std::size_t>(theta0)];

            const std::string ball_path = cfg.out_dir + "/ball_mass.csv";
            {
                CsvWriter csv(ball_path);
                csv.field(std::string("n"));
                csv.field(std::string("sample_id"));
                csv.field(std::string("delta"));
                csv.field(std::string("mass"));
                csv.field(std::string("log_complement"));
                csv.endrow();
                for (int r = 0; r < cfg.replicas; ++r)
                    for (std::size_t t = 0; t < cfg.n_schedule.size(); ++t)
                        for (double delta : cfg.delta_ladder) {
                            const auto& lw = results[static_cast<std::size_t>(r)].log_weights[t];
                            double mass = 0.0;
                            std::vector<double> outside;
                            for (int i = 0; i < fam.node_count(); ++i) {
                                double dist = 0.0;
                                for (std::size_t j = 0; j < center.size(); ++j)
                                    dist = std::max(dist,
                                                    std::abs(fam.nodes[static_cast<std::size_t>(i)][j] - center[j]));
                                if (dist < delta)
                                    mass += std::exp(lw[static_cast<std::size_t>(i)]);
                                else
                                    outside.push_back(lw[static_cast<std::size_t>(i)]);
                            }
                            csv.field(cfg.n_schedule[t]);
                            csv.field(static_cast<long long>(r));
                            csv.field(delta);
                            csv.field(std::min(mass, 1.0));
                            csv.field(log_sum_exp(outside));
                            csv.endrow();
                        }
            }
            man.outputs.push_back(ball_path);

            const std::string rate_path = cfg.out_dir + "/rate_report.csv";
            {
                CsvWriter csv(rate_path);
                csv.field(std::string("delta"));
                csv.field(std::string("sample_id"));
                csv.field(std::string("rho_delta"));
                csv.field(std::string("d_delta"));
                csv.field(std::string("composite_exponent"));
                csv.field(std::string("zeta"));
                csv.field(std::string("entropy_theta0"));
                csv.field(std::string("prior_ball_mass"));
                csv.field(std::string("empirical_slope"));
                csv.field(std::string("fit_r_squared"));
                csv.field(std::string("window_min"));
                csv.field(std::string("window_max"));
                csv.endrow();
                for (double delta : cfg.delta_ladder) {
                    const RateReport base = rate_bound_direct(fam, theta0, prior, delta, cfg.zeta);
                    for (int r = 0; r < cfg.replicas; ++r) {
                        std::vector<std::pair<int, double>> series;
                        for (std::size_t t = 0; t < cfg.n_schedule.size(); ++t) {
                            const auto& lw = results[static_cast<std::size_t>(r)].log_weights[t];
                            std::vector<double> outside;
                            for (int i = 0; i < fam.node_count(); ++i) {
                                double dist = 0.0;
                                for (std::size_t j = 0; j < center.size(); ++j)
                                    dist = std::max(dist,
                                                    std::abs(fam.nodes[static_cast<std::size_t>(i)][j] - center[j]));
                                if (dist >= delta) outside.push_back(lw[static_cast<std::size_t>(i)]);
                            }
                            series.push_back({cfg.n_schedule[t], log_sum_exp(outside)});
                        }
                        RateReport rep = base;
                        try {
                            const auto [slope, r2] = empirical_decay_log(series, cfg.fit_window_frac);
                            rep.empirical_slope = slope;
                            rep.fit_r_squared = r2;
                        } catch (const NumericError&) {
                            // saturated or too-short series; slope stays NaN
                        }
                        rep.window_min = static_cast<int>(cfg.fit_window_frac * cfg.n_schedule.back());
                        rep.window_max = cfg.n_schedule.back();
                        csv.field(delta);
                        csv.field(static_cast<long long>(r));
                        csv.field(rep.rho_delta);
                        csv.field(rep.d_delta);
                        csv.field(rep.composite_exponent);
                        csv.field(rep.zeta);
                        csv.field(rep.entropy_theta0);
                        csv.field(rep.prior_ball_mass);
                        csv.field(rep.empirical_slope);
                        csv.field(rep.fit_r_squared);
                        csv.field(rep.window_min);
                        csv.field(rep.window_max);
                        csv.endrow();
                    }
                }
            }
            man.outputs.push_back(rate_path);
        }

        // annealed Lyapunov surface for cocycle families
        if (cfg.emit_lyapunov_grid && !fam.cocycles.empty()) {
            std::vector<int> n_list = cfg.lyapunov_n_list;
            if (n_list.empty()) n_list = {2, 4, 6, 8, 10, 12, 14, 16, 18, 20};
            const std::string lyap_path = cfg.out_dir + "/lyapunov_grid.csv";
            std::vector<AnnealedReport> reps(static_cast<std::size_t>(fam.node_count()), AnnealedReport{});
            std::string lyap_error;
#pragma omp parallel for schedule(dynamic)
            for (int i = 0; i < fam.node_count(); ++i) {
                try {
                    reps[static_cast<std::size_t>(i)] =
                        annealed_lyapunov(fam.cocycles[static_cast<std::size_t>(i)], fam.measure(i), n_list);
                } catch (const std::exception& ex) {
#pragma omp critical
                    lyap_error = ex.what();
                }
            }
            if (!lyap_error.empty()) throw NumericError("lyapunov grid failed: " + lyap_error);
            CsvWriter csv(lyap_path);
            csv.field(std::string("theta1"));
            csv.field(std::string("theta2"));
            csv.field(std::string("lambda_certified"));
            csv.field(std::string("lambda_extrapolated"));
            csv.field(std::string("lambda_last"));
            csv.endrow();
            for (int i = 0; i < fam.node_count(); ++i) {
                const auto& rep = reps[static_cast<std::size_t>(i)];
                csv.field(fam.nodes[static_cast<std::size_t>(i)][0]);
                csv.field(fam.nodes[static_cast<std::size_t>(i)][1]);
                csv.field(rep.limit.certified_min);
                csv.field(rep.limit.extrapolated);
                csv.field(rep.limit.last_value);
                csv.endrow();
            }
            man.outputs.push_back(lyap_path);
        }

        man.completion = "ok";
        write_manifest("ok");
    } catch (...) {
        write_manifest("failed");
        throw;
    }
    return man;
}

}  // namespace gibbsinf
