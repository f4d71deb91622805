#pragma once

#include <string>
#include <vector>

#include "gibbsinf/config.hpp"
#include "gibbsinf/deviations.hpp"
#include "gibbsinf/posterior.hpp"

namespace gibbsinf {

struct RunManifest {
    std::string config_hash;
    std::uint64_t seed = 0;
    int replicas = 0;
    std::string completion = "failed";
    std::vector<std::string> outputs;  // file paths written under out_dir
    std::string out_dir;
};

/// Executes the seeded replicas of a validated config, writes the posterior
/// trajectory CSV (long format: n, sample_id, coordinates..., weight), ball
/// masses and rate reports when a delta ladder is present, the annealed
/// Lyapunov surface for cocycle runs, and a manifest. Reruns with identical
/// config text and seed are byte-identical.
RunManifest run_experiment(const ExperimentConfig& cfg);

/// FNV-1a 64-bit hash of the config text, hex-encoded; recorded in the manifest.
std::string config_hash_hex(const std::string& text);

}  // namespace gibbsinf
