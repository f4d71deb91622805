#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "gibbsinf/experiment.hpp"

using namespace gibbsinf;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool has_fault(const std::vector<ConfigFault>& faults, const std::string& field_part,
               const std::string& message_part = "") {
    for (const auto& f : faults)
        if (f.field.find(field_part) != std::string::npos &&
            f.message.find(message_part) != std::string::npos)
            return true;
    return false;
}

}  // namespace

TEST_CASE("validate_config faults") {
    SUBCASE("missing family") {
        const auto faults = validate_config("[sampling]\ntype = bernoulli\nprobs = 0.5 0.5\nn_schedule = 10\n");
        CHECK(has_fault(faults, "family", "required"));
    }
    SUBCASE("non-stochastic Markov columns are named") {
        const std::string text =
            "[family]\ntype = markov_2x2\na_range = 0.0 0.8 3\nb_range = 0.2 0.8 3\n"
            "[sampling]\ntype = family_node\nnode = 0.4 0.5\nn_schedule = 10\n";
        const auto faults = validate_config(text);
        CHECK(has_fault(faults, "a_range", "column 1"));
        CHECK_FALSE(has_fault(faults, "b_range"));
    }
    SUBCASE("decreasing schedule") {
        const std::string text =
            "[family]\ntype = bernoulli_atoms\natom = 0 0.5 0.5\n"
            "[sampling]\ntype = bernoulli\nprobs = 0.5 0.5\nn_schedule = 100 50\n";
        CHECK(has_fault(validate_config(text), "n_schedule", "increasing"));
    }
    SUBCASE("atom probabilities must sum to one") {
        const std::string text =
            "[family]\ntype = bernoulli_atoms\natom = 0 0.5 0.6\n"
            "[sampling]\ntype = bernoulli\nprobs = 0.5 0.5\nn_schedule = 10\n";
        CHECK(has_fault(validate_config(text), "atom", "sum to 1"));
    }
    SUBCASE("line numbers point at the offending key") {
        const std::string text = "[family]\ntype = nonsense\n";
        const auto faults = validate_config(text);
        REQUIRE_FALSE(faults.empty());
        CHECK(faults.front().line == 2);
    }
    SUBCASE("all bundled examples validate cleanly") {
        for (const auto& [name, text] : bundled_examples()) {
            const auto faults = validate_config(text);
            CHECK_MESSAGE(faults.empty(), name);
        }
    }
}

TEST_CASE("potential tables in configs must cover the admissible words") {
    const std::string text =
        "[family]\ntype = jacobian_mixture\ncells = 3\n"
        "j0_depth = 1\nj0 = 1:-0.6931471805599453\n"  // symbol 2 missing
        "j1_depth = 1\nj1 = 1:-0.4054651081081645 2:-1.0986122886681098\n"
        "[sampling]\ntype = bernoulli\nprobs = 0.5 0.5\nn_schedule = 10\n";
    ExperimentConfig cfg = parse_config(text);
    CHECK_THROWS_WITH_AS(build_family(cfg), doctest::Contains("missing admissible words"), InputError);
}

TEST_CASE("run_experiment determinism and manifest") {
    const std::string text =
        "[experiment]\nname = tiny\n"
        "[family]\ntype = bernoulli_atoms\natom = -1 0.333333333333333 0.666666666666666667\natom = 1 "
        "0.666666666666666667 0.333333333333333\n"
        "[prior]\ntype = uniform\n"
        "[sampling]\ntype = bernoulli\nprobs = 0.5 0.5\nn_schedule = 50 100 150 200\nreplicas = 4\nseed = 5\n"
        "[loss]\nscheme = direct_cylinder\n"
        "[output]\ndir = build_test_out/tiny\n";
    ExperimentConfig cfg = parse_config(text);

    std::filesystem::remove_all("build_test_out");
    const RunManifest m1 = run_experiment(cfg);
    CHECK(m1.completion == "ok");
    REQUIRE_FALSE(m1.outputs.empty());
    std::vector<std::string> first;
    for (const auto& p : m1.outputs) first.push_back(slurp(p));
    const std::string manifest1 = slurp(cfg.out_dir + "/manifest.txt");
    CHECK(manifest1.find("completion: ok") != std::string::npos);
    CHECK(manifest1.find(config_hash_hex(text)) != std::string::npos);

    const RunManifest m2 = run_experiment(cfg);
    for (std::size_t i = 0; i < m1.outputs.size(); ++i) CHECK(slurp(m2.outputs[i]) == first[i]);
    CHECK(slurp(cfg.out_dir + "/manifest.txt") == manifest1);

    SUBCASE("changing the seed changes the trajectory bytes") {
        ExperimentConfig cfg2 = cfg;
        cfg2.seed = 6;
        cfg2.out_dir = "build_test_out/tiny2";
        const RunManifest m3 = run_experiment(cfg2);
        CHECK(slurp(m3.outputs[0]) != first[0]);
    }
    std::filesystem::remove_all("build_test_out");
}

TEST_CASE("rate outputs appear for ladder runs") {
    const std::string text =
        "[experiment]\nname = ladder\n"
        "[family]\ntype = markov_2x2\na_range = 0.35 0.65 5\nb_range = 0.35 0.65 5\n"
        "[prior]\ntype = uniform\n"
        "[sampling]\ntype = family_node\nnode = 0.5 0.5\nn_schedule = 100 200 300 400 500\nreplicas = 3\nseed = 2\n"
        "[loss]\nscheme = direct_cylinder\n"
        "[deviations]\ndelta_ladder = 0.12\nzeta = 0.01\n"
        "[output]\ndir = build_test_out/ladder\n";
    ExperimentConfig cfg = parse_config(text);
    std::filesystem::remove_all("build_test_out");
    const RunManifest man = run_experiment(cfg);
    CHECK(man.completion == "ok");
    bool saw_ball = false, saw_rate = false;
    for (const auto& p : man.outputs) {
        saw_ball = saw_ball || p.find("ball_mass") != std::string::npos;
        saw_rate = saw_rate || p.find("rate_report") != std::string::npos;
    }
    CHECK(saw_ball);
    CHECK(saw_rate);
    const std::string rate = slurp(cfg.out_dir + "/rate_report.csv");
    CHECK(rate.find("rho_delta") != std::string::npos);
    std::filesystem::remove_all("build_test_out");
}
