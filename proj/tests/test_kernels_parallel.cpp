#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gibbsinf/kernels.hpp"
#include "gibbsinf/posterior.hpp"
#include "gibbsinf/sampling.hpp"

// The OpenMP kernels must agree with their serial reference implementations
// bit for bit: identical chunking and fold order make the results independent
// of the thread count.

using namespace gibbsinf;

TEST_CASE("node likelihood scan agrees with the serial reference") {
    const ParamFamily fam = family_markov_2x2(0.3, 0.7, 9, 0.3, 0.7, 9);
    SeededStream s{4, 0};
    const Word y = sample_orbit(fam.measure(fam.node_at({0.5, 0.5})), 3000, s);
    CHECK(node_cylinder_loglik(fam, y) == node_cylinder_loglik_serial(fam, y));
}

TEST_CASE("annealed word sums agree with the serial reference") {
    const ParamFamily fam = family_cocycle_grid(0.1, 3, {0.5, 0.5});
    const std::vector<int> n_list = {3, 7, 11, 15, 18};
    for (int node : {0, 4, 8})
        CHECK(annealed_log_norm_sums(fam.cocycles[static_cast<std::size_t>(node)], fam.measure(node), n_list) ==
              annealed_log_norm_sums_serial(fam.cocycles[static_cast<std::size_t>(node)], fam.measure(node),
                                            n_list));
}

TEST_CASE("annealed word sums against a brute-force enumeration") {
    const ParamFamily fam = family_cocycle_grid(0.1, 3, {0.5, 0.5});
    const CocycleSpec& c = fam.cocycles[1];
    const GibbsMeasure& m = fam.measure(1);
    for (int n : {1, 2, 5, 9}) {
        double brute = 0.0;
        for (const auto& w : admissible_words(m.spec, n))
            brute += std::exp(cylinder_log_measure(m, w)) * std::log(spectral_norm(cocycle_product(c, w)));
        const auto sums = annealed_log_norm_sums(c, m, {n});
        CHECK(sums[0] == doctest::Approx(brute).epsilon(1e-12));
    }
}

TEST_CASE("Monte Carlo kernels agree with the serial reference") {
    const ParamFamily fam = family_cocycle_grid(0.1, 3, {0.5, 0.5});
    SeededStream s{8, 0};
    const Word y = sample_orbit(fam.measure(0), 300, s);

    CHECK(mc_log_norm_samples(fam.cocycles[2], fam.measure(2), 500, 256, SeededStream{5, 0}) ==
          mc_log_norm_samples_serial(fam.cocycles[2], fam.measure(2), 500, 256, SeededStream{5, 0}));

    LossSpec loss;
    loss.mc_samples = 128;
    loss.mc_stream = SeededStream{6, 0};
    loss.phi = [&fam](int node, int, const Word& x, const Word&) {
        return log_product_norm(fam.cocycles[static_cast<std::size_t>(node)], x);
    };
    std::vector<double> a, b, sa, sb;
    mc_log_moments(fam, loss, y, 200, a, &sa);
    mc_log_moments_serial(fam, loss, y, 200, b, &sb);
    CHECK(a == b);
    CHECK(sa == sb);
}

TEST_CASE("exact Birkhoff moment kernel against brute force") {
    auto check_against_enumeration = [](const GibbsMeasure& m, const Potential& u) {
        for (int n : {1, 3, 6, 10}) {
            double brute = 0.0;
            for (const auto& w : admissible_words(m.spec, n)) {
                double sn = 0.0;
                for (int j = 0; j < n; ++j)
                    sn += u.value(std::span<const std::uint8_t>(&w[static_cast<std::size_t>(j)], 1));
                const double lm = cylinder_log_measure(m, w);
                if (lm != neg_inf) brute += std::exp(lm + sn);
            }
            CHECK(log_birkhoff_moment(m, u, n) == doctest::Approx(std::log(brute)).epsilon(1e-11));
        }
    };

    const ParamFamily fam = family_markov_2x2(0.6, 0.6, 1, 0.45, 0.45, 1);
    const GibbsMeasure& m = fam.measures.at(0);
    check_against_enumeration(
        m, Potential(m.spec, 1, {{word_from_string("1", 2), 0.3}, {word_from_string("2", 2), -0.2}}));

    // constrained subshift: same identity over golden-mean words only
    const GibbsMeasure parry = gibbs_measure(Potential::constant(SubshiftSpec::golden_mean(), 2, 0.0));
    check_against_enumeration(
        parry, Potential(parry.spec, 1, {{word_from_string("1", 2), -0.15}, {word_from_string("2", 2), 0.4}}));
}
