#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gibbsinf/family.hpp"
#include "gibbsinf/nonadditive.hpp"
#include "gibbsinf/posterior.hpp"
#include "gibbsinf/sampling.hpp"

using namespace gibbsinf;

namespace {

GibbsMeasure bernoulli(const std::vector<double>& p) {
    const auto spec = SubshiftSpec::full_shift(static_cast<int>(p.size()));
    std::vector<std::pair<Word, double>> entries;
    for (std::size_t a = 0; a < p.size(); ++a)
        entries.push_back({Word{static_cast<std::uint8_t>(a)}, std::log(p[a])});
    return gibbs_measure(Potential(spec, 1, entries));
}

}  // namespace

TEST_CASE("fekete_limit") {
    SUBCASE("linear sequence") {
        std::vector<std::pair<int, double>> vals;
        for (int n = 1; n <= 20; ++n) vals.push_back({n, static_cast<double>(n)});
        const FeketeLimit f = fekete_limit(vals);
        CHECK(f.certified_min == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(f.extrapolated == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(f.last_value == doctest::Approx(1.0).epsilon(1e-14));
    }
    SUBCASE("n + log(n+1): extrapolation near 1, min at the largest n") {
        std::vector<std::pair<int, double>> vals;
        for (int n = 1; n <= 1000; ++n) vals.push_back({n, n + std::log(n + 1.0)});
        const FeketeLimit f = fekete_limit(vals);
        CHECK(f.certified_min == doctest::Approx(1.0 + std::log(1001.0) / 1000.0).epsilon(1e-12));
        CHECK(std::abs(f.extrapolated - 1.0) < 0.01);
    }
    SUBCASE("certified bound property on 100 random sub-additive sequences") {
        // a_n = c n + b log(n+1) + d with b, d >= 0 is sub-additive
        SeededStream s{8, 0};
        for (int t = 0; t < 100; ++t) {
            const double c = 4.0 * s.next_double() - 2.0;
            const double b = 2.0 * s.next_double();
            const double d = s.next_double();
            std::vector<std::pair<int, double>> vals;
            for (int n = 1; n <= 64; ++n) vals.push_back({n, c * n + b * std::log(n + 1.0) + d});
            const FeketeLimit f = fekete_limit(vals);
            for (const auto& [n, a] : vals) {
                CHECK(f.certified_min <= a / n + 1e-12);
                CHECK(f.extrapolated <= a / n + 1e-12);
            }
            // the true limit is c; the certified min really is an upper bound
            CHECK(f.certified_min >= c - 1e-12);
        }
    }
    SUBCASE("input validation") {
        CHECK_THROWS_AS(fekete_limit({}), InputError);
        CHECK_THROWS_AS(fekete_limit({{2, 1.0}, {2, 1.0}}), InputError);
    }
}

TEST_CASE("check_almost_additive") {
    SeededStream s{55, 0};
    SUBCASE("Birkhoff sums are additive (C = 0)") {
        SequenceFamily f;
        f.kind = SequenceFamily::Kind::additive;
        f.declared_constant = 0.0;
        f.eval = [](int n, std::span<const double>, const Word&, const Word& y) {
            double acc = 0.0;
            for (int i = 0; i < n; ++i) acc += (y[static_cast<std::size_t>(i)] == 0) ? 0.3 : -0.7;
            return acc;
        };
        const auto rep = check_almost_additive(f, 24, 400, s);
        CHECK(rep.max_violation <= 1e-12);
    }
    SUBCASE("log cylinder masses of a Markov measure stay within 3 log K") {
        const ParamFamily fam = family_markov_2x2(0.7, 0.7, 1, 0.4, 0.4, 1);
        const GibbsMeasure& m = fam.measures.at(0);
        SequenceFamily f;
        f.kind = SequenceFamily::Kind::almost_additive;
        f.declared_constant = 3.0 * std::log(m.gibbs_constant);
        f.eval = [&m](int n, std::span<const double>, const Word&, const Word& y) {
            const Word prefix(y.begin(), y.begin() + n);
            return cylinder_log_measure(m, prefix);
        };
        const auto rep = check_almost_additive(f, 20, 500, s);
        CHECK(rep.max_violation <= 1e-12);
    }
    SUBCASE("n^2 violates every declared constant") {
        SequenceFamily f;
        f.kind = SequenceFamily::Kind::almost_additive;
        f.declared_constant = 50.0;
        f.eval = [](int n, std::span<const double>, const Word&, const Word&) {
            return static_cast<double>(n) * n;
        };
        const auto rep = check_almost_additive(f, 30, 500, s);
        CHECK(rep.max_violation > 0.0);
        CHECK(rep.witness_n >= 1);
        CHECK(rep.witness_m >= 1);
    }
    SUBCASE("prior-integrated cylinder families: constant scales with the ball mass") {
        // the integrated family over a node subset E is almost additive with
        // constant sum_E w(theta) 3 log K_theta
        const ParamFamily fam = family_markov_2x2(0.35, 0.65, 3, 0.35, 0.65, 3);
        const PriorMeasure prior = prior_uniform(fam);
        std::vector<int> subset = {0, 1, 4, 7};
        double constant = 0.0;
        for (int i : subset)
            constant += prior.weights[static_cast<std::size_t>(i)] * 3.0 *
                        std::log(fam.measure(i).gibbs_constant);
        SequenceFamily f;
        f.kind = SequenceFamily::Kind::almost_additive;
        f.declared_constant = constant;
        f.eval = [&fam, &prior, subset](int n, std::span<const double>, const Word&, const Word& y) {
            const Word prefix(y.begin(), y.begin() + n);
            double acc = 0.0;
            for (int i : subset)
                acc -= prior.weights[static_cast<std::size_t>(i)] *
                       cylinder_log_measure(fam.measure(i), prefix);
            return acc;
        };
        const auto rep = check_almost_additive(f, 16, 400, s);
        CHECK(rep.max_violation <= 1e-12);
    }
}

TEST_CASE("psi_star") {
    const ParamFamily fam = family_bernoulli_atoms({{0.0, {0.5, 0.5}}, {1.0, {0.3, 0.7}}});
    const GibbsMeasure nu = bernoulli({0.5, 0.5});
    SeededStream s{66, 0};
    const std::vector<int> n_list = {10, 20, 40, 80};

    SUBCASE("psi_n = n g(theta) recovers g exactly") {
        PsiSpec psi;
        psi.eval = [](int node, int n, const Word&) { return n * (node == 0 ? 1.5 : 0.25); };
        const auto entries = psi_star(fam, psi, nu, n_list, 4, s);
        CHECK(entries[0].limit.certified_min == doctest::Approx(1.5).epsilon(1e-13));
        CHECK(entries[1].limit.certified_min == doctest::Approx(0.25).epsilon(1e-13));
        CHECK(entries[0].std_error_last == doctest::Approx(0.0));
    }
    SUBCASE("Birkhoff sums of a depth-1 function integrate to the nu-average") {
        // psi_n(y) = sum of u(y_i) with u = (2.0 on symbol 1, 0.5 on symbol 2);
        // closed form: int u d nu = 1.25 under B(1/2,1/2)
        PsiSpec psi;
        psi.eval = [](int, int n, const Word& y) {
            double acc = 0.0;
            for (int i = 0; i < n; ++i) acc += (y[static_cast<std::size_t>(i)] == 0) ? 2.0 : 0.5;
            return acc;
        };
        const std::vector<int> longer = {50, 100, 200, 400, 800};
        const auto entries = psi_star(fam, psi, nu, longer, 64, s);
        CHECK(std::abs(entries[0].limit.extrapolated - 1.25) < 0.05);
        CHECK(entries[0].std_error_last > 0.0);
    }
    SUBCASE("negative psi is rejected") {
        PsiSpec psi;
        psi.eval = [](int, int, const Word&) { return -1.0; };
        CHECK_THROWS_AS(psi_star(fam, psi, nu, n_list, 2, s), NumericError);
    }
}

TEST_CASE("free_energy") {
    const GibbsMeasure eta = bernoulli({0.4, 0.6});
    SUBCASE("additive families integrate exactly at every n") {
        SequenceFamily f;
        f.kind = SequenceFamily::Kind::additive;
        f.eval = [](int n, std::span<const double>, const Word&, const Word& y) {
            double acc = 0.0;
            for (int i = 0; i < n; ++i) acc += (y[static_cast<std::size_t>(i)] == 0) ? 1.0 : -2.0;
            return acc;
        };
        const double expect = 0.4 * 1.0 + 0.6 * (-2.0);
        const auto rep = free_energy(eta, f, {2, 4, 6, 8, 10});
        CHECK_FALSE(rep.used_monte_carlo);
        for (const auto& [n, v] : rep.values) CHECK(v == doctest::Approx(expect).epsilon(1e-12));
        CHECK(rep.limit.extrapolated == doctest::Approx(expect).epsilon(1e-10));
    }
    SUBCASE("constant families vanish at rate 1/n") {
        SequenceFamily f;
        f.eval = [](int, std::span<const double>, const Word&, const Word&) { return 2.5; };
        const auto rep = free_energy(eta, f, {5, 10, 20});
        CHECK(rep.values[0].second == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(rep.values[2].second == doctest::Approx(0.125).epsilon(1e-12));
    }
    SUBCASE("relative-entropy family reproduces the thermo closed forms") {
        // psi_n = log mu_theta(C_n(.)) integrated against mu_theta0: exactly
        // n * int log J_theta d mu_theta0 for depth-1 families
        const GibbsMeasure theta = bernoulli({0.3, 0.7});
        SequenceFamily f;
        f.kind = SequenceFamily::Kind::almost_additive;
        f.eval = [&theta](int n, std::span<const double>, const Word&, const Word& y) {
            const Word prefix(y.begin(), y.begin() + n);
            return cylinder_log_measure(theta, prefix);
        };
        const auto rep = free_energy(eta, f, {2, 4, 6, 8});
        const double expect = -entropy(eta) - relative_entropy(eta, theta);
        for (const auto& [n, v] : rep.values) CHECK(v == doctest::Approx(expect).epsilon(1e-11));
    }
    SUBCASE("Monte Carlo fallback beyond the word cap carries error bars") {
        SequenceFamily f;
        f.eval = [](int n, std::span<const double>, const Word&, const Word& y) {
            double acc = 0.0;
            for (int i = 0; i < n; ++i) acc += (y[static_cast<std::size_t>(i)] == 0) ? 1.0 : 0.0;
            return acc;
        };
        FreeEnergyOptions opt;
        opt.word_cap = 100;  // force the fallback
        opt.mc_samples = 2000;
        const auto rep = free_energy(eta, f, {16, 32}, opt, SeededStream{12, 0});
        CHECK(rep.used_monte_carlo);
        CHECK(rep.std_errors[0] > 0.0);
        CHECK(std::abs(rep.values[1].second - 0.4) < 0.05);
    }
}
