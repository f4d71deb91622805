#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gibbsinf/rng.hpp"
#include "gibbsinf/subshift.hpp"

using namespace gibbsinf;

TEST_CASE("admissible word enumeration") {
    const auto full2 = SubshiftSpec::full_shift(2);
    const auto words = admissible_words(full2, 2);
    REQUIRE(words.size() == 4);
    CHECK(word_to_string(words[0]) == "11");
    CHECK(word_to_string(words[1]) == "12");
    CHECK(word_to_string(words[2]) == "21");
    CHECK(word_to_string(words[3]) == "22");

    CHECK(admissible_words(full2, 0).size() == 1);
    CHECK(admissible_words(full2, 0)[0].empty());

    // golden mean: counts follow the Fibonacci recurrence (exhaustive oracle)
    const auto gm = SubshiftSpec::golden_mean();
    CHECK(admissible_words(gm, 3).size() == 5);
    std::size_t prev = admissible_words(gm, 1).size(), cur = admissible_words(gm, 2).size();
    CHECK(prev == 2);
    CHECK(cur == 3);
    for (int n = 3; n <= 10; ++n) {
        const std::size_t next = admissible_words(gm, n).size();
        CHECK(next == prev + cur);
        prev = cur;
        cur = next;
    }
}

TEST_CASE("word count matches matrix powers and enumeration") {
    for (const auto& spec : {SubshiftSpec::full_shift(2), SubshiftSpec::golden_mean(), SubshiftSpec::full_shift(3)}) {
        for (int n = 0; n <= 8; ++n) {
            const auto words = admissible_words(spec, n);
            CHECK(words.size() == admissible_word_count(spec, n));
            for (const auto& w : words) CHECK(is_admissible(spec, w));
            // lexicographic, no duplicates
            for (std::size_t i = 1; i < words.size(); ++i) CHECK(words[i - 1] < words[i]);
        }
    }
}

TEST_CASE("is_admissible") {
    const auto gm = SubshiftSpec::golden_mean();
    CHECK_FALSE(is_admissible(gm, word_from_string("22", 2)));
    CHECK(is_admissible(gm, word_from_string("121", 2)));
    const auto full = SubshiftSpec::full_shift(2);
    CHECK(is_admissible(full, word_from_string("2211", 2)));
    CHECK_THROWS_AS(is_admissible(gm, Word{0, 5}), InputError);
}

TEST_CASE("separation metric") {
    const Word a = word_from_string("111", 2);
    const Word b = word_from_string("12", 2);
    const Word c = word_from_string("211", 2);

    const auto same = separation_metric(a, a);
    CHECK(same.distance == 0.0);
    CHECK(same.undetermined);

    CHECK(separation_metric(word_from_string("12", 2), word_from_string("11", 2)).distance == 0.25);
    CHECK(separation_metric(c, a).distance == 0.5);

    // agreeing on the common prefix leaves the distance undetermined
    const auto partial = separation_metric(a, word_from_string("11", 2));
    CHECK(partial.distance == 0.0);
    CHECK(partial.undetermined);

    // symmetry and the ultrametric inequality on random word triples
    SeededStream s{99, 0};
    for (int t = 0; t < 200; ++t) {
        Word x, y, z;
        for (int i = 0; i < 6; ++i) {
            x.push_back(static_cast<std::uint8_t>(s.next_double() < 0.5));
            y.push_back(static_cast<std::uint8_t>(s.next_double() < 0.5));
            z.push_back(static_cast<std::uint8_t>(s.next_double() < 0.5));
        }
        const double dxy = separation_metric(x, y).distance;
        const double dyx = separation_metric(y, x).distance;
        const double dxz = separation_metric(x, z).distance;
        const double dzy = separation_metric(z, y).distance;
        CHECK(dxy == dyx);
        CHECK(dxy <= std::max(dxz, dzy));
    }
}

TEST_CASE("spec validation and primitivity") {
    CHECK(SubshiftSpec::full_shift(2).primitive());
    CHECK(SubshiftSpec::golden_mean().primitive());
    // pure 2-cycle: irreducible but period 2
    const SubshiftSpec cyc(2, {0, 1, 1, 0});
    CHECK_FALSE(cyc.primitive());
    // zero row rejected
    CHECK_THROWS_AS(SubshiftSpec(2, {1, 1, 0, 0}), InputError);
    CHECK_THROWS_AS(SubshiftSpec(1, {1}), InputError);
}
