#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "mmfs/variation.hpp"

using namespace mmfs;

namespace {

BinaryChromosome make_bits(std::initializer_list<int> bits) {
    BinaryChromosome c;
    for (int b : bits) c.bits.push_back(static_cast<std::uint8_t>(b));
    return c;
}

IntegerChromosome make_genes(std::initializer_list<int> genes) {
    IntegerChromosome c;
    for (int g : genes) c.genes.push_back(static_cast<std::uint8_t>(g));
    return c;
}

}  // namespace

TEST_CASE("binomial crossover with identical parents is the identity") {
    Rng rng = make_rng(1);
    const auto m = make_bits({1, 0, 1, 1, 0});
    for (int i = 0; i < 50; ++i) CHECK(binomial_crossover(m, m, 0.5, rng).bits == m.bits);
}

TEST_CASE("binomial crossover genes come from a parent") {
    Rng rng = make_rng(2);
    for (int trial = 0; trial < 200; ++trial) {
        BinaryChromosome p1, p2;
        for (int i = 0; i < 32; ++i) {
            p1.bits.push_back(rng() & 1);
            p2.bits.push_back(rng() & 1);
        }
        const auto child = binomial_crossover(p1, p2, 0.5, rng);
        REQUIRE(child.size() == p1.size());
        for (std::size_t i = 0; i < child.size(); ++i)
            CHECK((child.bits[i] == p1.bits[i] || child.bits[i] == p2.bits[i]));
    }
}

TEST_CASE("binomial crossover popcount concentrates at the mix rate") {
    BinaryChromosome ones, zeros;
    ones.bits.assign(1000, 1);
    zeros.bits.assign(1000, 0);
    Rng rng = make_rng(3);
    int inside = 0;
    const int trials = 1000;
    for (int t = 0; t < trials; ++t) {
        const int pc = binomial_crossover(ones, zeros, 0.5, rng).popcount();
        if (pc >= 400 && pc <= 600) ++inside;
    }
    CHECK(inside >= trials * 99 / 100);
}

TEST_CASE("binomial crossover rejects length mismatch") {
    Rng rng = make_rng(4);
    CHECK_THROWS_AS(binomial_crossover(make_bits({1}), make_bits({1, 0}), 0.5, rng),
                    std::invalid_argument);
}

TEST_CASE("bitflip mutation identity at probability zero is not available; 1/k default") {
    // flip_prob <= 0 falls back to 1/length: expected Hamming distance 1.
    BinaryChromosome p;
    p.bits.assign(64, 0);
    Rng rng = make_rng(5);
    double total = 0.0;
    const int trials = 4000;
    for (int t = 0; t < trials; ++t) {
        const auto child = bitflip_mutation(p, 0.0, rng);
        REQUIRE(child.size() == p.size());
        int dist = 0;
        for (std::size_t i = 0; i < p.size(); ++i) dist += child.bits[i] != p.bits[i];
        total += dist;
    }
    const double mean = total / trials;
    CHECK(mean > 0.8);
    CHECK(mean < 1.2);
}

TEST_CASE("two-point crossover: identical parents, alphabet, and segment structure") {
    Rng rng = make_rng(6);
    const auto p = make_genes({1, 2, 3, 4, 5});
    for (int i = 0; i < 20; ++i) CHECK(two_point_crossover(p, p, rng).genes == p.genes);

    // For length 5 every offspring must be p1 with one contiguous segment of
    // p2; collect the patterns over many draws and check exactly the
    // enumerable set of segments appears.
    const auto p1 = make_genes({0, 0, 0, 0, 0});
    const auto p2 = make_genes({1, 1, 1, 1, 1});
    std::set<std::vector<std::uint8_t>> seen;
    for (int t = 0; t < 5000; ++t) {
        const auto child = two_point_crossover(p1, p2, rng);
        // contiguous block of ones (possibly empty)
        const auto first = std::find(child.genes.begin(), child.genes.end(), 1);
        const auto last = std::find(child.genes.rbegin(), child.genes.rend(), 1);
        if (first != child.genes.end()) {
            for (auto it = first; it != last.base(); ++it) CHECK(*it == 1);
        }
        seen.insert(child.genes);
    }
    // segments [a,b): 15 non-empty + empty = 16 distinct patterns
    CHECK(seen.size() == 16);
}

TEST_CASE("two-point crossover rejects short chromosomes") {
    Rng rng = make_rng(7);
    CHECK_THROWS_AS(two_point_crossover(make_genes({1}), make_genes({2}), rng),
                    std::invalid_argument);
}

TEST_CASE("shuffle mutation preserves the gene multiset") {
    Rng rng = make_rng(8);
    for (int trial = 0; trial < 300; ++trial) {
        IntegerChromosome p;
        for (int i = 0; i < 9; ++i) p.genes.push_back(rng() % 6);
        const auto child = shuffle_mutation(p, 0.3, rng);
        auto a = p.genes, b = child.genes;
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        CHECK(a == b);
    }
}

TEST_CASE("shuffle mutation with zero probability is the identity") {
    Rng rng = make_rng(9);
    const auto p = make_genes({0, 1, 2, 3});
    CHECK(shuffle_mutation(p, 0.0, rng).genes == p.genes);
}

TEST_CASE("shuffle swap step on a pair exchanges the genes") {
    // With two genes the only possible swap partner is the other position, so
    // the first swap step yields (b,a).
    Rng rng = make_rng(10);
    const auto p = make_genes({3, 5});
    const auto child = shuffle_mutation(p, 1.0, rng);
    // both positions fire: (3,5) -> (5,3) -> (3,5); gene multiset unchanged
    auto sorted = child.genes;
    std::sort(sorted.begin(), sorted.end());
    CHECK(sorted == std::vector<std::uint8_t>{3, 5});
}

TEST_CASE("crossover_or_mutation returns parents plus same-size offspring") {
    Rng rng = make_rng(11);
    std::vector<BinaryChromosome> parents(7);
    for (auto& p : parents) {
        p.bits.assign(16, 0);
        for (auto& b : p.bits) b = rng() & 1;
    }
    VariationConfig cfg;
    const auto before = parents;
    const auto combined = crossover_or_mutation<BinaryChromosome>(
        parents, cfg, rng,
        [](const BinaryChromosome& a, const BinaryChromosome& b, Rng& r) {
            return binomial_crossover(a, b, 0.5, r);
        },
        [](const BinaryChromosome& a, Rng& r) { return bitflip_mutation(a, 0.0, r); });
    REQUIRE(combined.size() == 2 * parents.size());
    for (std::size_t i = 0; i < parents.size(); ++i)
        CHECK(combined[i].bits == before[i].bits);  // parents enter R intact
}

TEST_CASE("crossover_or_mutation with zero rates copies parents") {
    Rng rng = make_rng(12);
    std::vector<IntegerChromosome> parents = {make_genes({1, 2, 3}), make_genes({4, 5, 0})};
    VariationConfig cfg;
    cfg.crossover_prob = 0.0;
    cfg.mutation_prob = 0.0;
    const auto combined = crossover_or_mutation<IntegerChromosome>(
        parents, cfg, rng,
        [](const IntegerChromosome& a, const IntegerChromosome&, Rng&) { return a; },
        [](const IntegerChromosome& a, Rng&) { return a; });
    for (std::size_t i = parents.size(); i < combined.size(); ++i) {
        const bool is_copy = combined[i].genes == parents[0].genes ||
                             combined[i].genes == parents[1].genes;
        CHECK(is_copy);
    }
}

TEST_CASE("crossover_or_mutation branch frequencies match the configured rates") {
    Rng rng = make_rng(13);
    VariationConfig cfg;
    cfg.crossover_prob = 0.2;
    cfg.mutation_prob = 0.1;
    int n_cross = 0, n_mut = 0, n_copy = 0;
    const int trials = 10000;
    std::vector<IntegerChromosome> parents = {make_genes({0, 0}), make_genes({0, 0})};
    for (int t = 0; t < trials; ++t) {
        const auto combined = crossover_or_mutation<IntegerChromosome>(
            parents, cfg, rng,
            [](const IntegerChromosome& a, const IntegerChromosome&, Rng&) {
                auto c = a;
                c.genes[0] = 1;  // tag the branch taken
                return c;
            },
            [](const IntegerChromosome& a, Rng&) {
                auto c = a;
                c.genes[0] = 2;
                return c;
            });
        for (std::size_t i = parents.size(); i < combined.size(); ++i) {
            if (combined[i].genes[0] == 1) ++n_cross;
            else if (combined[i].genes[0] == 2) ++n_mut;
            else ++n_copy;
        }
    }
    const int draws = trials * 2;
    const auto within = [&](int observed, double p) {
        const double sigma = std::sqrt(p * (1 - p) * draws);
        return std::abs(observed - p * draws) < 3.5 * sigma;
    };
    CHECK(within(n_cross, 0.2));
    CHECK(within(n_mut, 0.1));
    CHECK(within(n_copy, 0.7));
}

TEST_CASE("crossover_or_mutation rejects an empty parent set") {
    Rng rng = make_rng(14);
    VariationConfig cfg;
    CHECK_THROWS_AS(crossover_or_mutation<BinaryChromosome>(
                        {}, cfg, rng,
                        [](const BinaryChromosome& a, const BinaryChromosome&, Rng&) { return a; },
                        [](const BinaryChromosome& a, Rng&) { return a; }),
                    std::invalid_argument);
}

TEST_CASE("VariationConfig rejects overlapping branch probabilities") {
    VariationConfig cfg;
    cfg.crossover_prob = 0.7;
    cfg.mutation_prob = 0.5;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}
