#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

#include "mmfs/chromosome.hpp"
#include "mmfs/rng.hpp"

namespace mmfs {

struct VariationConfig {
    double crossover_prob = 0.2;     // rho_crossover
    double mutation_prob = 0.1;      // rho_mutation
    double per_gene_flip_prob = 0.0; // 0 means 1/length at call time
    double per_gene_shuffle_prob = 0.1;
    double binomial_mix_prob = 0.5;

    void validate() const {
        if (crossover_prob + mutation_prob > 1.0 + 1e-12)
            throw std::invalid_argument("VariationConfig: crossover_prob + mutation_prob > 1");
    }
};

/// Each offspring gene taken from p2 with probability mix_prob, else p1.
BinaryChromosome binomial_crossover(const BinaryChromosome& p1, const BinaryChromosome& p2,
                                    double mix_prob, Rng& rng);

/// Independent per-gene bit flips. flip_prob <= 0 means 1/length.
BinaryChromosome bitflip_mutation(const BinaryChromosome& p, double flip_prob, Rng& rng);

/// Genes strictly between two uniform cut points come from p2.
IntegerChromosome two_point_crossover(const IntegerChromosome& p1, const IntegerChromosome& p2,
                                      Rng& rng);

/// Each gene swaps with a uniformly chosen partner with probability
/// shuffle_prob; the gene multiset is preserved.
IntegerChromosome shuffle_mutation(const IntegerChromosome& p, double shuffle_prob, Rng& rng);

/// One offspring per loop turn: crossover with prob rho_c, mutation with prob
/// rho_m, otherwise a verbatim copy of a random parent. Returns R = P ++ Q
/// with |Q| = |P|.
template <typename Chrom>
std::vector<Chrom> crossover_or_mutation(
    const std::vector<Chrom>& parents, const VariationConfig& cfg, Rng& rng,
    const std::function<Chrom(const Chrom&, const Chrom&, Rng&)>& crossover,
    const std::function<Chrom(const Chrom&, Rng&)>& mutate) {
    if (parents.empty()) throw std::invalid_argument("crossover_or_mutation: empty parents");
    cfg.validate();

    std::vector<Chrom> combined = parents;
    combined.reserve(2 * parents.size());
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<std::size_t> pick(0, parents.size() - 1);

    for (std::size_t i = 0; i < parents.size(); ++i) {
        const double r = unit(rng);
        if (r < cfg.crossover_prob) {
            std::size_t a = pick(rng);
            std::size_t b = pick(rng);
            if (parents.size() > 1)
                while (b == a) b = pick(rng);
            combined.push_back(crossover(parents[a], parents[b], rng));
        } else if (r < cfg.crossover_prob + cfg.mutation_prob) {
            combined.push_back(mutate(parents[pick(rng)], rng));
        } else {
            combined.push_back(parents[pick(rng)]);
        }
    }
    return combined;
}

}  // namespace mmfs
