#include "mmfs/variation.hpp"

#include <algorithm>

namespace mmfs {

BinaryChromosome binomial_crossover(const BinaryChromosome& p1, const BinaryChromosome& p2,
                                    double mix_prob, Rng& rng) {
    if (p1.size() != p2.size())
        throw std::invalid_argument("binomial_crossover: length mismatch");
    BinaryChromosome child = p1;
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (std::size_t i = 0; i < child.size(); ++i) {
        if (unit(rng) < mix_prob) child.bits[i] = p2.bits[i];
    }
    return child;
}

BinaryChromosome bitflip_mutation(const BinaryChromosome& p, double flip_prob, Rng& rng) {
    BinaryChromosome child = p;
    if (child.size() == 0) return child;
    const double prob = flip_prob > 0.0 ? flip_prob : 1.0 / static_cast<double>(child.size());
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (auto& bit : child.bits) {
        if (unit(rng) < prob) bit ^= 1;
    }
    return child;
}

IntegerChromosome two_point_crossover(const IntegerChromosome& p1, const IntegerChromosome& p2,
                                      Rng& rng) {
    if (p1.size() != p2.size())
        throw std::invalid_argument("two_point_crossover: length mismatch");
    if (p1.size() < 2)
        throw std::invalid_argument("two_point_crossover: length < 2");
    std::uniform_int_distribution<std::size_t> cut(0, p1.size());
    std::size_t a = cut(rng);
    std::size_t b = cut(rng);
    if (a > b) std::swap(a, b);
    IntegerChromosome child = p1;
    std::copy(p2.genes.begin() + a, p2.genes.begin() + b, child.genes.begin() + a);
    return child;
}

IntegerChromosome shuffle_mutation(const IntegerChromosome& p, double shuffle_prob, Rng& rng) {
    if (p.size() < 2) throw std::invalid_argument("shuffle_mutation: length < 2");
    IntegerChromosome child = p;
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (std::size_t i = 0; i < child.size(); ++i) {
        if (unit(rng) >= shuffle_prob) continue;
        // Swap with a uniformly chosen other position.
        std::uniform_int_distribution<std::size_t> pick(0, child.size() - 2);
        std::size_t j = pick(rng);
        if (j >= i) ++j;
        std::swap(child.genes[i], child.genes[j]);
    }
    return child;
}

}  // namespace mmfs
