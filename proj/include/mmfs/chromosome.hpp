#pragma once

#include <cstdint>
#include <vector>

namespace mmfs {

/// Feature mask over one view; 1 = feature selected.
struct BinaryChromosome {
    std::vector<std::uint8_t> bits;

    std::size_t size() const { return bits.size(); }
    int popcount() const {
        int c = 0;
        for (auto b : bits) c += b != 0;
        return c;
    }
    friend bool operator==(const BinaryChromosome&, const BinaryChromosome&) = default;
};

/// One gene per view, each in {0..5}, indexing a mask in that view's
/// solution set (0 = exclude the view).
struct IntegerChromosome {
    std::vector<std::uint8_t> genes;

    std::size_t size() const { return genes.size(); }
    friend bool operator==(const IntegerChromosome&, const IntegerChromosome&) = default;
};

inline constexpr int kSolutionSetSize = 6;  // z_0..z_5 per view

}  // namespace mmfs
