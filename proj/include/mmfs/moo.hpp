#pragma once

#include <cstddef>
#include <vector>

#include "mmfs/rng.hpp"

namespace mmfs {

/// Objective pair minimized by the search: cross-validated classification
/// error and number of selected features.
struct Fitness {
    double error = 0.0;       // f1, in [0,1]
    int feature_count = 0;    // f2, >= 1 for any feasible chromosome

    friend bool operator==(const Fitness&, const Fitness&) = default;
};

struct RankedIndividual {
    Fitness fitness;
    int front_rank = 0;       // 1-based front index
    double crowding = 0.0;    // +inf on per-objective boundaries
};

/// Pareto dominance: no worse in both objectives, strictly better in one.
bool dominates(const Fitness& a, const Fitness& b);

/// Deb's dominance-count sort. Fronts are index lists into `population`;
/// front 0 of the result is F1. Throws std::invalid_argument on empty input.
std::vector<std::vector<std::size_t>> fast_nondominated_sort(const std::vector<Fitness>& population);

/// Crowding distances for one front. Boundary individuals per objective get
/// +inf; a front that collapses to a single point in objective space is all
/// +inf; otherwise degenerate objectives contribute 0 to interior points.
std::vector<double> crowding_distance(const std::vector<Fitness>& front);

/// Ranks plus crowding for a whole population, index-aligned.
struct Ranking {
    std::vector<std::vector<std::size_t>> fronts;
    std::vector<int> front_rank;     // 1-based
    std::vector<double> crowding;
};

Ranking rank_population(const std::vector<Fitness>& population);

/// Binary tournament between two uniform draws: lower rank wins, then larger
/// crowding, then a fair coin.
std::size_t tournament_select_index(const Ranking& ranking, std::size_t population_size, Rng& rng);
RankedIndividual tournament_select(const std::vector<RankedIndividual>& population, Rng& rng);

/// NSGA-II elitist truncation: whole fronts in rank order, the overflowing
/// front cut by descending crowding. Returns indices into `combined`.
std::vector<std::size_t> environmental_select_indices(const std::vector<Fitness>& combined,
                                                      std::size_t target_size);
std::vector<RankedIndividual> environmental_selection(const std::vector<RankedIndividual>& combined,
                                                      std::size_t target_size);

}  // namespace mmfs
