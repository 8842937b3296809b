#include "mmfs/moo.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace mmfs {

bool dominates(const Fitness& a, const Fitness& b) {
    const bool no_worse = a.error <= b.error && a.feature_count <= b.feature_count;
    const bool better = a.error < b.error || a.feature_count < b.feature_count;
    return no_worse && better;
}

std::vector<std::vector<std::size_t>> fast_nondominated_sort(const std::vector<Fitness>& population) {
    if (population.empty()) throw std::invalid_argument("fast_nondominated_sort: empty population");
    const std::size_t n = population.size();
    std::vector<int> domination_count(n, 0);
    std::vector<std::vector<std::size_t>> dominated(n);
    std::vector<std::vector<std::size_t>> fronts(1);

    for (std::size_t p = 0; p < n; ++p) {
        for (std::size_t q = 0; q < n; ++q) {
            if (p == q) continue;
            if (dominates(population[p], population[q])) {
                dominated[p].push_back(q);
            } else if (dominates(population[q], population[p])) {
                ++domination_count[p];
            }
        }
        if (domination_count[p] == 0) fronts[0].push_back(p);
    }

    std::size_t i = 0;
    while (!fronts[i].empty()) {
        std::vector<std::size_t> next;
        for (std::size_t p : fronts[i]) {
            for (std::size_t q : dominated[p]) {
                if (--domination_count[q] == 0) next.push_back(q);
            }
        }
        ++i;
        fronts.push_back(std::move(next));
    }
    fronts.pop_back();  // trailing empty front
    return fronts;
}

std::vector<double> crowding_distance(const std::vector<Fitness>& front) {
    if (front.empty()) throw std::invalid_argument("crowding_distance: empty front");
    const std::size_t n = front.size();
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> dist(n, 0.0);

    const auto objective = [&](std::size_t idx, int m) {
        return m == 0 ? front[idx].error : static_cast<double>(front[idx].feature_count);
    };

    // Degenerate front: a single point in objective space protects everyone.
    bool all_equal = true;
    for (std::size_t i = 1; i < n && all_equal; ++i)
        all_equal = front[i] == front[0];
    if (all_equal) return std::vector<double>(n, inf);

    for (int m = 0; m < 2; ++m) {
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return objective(a, m) < objective(b, m);
        });
        const double range = objective(order.back(), m) - objective(order.front(), m);
        dist[order.front()] = inf;
        dist[order.back()] = inf;
        if (range <= 0.0) continue;  // interior points contribute 0 here
        for (std::size_t i = 1; i + 1 < n; ++i) {
            const std::size_t idx = order[i];
            if (dist[idx] == inf) continue;
            dist[idx] += (objective(order[i + 1], m) - objective(order[i - 1], m)) / range;
        }
    }
    return dist;
}

Ranking rank_population(const std::vector<Fitness>& population) {
    Ranking ranking;
    ranking.fronts = fast_nondominated_sort(population);
    ranking.front_rank.assign(population.size(), 0);
    ranking.crowding.assign(population.size(), 0.0);
    for (std::size_t f = 0; f < ranking.fronts.size(); ++f) {
        std::vector<Fitness> front_fit;
        front_fit.reserve(ranking.fronts[f].size());
        for (std::size_t idx : ranking.fronts[f]) front_fit.push_back(population[idx]);
        const auto dist = crowding_distance(front_fit);
        for (std::size_t i = 0; i < ranking.fronts[f].size(); ++i) {
            const std::size_t idx = ranking.fronts[f][i];
            ranking.front_rank[idx] = static_cast<int>(f) + 1;
            ranking.crowding[idx] = dist[i];
        }
    }
    return ranking;
}

namespace {

// Rank comparison of Eq.-style tournament; ties on both resolved by coin flip.
template <typename RankOf, typename CrowdOf>
std::size_t tournament(std::size_t t, std::size_t u, RankOf rank_of, CrowdOf crowd_of, Rng& rng) {
    if (rank_of(t) < rank_of(u)) return t;
    if (rank_of(u) < rank_of(t)) return u;
    if (crowd_of(t) > crowd_of(u)) return t;
    if (crowd_of(u) > crowd_of(t)) return u;
    return std::uniform_int_distribution<int>(0, 1)(rng) == 0 ? t : u;
}

}  // namespace

std::size_t tournament_select_index(const Ranking& ranking, std::size_t population_size, Rng& rng) {
    std::uniform_int_distribution<std::size_t> pick(0, population_size - 1);
    const std::size_t t = pick(rng);
    const std::size_t u = pick(rng);
    return tournament(
        t, u, [&](std::size_t i) { return ranking.front_rank[i]; },
        [&](std::size_t i) { return ranking.crowding[i]; }, rng);
}

RankedIndividual tournament_select(const std::vector<RankedIndividual>& population, Rng& rng) {
    if (population.empty()) throw std::invalid_argument("tournament_select: empty population");
    std::uniform_int_distribution<std::size_t> pick(0, population.size() - 1);
    const std::size_t t = pick(rng);
    const std::size_t u = pick(rng);
    const std::size_t w = tournament(
        t, u, [&](std::size_t i) { return population[i].front_rank; },
        [&](std::size_t i) { return population[i].crowding; }, rng);
    return population[w];
}

std::vector<std::size_t> environmental_select_indices(const std::vector<Fitness>& combined,
                                                      std::size_t target_size) {
    if (combined.size() < target_size)
        throw std::invalid_argument("environmental_selection: target_size exceeds population");
    std::vector<std::size_t> selected;
    selected.reserve(target_size);
    const auto fronts = fast_nondominated_sort(combined);
    for (const auto& front : fronts) {
        if (selected.size() + front.size() <= target_size) {
            selected.insert(selected.end(), front.begin(), front.end());
            if (selected.size() == target_size) break;
            continue;
        }
        // Truncate the overflowing front by descending crowding.
        std::vector<Fitness> front_fit;
        front_fit.reserve(front.size());
        for (std::size_t idx : front) front_fit.push_back(combined[idx]);
        const auto dist = crowding_distance(front_fit);
        std::vector<std::size_t> order(front.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return dist[a] > dist[b]; });
        const std::size_t need = target_size - selected.size();
        for (std::size_t i = 0; i < need; ++i) selected.push_back(front[order[i]]);
        break;
    }
    return selected;
}

std::vector<RankedIndividual> environmental_selection(const std::vector<RankedIndividual>& combined,
                                                      std::size_t target_size) {
    std::vector<Fitness> fits;
    fits.reserve(combined.size());
    for (const auto& ind : combined) fits.push_back(ind.fitness);
    const auto idx = environmental_select_indices(fits, target_size);

    std::vector<Fitness> kept_fits;
    kept_fits.reserve(idx.size());
    for (std::size_t i : idx) kept_fits.push_back(combined[i].fitness);
    const auto ranking = rank_population(kept_fits);

    std::vector<RankedIndividual> out(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i) {
        out[i].fitness = kept_fits[i];
        out[i].front_rank = ranking.front_rank[i];
        out[i].crowding = ranking.crowding[i];
    }
    return out;
}

}  // namespace mmfs
