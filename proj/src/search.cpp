#include "mmfs/search.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <thread>

namespace mmfs {

void NicheConfig::validate() const {
    if (n_niches < 1) throw std::invalid_argument("NicheConfig: n_niches must be >= 1");
    if (migration_fraction <= 0.0 || migration_fraction >= 1.0)
        throw std::invalid_argument("NicheConfig: migration_fraction must lie in (0,1)");
    if (similarity_threshold <= 0.0 || similarity_threshold >= 1.0)
        throw std::invalid_argument("NicheConfig: similarity_threshold must lie in (0,1)");
    if (repair_prob <= 0.0 || repair_prob > 1.0)
        throw std::invalid_argument("NicheConfig: repair_prob must lie in (0,1]");
    ivfs_variation.validate();
    bvfs_variation.validate();
}

std::pair<int, int> NicheConfig::ivfs_schedule(int view_dim) const {
    int pop = ivfs_pop, gen = ivfs_gen;
    if (pop <= 0) pop = view_dim < 100 ? 100 : 200;
    if (gen <= 0) gen = view_dim < 100 ? 500 : 1000;
    return {pop, gen};
}

std::pair<int, int> NicheConfig::bvfs_schedule(int view_count) const {
    int pop = bvfs_pop, gen = bvfs_gen;
    if (pop <= 0) pop = view_count > 5 ? 100 : 50;
    if (gen <= 0) gen = view_count > 5 ? 600 : 300;
    return {pop, gen};
}

int NicheConfig::migration_period(int gen) const {
    if (migration_interval > 0) return migration_interval;
    return std::max(1, static_cast<int>(std::lround(0.05 * gen)));
}

BinaryChromosome repair(const BinaryChromosome& chromosome, Rng& rng) {
    if (chromosome.popcount() > 0) return chromosome;
    BinaryChromosome fixed = chromosome;
    std::uniform_int_distribution<std::size_t> pick(0, fixed.bits.size() - 1);
    fixed.bits[pick(rng)] = 1;
    return fixed;
}

double jaccard_similarity(const std::vector<BinaryChromosome>& population) {
    if (population.size() < 2)
        throw std::invalid_argument("jaccard_similarity: need at least two individuals");
    double sum = 0.0;
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < population.size(); ++i) {
        for (std::size_t j = i + 1; j < population.size(); ++j) {
            const auto& a = population[i].bits;
            const auto& b = population[j].bits;
            int inter = 0, uni = 0;
            for (std::size_t g = 0; g < a.size(); ++g) {
                inter += a[g] & b[g];
                uni += a[g] | b[g];
            }
            sum += uni == 0 ? 1.0 : static_cast<double>(inter) / uni;
            ++pairs;
        }
    }
    return sum / static_cast<double>(pairs);
}

std::vector<BinaryChromosome> diversify(const std::vector<BinaryChromosome>& population,
                                        const NicheConfig& cfg, Rng& rng) {
    if (population.size() < 2) return population;
    if (jaccard_similarity(population) <= cfg.similarity_threshold) return population;

    std::vector<BinaryChromosome> out = population;
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<std::size_t> pick(0, population.size() - 1);
    for (std::size_t i = 0; i < out.size(); ++i) {
        // Only individuals that duplicate an earlier one get regenerated, so
        // the current best survives intact.
        bool duplicate = false;
        for (std::size_t j = 0; j < i && !duplicate; ++j) duplicate = out[i].bits == out[j].bits;
        if (!duplicate) continue;
        BinaryChromosome fresh = out[i];
        if (unit(rng) < cfg.repair_prob) {
            std::size_t a = pick(rng), b = pick(rng);
            fresh = binomial_crossover(population[a], population[b],
                                       cfg.ivfs_variation.binomial_mix_prob, rng);
        }
        if (unit(rng) < cfg.repair_prob)
            fresh = bitflip_mutation(fresh, cfg.ivfs_variation.per_gene_flip_prob, rng);
        out[i] = repair(fresh, rng);
    }
    return out;
}

namespace {

// Indices ordered best-first: front rank ascending, crowding descending.
std::vector<std::size_t> quality_order(const std::vector<ScoredMask>& pop) {
    std::vector<Fitness> fits(pop.size());
    for (std::size_t i = 0; i < pop.size(); ++i) fits[i] = pop[i].fit;
    const Ranking ranking = rank_population(fits);
    std::vector<std::size_t> order(pop.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (ranking.front_rank[a] != ranking.front_rank[b])
            return ranking.front_rank[a] < ranking.front_rank[b];
        return ranking.crowding[a] > ranking.crowding[b];
    });
    return order;
}

std::size_t best_index(const std::vector<ScoredMask>& pop) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < pop.size(); ++i) {
        const Fitness& a = pop[i].fit;
        const Fitness& b = pop[best].fit;
        if (a.error < b.error || (a.error == b.error && a.feature_count < b.feature_count)) best = i;
    }
    return best;
}

}  // namespace

std::vector<std::vector<ScoredMask>> migrate(std::vector<std::vector<ScoredMask>> niches,
                                             double fraction) {
    if (niches.size() < 2) return niches;
    const std::size_t pop = niches[0].size();
    for (const auto& n : niches)
        if (n.size() != pop) throw std::invalid_argument("migrate: unequal population sizes");
    const std::size_t count = static_cast<std::size_t>(std::lround(fraction * pop));
    if (count == 0) return niches;

    // Tops rotate forward into the next niche's bottom slots; the displaced
    // bottoms rotate backward into the vacated top slots. The union multiset
    // across niches is therefore a permutation of the input.
    const std::size_t N = niches.size();
    std::vector<std::vector<std::size_t>> orders(N);
    for (std::size_t n = 0; n < N; ++n) orders[n] = quality_order(niches[n]);
    auto result = niches;
    for (std::size_t n = 0; n < N; ++n) {
        const std::size_t prev = (n + N - 1) % N;
        const std::size_t next = (n + 1) % N;
        for (std::size_t i = 0; i < count; ++i) {
            result[n][orders[n][pop - 1 - i]] = niches[prev][orders[prev][i]];
            result[n][orders[n][i]] = niches[next][orders[next][pop - 1 - i]];
        }
    }
    return result;
}

void MigrationRing::push(Slot& slot, std::vector<ScoredMask> msg) {
    {
        std::lock_guard<std::mutex> lock(slot.m);
        if (aborted_) throw std::runtime_error("migration ring aborted");
        slot.q.push_back(std::move(msg));
    }
    slot.cv.notify_one();
}

std::vector<ScoredMask> MigrationRing::pop(Slot& slot) {
    std::unique_lock<std::mutex> lock(slot.m);
    slot.cv.wait(lock, [&] { return aborted_ || !slot.q.empty(); });
    if (slot.q.empty()) throw std::runtime_error("migration ring aborted");
    auto msg = std::move(slot.q.front());
    slot.q.pop_front();
    return msg;
}

void MigrationRing::send_forward(int to, std::vector<ScoredMask> migrants) {
    push(forward_.at(static_cast<std::size_t>(to)), std::move(migrants));
}

void MigrationRing::send_backward(int to, std::vector<ScoredMask> displaced) {
    push(backward_.at(static_cast<std::size_t>(to)), std::move(displaced));
}

std::vector<ScoredMask> MigrationRing::recv_forward(int at) {
    return pop(forward_.at(static_cast<std::size_t>(at)));
}

std::vector<ScoredMask> MigrationRing::recv_backward(int at) {
    return pop(backward_.at(static_cast<std::size_t>(at)));
}

void MigrationRing::abort() {
    for (auto* group : {&forward_, &backward_}) {
        for (auto& slot : *group) {
            {
                std::lock_guard<std::mutex> lock(slot.m);
                aborted_ = true;
            }
            slot.cv.notify_all();
        }
    }
}

namespace {

// Fills in fitness for every individual, consulting the niche-local memo and
// batching the misses through the parallel evaluator.
void evaluate_masks(const Eigen::MatrixXd& X, const Eigen::VectorXi& y, int class_count,
                    std::vector<ScoredMask>& pop, const FoldPlan& plan, const NicheConfig& cfg,
                    FitnessCache& cache, std::size_t& evaluations, std::size_t first) {
    std::vector<std::size_t> miss_idx;
    std::vector<std::vector<std::uint8_t>> miss_masks;
    for (std::size_t i = first; i < pop.size(); ++i) {
        pop[i].fit.feature_count = pop[i].chrom.popcount();
        if (const auto hit = cache.lookup(pop[i].chrom.bits)) {
            pop[i].fit.error = *hit;
        } else {
            miss_idx.push_back(i);
            miss_masks.push_back(pop[i].chrom.bits);
        }
    }
    if (miss_masks.empty()) return;
    const auto errors = cv_error_batch(X, y, class_count, miss_masks, plan, cfg.eval, cfg.eval_mode);
    for (std::size_t m = 0; m < miss_idx.size(); ++m) {
        pop[miss_idx[m]].fit.error = errors[m];
        cache.insert(miss_masks[m], errors[m]);
    }
    evaluations += miss_masks.size();
}

std::vector<Fitness> fitness_of(const std::vector<ScoredMask>& pop) {
    std::vector<Fitness> fits(pop.size());
    for (std::size_t i = 0; i < pop.size(); ++i) fits[i] = pop[i].fit;
    return fits;
}

}  // namespace

IvfsResult run_ivfs(const Eigen::MatrixXd& view, const Eigen::VectorXi& labels, int class_count,
                    const FoldPlan& plan, const NicheConfig& cfg, int niche_id, int view_id,
                    MigrationRing* ring) {
    cfg.validate();
    const int k_v = static_cast<int>(view.cols());
    if (k_v < 1) throw std::invalid_argument("run_ivfs: view has no features");
    const auto [pop_size, gen] = cfg.ivfs_schedule(k_v);
    const int g_m = cfg.migration_period(gen);
    const double density =
        cfg.init_density > 0.0 ? cfg.init_density : std::min(0.5, 10.0 / k_v);

    Rng rng = make_rng(derive_seed(cfg.seed, 0x1f5ULL, niche_id, view_id));
    FitnessCache cache;
    IvfsResult result;

    std::vector<ScoredMask> pop(pop_size);
    std::bernoulli_distribution coin(density);
    for (auto& ind : pop) {
        ind.chrom.bits.resize(k_v);
        for (auto& bit : ind.chrom.bits) bit = coin(rng) ? 1 : 0;
        ind.chrom = repair(ind.chrom, rng);
    }
    evaluate_masks(view, labels, class_count, pop, plan, cfg, cache, result.evaluations, 0);

    const int snap_gens[3] = {static_cast<int>(std::ceil(0.3 * gen)),
                              static_cast<int>(std::ceil(0.6 * gen)),
                              static_cast<int>(std::ceil(0.9 * gen))};
    BinaryChromosome snapshots[3];

    const auto crossover = [&](const BinaryChromosome& a, const BinaryChromosome& b, Rng& r) {
        return binomial_crossover(a, b, cfg.ivfs_variation.binomial_mix_prob, r);
    };
    const auto mutate = [&](const BinaryChromosome& a, Rng& r) {
        return bitflip_mutation(a, cfg.ivfs_variation.per_gene_flip_prob, r);
    };

    for (int g = 1; g <= gen; ++g) {
        std::vector<BinaryChromosome> parents(pop.size());
        for (std::size_t i = 0; i < pop.size(); ++i) parents[i] = pop[i].chrom;
        auto combined_chroms =
            crossover_or_mutation<BinaryChromosome>(parents, cfg.ivfs_variation, rng, crossover, mutate);
        std::vector<ScoredMask> combined(combined_chroms.size());
        for (std::size_t i = 0; i < combined.size(); ++i) {
            combined[i].chrom = i < pop.size() ? combined_chroms[i]
                                               : repair(combined_chroms[i], rng);
            if (i < pop.size()) combined[i].fit = pop[i].fit;  // parents keep cached fitness
        }
        evaluate_masks(view, labels, class_count, combined, plan, cfg, cache, result.evaluations,
                       pop.size());

        const auto keep = environmental_select_indices(fitness_of(combined), pop.size());
        std::vector<ScoredMask> next;
        next.reserve(pop.size());
        for (std::size_t idx : keep) next.push_back(combined[idx]);
        pop = std::move(next);

        std::vector<BinaryChromosome> chroms(pop.size());
        for (std::size_t i = 0; i < pop.size(); ++i) chroms[i] = pop[i].chrom;
        auto freshened = diversify(chroms, cfg, rng);
        bool changed = false;
        for (std::size_t i = 0; i < pop.size(); ++i) {
            if (freshened[i].bits != pop[i].chrom.bits) {
                pop[i].chrom = std::move(freshened[i]);
                pop[i].fit = {};
                changed = true;
            }
        }
        if (changed)
            evaluate_masks(view, labels, class_count, pop, plan, cfg, cache, result.evaluations, 0);

        if (ring && cfg.n_niches > 1 && g % g_m == 0) {
            const std::size_t count =
                static_cast<std::size_t>(std::lround(cfg.migration_fraction * pop.size()));
            if (count > 0) {
                // Tops travel forward around the ring; the individuals they
                // displace travel backward into the vacated elite slots, so the
                // overall multiset across niches is conserved.
                const int next = (niche_id + 1) % cfg.n_niches;
                const int prev = (niche_id + cfg.n_niches - 1) % cfg.n_niches;
                const auto order = quality_order(pop);
                std::vector<ScoredMask> tops, bottoms;
                for (std::size_t i = 0; i < count; ++i) {
                    tops.push_back(pop[order[i]]);
                    bottoms.push_back(pop[order[pop.size() - 1 - i]]);
                }
                ring->send_forward(next, std::move(tops));
                ring->send_backward(prev, std::move(bottoms));
                const auto in_tops = ring->recv_forward(niche_id);
                const auto in_bottoms = ring->recv_backward(niche_id);
                for (std::size_t i = 0; i < count; ++i) {
                    pop[order[pop.size() - 1 - i]] = in_tops.at(i);
                    pop[order[i]] = in_bottoms.at(i);
                }
            }
        }

        const std::size_t best = best_index(pop);
        const double prev_best =
            result.best_f1.empty() ? std::numeric_limits<double>::infinity() : result.best_f1.back();
        result.best_f1.push_back(std::min(prev_best, pop[best].fit.error));
        double mean = 0.0;
        for (const auto& ind : pop) mean += ind.fit.error;
        result.mean_f1.push_back(mean / static_cast<double>(pop.size()));
        {
            std::vector<BinaryChromosome> snap_chroms(pop.size());
            for (std::size_t i = 0; i < pop.size(); ++i) snap_chroms[i] = pop[i].chrom;
            result.similarity.push_back(jaccard_similarity(snap_chroms));
        }
        for (int s = 0; s < 3; ++s)
            if (g == snap_gens[s]) snapshots[s] = pop[best].chrom;
    }

    ViewSolutionSet& sols = result.solutions;
    sols.masks.resize(kSolutionSetSize);
    sols.masks[0].bits.assign(k_v, 0);                       // z_0: view excluded
    sols.masks[1] = pop[best_index(pop)].chrom;              // z_1: best accuracy

    BinaryChromosome frequent;                               // z_2: majority vote
    frequent.bits.assign(k_v, 0);
    for (int j = 0; j < k_v; ++j) {
        int votes = 0;
        for (const auto& ind : pop) votes += ind.chrom.bits[j];
        frequent.bits[j] = 2 * votes > static_cast<int>(pop.size()) ? 1 : 0;
    }
    sols.masks[2] = repair(frequent, rng);

    for (int s = 0; s < 3; ++s) {
        if (snapshots[s].bits.empty()) snapshots[s] = sols.masks[1];
        sols.masks[3 + s] = repair(snapshots[s], rng);
    }
    return result;
}

std::vector<std::uint8_t> decode(const IntegerChromosome& chromosome,
                                 const std::vector<ViewSolutionSet>& solution_sets) {
    if (chromosome.genes.size() != solution_sets.size())
        throw std::invalid_argument("decode: chromosome length != view count");
    std::vector<std::uint8_t> mask;
    bool any = false;
    for (std::size_t v = 0; v < solution_sets.size(); ++v) {
        const int gene = chromosome.genes[v];
        if (gene < 0 || gene >= kSolutionSetSize)
            throw std::invalid_argument("decode: gene " + std::to_string(gene) + " out of range");
        const auto& bits = solution_sets[v].masks.at(static_cast<std::size_t>(gene)).bits;
        mask.insert(mask.end(), bits.begin(), bits.end());
        any = any || std::any_of(bits.begin(), bits.end(), [](std::uint8_t b) { return b != 0; });
    }
    if (!any) {
        // Deterministic fallback: first view's best mask keeps the chromosome feasible.
        IntegerChromosome fixed = chromosome;
        fixed.genes[0] = 1;
        return decode(fixed, solution_sets);
    }
    return mask;
}

BvfsResult run_bvfs(const Eigen::MatrixXd& X, const Eigen::VectorXi& labels, int class_count,
                    const std::vector<ViewSolutionSet>& solution_sets, const FoldPlan& plan,
                    const NicheConfig& cfg, int niche_id) {
    cfg.validate();
    const int V = static_cast<int>(solution_sets.size());
    if (V < 1) throw std::invalid_argument("run_bvfs: no solution sets");
    const auto [pop_size, gen] = cfg.bvfs_schedule(V);

    Rng rng = make_rng(derive_seed(cfg.seed, 0xb5f5ULL, niche_id));
    FitnessCache cache;
    BvfsResult result;

    struct ScoredGenes {
        IntegerChromosome genes;
        std::vector<std::uint8_t> mask;
        Fitness fit;
    };
    const auto evaluate = [&](std::vector<ScoredGenes>& pop, std::size_t first) {
        std::vector<std::size_t> miss_idx;
        std::vector<std::vector<std::uint8_t>> miss_masks;
        for (std::size_t i = first; i < pop.size(); ++i) {
            pop[i].mask = decode(pop[i].genes, solution_sets);
            pop[i].fit.feature_count = static_cast<int>(
                std::count(pop[i].mask.begin(), pop[i].mask.end(), std::uint8_t{1}));
            if (const auto hit = cache.lookup(pop[i].mask)) {
                pop[i].fit.error = *hit;
            } else {
                miss_idx.push_back(i);
                miss_masks.push_back(pop[i].mask);
            }
        }
        if (miss_masks.empty()) return;
        const auto errors =
            cv_error_batch(X, labels, class_count, miss_masks, plan, cfg.eval, cfg.eval_mode);
        for (std::size_t m = 0; m < miss_idx.size(); ++m) {
            pop[miss_idx[m]].fit.error = errors[m];
            cache.insert(miss_masks[m], errors[m]);
        }
        result.evaluations += miss_masks.size();
    };

    std::vector<ScoredGenes> pop(pop_size);
    std::uniform_int_distribution<int> gene_dist(0, kSolutionSetSize - 1);
    for (auto& ind : pop) {
        ind.genes.genes.resize(V);
        for (auto& g : ind.genes.genes) g = static_cast<std::uint8_t>(gene_dist(rng));
    }
    evaluate(pop, 0);

    const auto crossover = [&](const IntegerChromosome& a, const IntegerChromosome& b, Rng& r) {
        return V >= 2 ? two_point_crossover(a, b, r) : a;
    };
    const auto mutate = [&](const IntegerChromosome& a, Rng& r) {
        auto child = shuffle_mutation(a, cfg.bvfs_variation.per_gene_shuffle_prob, r);
        // Shuffles only permute genes; a point refresh lets new index values appear.
        std::uniform_int_distribution<int> pos(0, V - 1);
        child.genes[static_cast<std::size_t>(pos(r))] = static_cast<std::uint8_t>(gene_dist(r));
        return child;
    };

    for (int g = 1; g <= gen; ++g) {
        std::vector<IntegerChromosome> parents(pop.size());
        for (std::size_t i = 0; i < pop.size(); ++i) parents[i] = pop[i].genes;
        auto combined_genes = crossover_or_mutation<IntegerChromosome>(parents, cfg.bvfs_variation,
                                                                       rng, crossover, mutate);
        std::vector<ScoredGenes> combined(combined_genes.size());
        for (std::size_t i = 0; i < combined.size(); ++i) {
            combined[i].genes = std::move(combined_genes[i]);
            if (i < pop.size()) {
                combined[i].mask = pop[i].mask;
                combined[i].fit = pop[i].fit;
            }
        }
        evaluate(combined, pop.size());

        std::vector<Fitness> fits(combined.size());
        for (std::size_t i = 0; i < combined.size(); ++i) fits[i] = combined[i].fit;
        const auto keep = environmental_select_indices(fits, pop.size());
        std::vector<ScoredGenes> next;
        next.reserve(pop.size());
        for (std::size_t idx : keep) next.push_back(combined[idx]);
        pop = std::move(next);

        std::size_t best = 0;
        for (std::size_t i = 1; i < pop.size(); ++i) {
            const Fitness &a = pop[i].fit, &b = pop[best].fit;
            if (a.error < b.error || (a.error == b.error && a.feature_count < b.feature_count))
                best = i;
        }
        result.best_f1.push_back(pop[best].fit.error);
        if (g == gen) {
            result.genes = pop[best].genes;
            result.mask = pop[best].mask;
            result.fitness = pop[best].fit;
        }
    }
    return result;
}

RunReport run_mmfs_ga(const MultiViewDataset& dataset, const NicheConfig& cfg) {
    cfg.validate();
    dataset.validate();
    const FoldPlan plan = make_fold_plan(dataset.labels, cfg.eval.n_folds, cfg.seed);
    const Eigen::MatrixXd X = concatenate_views(dataset);

    RunReport report;
    report.plan = plan;
    report.niches.resize(static_cast<std::size_t>(cfg.n_niches));

    MigrationRing ring(cfg.n_niches);
    std::vector<std::string> failures(static_cast<std::size_t>(cfg.n_niches));

    const auto worker = [&](int n) {
        std::string phase = "setup";
        try {
            const auto start = std::chrono::steady_clock::now();
            NicheReport& niche = report.niches[static_cast<std::size_t>(n)];
            niche.niche_id = n;
            for (int v = 0; v < dataset.view_count(); ++v) {
                phase = "view stage, view " + std::to_string(v);
                niche.ivfs.push_back(run_ivfs(dataset.views[v], dataset.labels,
                                              dataset.class_count, plan, cfg, n, v,
                                              cfg.n_niches > 1 ? &ring : nullptr));
                niche.solution_sets.push_back(niche.ivfs.back().solutions);
            }
            phase = "combination stage";
            niche.bvfs = run_bvfs(X, dataset.labels, dataset.class_count, niche.solution_sets,
                                  plan, cfg, n);
            niche.best_genes = niche.bvfs.genes;
            niche.best_mask = niche.bvfs.mask;
            niche.fitness = niche.bvfs.fitness;
            for (const auto& m : split_mask(dataset, niche.best_mask))
                niche.selected_per_view.push_back(
                    static_cast<int>(std::count(m.begin(), m.end(), std::uint8_t{1})));
            niche.seconds =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        } catch (const std::exception& e) {
            failures[static_cast<std::size_t>(n)] =
                "niche " + std::to_string(n) + " (" + phase + "): " + e.what();
            ring.abort();
        }
    };

    std::vector<std::thread> threads;
    for (int n = 1; n < cfg.n_niches; ++n) threads.emplace_back(worker, n);
    worker(0);
    for (auto& t : threads) t.join();

    for (const auto& failure : failures)
        if (!failure.empty()) throw std::runtime_error(failure);

    int best = 0;
    for (int n = 1; n < cfg.n_niches; ++n) {
        const Fitness& a = report.niches[static_cast<std::size_t>(n)].fitness;
        const Fitness& b = report.niches[static_cast<std::size_t>(best)].fitness;
        if (a.error < b.error || (a.error == b.error && a.feature_count < b.feature_count)) best = n;
    }
    report.best_niche = best;
    report.best_mask = report.niches[static_cast<std::size_t>(best)].best_mask;
    report.best_fitness = report.niches[static_cast<std::size_t>(best)].fitness;
    return report;
}

}  // namespace mmfs
