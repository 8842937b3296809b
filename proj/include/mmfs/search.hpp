#pragma once

#include <condition_variable>
#include <cstdint>
#include <deque>
#include <mutex>
#include <vector>

#include "mmfs/chromosome.hpp"
#include "mmfs/data.hpp"
#include "mmfs/moo.hpp"
#include "mmfs/variation.hpp"

namespace mmfs {

struct NicheConfig {
    int n_niches = 6;
    int migration_interval = 0;       // 0 -> max(1, round(0.05 * gen))
    double migration_fraction = 0.25;
    int ivfs_pop = 0;                 // 0 -> schedule from view dimension
    int ivfs_gen = 0;
    int bvfs_pop = 0;                 // 0 -> schedule from view count
    int bvfs_gen = 0;
    VariationConfig ivfs_variation{0.2, 0.1};
    VariationConfig bvfs_variation{0.5, 0.1};
    double similarity_threshold = 0.8;
    double repair_prob = 0.9;
    // Expected fraction of set bits at initialization; 0 means min(0.5, 10/k_v)
    // so the first generation is already sparse on wide views.
    double init_density = 0.0;
    std::uint64_t seed = 0;
    EvalSettings eval;
    ExecMode eval_mode = ExecMode::serial;

    void validate() const;
    std::pair<int, int> ivfs_schedule(int view_dim) const;   // pop, gen
    std::pair<int, int> bvfs_schedule(int view_count) const;
    int migration_period(int gen) const;
};

struct ViewSolutionSet {
    std::vector<BinaryChromosome> masks;  // z_0..z_5; z_0 all-zero
};

struct ScoredMask {
    BinaryChromosome chrom;
    Fitness fit;
};

/// Restores the at-least-one-feature constraint by setting one uniformly
/// chosen gene when the mask is empty.
BinaryChromosome repair(const BinaryChromosome& chromosome, Rng& rng);

/// Mean pairwise Jaccard similarity; a pair of two empty masks counts as
/// identical. Throws on fewer than two individuals.
double jaccard_similarity(const std::vector<BinaryChromosome>& population);

/// When the population is too self-similar, regenerates duplicate individuals
/// from crossover/mutation of random parents. Size preserved.
std::vector<BinaryChromosome> diversify(const std::vector<BinaryChromosome>& population,
                                        const NicheConfig& cfg, Rng& rng);

/// Ring migration: each niche's top fraction (front rank, then crowding) moves
/// into the next niche's bottom slots, and the displaced individuals move
/// backward into the vacated slots. Chromosome multiset conserved.
std::vector<std::vector<ScoredMask>> migrate(std::vector<std::vector<ScoredMask>> niches,
                                             double fraction);

/// Blocking FIFO mailboxes connecting niche workers in a ring. Elites travel
/// forward; the individuals they displace travel backward, so migration stays
/// a permutation across niches.
class MigrationRing {
public:
    explicit MigrationRing(int n_niches) : forward_(n_niches), backward_(n_niches) {}

    void send_forward(int to, std::vector<ScoredMask> migrants);
    void send_backward(int to, std::vector<ScoredMask> displaced);
    std::vector<ScoredMask> recv_forward(int at);   // blocks; throws after abort()
    std::vector<ScoredMask> recv_backward(int at);
    void abort();

private:
    struct Slot {
        std::mutex m;
        std::condition_variable cv;
        std::deque<std::vector<ScoredMask>> q;
    };
    void push(Slot& slot, std::vector<ScoredMask> msg);
    std::vector<ScoredMask> pop(Slot& slot);
    std::vector<Slot> forward_;
    std::vector<Slot> backward_;
    bool aborted_ = false;
};

struct IvfsResult {
    ViewSolutionSet solutions;
    std::vector<double> best_f1;      // per generation
    std::vector<double> mean_f1;
    std::vector<double> similarity;
    std::size_t evaluations = 0;      // cache misses, i.e. classifier fits
};

IvfsResult run_ivfs(const Eigen::MatrixXd& view, const Eigen::VectorXi& labels, int class_count,
                    const FoldPlan& plan, const NicheConfig& cfg, int niche_id, int view_id,
                    MigrationRing* ring = nullptr);

/// Expands a view-combination chromosome into a global mask. Gene 0 excludes
/// the view; an all-empty expansion falls back to z_1 of the first view.
std::vector<std::uint8_t> decode(const IntegerChromosome& chromosome,
                                 const std::vector<ViewSolutionSet>& solution_sets);

struct BvfsResult {
    IntegerChromosome genes;
    std::vector<std::uint8_t> mask;   // decoded global mask
    Fitness fitness;
    std::vector<double> best_f1;
    std::size_t evaluations = 0;
};

BvfsResult run_bvfs(const Eigen::MatrixXd& X, const Eigen::VectorXi& labels, int class_count,
                    const std::vector<ViewSolutionSet>& solution_sets, const FoldPlan& plan,
                    const NicheConfig& cfg, int niche_id);

struct NicheReport {
    int niche_id = 0;
    std::vector<ViewSolutionSet> solution_sets;
    IntegerChromosome best_genes;
    std::vector<std::uint8_t> best_mask;
    Fitness fitness;
    std::vector<int> selected_per_view;
    std::vector<IvfsResult> ivfs;     // one per view (solution sets duplicated)
    BvfsResult bvfs;
    double seconds = 0.0;
};

struct RunReport {
    std::vector<std::uint8_t> best_mask;  // the returned solution
    Fitness best_fitness;
    int best_niche = 0;
    FoldPlan plan;
    std::vector<NicheReport> niches;
};

/// Full two-stage run: one worker per niche, each evolving per-view solution
/// sets and then the view-combination stage; the winner is the niche solution
/// with the best validation error (ties: fewer features, then lower niche id).
RunReport run_mmfs_ga(const MultiViewDataset& dataset, const NicheConfig& cfg);

}  // namespace mmfs
