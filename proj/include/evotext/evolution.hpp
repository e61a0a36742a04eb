#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "evotext/classifier.hpp"

namespace evotext {

struct EvoConfig {
    int parents = 2;        // M models selected per iteration
    int splits = 2;         // N label splits / output layers per parent
    int slots = 10;         // K independent hidden layers per model
    int nodes_per_slot = 40;  // H
    int pool_capacity = 8;
    int pool_seed_count = 4;
    int max_iterations = 20;
    int patience = 5;
    std::uint64_t seed = 0;
    DaeConfig dae;            // unsupervised training of seed models
    DaeConfig child_dae;      // warm-start retraining of bred children
    OutputTrainConfig output;

    void validate() const;
};

struct PoolMember {
    EnsembleModel model;
    double fitness = 0.0;  // cached validation accuracy
    std::uint64_t insertion = 0;
};

struct ModelPool {
    std::vector<PoolMember> members;
    std::size_t capacity = 8;
    std::uint64_t next_insertion = 0;

    // Inserts; if over capacity, evicts the worst member (never the best).
    void insert(EnsembleModel model, double fitness);
    const PoolMember& best() const;
    double mean_fitness() const;
};

struct HistoryPoint {
    int iteration = 0;
    double pool_best_val = 0.0;
    double pool_mean_val = 0.0;
    double child_val = 0.0;  // NaN at iteration 0 (seeded pool)
    double best_test = 0.0;  // test accuracy of the current best model
};

struct EvolutionHistory {
    std::vector<HistoryPoint> points;
    double final_test_accuracy = 0.0;
    bool early_stopped = false;
};

struct Corpora {
    std::vector<InputVector> unlabeled;
    std::vector<LabeledExample> train;
    std::vector<LabeledExample> validation;
    std::vector<LabeledExample> test;
    int n_categories = 0;
    int vocab_size = 0;
};

// Node consistency score: for every hidden node position j,
//   s_j = sum over unordered pairs {n, n'} of sum_i w^n_ij w^n'_ij.
// For N=2 this is the single even/odd inner product over categories.
Eigen::VectorXd consistency_scores(const std::vector<Eigen::MatrixXd>& weights);

struct ScoreResult {
    Eigen::MatrixXd scores;                  // slots x nodes_per_slot
    std::vector<OutputLayerParams> outputs;  // the N independently trained layers
};

// Stratify the labeled set into N folds, train one fresh output layer per
// fold over the frozen hidden ensemble, score nodes by consistency.
ScoreResult score_model(const EnsembleModel& m, const std::vector<LabeledExample>& labeled,
                        int n_categories, const EvoConfig& cfg, Rng& rng);

// Indices of the top-M members by cached fitness; ties keep earlier insertion.
std::vector<int> select_parents(const ModelPool& pool, int m);

// Pool all M*H candidate nodes, rank by score descending (ties: lower parent
// index, then lower node index), keep the top H. Weight rows and hidden
// biases are copied verbatim; the visible bias is the parent mean.
HiddenLayerParams breed_slot(const std::vector<const HiddenLayerParams*>& parents,
                             const Eigen::MatrixXd& scores, int nodes_out);

struct IterationResult {
    double child_val = 0.0;
};

IterationResult evolve_iteration(ModelPool& pool, const Corpora& corpora, const EvoConfig& cfg,
                                 std::uint64_t iteration_seed);

struct RunResult {
    EvolutionHistory history;
    EnsembleModel best;
};

// Full loop: seed the pool, iterate until max_iterations or patience
// exhausted, report test accuracy of the best model.
RunResult run(const EvoConfig& cfg, const Corpora& corpora);

}  // namespace evotext
