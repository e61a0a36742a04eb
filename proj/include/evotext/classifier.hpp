#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <vector>

#include "evotext/dae.hpp"

namespace evotext {

// Softmax layer over the concatenated ensemble hidden activations.
// w_out is C x (K*H): row i = category i, column j = hidden node position
// in the concatenated ensemble.
struct OutputLayerParams {
    Eigen::MatrixXd w_out;
    Eigen::VectorXd d;

    int categories() const { return static_cast<int>(w_out.rows()); }
    int width() const { return static_cast<int>(w_out.cols()); }
};

struct EnsembleModel {
    std::vector<HiddenLayerParams> hidden;  // K slots, equal H each
    OutputLayerParams output;
    double alpha = 0.0;  // repulsion constant its hidden encodings use

    int slots() const { return static_cast<int>(hidden.size()); }
    int nodes_per_slot() const { return hidden.empty() ? 0 : hidden.front().hidden_size(); }
    int feature_dim() const { return slots() * nodes_per_slot(); }
};

struct OutputTrainConfig {
    double learning_rate = 0.1;
    int epochs = 30;
    double init_range = 0.01;
    std::uint64_t seed = 0;
};

struct LabeledExample {
    InputVector x;
    int label = -1;
};

// Concatenation of the K hidden activations, slot order preserved.
Eigen::VectorXd ensemble_encode(const std::vector<HiddenLayerParams>& hidden, double alpha,
                                const InputVector& x);
Eigen::VectorXd ensemble_encode(const EnsembleModel& m, const InputVector& x);

// One feature row per example (docs x K*H); hidden layers are read-only.
Eigen::MatrixXd ensemble_features(const std::vector<HiddenLayerParams>& hidden, double alpha,
                                  const std::vector<LabeledExample>& docs);

Eigen::VectorXd softmax(const Eigen::VectorXd& scores);

// Softmax regression by per-sample SGD on multinomial cross-entropy over a
// frozen feature matrix; fresh uniform init in [-init_range, init_range].
OutputLayerParams train_output_on_features(const Eigen::MatrixXd& features,
                                           const std::vector<int>& labels, int n_categories,
                                           const OutputTrainConfig& cfg);

OutputLayerParams train_output(const std::vector<HiddenLayerParams>& hidden, double alpha,
                               const std::vector<LabeledExample>& train, int n_categories,
                               const OutputTrainConfig& cfg);

Eigen::VectorXd category_probabilities(const EnsembleModel& m, const InputVector& x);

// Argmax over category scores; ties resolve to the lowest index.
int predict(const EnsembleModel& m, const InputVector& x);

double evaluate_accuracy(const EnsembleModel& m, const std::vector<LabeledExample>& docs);

// Ridge least-squares onto one-hot targets with argmax decoding; the
// fully supervised reference classifier.
struct BaselineModel {
    Eigen::MatrixXd coef;       // C x V
    Eigen::VectorXd intercept;  // C
    std::optional<Eigen::VectorXd> tfidf;  // per-term input weights, if used
};

BaselineModel train_baseline(const std::vector<LabeledExample>& train, int n_categories,
                             int vocab_size, const std::optional<Eigen::VectorXd>& tfidf,
                             double ridge);

int baseline_predict(const BaselineModel& m, const InputVector& x);
double baseline_accuracy(const BaselineModel& m, const std::vector<LabeledExample>& docs);

}  // namespace evotext
