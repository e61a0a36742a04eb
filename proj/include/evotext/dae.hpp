#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <utility>
#include <vector>

#include "evotext/corpus.hpp"
#include "evotext/rng.hpp"

namespace evotext {

// One hidden layer of the tied-weight denoising autoencoder.
// w is H x V (row i = hidden node i's weights over the vocabulary),
// b the hidden biases, c the visible biases.
struct HiddenLayerParams {
    Eigen::MatrixXd w;
    Eigen::VectorXd b;
    Eigen::VectorXd c;

    int hidden_size() const { return static_cast<int>(w.rows()); }
    int visible_size() const { return static_cast<int>(w.cols()); }

    // w ~ U[-1/sqrt(V), 1/sqrt(V)], biases zero.
    static HiddenLayerParams random_init(int hidden, int visible, Rng& rng);
};

struct ReconstructionTrace {
    InputVector x_tilde;       // corrupted input fed to the encoder
    Eigen::VectorXd e_tilde;   // hidden pre-activations (repulsion applied)
    Eigen::VectorXd y_hat;     // hidden activations
    Eigen::VectorXd e_vis;     // decoder pre-activations
    Eigen::VectorXd x_hat;     // reconstructions
    double objective = 0.0;    // Bernoulli log-likelihood vs the clean input
};

struct Gradients {
    Eigen::MatrixXd dw;
    Eigen::VectorXd db;
    Eigen::VectorXd dc;
};

struct DaeConfig {
    double alpha = 0.0;           // repulsion constant, >= 0
    double noise_fraction = 0.3;  // probability an active input bit is masked
    double learning_rate = 0.05;
    int epochs = 15;
    std::uint64_t seed = 0;
};

// RBM action S(x,y) = -sum w_ij y_i x_j + sum b_i y_i + sum c_j x_j.
// Diagnostic only; y holds 0/1 entries.
double action(const HiddenLayerParams& p, const InputVector& x, const Eigen::VectorXd& y);

// Masking noise: each active index is zeroed independently with the given
// probability; inactive bits are never switched on.
InputVector corrupt(const InputVector& x, double noise_fraction, Rng& rng);

// Hidden pre-activations with the repulsive term and their sigmoids:
//   e_i = (1+alpha) * (w_i . x) - alpha * sum_i' (w_i' . x) + b_i
// which equals sum_j (w_ij - alpha * sum_{i'!=i} w_i'j) x_j + b_i.
std::pair<Eigen::VectorXd, Eigen::VectorXd> encode(const HiddenLayerParams& p,
                                                   const InputVector& x, double alpha);

// Decoder uses the unmodified tied weights: e_j = sum_i w_ij y_i + c_j.
std::pair<Eigen::VectorXd, Eigen::VectorXd> decode(const HiddenLayerParams& p,
                                                   const Eigen::VectorXd& y_hat);

// L = sum_j { x_j ln xh_j + (1-x_j) ln(1-xh_j) }, always <= 0 for binary x.
double objective(const InputVector& x_clean, const Eigen::VectorXd& x_hat);

// Full forward pass: encode the corrupted input, decode, score vs clean.
ReconstructionTrace reconstruct(const HiddenLayerParams& p, const InputVector& x_corrupt,
                                const InputVector& x_clean, double alpha);

// Analytic gradients of the objective w.r.t. w, b, c (ascent direction).
std::pair<Gradients, ReconstructionTrace> gradients(const HiddenLayerParams& p,
                                                    const InputVector& x_corrupt,
                                                    const InputVector& x_clean, double alpha);

// One stochastic pass over the corpus in rng-shuffled order; updates p in
// place with theta += lr * dL/dtheta and returns the mean per-doc objective.
double sgd_epoch(HiddenLayerParams& p, const std::vector<InputVector>& docs,
                 const DaeConfig& cfg, Rng& rng);

// cfg.epochs passes starting from the given parameters (warm start; never
// re-randomizes). RNG derived from cfg.seed.
HiddenLayerParams train_unsupervised(HiddenLayerParams p, const std::vector<InputVector>& docs,
                                     const DaeConfig& cfg);

}  // namespace evotext
