#include "evotext/dae.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace evotext {

namespace {

inline Eigen::VectorXd sigmoid(const Eigen::VectorXd& z) {
    return 1.0 / (1.0 + (-z.array()).exp());
}

void check_dims(const HiddenLayerParams& p) {
    if (p.b.size() != p.w.rows() || p.c.size() != p.w.cols())
        throw std::invalid_argument("hidden layer parameter shapes are inconsistent");
}

void check_input(const HiddenLayerParams& p, const InputVector& x) {
    if (x.dims != p.visible_size())
        throw std::invalid_argument("input dimension does not match visible size");
}

// Dense 0/1 copy of a sparse binary input.
Eigen::VectorXd densify(const InputVector& x) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(x.dims);
    for (int j : x.active) v[j] = 1.0;
    return v;
}

// Backward signals shared by gradients() and the sgd fast path:
//   d_j = x_clean_j - xh_j                     (dL/dE_j)
//   h_i = (w_i . d) yh_i (1 - yh_i)            (dL/dEtilde_i)
//   u_i = (1+alpha) h_i - alpha sum_i' h_i'    (encoder weight signal)
struct BackSignals {
    Eigen::VectorXd d;
    Eigen::VectorXd h;
    Eigen::VectorXd u;
};

BackSignals backward(const HiddenLayerParams& p, const InputVector& x_clean,
                     const ReconstructionTrace& tr, double alpha) {
    BackSignals s;
    s.d = densify(x_clean) - tr.x_hat;
    s.h = (p.w * s.d).cwiseProduct(
        tr.y_hat.cwiseProduct(Eigen::VectorXd::Ones(tr.y_hat.size()) - tr.y_hat));
    s.u = (1.0 + alpha) * s.h;
    s.u.array() -= alpha * s.h.sum();
    return s;
}

}  // namespace

HiddenLayerParams HiddenLayerParams::random_init(int hidden, int visible, Rng& rng) {
    if (hidden <= 0 || visible <= 0)
        throw std::invalid_argument("layer sizes must be positive");
    HiddenLayerParams p;
    const double r = 1.0 / std::sqrt(static_cast<double>(visible));
    std::uniform_real_distribution<double> dist(-r, r);
    p.w.resize(hidden, visible);
    for (int i = 0; i < hidden; ++i)
        for (int j = 0; j < visible; ++j) p.w(i, j) = dist(rng);
    p.b = Eigen::VectorXd::Zero(hidden);
    p.c = Eigen::VectorXd::Zero(visible);
    return p;
}

double action(const HiddenLayerParams& p, const InputVector& x, const Eigen::VectorXd& y) {
    check_dims(p);
    check_input(p, x);
    if (y.size() != p.hidden_size())
        throw std::invalid_argument("action: y dimension does not match hidden size");
    double s = 0.0;
    for (int j : x.active) s += -y.dot(p.w.col(j)) + p.c[j];
    s += p.b.dot(y);
    return s;
}

InputVector corrupt(const InputVector& x, double noise_fraction, Rng& rng) {
    if (noise_fraction < 0.0 || noise_fraction > 1.0)
        throw std::invalid_argument("noise_fraction must lie in [0,1]");
    InputVector out;
    out.dims = x.dims;
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int j : x.active)
        if (unit(rng) >= noise_fraction) out.active.push_back(j);
    return out;
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> encode(const HiddenLayerParams& p,
                                                   const InputVector& x, double alpha) {
    check_dims(p);
    check_input(p, x);
    if (alpha < 0.0) throw std::invalid_argument("alpha must be >= 0");
    if (alpha == 0.0) {
        Eigen::VectorXd e = p.b;
        for (int j : x.active) e += p.w.col(j);
        return {e, sigmoid(e)};
    }
    Eigen::VectorXd wx = Eigen::VectorXd::Zero(p.hidden_size());
    for (int j : x.active) wx += p.w.col(j);
    // sum_i' (w_i' . x) equals the total of wx, so the repulsive term is a
    // uniform shift; this is the O(H * active) form of the double sum.
    Eigen::VectorXd e = (1.0 + alpha) * wx;
    e.array() -= alpha * wx.sum();
    e += p.b;
    return {e, sigmoid(e)};
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> decode(const HiddenLayerParams& p,
                                                   const Eigen::VectorXd& y_hat) {
    check_dims(p);
    if (y_hat.size() != p.hidden_size())
        throw std::invalid_argument("decode: activation dimension does not match hidden size");
    Eigen::VectorXd e = p.w.transpose() * y_hat + p.c;
    return {e, sigmoid(e)};
}

double objective(const InputVector& x_clean, const Eigen::VectorXd& x_hat) {
    if (x_hat.size() != x_clean.dims)
        throw std::invalid_argument("objective: reconstruction dimension mismatch");
    if ((x_hat.array() <= 0.0).any() || (x_hat.array() >= 1.0).any())
        throw std::domain_error("objective: reconstruction hit 0 or 1 exactly");
    double L = (1.0 - x_hat.array()).log().sum();
    for (int j : x_clean.active) L += std::log(x_hat[j]) - std::log(1.0 - x_hat[j]);
    return L;
}

ReconstructionTrace reconstruct(const HiddenLayerParams& p, const InputVector& x_corrupt,
                                const InputVector& x_clean, double alpha) {
    check_input(p, x_clean);
    ReconstructionTrace tr;
    tr.x_tilde = x_corrupt;
    std::tie(tr.e_tilde, tr.y_hat) = encode(p, x_corrupt, alpha);
    std::tie(tr.e_vis, tr.x_hat) = decode(p, tr.y_hat);
    tr.objective = objective(x_clean, tr.x_hat);
    return tr;
}

std::pair<Gradients, ReconstructionTrace> gradients(const HiddenLayerParams& p,
                                                    const InputVector& x_corrupt,
                                                    const InputVector& x_clean, double alpha) {
    ReconstructionTrace tr = reconstruct(p, x_corrupt, x_clean, alpha);
    BackSignals s = backward(p, x_clean, tr, alpha);

    Gradients g;
    g.dw.noalias() = tr.y_hat * s.d.transpose();  // decoder term, rank one
    for (int j : x_corrupt.active) g.dw.col(j) += s.u;
    g.db = s.h;
    g.dc = s.d;
    return {std::move(g), std::move(tr)};
}

double sgd_epoch(HiddenLayerParams& p, const std::vector<InputVector>& docs,
                 const DaeConfig& cfg, Rng& rng) {
    if (docs.empty()) throw std::invalid_argument("sgd_epoch: empty corpus");
    std::vector<int> order(docs.size());
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);

    const double lr = cfg.learning_rate;
    double total = 0.0;
    for (int idx : order) {
        const InputVector& x = docs[idx];
        InputVector xt = corrupt(x, cfg.noise_fraction, rng);
        ReconstructionTrace tr = reconstruct(p, xt, x, cfg.alpha);
        total += tr.objective;
        BackSignals s = backward(p, x, tr, cfg.alpha);
        // Same update as applying gradients() densely; the encoder term only
        // touches the active columns of the corrupted input.
        p.w.noalias() += lr * tr.y_hat * s.d.transpose();
        for (int j : xt.active) p.w.col(j) += lr * s.u;
        p.b += lr * s.h;
        p.c += lr * s.d;
    }
    return total / static_cast<double>(docs.size());
}

HiddenLayerParams train_unsupervised(HiddenLayerParams p, const std::vector<InputVector>& docs,
                                     const DaeConfig& cfg) {
    if (cfg.epochs < 0) throw std::invalid_argument("epochs must be >= 0");
    Rng rng = make_rng(cfg.seed);
    for (int e = 0; e < cfg.epochs; ++e) sgd_epoch(p, docs, cfg, rng);
    return p;
}

}  // namespace evotext
