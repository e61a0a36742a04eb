#include "evotext/classifier.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace evotext {

Eigen::VectorXd ensemble_encode(const std::vector<HiddenLayerParams>& hidden, double alpha,
                                const InputVector& x) {
    if (hidden.empty()) throw std::invalid_argument("ensemble_encode: no hidden layers");
    const int H = hidden.front().hidden_size();
    Eigen::VectorXd out(static_cast<int>(hidden.size()) * H);
    for (std::size_t g = 0; g < hidden.size(); ++g) {
        if (hidden[g].hidden_size() != H)
            throw std::invalid_argument("ensemble slots must share the hidden size");
        out.segment(static_cast<int>(g) * H, H) = encode(hidden[g], x, alpha).second;
    }
    return out;
}

Eigen::VectorXd ensemble_encode(const EnsembleModel& m, const InputVector& x) {
    return ensemble_encode(m.hidden, m.alpha, x);
}

Eigen::MatrixXd ensemble_features(const std::vector<HiddenLayerParams>& hidden, double alpha,
                                  const std::vector<LabeledExample>& docs) {
    if (docs.empty()) throw std::invalid_argument("ensemble_features: empty document list");
    Eigen::MatrixXd feats(static_cast<int>(docs.size()),
                          static_cast<int>(hidden.size()) * hidden.front().hidden_size());
    for (std::size_t i = 0; i < docs.size(); ++i)
        feats.row(static_cast<int>(i)) = ensemble_encode(hidden, alpha, docs[i].x).transpose();
    return feats;
}

Eigen::VectorXd softmax(const Eigen::VectorXd& scores) {
    Eigen::VectorXd z = (scores.array() - scores.maxCoeff()).exp();
    return z / z.sum();
}

OutputLayerParams train_output_on_features(const Eigen::MatrixXd& features,
                                           const std::vector<int>& labels, int n_categories,
                                           const OutputTrainConfig& cfg) {
    if (features.rows() == 0) throw std::invalid_argument("train_output: empty training set");
    if (features.rows() != static_cast<Eigen::Index>(labels.size()))
        throw std::invalid_argument("train_output: feature/label count mismatch");
    for (int y : labels)
        if (y < 0 || y >= n_categories)
            throw std::invalid_argument("train_output: label out of range (unlabeled document?)");

    Rng rng = make_rng(cfg.seed);
    OutputLayerParams p;
    std::uniform_real_distribution<double> dist(-cfg.init_range, cfg.init_range);
    p.w_out.resize(n_categories, features.cols());
    for (int i = 0; i < p.w_out.rows(); ++i)
        for (int j = 0; j < p.w_out.cols(); ++j) p.w_out(i, j) = dist(rng);
    p.d = Eigen::VectorXd::Zero(n_categories);

    std::vector<int> order(labels.size());
    std::iota(order.begin(), order.end(), 0);
    for (int e = 0; e < cfg.epochs; ++e) {
        std::shuffle(order.begin(), order.end(), rng);
        for (int idx : order) {
            Eigen::VectorXd f = features.row(idx).transpose();
            Eigen::VectorXd prob = softmax(p.w_out * f + p.d);
            prob[labels[idx]] -= 1.0;  // dCE/dscores = p - onehot
            p.w_out.noalias() -= cfg.learning_rate * prob * f.transpose();
            p.d -= cfg.learning_rate * prob;
        }
    }
    return p;
}

OutputLayerParams train_output(const std::vector<HiddenLayerParams>& hidden, double alpha,
                               const std::vector<LabeledExample>& train, int n_categories,
                               const OutputTrainConfig& cfg) {
    Eigen::MatrixXd feats = ensemble_features(hidden, alpha, train);
    std::vector<int> labels;
    labels.reserve(train.size());
    for (const auto& ex : train) labels.push_back(ex.label);
    return train_output_on_features(feats, labels, n_categories, cfg);
}

Eigen::VectorXd category_probabilities(const EnsembleModel& m, const InputVector& x) {
    Eigen::VectorXd f = ensemble_encode(m, x);
    if (f.size() != m.output.width())
        throw std::invalid_argument("output layer width does not match ensemble");
    return softmax(m.output.w_out * f + m.output.d);
}

int predict(const EnsembleModel& m, const InputVector& x) {
    Eigen::VectorXd prob = category_probabilities(m, x);
    int best = 0;
    for (int i = 1; i < prob.size(); ++i)
        if (prob[i] > prob[best]) best = i;
    return best;
}

double evaluate_accuracy(const EnsembleModel& m, const std::vector<LabeledExample>& docs) {
    if (docs.empty()) throw std::invalid_argument("evaluate_accuracy: empty document list");
    int correct = 0;
    for (const auto& ex : docs) {
        if (ex.label < 0) throw std::invalid_argument("evaluate_accuracy: unlabeled document");
        if (predict(m, ex.x) == ex.label) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(docs.size());
}

namespace {

Eigen::VectorXd baseline_features(const InputVector& x,
                                  const std::optional<Eigen::VectorXd>& tfidf) {
    Eigen::VectorXd f = Eigen::VectorXd::Zero(x.dims);
    for (int j : x.active) f[j] = tfidf ? (*tfidf)[j] : 1.0;
    return f;
}

}  // namespace

BaselineModel train_baseline(const std::vector<LabeledExample>& train, int n_categories,
                             int vocab_size, const std::optional<Eigen::VectorXd>& tfidf,
                             double ridge) {
    if (train.empty()) throw std::invalid_argument("train_baseline: empty training set");
    if (tfidf && tfidf->size() != vocab_size)
        throw std::invalid_argument("train_baseline: tfidf weight length mismatch");

    const int D = static_cast<int>(train.size());
    const int P = vocab_size + 1;  // bias column appended
    Eigen::MatrixXd X = Eigen::MatrixXd::Zero(D, P);
    Eigen::MatrixXd Y = Eigen::MatrixXd::Zero(D, n_categories);
    for (int i = 0; i < D; ++i) {
        X.row(i).head(vocab_size) = baseline_features(train[i].x, tfidf).transpose();
        X(i, vocab_size) = 1.0;
        if (train[i].label < 0 || train[i].label >= n_categories)
            throw std::invalid_argument("train_baseline: label out of range");
        Y(i, train[i].label) = 1.0;
    }

    Eigen::MatrixXd A = X.transpose() * X;
    A.diagonal().array() += ridge;
    Eigen::MatrixXd B;
    if (ridge > 0.0) {
        B = Eigen::LDLT<Eigen::MatrixXd>(A).solve(X.transpose() * Y);
    } else {
        Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
        if (!lu.isInvertible())
            throw std::runtime_error(
                "train_baseline: normal equations are singular; set ridge > 0");
        B = lu.solve(X.transpose() * Y);
    }

    BaselineModel m;
    m.coef = B.topRows(vocab_size).transpose();
    m.intercept = B.row(vocab_size).transpose();
    m.tfidf = tfidf;
    return m;
}

int baseline_predict(const BaselineModel& m, const InputVector& x) {
    Eigen::VectorXd scores = m.coef * baseline_features(x, m.tfidf) + m.intercept;
    int best = 0;
    for (int i = 1; i < scores.size(); ++i)
        if (scores[i] > scores[best]) best = i;
    return best;
}

double baseline_accuracy(const BaselineModel& m, const std::vector<LabeledExample>& docs) {
    if (docs.empty()) throw std::invalid_argument("baseline_accuracy: empty document list");
    int correct = 0;
    for (const auto& ex : docs)
        if (baseline_predict(m, ex.x) == ex.label) ++correct;
    return static_cast<double>(correct) / static_cast<double>(docs.size());
}

}  // namespace evotext
