#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>
#include <random>

#include "evotext/classifier.hpp"

using namespace evotext;

namespace {

InputVector make_input(int dims, std::vector<int> active) {
    InputVector x;
    x.dims = dims;
    x.active = std::move(active);
    return x;
}

HiddenLayerParams zero_layer(int H, int V) {
    HiddenLayerParams p;
    p.w = Eigen::MatrixXd::Zero(H, V);
    p.b = Eigen::VectorXd::Zero(H);
    p.c = Eigen::VectorXd::Zero(V);
    return p;
}

EnsembleModel direct_readout_model(const Eigen::MatrixXd& w_out) {
    // a model whose features are constant 0.5, so scores = 0.5 * rowsum + d;
    // convenient for predict/accuracy tests when w_out has one column
    EnsembleModel m;
    m.hidden.push_back(zero_layer(static_cast<int>(w_out.cols()), 3));
    m.output.w_out = w_out;
    m.output.d = Eigen::VectorXd::Zero(w_out.rows());
    return m;
}

}  // namespace

TEST_CASE("ensemble_encode: K=1 equals single-layer encode, zeros give 0.5") {
    Rng rng = make_rng(1);
    auto layer = HiddenLayerParams::random_init(4, 6, rng);
    auto x = make_input(6, {0, 2, 5});
    auto single = encode(layer, x, 0.1).second;
    auto ens = ensemble_encode({layer}, 0.1, x);
    CHECK((ens - single).cwiseAbs().maxCoeff() == 0.0);

    auto z = ensemble_encode({zero_layer(3, 6), zero_layer(3, 6)}, 0.0, x);
    REQUIRE(z.size() == 6);
    for (int i = 0; i < 6; ++i) CHECK(z[i] == doctest::Approx(0.5));
}

TEST_CASE("ensemble_encode: permuting slots permutes blocks, blocks independent") {
    Rng rng = make_rng(2);
    auto a = HiddenLayerParams::random_init(3, 5, rng);
    auto b = HiddenLayerParams::random_init(3, 5, rng);
    auto x = make_input(5, {1, 3});

    auto ab = ensemble_encode({a, b}, 0.2, x);
    auto ba = ensemble_encode({b, a}, 0.2, x);
    CHECK((ab.head(3) - ba.tail(3)).cwiseAbs().maxCoeff() == 0.0);
    CHECK((ab.tail(3) - ba.head(3)).cwiseAbs().maxCoeff() == 0.0);

    // perturbing slot 1 leaves slot 0's block bit-identical
    auto b2 = b;
    b2.w.array() += 0.37;
    auto ab2 = ensemble_encode({a, b2}, 0.2, x);
    CHECK((ab2.head(3) - ab.head(3)).cwiseAbs().maxCoeff() == 0.0);
    CHECK((ab2.tail(3) - ab.tail(3)).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("softmax is a probability vector") {
    Rng rng = make_rng(3);
    std::normal_distribution<double> g(0.0, 3.0);
    for (int rep = 0; rep < 25; ++rep) {
        Eigen::VectorXd s(5);
        for (int i = 0; i < 5; ++i) s[i] = g(rng);
        auto p = softmax(s);
        CHECK(std::abs(p.sum() - 1.0) < 1e-12);
        CHECK((p.array() >= 0.0).all());
        // shift invariance
        auto q = softmax((s.array() + 11.0).matrix());
        CHECK((p - q).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("train_output: separable toy features reach training accuracy 1") {
    // features directly encode the class
    Eigen::MatrixXd feats(8, 2);
    std::vector<int> labels;
    for (int i = 0; i < 8; ++i) {
        int y = i % 2;
        feats(i, 0) = y ? 0.9 : 0.1;
        feats(i, 1) = y ? 0.1 : 0.9;
        labels.push_back(y);
    }
    OutputTrainConfig cfg;
    cfg.epochs = 200;
    cfg.learning_rate = 0.5;
    cfg.seed = 4;
    auto out = train_output_on_features(feats, labels, 2, cfg);
    int correct = 0;
    for (int i = 0; i < 8; ++i) {
        Eigen::VectorXd p = softmax(out.w_out * feats.row(i).transpose() + out.d);
        int pred = p[0] >= p[1] ? 0 : 1;
        correct += (pred == labels[i]);
    }
    CHECK(correct == 8);
}

TEST_CASE("train_output: zero epochs returns the random init, deterministically") {
    Eigen::MatrixXd feats = Eigen::MatrixXd::Constant(3, 4, 0.5);
    std::vector<int> labels = {0, 1, 2};
    OutputTrainConfig cfg;
    cfg.epochs = 0;
    cfg.seed = 99;
    auto a = train_output_on_features(feats, labels, 3, cfg);
    auto b = train_output_on_features(feats, labels, 3, cfg);
    CHECK(a.w_out == b.w_out);
    CHECK((a.w_out.cwiseAbs().maxCoeff()) <= cfg.init_range);
    CHECK(a.d.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("train_output rejects bad labels") {
    Eigen::MatrixXd feats = Eigen::MatrixXd::Constant(2, 2, 0.5);
    OutputTrainConfig cfg;
    CHECK_THROWS(train_output_on_features(feats, {0, 5}, 3, cfg));
    CHECK_THROWS(train_output_on_features(feats, {0, -1}, 3, cfg));
}

TEST_CASE("output-layer gradient matches finite differences of cross-entropy") {
    Rng rng = make_rng(17);
    std::normal_distribution<double> g(0.0, 1.0);
    const int C = 3, F = 4;
    Eigen::VectorXd f(F), d(C);
    Eigen::MatrixXd w(C, F);
    for (int i = 0; i < F; ++i) f[i] = g(rng);
    for (int i = 0; i < C; ++i) d[i] = g(rng);
    for (int i = 0; i < C; ++i)
        for (int j = 0; j < F; ++j) w(i, j) = g(rng);
    const int y = 1;
    auto loss = [&](const Eigen::MatrixXd& wm, const Eigen::VectorXd& dv) {
        return -std::log(softmax(wm * f + dv)[y]);
    };
    // analytic: dL/dscores = p - onehot
    Eigen::VectorXd p = softmax(w * f + d);
    Eigen::VectorXd ds = p;
    ds[y] -= 1.0;
    const double h = 1e-6;
    for (int i = 0; i < C; ++i)
        for (int j = 0; j < F; ++j) {
            Eigen::MatrixXd wp = w, wm2 = w;
            wp(i, j) += h;
            wm2(i, j) -= h;
            double fd = (loss(wp, d) - loss(wm2, d)) / (2 * h);
            CHECK(std::abs(ds[i] * f[j] - fd) / std::max(std::abs(fd), 1e-4) < 1e-5);
        }
    for (int i = 0; i < C; ++i) {
        Eigen::VectorXd dp = d, dm = d;
        dp[i] += h;
        dm[i] -= h;
        double fd = (loss(w, dp) - loss(w, dm)) / (2 * h);
        CHECK(std::abs(ds[i] - fd) / std::max(std::abs(fd), 1e-4) < 1e-5);
    }
}

TEST_CASE("predict: argmax with lowest-index ties and shift invariance") {
    Eigen::MatrixXd w(3, 2);
    w << 0.2, 0.2, 1.4, 1.4, 0.4, 0.4;  // scores proportional to row sums
    auto m = direct_readout_model(w);
    auto x = make_input(3, {0});
    CHECK(predict(m, x) == 1);

    Eigen::MatrixXd tie(2, 2);
    tie << 1.0, 1.0, 1.0, 1.0;
    CHECK(predict(direct_readout_model(tie), x) == 0);

    // adding a constant to every category score does not change the argmax
    auto shifted = direct_readout_model(w);
    shifted.output.d.array() += 5.0;
    CHECK(predict(shifted, x) == predict(m, x));
}

TEST_CASE("evaluate_accuracy") {
    Eigen::MatrixXd w(2, 2);
    w << 2.0, 2.0, -2.0, -2.0;  // always predicts category 0
    auto m = direct_readout_model(w);
    auto x = make_input(3, {0});
    std::vector<LabeledExample> docs = {{x, 0}, {x, 0}, {x, 1}, {x, 1}};
    CHECK(evaluate_accuracy(m, docs) == doctest::Approx(0.5));
    CHECK(evaluate_accuracy(m, {{x, 0}}) == 1.0);
    CHECK(evaluate_accuracy(m, {{x, 1}}) == 0.0);
    CHECK_THROWS(evaluate_accuracy(m, {}));
}

TEST_CASE("baseline: separable one-hot documents") {
    std::vector<LabeledExample> train = {{make_input(2, {0}), 0}, {make_input(2, {1}), 1}};
    auto m = train_baseline(train, 2, 2, std::nullopt, 1e-6);
    CHECK(baseline_accuracy(m, train) == 1.0);
}

TEST_CASE("baseline solution satisfies the normal equations") {
    Rng rng = make_rng(23);
    const int D = 20, V = 6, C = 3;
    std::vector<LabeledExample> train;
    std::uniform_int_distribution<int> lab(0, C - 1);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < D; ++i) {
        InputVector x;
        x.dims = V;
        for (int j = 0; j < V; ++j)
            if (u(rng) < 0.5) x.active.push_back(j);
        train.push_back({x, lab(rng)});
    }
    const double ridge = 1e-3;
    auto m = train_baseline(train, C, V, std::nullopt, ridge);

    Eigen::MatrixXd X = Eigen::MatrixXd::Zero(D, V + 1);
    Eigen::MatrixXd Y = Eigen::MatrixXd::Zero(D, C);
    for (int i = 0; i < D; ++i) {
        for (int j : train[i].x.active) X(i, j) = 1.0;
        X(i, V) = 1.0;
        Y(i, train[i].label) = 1.0;
    }
    Eigen::MatrixXd beta(V + 1, C);
    beta.topRows(V) = m.coef.transpose();
    beta.row(V) = m.intercept.transpose();
    Eigen::MatrixXd A = X.transpose() * X;
    A.diagonal().array() += ridge;
    Eigen::MatrixXd resid = A * beta - X.transpose() * Y;
    CHECK(resid.cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("baseline tf-idf multiplies features elementwise") {
    std::vector<LabeledExample> train = {{make_input(2, {0}), 0}, {make_input(2, {1}), 1}};
    Eigen::VectorXd tfidf(2);
    tfidf << 2.0, 0.5;
    auto weighted = train_baseline(train, 2, 2, tfidf, 1e-6);

    // equivalent: scale the one-hot inputs by the weights explicitly via the
    // normal equations of the scaled design matrix
    Eigen::MatrixXd X(2, 3);
    X << 2.0, 0.0, 1.0, 0.0, 0.5, 1.0;
    Eigen::MatrixXd Y(2, 2);
    Y << 1, 0, 0, 1;
    Eigen::MatrixXd A = X.transpose() * X;
    A.diagonal().array() += 1e-6;
    Eigen::MatrixXd beta = A.ldlt().solve(X.transpose() * Y);
    CHECK((weighted.coef - beta.topRows(2).transpose()).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("baseline singular system without ridge reports a ridge hint") {
    // duplicate column -> singular Gram matrix
    std::vector<LabeledExample> train = {{make_input(3, {0, 1}), 0}, {make_input(3, {2}), 1}};
    bool threw = false;
    try {
        train_baseline(train, 2, 3, std::nullopt, 0.0);
    } catch (const std::runtime_error& e) {
        threw = true;
        CHECK(std::string(e.what()).find("ridge") != std::string::npos);
    }
    CHECK(threw);
    CHECK_NOTHROW(train_baseline(train, 2, 3, std::nullopt, 1e-3));
}
