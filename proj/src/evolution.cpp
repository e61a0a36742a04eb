#include "evotext/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <tuple>

namespace evotext {

void EvoConfig::validate() const {
    if (parents < 2) throw std::invalid_argument("evolution: parents (M) must be >= 2");
    if (splits < 2) throw std::invalid_argument("evolution: splits (N) must be >= 2");
    if (slots < 1 || nodes_per_slot < 1)
        throw std::invalid_argument("evolution: ensemble shape must be positive");
    if (pool_capacity < parents)
        throw std::invalid_argument("evolution: pool capacity must be >= parents");
    if (pool_seed_count < parents)
        throw std::invalid_argument("evolution: pool seed count must be >= parents");
    if (max_iterations < 0 || patience < 1)
        throw std::invalid_argument("evolution: bad iteration limits");
}

void ModelPool::insert(EnsembleModel model, double fitness) {
    members.push_back({std::move(model), fitness, next_insertion++});
    if (members.size() <= capacity) return;

    // Elitist eviction: drop the lowest-fitness member that is not the best;
    // fitness ties evict the most recently inserted.
    std::size_t best_idx = 0;
    for (std::size_t i = 1; i < members.size(); ++i) {
        const auto& m = members[i];
        const auto& b = members[best_idx];
        if (m.fitness > b.fitness || (m.fitness == b.fitness && m.insertion < b.insertion))
            best_idx = i;
    }
    std::size_t worst_idx = std::numeric_limits<std::size_t>::max();
    for (std::size_t i = 0; i < members.size(); ++i) {
        if (i == best_idx) continue;
        if (worst_idx == std::numeric_limits<std::size_t>::max()) { worst_idx = i; continue; }
        const auto& m = members[i];
        const auto& w = members[worst_idx];
        if (m.fitness < w.fitness || (m.fitness == w.fitness && m.insertion > w.insertion))
            worst_idx = i;
    }
    members.erase(members.begin() + static_cast<std::ptrdiff_t>(worst_idx));
}

const PoolMember& ModelPool::best() const {
    if (members.empty()) throw std::logic_error("pool is empty");
    std::size_t best_idx = 0;
    for (std::size_t i = 1; i < members.size(); ++i) {
        const auto& m = members[i];
        const auto& b = members[best_idx];
        if (m.fitness > b.fitness || (m.fitness == b.fitness && m.insertion < b.insertion))
            best_idx = i;
    }
    return members[best_idx];
}

double ModelPool::mean_fitness() const {
    if (members.empty()) throw std::logic_error("pool is empty");
    double s = 0.0;
    for (const auto& m : members) s += m.fitness;
    return s / static_cast<double>(members.size());
}

Eigen::VectorXd consistency_scores(const std::vector<Eigen::MatrixXd>& weights) {
    if (weights.size() < 2)
        throw std::invalid_argument("consistency_scores: need at least two weight matrices");
    const auto rows = weights.front().rows();
    const auto cols = weights.front().cols();
    for (const auto& w : weights)
        if (w.rows() != rows || w.cols() != cols)
            throw std::invalid_argument("consistency_scores: weight matrix shape mismatch");

    // sum over unordered pairs of column inner products:
    //   1/2 ( |sum_n col|^2 - sum_n |col|^2 ), per column.
    Eigen::MatrixXd total = Eigen::MatrixXd::Zero(rows, cols);
    Eigen::VectorXd sq = Eigen::VectorXd::Zero(cols);
    for (const auto& w : weights) {
        total += w;
        sq += w.colwise().squaredNorm().transpose();
    }
    return 0.5 * (total.colwise().squaredNorm().transpose() - sq);
}

ScoreResult score_model(const EnsembleModel& m, const std::vector<LabeledExample>& labeled,
                        int n_categories, const EvoConfig& cfg, Rng& rng) {
    std::vector<int> labels;
    labels.reserve(labeled.size());
    for (const auto& ex : labeled) labels.push_back(ex.label);
    auto folds = stratified_fold_indices(labels, cfg.splits, rng);

    Eigen::MatrixXd feats = ensemble_features(m.hidden, m.alpha, labeled);

    ScoreResult res;
    std::vector<Eigen::MatrixXd> fold_weights;
    for (const auto& fold : folds) {
        Eigen::MatrixXd ff(static_cast<int>(fold.size()), feats.cols());
        std::vector<int> fl;
        fl.reserve(fold.size());
        for (std::size_t r = 0; r < fold.size(); ++r) {
            ff.row(static_cast<int>(r)) = feats.row(fold[r]);
            fl.push_back(labels[fold[r]]);
        }
        OutputTrainConfig ocfg = cfg.output;
        ocfg.seed = rng();
        res.outputs.push_back(train_output_on_features(ff, fl, n_categories, ocfg));
        fold_weights.push_back(res.outputs.back().w_out);
    }

    Eigen::VectorXd s = consistency_scores(fold_weights);
    const int H = m.nodes_per_slot();
    res.scores.resize(m.slots(), H);
    for (int g = 0; g < m.slots(); ++g)
        res.scores.row(g) = s.segment(g * H, H).transpose();
    return res;
}

std::vector<int> select_parents(const ModelPool& pool, int m) {
    if (static_cast<int>(pool.members.size()) < m)
        throw std::invalid_argument("select_parents: pool smaller than M");
    std::vector<int> order(pool.members.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        const auto& ma = pool.members[a];
        const auto& mb = pool.members[b];
        if (ma.fitness != mb.fitness) return ma.fitness > mb.fitness;
        return ma.insertion < mb.insertion;
    });
    order.resize(m);
    return order;
}

HiddenLayerParams breed_slot(const std::vector<const HiddenLayerParams*>& parents,
                             const Eigen::MatrixXd& scores, int nodes_out) {
    if (parents.empty()) throw std::invalid_argument("breed_slot: no parents");
    const int V = parents.front()->visible_size();
    const int H = parents.front()->hidden_size();
    for (const auto* p : parents)
        if (p->visible_size() != V || p->hidden_size() != H)
            throw std::invalid_argument("breed_slot: parent shape mismatch");
    if (scores.rows() != static_cast<Eigen::Index>(parents.size()) || scores.cols() != H)
        throw std::invalid_argument("breed_slot: score table shape mismatch");
    if (nodes_out > static_cast<int>(parents.size()) * H)
        throw std::invalid_argument("breed_slot: not enough candidate nodes");

    struct Candidate {
        double score;
        int parent;
        int node;
    };
    std::vector<Candidate> cand;
    cand.reserve(parents.size() * static_cast<std::size_t>(H));
    for (int p = 0; p < static_cast<int>(parents.size()); ++p)
        for (int h = 0; h < H; ++h) cand.push_back({scores(p, h), p, h});
    std::sort(cand.begin(), cand.end(), [](const Candidate& a, const Candidate& b) {
        if (a.score != b.score) return a.score > b.score;
        if (a.parent != b.parent) return a.parent < b.parent;
        return a.node < b.node;
    });

    HiddenLayerParams child;
    child.w.resize(nodes_out, V);
    child.b.resize(nodes_out);
    for (int h = 0; h < nodes_out; ++h) {
        const auto& c = cand[h];
        child.w.row(h) = parents[c.parent]->w.row(c.node);
        child.b[h] = parents[c.parent]->b[c.node];
    }
    child.c = Eigen::VectorXd::Zero(V);
    for (const auto* p : parents) child.c += p->c;
    child.c /= static_cast<double>(parents.size());
    return child;
}

namespace {

EnsembleModel train_seed_model(const Corpora& corpora, const EvoConfig& cfg,
                               std::uint64_t model_seed) {
    EnsembleModel m;
    m.alpha = cfg.dae.alpha;
    for (int g = 0; g < cfg.slots; ++g) {
        Rng init_rng = make_rng(derive_seed(model_seed, "slot-init", g));
        auto layer =
            HiddenLayerParams::random_init(cfg.nodes_per_slot, corpora.vocab_size, init_rng);
        DaeConfig dcfg = cfg.dae;
        dcfg.seed = derive_seed(model_seed, "slot-train", g);
        m.hidden.push_back(train_unsupervised(std::move(layer), corpora.unlabeled, dcfg));
    }
    OutputTrainConfig ocfg = cfg.output;
    ocfg.seed = derive_seed(model_seed, "output");
    m.output = train_output(m.hidden, m.alpha, corpora.train, corpora.n_categories, ocfg);
    return m;
}

}  // namespace

IterationResult evolve_iteration(ModelPool& pool, const Corpora& corpora, const EvoConfig& cfg,
                                 std::uint64_t iteration_seed) {
    auto parent_idx = select_parents(pool, cfg.parents);

    std::vector<ScoreResult> scored;
    for (std::size_t r = 0; r < parent_idx.size(); ++r) {
        Rng rng = make_rng(derive_seed(iteration_seed, "score", r));
        scored.push_back(score_model(pool.members[parent_idx[r]].model, corpora.train,
                                     corpora.n_categories, cfg, rng));
    }

    EnsembleModel child;
    child.alpha = cfg.child_dae.alpha;
    for (int g = 0; g < cfg.slots; ++g) {
        std::vector<const HiddenLayerParams*> slot_parents;
        Eigen::MatrixXd slot_scores(cfg.parents, cfg.nodes_per_slot);
        for (std::size_t r = 0; r < parent_idx.size(); ++r) {
            slot_parents.push_back(&pool.members[parent_idx[r]].model.hidden[g]);
            slot_scores.row(static_cast<int>(r)) = scored[r].scores.row(g);
        }
        auto bred = breed_slot(slot_parents, slot_scores, cfg.nodes_per_slot);
        DaeConfig dcfg = cfg.child_dae;
        dcfg.seed = derive_seed(iteration_seed, "child-slot", g);
        child.hidden.push_back(train_unsupervised(std::move(bred), corpora.unlabeled, dcfg));
    }

    OutputTrainConfig ocfg = cfg.output;
    ocfg.seed = derive_seed(iteration_seed, "child-output");
    child.output = train_output(child.hidden, child.alpha, corpora.train, corpora.n_categories, ocfg);

    IterationResult res;
    res.child_val = evaluate_accuracy(child, corpora.validation);
    pool.insert(std::move(child), res.child_val);
    return res;
}

RunResult run(const EvoConfig& cfg, const Corpora& corpora) {
    cfg.validate();
    if (corpora.unlabeled.empty() || corpora.train.empty() || corpora.validation.empty() ||
        corpora.test.empty())
        throw std::invalid_argument("evolution run: all corpora must be nonempty");

    ModelPool pool;
    pool.capacity = static_cast<std::size_t>(cfg.pool_capacity);
    for (int k = 0; k < cfg.pool_seed_count; ++k) {
        EnsembleModel m = train_seed_model(corpora, cfg, derive_seed(cfg.seed, "seed-model", k));
        double fit = evaluate_accuracy(m, corpora.validation);
        pool.insert(std::move(m), fit);
    }

    RunResult out;
    auto record = [&](int iteration, double child_val) {
        HistoryPoint pt;
        pt.iteration = iteration;
        pt.pool_best_val = pool.best().fitness;
        pt.pool_mean_val = pool.mean_fitness();
        pt.child_val = child_val;
        pt.best_test = evaluate_accuracy(pool.best().model, corpora.test);
        out.history.points.push_back(pt);
    };
    record(0, std::numeric_limits<double>::quiet_NaN());

    double best_seen = pool.best().fitness;
    int stale = 0;
    for (int it = 1; it <= cfg.max_iterations; ++it) {
        auto res = evolve_iteration(pool, corpora, cfg, derive_seed(cfg.seed, "iteration", it));
        record(it, res.child_val);
        if (pool.best().fitness > best_seen) {
            best_seen = pool.best().fitness;
            stale = 0;
        } else if (++stale >= cfg.patience) {
            out.history.early_stopped = true;
            break;
        }
    }

    out.best = pool.best().model;
    out.history.final_test_accuracy = out.history.points.back().best_test;
    return out;
}

}  // namespace evotext
