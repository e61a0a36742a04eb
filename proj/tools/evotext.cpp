#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "evotext/archive.hpp"
#include "evotext/harness.hpp"

namespace fs = std::filesystem;
using namespace evotext;

namespace {

struct CommonOpts {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_dir;
    std::optional<double> alpha;
    std::optional<int> iterations;
    bool single_thread = false;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--config", opts.config_path, "config file (key = value with [sections])");
    cmd->add_option("--seed", opts.seed, "master seed");
    cmd->add_option("--out", opts.out_dir, "output directory");
    cmd->add_option("--alpha", opts.alpha, "repulsion constant (default 1/sqrt(C))");
    cmd->add_option("--iterations", opts.iterations, "max evolution iterations");
    cmd->add_flag("--single-thread", opts.single_thread, "bit-deterministic single-thread mode");
}

RunConfig resolve_config(const CommonOpts& opts) {
    ConfigFile file;
    if (!opts.config_path.empty()) file = ConfigFile::parse_file(opts.config_path);
    RunConfig rc = load_run_config(file);
    if (opts.seed) rc.master_seed = *opts.seed;
    if (opts.out_dir) rc.out_dir = *opts.out_dir;
    if (opts.alpha) rc.alpha = *opts.alpha;
    if (opts.iterations) rc.evo.max_iterations = *opts.iterations;
    if (opts.single_thread) rc.single_thread = true;
    return rc;
}

std::vector<std::string> synth_label_names(int categories) {
    std::vector<std::string> names;
    for (int c = 0; c < categories; ++c) {
        // zero-padded so sorted label order matches category order
        std::string n = std::to_string(c);
        names.push_back("cat" + std::string(3 - std::min<std::size_t>(3, n.size()), '0') + n);
    }
    return names;
}

int cmd_synth(const RunConfig& rc) {
    fs::create_directories(rc.out_dir);
    SynthConfig labeled_cfg = rc.synth;
    labeled_cfg.seed = derive_seed(rc.master_seed, "synth-labeled");
    auto labeled = generate_synthetic(labeled_cfg);

    SynthConfig unlabeled_cfg = rc.synth;
    unlabeled_cfg.docs_per_category = rc.synth_unlabeled_per_category;
    unlabeled_cfg.seed = derive_seed(rc.master_seed, "synth-unlabeled");
    auto unlabeled = generate_synthetic(unlabeled_cfg);
    for (auto& d : unlabeled) {
        d.id = "u-" + d.id;
        d.label.reset();
    }

    auto names = synth_label_names(rc.synth.categories);
    const std::string labeled_path = (fs::path(rc.out_dir) / "labeled.jsonl").string();
    const std::string unlabeled_path = (fs::path(rc.out_dir) / "unlabeled.jsonl").string();
    write_corpus_jsonl(labeled_path, labeled, names);
    write_corpus_jsonl(unlabeled_path, unlabeled, names);
    std::cout << "wrote " << labeled.size() << " labeled documents to " << labeled_path << "\n"
              << "wrote " << unlabeled.size() << " unlabeled documents to " << unlabeled_path
              << "\n";
    return 0;
}

int cmd_run(const RunConfig& rc_in) {
    RunConfig rc = rc_in;
    fs::create_directories(rc.out_dir);
    PreparedData data = prepare_data(rc);

    EvoConfig evo = rc.evo;
    evo.seed = derive_seed(rc.master_seed, "evolution");
    const double alpha = resolve_alpha(rc.alpha, data.corpora.n_categories);
    evo.dae.alpha = alpha;
    evo.child_dae.alpha = alpha;

    RunResult result = run(evo, data.corpora);

    const std::string csv_path = (fs::path(rc.out_dir) / "curve.csv").string();
    const std::string hist_path = (fs::path(rc.out_dir) / "history.json").string();
    const std::string model_path = (fs::path(rc.out_dir) / "best_model.evx").string();
    const std::string report_path = (fs::path(rc.out_dir) / "report.txt").string();
    write_curve_csv(result.history, csv_path);
    write_history_json(result.history, hist_path);
    save_model({result.best, data.vocab, data.label_names}, model_path);

    std::ofstream report(report_path);
    if (!report) throw std::runtime_error("cannot write report: " + report_path);
    report << "final_test_accuracy " << result.history.final_test_accuracy << "\n"
           << "iterations " << result.history.points.back().iteration << "\n"
           << "early_stopped " << (result.history.early_stopped ? "yes" : "no") << "\n"
           << "seed " << rc.master_seed << "\n"
           << "alpha " << alpha << "\n"
           << "slots " << evo.slots << " nodes_per_slot " << evo.nodes_per_slot << "\n"
           << "parents " << evo.parents << " splits " << evo.splits << "\n"
           << "vocab " << data.vocab.size() << " categories " << data.corpora.n_categories
           << "\n"
           << "train " << data.corpora.train.size() << " val "
           << data.corpora.validation.size() << " test " << data.corpora.test.size() << "\n";

    std::cout << "final test accuracy: " << result.history.final_test_accuracy << "\n"
              << "curve: " << csv_path << "\nmodel: " << model_path << "\n";
    return 0;
}

int cmd_baseline(const RunConfig& rc) {
    PreparedData data = prepare_data(rc);

    // Tf-Idf document frequencies come from the unlabeled pool.
    StopwordSet stopwords;
    if (!rc.stopwords_path.empty()) stopwords = load_stopwords(rc.stopwords_path);
    Corpus unlabeled = load_corpus_jsonl(rc.unlabeled_path, stopwords);
    auto w = tfidf_weights(unlabeled.docs, data.vocab);
    Eigen::VectorXd tfidf = Eigen::Map<Eigen::VectorXd>(w.data(), static_cast<int>(w.size()));

    auto plain = train_baseline(data.corpora.train, data.corpora.n_categories,
                                data.corpora.vocab_size, std::nullopt, rc.baseline_ridge);
    auto weighted = train_baseline(data.corpora.train, data.corpora.n_categories,
                                   data.corpora.vocab_size, tfidf, rc.baseline_ridge);

    std::cout << "baseline (plain)  test accuracy: "
              << baseline_accuracy(plain, data.corpora.test) << "\n"
              << "baseline (tf-idf) test accuracy: "
              << baseline_accuracy(weighted, data.corpora.test) << "\n";
    return 0;
}

int cmd_eval(const std::string& model_path, const std::string& corpus_path,
             const std::string& stopwords_path) {
    ModelArchive archive = load_model(model_path);
    StopwordSet stopwords;
    if (!stopwords_path.empty()) stopwords = load_stopwords(stopwords_path);
    Corpus corpus = load_corpus_jsonl(corpus_path, stopwords);

    if (corpus.label_names != archive.label_names)
        throw std::runtime_error("corpus labels do not match the archived model's labels");
    std::vector<LabeledExample> docs = to_examples(corpus.docs, archive.vocab);
    std::cout << "accuracy: " << evaluate_accuracy(archive.model, docs) << " over "
              << docs.size() << " documents\n";
    return 0;
}

int cmd_export(const std::string& history_path, const std::string& csv_path) {
    write_curve_csv(read_history_json(history_path), csv_path);
    std::cout << "wrote " << csv_path << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"semi-supervised text classifier with evolutionary node selection"};
    app.require_subcommand(1);

    CommonOpts synth_opts, run_opts, baseline_opts;
    std::string model_path, corpus_path, stopwords_path, history_path, csv_path;

    auto* synth = app.add_subcommand("synth", "generate a synthetic corpus pair");
    add_common(synth, synth_opts);

    auto* runcmd = app.add_subcommand("run", "run the evolutionary training loop");
    add_common(runcmd, run_opts);
    std::string run_unlabeled, run_labeled;
    runcmd->add_option("--unlabeled", run_unlabeled, "unlabeled corpus (JSON lines)");
    runcmd->add_option("--labeled", run_labeled, "labeled corpus (JSON lines)");

    auto* baseline = app.add_subcommand("baseline", "linear-regression reference classifier");
    add_common(baseline, baseline_opts);
    std::string base_unlabeled, base_labeled;
    baseline->add_option("--unlabeled", base_unlabeled, "unlabeled corpus (for tf-idf)");
    baseline->add_option("--labeled", base_labeled, "labeled corpus (JSON lines)");

    auto* eval = app.add_subcommand("eval", "evaluate an archived model on a corpus");
    eval->add_option("--model", model_path, "model archive")->required();
    eval->add_option("--corpus", corpus_path, "labeled corpus (JSON lines)")->required();
    eval->add_option("--stopwords", stopwords_path, "stopword list");

    auto* exportcmd = app.add_subcommand("export", "re-emit the curve CSV from a history file");
    exportcmd->add_option("--history", history_path, "history JSON")->required();
    exportcmd->add_option("--out-csv", csv_path, "target CSV path")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (synth->parsed()) return cmd_synth(resolve_config(synth_opts));
        if (runcmd->parsed()) {
            RunConfig rc = resolve_config(run_opts);
            if (!run_unlabeled.empty()) rc.unlabeled_path = run_unlabeled;
            if (!run_labeled.empty()) rc.labeled_path = run_labeled;
            return cmd_run(rc);
        }
        if (baseline->parsed()) {
            RunConfig rc = resolve_config(baseline_opts);
            if (!base_unlabeled.empty()) rc.unlabeled_path = base_unlabeled;
            if (!base_labeled.empty()) rc.labeled_path = base_labeled;
            return cmd_baseline(rc);
        }
        if (eval->parsed()) return cmd_eval(model_path, corpus_path, stopwords_path);
        if (exportcmd->parsed()) return cmd_export(history_path, csv_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
