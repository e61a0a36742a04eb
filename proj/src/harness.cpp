#include "evotext/harness.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace evotext {

LabeledPartition partition_labeled(const std::vector<Document>& docs, double train_fraction,
                                   double val_fraction, Rng& rng) {
    if (train_fraction <= 0.0 || val_fraction <= 0.0 || train_fraction + val_fraction >= 1.0)
        throw std::invalid_argument("partition_labeled: fractions must be positive and sum < 1");
    std::map<int, std::vector<int>> by_label;
    for (int i = 0; i < static_cast<int>(docs.size()); ++i) {
        if (!docs[i].label)
            throw std::invalid_argument("partition_labeled: unlabeled document " + docs[i].id);
        by_label[*docs[i].label].push_back(i);
    }
    LabeledPartition part;
    for (auto& [lab, idx] : by_label) {
        std::shuffle(idx.begin(), idx.end(), rng);
        const int n = static_cast<int>(idx.size());
        const int n_train = static_cast<int>(std::lround(train_fraction * n));
        const int n_val = static_cast<int>(std::lround(val_fraction * n));
        if (n_train < 1 || n_val < 1 || n_train + n_val >= n)
            throw std::invalid_argument("partition_labeled: category " + std::to_string(lab) +
                                        " too small for the requested fractions");
        for (int k = 0; k < n; ++k) {
            const Document& d = docs[idx[k]];
            if (k < n_train)
                part.train.push_back(d);
            else if (k < n_train + n_val)
                part.validation.push_back(d);
            else
                part.test.push_back(d);
        }
    }
    return part;
}

std::vector<LabeledExample> to_examples(const std::vector<Document>& docs,
                                        const Vocabulary& vocab) {
    std::vector<LabeledExample> out;
    out.reserve(docs.size());
    for (const auto& d : docs) {
        if (!d.label) throw std::invalid_argument("to_examples: unlabeled document " + d.id);
        out.push_back({vectorize(d, vocab), *d.label});
    }
    return out;
}

std::vector<InputVector> to_inputs(const std::vector<Document>& docs, const Vocabulary& vocab) {
    std::vector<InputVector> out;
    out.reserve(docs.size());
    for (const auto& d : docs) out.push_back(vectorize(d, vocab));
    return out;
}

PreparedData prepare_data(const RunConfig& cfg) {
    if (cfg.unlabeled_path.empty() || cfg.labeled_path.empty())
        throw std::invalid_argument("both an unlabeled and a labeled corpus file are required");
    StopwordSet stopwords;
    if (!cfg.stopwords_path.empty()) stopwords = load_stopwords(cfg.stopwords_path);

    Corpus unlabeled = load_corpus_jsonl(cfg.unlabeled_path, stopwords);
    Corpus labeled = load_corpus_jsonl(cfg.labeled_path, stopwords);
    if (labeled.label_names.empty())
        throw std::invalid_argument("labeled corpus contains no labels: " + cfg.labeled_path);

    Rng rng = make_rng(derive_seed(cfg.master_seed, "labeled-partition"));
    LabeledPartition part =
        partition_labeled(labeled.docs, cfg.train_fraction, cfg.val_fraction, rng);

    std::vector<Document> vocab_docs = unlabeled.docs;
    vocab_docs.insert(vocab_docs.end(), part.train.begin(), part.train.end());
    Vocabulary vocab = build_vocabulary(vocab_docs, cfg.max_vocab);

    PreparedData data;
    data.vocab = vocab;
    data.label_names = labeled.label_names;
    data.corpora.unlabeled = to_inputs(unlabeled.docs, vocab);
    data.corpora.train = to_examples(part.train, vocab);
    data.corpora.validation = to_examples(part.validation, vocab);
    data.corpora.test = to_examples(part.test, vocab);
    data.corpora.n_categories = static_cast<int>(labeled.label_names.size());
    data.corpora.vocab_size = vocab.size();
    return data;
}

double resolve_alpha(double alpha, int n_categories) {
    if (alpha >= 0.0) return alpha;
    return 1.0 / std::sqrt(static_cast<double>(n_categories));
}

}  // namespace evotext
