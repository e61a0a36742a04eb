#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "evotext/rng.hpp"

namespace evotext {

struct Document {
    std::string id;
    std::vector<std::string> tokens;
    std::optional<int> label;  // category index in [0, C)
};

struct Vocabulary {
    std::vector<std::string> terms;
    std::unordered_map<std::string, int> index;

    int size() const { return static_cast<int>(terms.size()); }
    // -1 if absent
    int lookup(const std::string& term) const {
        auto it = index.find(term);
        return it == index.end() ? -1 : it->second;
    }
    static Vocabulary from_terms(std::vector<std::string> terms);
};

// Binary bag-of-words presence vector over a fixed vocabulary.
struct InputVector {
    int dims = 0;
    std::vector<int> active;  // sorted, duplicate-free indices with x_j = 1

    bool contains(int j) const;
};

struct LabeledSplit {
    std::vector<std::vector<Document>> folds;
};

struct SynthConfig {
    int categories = 20;
    int signal_terms_per_category = 50;
    int shared_noise_terms = 500;
    int doc_length = 60;
    double signal_fraction = 0.5;
    int docs_per_category = 100;
    std::uint64_t seed = 0;

    void validate() const;  // throws std::invalid_argument
};

using StopwordSet = std::unordered_set<std::string>;

// Lowercase, split on non-alphanumeric, drop tokens shorter than 2 chars.
std::vector<std::string> tokenize(const std::string& text);
std::vector<std::string> tokenize(const std::string& text, const StopwordSet& stopwords);

// Terms ranked by descending document frequency, lexicographic tie-break,
// truncated to max_vocab. Throws if no document contributes a token.
Vocabulary build_vocabulary(const std::vector<Document>& docs, int max_vocab);

InputVector vectorize(const Document& doc, const Vocabulary& vocab);

// w_j = ln(D / df_j), with df_j = 0 mapped to 0.
std::vector<double> tfidf_weights(const std::vector<Document>& docs, const Vocabulary& vocab);

// Core of the stratified N-way split, shared with callers that hold labels
// only: per category, shuffle then deal round-robin. Returns fold -> indices.
std::vector<std::vector<int>> stratified_fold_indices(const std::vector<int>& labels,
                                                      int n_folds, Rng& rng);

LabeledSplit stratified_split(const std::vector<Document>& docs, int n_folds, Rng& rng);

std::vector<Document> generate_synthetic(const SynthConfig& cfg);

// JSON-lines corpus I/O. Label strings map to category indices by sorted order.
struct Corpus {
    std::vector<Document> docs;
    std::vector<std::string> label_names;  // sorted; empty for unlabeled corpora
};

Corpus load_corpus_jsonl(const std::string& path, const StopwordSet& stopwords = {});
void write_corpus_jsonl(const std::string& path, const std::vector<Document>& docs,
                        const std::vector<std::string>& label_names);

StopwordSet load_stopwords(const std::string& path);

}  // namespace evotext
