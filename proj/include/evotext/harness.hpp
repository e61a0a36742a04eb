#pragma once

#include <string>
#include <vector>

#include "evotext/archive.hpp"
#include "evotext/config.hpp"
#include "evotext/evolution.hpp"

namespace evotext {

struct LabeledPartition {
    std::vector<Document> train;
    std::vector<Document> validation;
    std::vector<Document> test;
};

// Stratified train/validation/test partition: per category, shuffle then cut
// at round(train_fraction * n) and round(val_fraction * n).
LabeledPartition partition_labeled(const std::vector<Document>& docs, double train_fraction,
                                   double val_fraction, Rng& rng);

std::vector<LabeledExample> to_examples(const std::vector<Document>& docs,
                                        const Vocabulary& vocab);
std::vector<InputVector> to_inputs(const std::vector<Document>& docs, const Vocabulary& vocab);

struct PreparedData {
    Corpora corpora;
    Vocabulary vocab;
    std::vector<std::string> label_names;
};

// Load both corpora, build the vocabulary from unlabeled + labeled training
// documents, vectorize, and partition the labeled set.
PreparedData prepare_data(const RunConfig& cfg);

// Resolve alpha: negative means the 1/sqrt(C) default.
double resolve_alpha(double alpha, int n_categories);

}  // namespace evotext
