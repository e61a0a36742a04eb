#include "evotext/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace evotext {

using nlohmann::json;

Vocabulary Vocabulary::from_terms(std::vector<std::string> terms) {
    Vocabulary v;
    v.terms = std::move(terms);
    v.index.reserve(v.terms.size());
    for (int i = 0; i < static_cast<int>(v.terms.size()); ++i) {
        auto [it, fresh] = v.index.emplace(v.terms[i], i);
        if (!fresh) throw std::invalid_argument("vocabulary terms must be distinct");
    }
    return v;
}

bool InputVector::contains(int j) const {
    return std::binary_search(active.begin(), active.end(), j);
}

void SynthConfig::validate() const {
    if (categories <= 0 || signal_terms_per_category <= 0 || shared_noise_terms <= 0 ||
        doc_length <= 0 || docs_per_category <= 0)
        throw std::invalid_argument("synthetic config counts must be positive");
    if (signal_fraction < 0.0 || signal_fraction > 1.0)
        throw std::invalid_argument("signal_fraction must lie in [0,1]");
}

std::vector<std::string> tokenize(const std::string& text) {
    static const StopwordSet empty;
    return tokenize(text, empty);
}

std::vector<std::string> tokenize(const std::string& text, const StopwordSet& stopwords) {
    std::vector<std::string> out;
    std::string cur;
    auto flush = [&] {
        if (cur.size() >= 2 && !stopwords.count(cur)) out.push_back(cur);
        cur.clear();
    };
    for (unsigned char ch : text) {
        if (std::isalnum(ch))
            cur.push_back(static_cast<char>(std::tolower(ch)));
        else
            flush();
    }
    flush();
    return out;
}

Vocabulary build_vocabulary(const std::vector<Document>& docs, int max_vocab) {
    if (docs.empty()) throw std::invalid_argument("build_vocabulary: empty document list");
    std::map<std::string, int> df;  // ordered: lexicographic tie-break for free
    for (const auto& d : docs) {
        std::set<std::string> seen(d.tokens.begin(), d.tokens.end());
        for (const auto& t : seen) ++df[t];
    }
    if (df.empty()) throw std::invalid_argument("build_vocabulary: every document is empty");

    std::vector<std::pair<std::string, int>> ranked(df.begin(), df.end());
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    if (static_cast<int>(ranked.size()) > max_vocab) ranked.resize(max_vocab);

    std::vector<std::string> terms;
    terms.reserve(ranked.size());
    for (auto& [t, n] : ranked) terms.push_back(std::move(t));
    return Vocabulary::from_terms(std::move(terms));
}

InputVector vectorize(const Document& doc, const Vocabulary& vocab) {
    if (vocab.size() == 0) throw std::invalid_argument("vectorize: empty vocabulary");
    std::set<int> hits;
    for (const auto& t : doc.tokens) {
        int j = vocab.lookup(t);
        if (j >= 0) hits.insert(j);
    }
    InputVector x;
    x.dims = vocab.size();
    x.active.assign(hits.begin(), hits.end());
    return x;
}

std::vector<double> tfidf_weights(const std::vector<Document>& docs, const Vocabulary& vocab) {
    if (docs.empty()) throw std::invalid_argument("tfidf_weights: empty document list");
    std::vector<int> df(vocab.size(), 0);
    for (const auto& d : docs) {
        std::set<int> seen;
        for (const auto& t : d.tokens) {
            int j = vocab.lookup(t);
            if (j >= 0) seen.insert(j);
        }
        for (int j : seen) ++df[j];
    }
    const double total = static_cast<double>(docs.size());
    std::vector<double> w(vocab.size(), 0.0);
    for (int j = 0; j < vocab.size(); ++j)
        if (df[j] > 0) w[j] = std::log(total / df[j]);
    return w;
}

std::vector<std::vector<int>> stratified_fold_indices(const std::vector<int>& labels,
                                                      int n_folds, Rng& rng) {
    if (n_folds < 1) throw std::invalid_argument("stratified split: n_folds must be >= 1");
    std::map<int, std::vector<int>> by_label;  // ordered for determinism
    for (int i = 0; i < static_cast<int>(labels.size()); ++i) {
        if (labels[i] < 0) throw std::invalid_argument("stratified split: unlabeled document");
        by_label[labels[i]].push_back(i);
    }
    for (auto& [lab, idx] : by_label)
        if (static_cast<int>(idx.size()) < n_folds)
            throw std::invalid_argument("stratified split: category " + std::to_string(lab) +
                                        " has fewer documents than folds");

    std::vector<std::vector<int>> folds(n_folds);
    for (auto& [lab, idx] : by_label) {
        std::shuffle(idx.begin(), idx.end(), rng);
        for (int k = 0; k < static_cast<int>(idx.size()); ++k)
            folds[k % n_folds].push_back(idx[k]);
    }
    return folds;
}

LabeledSplit stratified_split(const std::vector<Document>& docs, int n_folds, Rng& rng) {
    std::vector<int> labels;
    labels.reserve(docs.size());
    for (const auto& d : docs) {
        if (!d.label) throw std::invalid_argument("stratified_split: unlabeled document " + d.id);
        labels.push_back(*d.label);
    }
    auto idx_folds = stratified_fold_indices(labels, n_folds, rng);
    LabeledSplit split;
    split.folds.resize(n_folds);
    for (int f = 0; f < n_folds; ++f)
        for (int i : idx_folds[f]) split.folds[f].push_back(docs[i]);
    return split;
}

namespace {

std::string synth_term(const char* kind, int a, int b = -1) {
    std::ostringstream ss;
    ss << kind << a;
    if (b >= 0) ss << "w" << b;
    return ss.str();
}

}  // namespace

std::vector<Document> generate_synthetic(const SynthConfig& cfg) {
    cfg.validate();
    Rng rng = make_rng(cfg.seed);

    std::vector<std::vector<std::string>> signal(cfg.categories);
    for (int c = 0; c < cfg.categories; ++c)
        for (int k = 0; k < cfg.signal_terms_per_category; ++k)
            signal[c].push_back(synth_term("cat", c, k));
    std::vector<std::string> noise;
    for (int k = 0; k < cfg.shared_noise_terms; ++k) noise.push_back(synth_term("noise", k));

    std::uniform_int_distribution<int> pick_signal(0, cfg.signal_terms_per_category - 1);
    std::uniform_int_distribution<int> pick_noise(0, cfg.shared_noise_terms - 1);

    std::vector<Document> docs;
    docs.reserve(static_cast<std::size_t>(cfg.categories) * cfg.docs_per_category);
    const int n_signal = static_cast<int>(std::lround(cfg.signal_fraction * cfg.doc_length));
    for (int c = 0; c < cfg.categories; ++c) {
        for (int d = 0; d < cfg.docs_per_category; ++d) {
            Document doc;
            doc.id = "synth-c" + std::to_string(c) + "-d" + std::to_string(d);
            doc.label = c;
            doc.tokens.reserve(cfg.doc_length);
            for (int t = 0; t < n_signal; ++t) doc.tokens.push_back(signal[c][pick_signal(rng)]);
            for (int t = n_signal; t < cfg.doc_length; ++t) doc.tokens.push_back(noise[pick_noise(rng)]);
            docs.push_back(std::move(doc));
        }
    }
    return docs;
}

Corpus load_corpus_jsonl(const std::string& path, const StopwordSet& stopwords) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open corpus file: " + path);

    struct Raw {
        std::string id;
        std::string text;
        std::optional<std::string> label;
    };
    std::vector<Raw> raws;
    std::set<std::string> label_set;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::parse_error& e) {
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": " + e.what());
        }
        Raw r;
        r.id = j.at("id").get<std::string>();
        r.text = j.at("text").get<std::string>();
        if (j.contains("label") && !j["label"].is_null()) {
            r.label = j["label"].get<std::string>();
            label_set.insert(*r.label);
        }
        raws.push_back(std::move(r));
    }

    Corpus corpus;
    corpus.label_names.assign(label_set.begin(), label_set.end());
    std::unordered_map<std::string, int> label_index;
    for (int i = 0; i < static_cast<int>(corpus.label_names.size()); ++i)
        label_index[corpus.label_names[i]] = i;

    corpus.docs.reserve(raws.size());
    for (auto& r : raws) {
        Document d;
        d.id = std::move(r.id);
        d.tokens = tokenize(r.text, stopwords);
        if (r.label) d.label = label_index.at(*r.label);
        corpus.docs.push_back(std::move(d));
    }
    return corpus;
}

void write_corpus_jsonl(const std::string& path, const std::vector<Document>& docs,
                        const std::vector<std::string>& label_names) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write corpus file: " + path);
    for (const auto& d : docs) {
        json j;
        j["id"] = d.id;
        std::string text;
        for (std::size_t i = 0; i < d.tokens.size(); ++i) {
            if (i) text.push_back(' ');
            text += d.tokens[i];
        }
        j["text"] = text;
        if (d.label) {
            if (*d.label < 0 || *d.label >= static_cast<int>(label_names.size()))
                throw std::invalid_argument("write_corpus_jsonl: label index out of range");
            j["label"] = label_names[*d.label];
        }
        out << j.dump() << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

StopwordSet load_stopwords(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open stopword file: " + path);
    StopwordSet words;
    std::string line;
    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
        if (!line.empty()) words.insert(line);
    }
    return words;
}

}  // namespace evotext
