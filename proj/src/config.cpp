#include "evotext/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace evotext {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace

ConfigFile ConfigFile::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_string(ss.str());
}

ConfigFile ConfigFile::parse_string(const std::string& text) {
    ConfigFile cfg;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw std::runtime_error("config line " + std::to_string(lineno) +
                                         ": unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("config line " + std::to_string(lineno) +
                                     ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (key.empty())
            throw std::runtime_error("config line " + std::to_string(lineno) + ": empty key");
        cfg.values_[section.empty() ? key : section + "." + key] = val;
    }
    return cfg;
}

std::string ConfigFile::get_string(const std::string& key, const std::string& fallback) const {
    auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
}

double ConfigFile::get_double(const std::string& key, double fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    try {
        std::size_t pos;
        double v = std::stod(it->second, &pos);
        if (pos != it->second.size()) throw std::invalid_argument("");
        return v;
    } catch (...) {
        throw std::runtime_error("config key " + key + ": not a number: " + it->second);
    }
}

int ConfigFile::get_int(const std::string& key, int fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    try {
        std::size_t pos;
        int v = std::stoi(it->second, &pos);
        if (pos != it->second.size()) throw std::invalid_argument("");
        return v;
    } catch (...) {
        throw std::runtime_error("config key " + key + ": not an integer: " + it->second);
    }
}

std::uint64_t ConfigFile::get_u64(const std::string& key, std::uint64_t fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    try {
        std::size_t pos;
        unsigned long long v = std::stoull(it->second, &pos);
        if (pos != it->second.size()) throw std::invalid_argument("");
        return v;
    } catch (...) {
        throw std::runtime_error("config key " + key + ": not an unsigned integer: " + it->second);
    }
}

bool ConfigFile::get_bool(const std::string& key, bool fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    if (it->second == "true" || it->second == "1" || it->second == "yes") return true;
    if (it->second == "false" || it->second == "0" || it->second == "no") return false;
    throw std::runtime_error("config key " + key + ": not a boolean: " + it->second);
}

RunConfig load_run_config(const ConfigFile& cfg) {
    RunConfig rc;
    rc.unlabeled_path = cfg.get_string("corpus.unlabeled", rc.unlabeled_path);
    rc.labeled_path = cfg.get_string("corpus.labeled", rc.labeled_path);
    rc.stopwords_path = cfg.get_string("corpus.stopwords", rc.stopwords_path);
    rc.out_dir = cfg.get_string("run.out_dir", rc.out_dir);
    rc.master_seed = cfg.get_u64("run.seed", rc.master_seed);
    rc.single_thread = cfg.get_bool("run.single_thread", rc.single_thread);
    rc.max_vocab = cfg.get_int("corpus.max_vocab", rc.max_vocab);
    rc.train_fraction = cfg.get_double("run.train_fraction", rc.train_fraction);
    rc.val_fraction = cfg.get_double("run.val_fraction", rc.val_fraction);
    rc.baseline_ridge = cfg.get_double("baseline.ridge", rc.baseline_ridge);
    rc.alpha = cfg.get_double("dae.alpha", rc.alpha);

    rc.synth.categories = cfg.get_int("synth.categories", rc.synth.categories);
    rc.synth.signal_terms_per_category =
        cfg.get_int("synth.signal_terms_per_category", rc.synth.signal_terms_per_category);
    rc.synth.shared_noise_terms =
        cfg.get_int("synth.shared_noise_terms", rc.synth.shared_noise_terms);
    rc.synth.doc_length = cfg.get_int("synth.doc_length", rc.synth.doc_length);
    rc.synth.signal_fraction = cfg.get_double("synth.signal_fraction", rc.synth.signal_fraction);
    rc.synth.docs_per_category =
        cfg.get_int("synth.docs_per_category", rc.synth.docs_per_category);
    rc.synth_unlabeled_per_category =
        cfg.get_int("synth.unlabeled_per_category", rc.synth_unlabeled_per_category);

    auto& evo = rc.evo;
    evo.parents = cfg.get_int("evolution.parents", evo.parents);
    evo.splits = cfg.get_int("evolution.splits", evo.splits);
    evo.slots = cfg.get_int("evolution.slots", evo.slots);
    evo.nodes_per_slot = cfg.get_int("evolution.nodes_per_slot", evo.nodes_per_slot);
    evo.pool_capacity = cfg.get_int("evolution.pool_capacity", evo.pool_capacity);
    evo.pool_seed_count = cfg.get_int("evolution.pool_seed_count", evo.pool_seed_count);
    evo.max_iterations = cfg.get_int("evolution.max_iterations", evo.max_iterations);
    evo.patience = cfg.get_int("evolution.patience", evo.patience);

    evo.dae.noise_fraction = cfg.get_double("dae.noise_fraction", evo.dae.noise_fraction);
    evo.dae.learning_rate = cfg.get_double("dae.learning_rate", evo.dae.learning_rate);
    evo.dae.epochs = cfg.get_int("dae.epochs", evo.dae.epochs);
    evo.child_dae = evo.dae;
    evo.child_dae.epochs = cfg.get_int("dae.child_epochs", evo.dae.epochs);

    evo.output.learning_rate = cfg.get_double("output.learning_rate", evo.output.learning_rate);
    evo.output.epochs = cfg.get_int("output.epochs", evo.output.epochs);
    evo.output.init_range = cfg.get_double("output.init_range", evo.output.init_range);
    return rc;
}

}  // namespace evotext
