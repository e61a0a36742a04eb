#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "evotext/corpus.hpp"
#include "evotext/evolution.hpp"

namespace evotext {

// Flat view of an INI-style config file: "[section]" headers, "key = value"
// lines, '#' comments. Keys are addressed as "section.key".
class ConfigFile {
  public:
    ConfigFile() = default;
    static ConfigFile parse_file(const std::string& path);
    static ConfigFile parse_string(const std::string& text);

    bool has(const std::string& key) const { return values_.count(key) != 0; }
    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key, double fallback) const;
    int get_int(const std::string& key, int fallback) const;
    std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;

  private:
    std::map<std::string, std::string> values_;
};

// Everything a harness run needs; every spec default is overridable from the
// config file and a few common CLI flags.
struct RunConfig {
    std::string unlabeled_path;
    std::string labeled_path;
    std::string stopwords_path;
    std::string out_dir = ".";
    std::uint64_t master_seed = 0;
    bool single_thread = false;

    int max_vocab = 10000;
    double train_fraction = 0.6;
    double val_fraction = 0.2;

    double baseline_ridge = 1e-3;
    // alpha < 0 means "use 1/sqrt(C)" resolved once categories are known
    double alpha = -1.0;

    SynthConfig synth;
    int synth_unlabeled_per_category = 100;
    EvoConfig evo;
};

RunConfig load_run_config(const ConfigFile& cfg);

}  // namespace evotext
