#include "evotext/archive.hpp"

#include <cmath>
#include <cstdint>
#include <charconv>
#include <cstring>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace evotext {

namespace {

constexpr char kMagic[4] = {'E', 'V', 'T', 'X'};
constexpr std::uint32_t kVersion = 1;

// All scalars little-endian; this targets little-endian hosts.
void put_u32(std::ostream& out, std::uint32_t v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof v);
}
void put_f64(std::ostream& out, double v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof v);
}
void put_matrix(std::ostream& out, const Eigen::MatrixXd& m) {
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) put_f64(out, m(i, j));
}
void put_vector(std::ostream& out, const Eigen::VectorXd& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i) put_f64(out, v[i]);
}
void put_string(std::ostream& out, const std::string& s) {
    put_u32(out, static_cast<std::uint32_t>(s.size()));
    out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

struct Reader {
    std::ifstream in;
    explicit Reader(const std::string& path) : in(path, std::ios::binary) {
        if (!in) throw std::runtime_error("cannot open model archive: " + path);
    }
    void raw(void* dst, std::size_t n) {
        in.read(static_cast<char*>(dst), static_cast<std::streamsize>(n));
        if (static_cast<std::size_t>(in.gcount()) != n)
            throw ArchiveTruncatedError("model archive is truncated");
    }
    std::uint32_t u32() {
        std::uint32_t v;
        raw(&v, sizeof v);
        return v;
    }
    double f64() {
        double v;
        raw(&v, sizeof v);
        return v;
    }
    Eigen::MatrixXd matrix(Eigen::Index rows, Eigen::Index cols) {
        Eigen::MatrixXd m(rows, cols);
        for (Eigen::Index i = 0; i < rows; ++i)
            for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = f64();
        return m;
    }
    Eigen::VectorXd vector(Eigen::Index n) {
        Eigen::VectorXd v(n);
        for (Eigen::Index i = 0; i < n; ++i) v[i] = f64();
        return v;
    }
    std::string str() {
        auto n = u32();
        std::string s(n, '\0');
        raw(s.data(), n);
        return s;
    }
};

}  // namespace

void save_model(const ModelArchive& a, const std::string& path) {
    const auto& m = a.model;
    if (m.hidden.empty()) throw ArchiveDimensionError("cannot archive a model with no slots");
    const auto V = m.hidden.front().visible_size();
    const auto H = m.hidden.front().hidden_size();
    const auto K = m.slots();
    const auto C = m.output.categories();
    if (static_cast<int>(a.vocab.terms.size()) != V)
        throw ArchiveDimensionError("vocabulary size does not match visible size");
    if (m.output.width() != K * H)
        throw ArchiveDimensionError("output width does not match ensemble shape");
    if (static_cast<int>(a.label_names.size()) != C)
        throw ArchiveDimensionError("label name count does not match categories");

    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write model archive: " + path);
    out.write(kMagic, sizeof kMagic);
    put_u32(out, kVersion);
    put_u32(out, static_cast<std::uint32_t>(V));
    put_u32(out, static_cast<std::uint32_t>(H));
    put_u32(out, static_cast<std::uint32_t>(K));
    put_u32(out, static_cast<std::uint32_t>(C));
    put_f64(out, m.alpha);
    for (const auto& t : a.vocab.terms) put_string(out, t);
    for (const auto& name : a.label_names) put_string(out, name);
    for (const auto& layer : m.hidden) {
        if (layer.visible_size() != V || layer.hidden_size() != H)
            throw ArchiveDimensionError("hidden slot shape mismatch");
        put_matrix(out, layer.w);
        put_vector(out, layer.b);
        put_vector(out, layer.c);
    }
    put_matrix(out, m.output.w_out);
    put_vector(out, m.output.d);
    if (!out) throw std::runtime_error("write failed: " + path);
}

ModelArchive load_model(const std::string& path) {
    Reader r(path);
    char magic[4];
    r.raw(magic, sizeof magic);
    if (std::memcmp(magic, kMagic, sizeof kMagic) != 0)
        throw ArchiveVersionError("not a model archive (bad magic)");
    auto version = r.u32();
    if (version != kVersion)
        throw ArchiveVersionError("unsupported archive version " + std::to_string(version));

    const auto V = static_cast<Eigen::Index>(r.u32());
    const auto H = static_cast<Eigen::Index>(r.u32());
    const auto K = static_cast<Eigen::Index>(r.u32());
    const auto C = static_cast<Eigen::Index>(r.u32());
    if (V <= 0 || H <= 0 || K <= 0 || C <= 0)
        throw ArchiveDimensionError("archive declares non-positive dimensions");

    ModelArchive a;
    a.model.alpha = r.f64();
    std::vector<std::string> terms;
    for (Eigen::Index j = 0; j < V; ++j) terms.push_back(r.str());
    a.vocab = Vocabulary::from_terms(std::move(terms));
    for (Eigen::Index i = 0; i < C; ++i) a.label_names.push_back(r.str());
    for (Eigen::Index g = 0; g < K; ++g) {
        HiddenLayerParams layer;
        layer.w = r.matrix(H, V);
        layer.b = r.vector(H);
        layer.c = r.vector(V);
        a.model.hidden.push_back(std::move(layer));
    }
    a.model.output.w_out = r.matrix(C, K * H);
    a.model.output.d = r.vector(C);

    // anything left over means the declared sizes do not match the payload
    char extra;
    r.in.read(&extra, 1);
    if (!r.in.eof())
        throw ArchiveDimensionError("archive payload larger than declared dimensions");
    return a;
}

namespace {

using nlohmann::json;

std::string fmt_double(double v) {
    if (std::isnan(v)) return "nan";
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);  // shortest round trip
    return std::string(buf, res.ptr);
}

}  // namespace

void write_history_json(const EvolutionHistory& h, const std::string& path) {
    json j;
    j["final_test_accuracy"] = h.final_test_accuracy;
    j["early_stopped"] = h.early_stopped;
    j["points"] = json::array();
    for (const auto& p : h.points) {
        json q;
        q["iteration"] = p.iteration;
        q["pool_best_val"] = p.pool_best_val;
        q["pool_mean_val"] = p.pool_mean_val;
        q["child_val"] = std::isnan(p.child_val) ? json() : json(p.child_val);
        q["best_test"] = p.best_test;
        j["points"].push_back(q);
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write history file: " + path);
    out << j.dump(2) << '\n';
}

EvolutionHistory read_history_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open history file: " + path);
    json j = json::parse(in);
    EvolutionHistory h;
    h.final_test_accuracy = j.at("final_test_accuracy").get<double>();
    h.early_stopped = j.at("early_stopped").get<bool>();
    for (const auto& q : j.at("points")) {
        HistoryPoint p;
        p.iteration = q.at("iteration").get<int>();
        p.pool_best_val = q.at("pool_best_val").get<double>();
        p.pool_mean_val = q.at("pool_mean_val").get<double>();
        p.child_val = q.at("child_val").is_null() ? std::nan("") : q.at("child_val").get<double>();
        p.best_test = q.at("best_test").get<double>();
        h.points.push_back(p);
    }
    return h;
}

void write_curve_csv(const EvolutionHistory& h, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write curve file: " + path);
    out << "iteration,pool_best_val,pool_mean_val,child_val\n";
    for (const auto& p : h.points)
        out << p.iteration << ',' << fmt_double(p.pool_best_val) << ','
            << fmt_double(p.pool_mean_val) << ',' << fmt_double(p.child_val) << '\n';
    if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace evotext
