#include "jamscope/model_io.hpp"

#include <cstring>
#include <fstream>
#include <stdexcept>

#include "jamscope/version.hpp"

namespace jamscope::model_io {

namespace {

constexpr char kMagic[8] = {'J', 'A', 'M', 'S', 'C', 'O', 'P', 'E'};
constexpr std::uint32_t kFormatVersion = 1;

class Writer {
public:
    explicit Writer(const std::filesystem::path& path)
        : out_(path, std::ios::binary), path_(path.string()) {
        if (!out_) throw std::runtime_error("cannot write model: " + path_);
    }
    void bytes(const void* p, std::size_t n) {
        out_.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
    }
    void u32(std::uint32_t v) { bytes(&v, 4); }
    void u64(std::uint64_t v) { bytes(&v, 8); }
    void i32(std::int32_t v) { bytes(&v, 4); }
    void f32(float v) { bytes(&v, 4); }
    void str(const std::string& s) {
        u32(static_cast<std::uint32_t>(s.size()));
        bytes(s.data(), s.size());
    }
    void f32_block(const float* p, std::size_t n) { bytes(p, n * 4); }
    void finish() {
        out_.flush();
        if (!out_) throw std::runtime_error("model write failed: " + path_);
    }

private:
    std::ofstream out_;
    std::string path_;
};

class Reader {
public:
    explicit Reader(const std::filesystem::path& path)
        : in_(path, std::ios::binary), path_(path.string()) {
        if (!in_) throw std::runtime_error("cannot open model: " + path_);
    }
    void bytes(void* p, std::size_t n) {
        in_.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
        if (!in_) throw std::runtime_error("truncated model file: " + path_);
    }
    std::uint32_t u32() {
        std::uint32_t v;
        bytes(&v, 4);
        return v;
    }
    std::uint64_t u64() {
        std::uint64_t v;
        bytes(&v, 8);
        return v;
    }
    std::int32_t i32() {
        std::int32_t v;
        bytes(&v, 4);
        return v;
    }
    float f32() {
        float v;
        bytes(&v, 4);
        return v;
    }
    std::string str() {
        const std::uint32_t n = u32();
        if (n > (1u << 20)) throw std::runtime_error("corrupt string in model: " + path_);
        std::string s(n, '\0');
        bytes(s.data(), n);
        return s;
    }
    void f32_block(float* p, std::size_t n) { bytes(p, n * 4); }

private:
    std::ifstream in_;
    std::string path_;
};

std::string read_header(Reader& in, const std::filesystem::path& path) {
    char magic[8];
    in.bytes(magic, 8);
    if (std::memcmp(magic, kMagic, 8) != 0)
        throw std::runtime_error("not a model file: " + path.string());
    if (in.u32() != kFormatVersion)
        throw std::runtime_error("unsupported model format version in " + path.string());
    return in.str(); // type tag
}

void write_header(Writer& out, const std::string& type) {
    out.bytes(kMagic, 8);
    out.u32(kFormatVersion);
    out.str(type);
    out.str(kVersion);
}

} // namespace

void save_cnn(const std::filesystem::path& path, const classify::CnnConfig& config,
              const Eigen::VectorXf& params) {
    classify::CompactCnn<float> probe(config);
    if (params.size() != probe.n_params())
        throw std::invalid_argument("save_cnn: parameter count does not match config");

    Writer out(path);
    write_header(out, "cnn");
    out.u32(static_cast<std::uint32_t>(config.image_height));
    out.u32(static_cast<std::uint32_t>(config.image_width));
    for (int c : config.conv_channels) out.u32(static_cast<std::uint32_t>(c));
    out.u32(static_cast<std::uint32_t>(config.dense_units));
    out.u32(static_cast<std::uint32_t>(config.n_classes));
    out.u64(static_cast<std::uint64_t>(params.size()));
    out.f32_block(params.data(), static_cast<std::size_t>(params.size()));
    out.finish();
}

CnnFile load_cnn(const std::filesystem::path& path) {
    Reader in(path);
    const std::string type = read_header(in, path);
    if (type != "cnn") throw std::runtime_error("expected a cnn model in " + path.string());
    CnnFile f;
    f.version = in.str();
    f.config.image_height = static_cast<int>(in.u32());
    f.config.image_width = static_cast<int>(in.u32());
    for (auto& c : f.config.conv_channels) c = static_cast<int>(in.u32());
    f.config.dense_units = static_cast<int>(in.u32());
    f.config.n_classes = static_cast<int>(in.u32());
    const std::uint64_t n = in.u64();
    classify::CompactCnn<float> probe(f.config);
    if (n != static_cast<std::uint64_t>(probe.n_params()))
        throw std::runtime_error("cnn parameter count inconsistent in " + path.string());
    f.params.resize(static_cast<Eigen::Index>(n));
    in.f32_block(f.params.data(), n);
    return f;
}

void save_knn(const std::filesystem::path& path, const classify::KnnModel& model) {
    Writer out(path);
    write_header(out, "knn");
    out.u32(static_cast<std::uint32_t>(model.k));
    out.u32(static_cast<std::uint32_t>(model.n_classes));
    out.u64(static_cast<std::uint64_t>(model.train_features.rows()));
    out.u64(static_cast<std::uint64_t>(model.train_features.cols()));
    for (Eigen::Index i = 0; i < model.train_labels.size(); ++i)
        out.i32(model.train_labels[i]);
    out.f32_block(model.train_features.data(),
                  static_cast<std::size_t>(model.train_features.size()));
    out.finish();
}

KnnFile load_knn(const std::filesystem::path& path) {
    Reader in(path);
    const std::string type = read_header(in, path);
    if (type != "knn") throw std::runtime_error("expected a knn model in " + path.string());
    KnnFile f;
    f.version = in.str();
    f.model.k = static_cast<int>(in.u32());
    f.model.n_classes = static_cast<int>(in.u32());
    const auto rows = static_cast<Eigen::Index>(in.u64());
    const auto cols = static_cast<Eigen::Index>(in.u64());
    if (rows < 1 || cols < 1 || rows > (1 << 24) || cols > (1 << 20))
        throw std::runtime_error("knn model dimensions implausible in " + path.string());
    f.model.train_labels.resize(rows);
    for (Eigen::Index i = 0; i < rows; ++i) f.model.train_labels[i] = in.i32();
    f.model.train_features.resize(rows, cols);
    in.f32_block(f.model.train_features.data(), static_cast<std::size_t>(rows * cols));
    return f;
}

void save_gnb(const std::filesystem::path& path, const classify::GnbModel& model) {
    Writer out(path);
    write_header(out, "gnb");
    out.u32(static_cast<std::uint32_t>(model.n_classes));
    out.u64(static_cast<std::uint64_t>(model.means.cols()));
    out.f32_block(model.means.data(), static_cast<std::size_t>(model.means.size()));
    out.f32_block(model.variances.data(), static_cast<std::size_t>(model.variances.size()));
    out.f32_block(model.log_priors.data(), static_cast<std::size_t>(model.log_priors.size()));
    out.finish();
}

GnbFile load_gnb(const std::filesystem::path& path) {
    Reader in(path);
    const std::string type = read_header(in, path);
    if (type != "gnb") throw std::runtime_error("expected a gnb model in " + path.string());
    GnbFile f;
    f.version = in.str();
    f.model.n_classes = static_cast<int>(in.u32());
    const auto dim = static_cast<Eigen::Index>(in.u64());
    if (f.model.n_classes < 1 || dim < 1 || dim > (1 << 20))
        throw std::runtime_error("gnb model dimensions implausible in " + path.string());
    f.model.means.resize(f.model.n_classes, dim);
    f.model.variances.resize(f.model.n_classes, dim);
    f.model.log_priors.resize(f.model.n_classes);
    in.f32_block(f.model.means.data(), static_cast<std::size_t>(f.model.means.size()));
    in.f32_block(f.model.variances.data(), static_cast<std::size_t>(f.model.variances.size()));
    in.f32_block(f.model.log_priors.data(), static_cast<std::size_t>(f.model.log_priors.size()));
    return f;
}

std::string peek_model_type(const std::filesystem::path& path) {
    Reader in(path);
    return read_header(in, path);
}

} // namespace jamscope::model_io
