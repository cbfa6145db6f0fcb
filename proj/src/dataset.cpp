#include "jamscope/dataset.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <unordered_map>

#include "json.hpp"

#include "jamscope/rng.hpp"
#include "jamscope/version.hpp"

namespace jamscope::dataset {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;
using synth::SignalClass;

constexpr const char* kSchema = "jamscope-dataset/1";
constexpr const char* kPartialMarker = ".partial";

std::string fmt_db(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", v);
    std::string s(buf);
    for (char& c : s)
        if (c == '.') c = 'p';
    return s;
}

tfa::TFGrid compute_grid(const ComplexSeries& analytic, const TfConfig& tf) {
    switch (tf.method) {
        case TfMethod::Wvd:
            return tfa::wvd(analytic, tf.n_freq_bins);
        case TfMethod::Pwvd:
            return tfa::pwvd(analytic, tfa::WindowSpec::hamming(tf.lag_window_len),
                             tf.n_freq_bins);
        case TfMethod::Spwvd:
            return tfa::spwvd(analytic,
                              {tfa::WindowSpec::hamming(tf.time_window_len),
                               tfa::WindowSpec::hamming(tf.lag_window_len)},
                              tf.n_freq_bins);
    }
    throw std::logic_error("compute_grid: unknown method");
}

} // namespace

const char* to_tag(TfMethod m) {
    switch (m) {
        case TfMethod::Wvd: return "wvd";
        case TfMethod::Pwvd: return "pwvd";
        case TfMethod::Spwvd: return "spwvd";
    }
    throw std::logic_error("to_tag: unknown tf method");
}

TfMethod tf_method_from_tag(const std::string& tag) {
    if (tag == "wvd") return TfMethod::Wvd;
    if (tag == "pwvd") return TfMethod::Pwvd;
    if (tag == "spwvd") return TfMethod::Spwvd;
    throw std::invalid_argument("unknown tf method tag: " + tag);
}

SampleProducts synthesize_sample(const SampleSpec& spec, const TfConfig& tf,
                                 std::uint64_t seed) {
    if (spec.n_samples < 6)
        throw std::invalid_argument("synthesize_sample: frame too short");
    const bool normal =
        spec.signal_class == SignalClass::Fh || spec.signal_class == SignalClass::Bpsk;
    if (normal && spec.jsr_db)
        throw std::invalid_argument("synthesize_sample: normal classes take no JSR");
    if (!normal && !spec.jsr_db)
        throw std::invalid_argument("synthesize_sample: jammed classes require a JSR");

    SeededRng rng(seed);
    SampleProducts out;

    const double fs = spec.sample_rate_hz;
    const int n = spec.n_samples;

    switch (spec.signal_class) {
        case SignalClass::Fh: {
            if (n % 6 != 0)
                throw std::invalid_argument("synthesize_sample: FH frame must be divisible by 6");
            const auto fh = synth::draw_fh_spec(rng, fs, n / 6);
            out.carrier = synth::gen_fh(fh);
            out.clean = out.carrier;
            out.spec_digest = synth::digest(fh);
            break;
        }
        case SignalClass::Bpsk: {
            const auto bp = synth::draw_bpsk_spec(rng, fs, n);
            out.carrier = synth::gen_bpsk(bp, rng.raw());
            out.clean = out.carrier;
            out.spec_digest = synth::digest(bp);
            break;
        }
        case SignalClass::Tracking: {
            if (n % 6 != 0)
                throw std::invalid_argument("synthesize_sample: FH frame must be divisible by 6");
            const auto fh = synth::draw_fh_spec(rng, fs, n / 6);
            const synth::TrackingSpec t = synth::draw_tracking_spec(rng, fh);
            out.carrier = synth::gen_fh(fh);
            const synth::JammerSpec jspec = t;
            const auto jam = synth::gen_jammer(jspec, n, fs, rng.raw());
            out.clean = synth::mix_at_jsr(out.carrier, jam, *spec.jsr_db);
            out.spec_digest = fnv1a64_append(synth::digest(fh), synth::digest(jspec));
            break;
        }
        case SignalClass::NovelPowerLawFm:
        case SignalClass::NovelParabolicFm: {
            const auto bp = synth::draw_bpsk_spec(rng, fs, n);
            out.carrier = synth::gen_bpsk(bp, rng.raw());
            const auto nv = synth::draw_novel_spec(spec.signal_class, rng, fs, n);
            const auto jam = synth::gen_novel(nv, rng.raw());
            out.clean = synth::mix_at_jsr(out.carrier, jam, *spec.jsr_db);
            out.spec_digest = fnv1a64_append(synth::digest(bp), synth::digest(nv));
            break;
        }
        default: {
            const auto bp = synth::draw_bpsk_spec(rng, fs, n);
            out.carrier = synth::gen_bpsk(bp, rng.raw());
            const auto jspec = synth::draw_jammer_spec(spec.signal_class, rng, fs, n);
            const auto jam = synth::gen_jammer(jspec, n, fs, rng.raw());
            out.clean = synth::mix_at_jsr(out.carrier, jam, *spec.jsr_db);
            out.spec_digest = fnv1a64_append(synth::digest(bp), synth::digest(jspec));
            break;
        }
    }

    if (!normal)
        out.interference = ComplexSeries{out.clean.samples - out.carrier.samples, fs};

    out.channel = channel::apply_channel_detailed(
        out.clean, {spec.fading, spec.snr_db}, rng.raw());
    out.analytic = tfa::analytic_signal(out.channel.received);
    out.grid = compute_grid(out.analytic, tf);
    out.image = tfa::to_image(out.grid, tf.image_height, tf.image_width);
    return out;
}

std::uint64_t child_seed(std::uint64_t master_seed, const std::string& class_tag, double snr_db,
                         std::optional<double> jsr_db, int index, const std::string& split) {
    std::uint64_t d = fnv1a64(class_tag);
    d = fnv1a64_append(d, master_seed);
    d = fnv1a64_append(d, snr_db);
    d = jsr_db ? fnv1a64_append(d, *jsr_db) : fnv1a64_append(d, std::string_view("nojsr"));
    d = fnv1a64_append(d, static_cast<std::uint64_t>(index));
    return fnv1a64_append(d, std::string_view(split));
}

DatasetManifest generate_dataset(const SweepConfig& config, const fs::path& out_dir) {
    if (config.classes.empty())
        throw std::invalid_argument("generate_dataset: no classes requested");
    if (config.snr_grid_db.empty())
        throw std::invalid_argument("generate_dataset: empty SNR grid");
    if (config.n_train_per_cell < 1 || config.n_test_per_cell < 1)
        throw std::invalid_argument("generate_dataset: per-cell counts must be >= 1");

    bool any_jammed = false;
    for (auto c : config.classes) any_jammed |= synth::is_abnormal(c);
    if (any_jammed && config.jsr_grid_db.empty())
        throw std::invalid_argument("generate_dataset: jammed classes need a JSR grid");

    DatasetManifest manifest;
    manifest.master_seed = config.master_seed;
    manifest.sample_rate_hz = config.sample_rate_hz;
    manifest.n_samples = config.n_samples;
    manifest.channel_tag = channel::to_tag(config.fading);
    manifest.tf = config.tf;
    manifest.snr_grid_db = config.snr_grid_db;
    manifest.jsr_grid_db = config.jsr_grid_db;
    for (auto c : config.classes) manifest.class_tags.emplace_back(synth::to_tag(c));

    int total = 0;
    for (auto c : config.classes) {
        const int jsr_cells =
            synth::is_abnormal(c) ? static_cast<int>(config.jsr_grid_db.size()) : 1;
        total += static_cast<int>(config.snr_grid_db.size()) * jsr_cells *
                 (config.n_train_per_cell + config.n_test_per_cell);
    }

    fs::create_directories(out_dir / "images");
    const fs::path marker = out_dir / kPartialMarker;
    { std::ofstream(marker) << "incomplete\n"; }

    std::unordered_map<std::uint64_t, std::string> seen_seeds;
    const std::vector<double> no_jsr{0.0};
    int done = 0;

    for (auto cls : config.classes) {
        const std::string tag = synth::to_tag(cls);
        const bool jammed = synth::is_abnormal(cls);
        fs::create_directories(out_dir / "images" / tag);
        for (double snr : config.snr_grid_db) {
            for (double jsr : (jammed ? config.jsr_grid_db : no_jsr)) {
                const std::optional<double> jsr_opt =
                    jammed ? std::optional<double>(jsr) : std::nullopt;
                for (const char* split : {"train", "test"}) {
                    const int count = std::string_view(split) == "train"
                                          ? config.n_train_per_cell
                                          : config.n_test_per_cell;
                    for (int i = 0; i < count; ++i) {
                        const std::uint64_t seed =
                            child_seed(config.master_seed, tag, snr, jsr_opt, i, split);
                        char idx[16];
                        std::snprintf(idx, sizeof(idx), "%04d", i);
                        const std::string name =
                            std::string(split) + "_snr" + fmt_db(snr) + "_jsr" +
                            (jsr_opt ? fmt_db(jsr) : std::string("na")) + "_" + idx + ".pgm";
                        const std::string rel = "images/" + tag + "/" + name;

                        auto [it, inserted] = seen_seeds.emplace(seed, rel);
                        if (!inserted)
                            throw std::runtime_error("generate_dataset: seed collision between " +
                                                     it->second + " and " + rel);

                        SampleSpec sspec;
                        sspec.signal_class = cls;
                        sspec.snr_db = snr;
                        sspec.jsr_db = jsr_opt;
                        sspec.fading = config.fading;
                        sspec.sample_rate_hz = config.sample_rate_hz;
                        sspec.n_samples = config.n_samples;
                        const auto products = synthesize_sample(sspec, config.tf, seed);
                        write_pgm(products.image, out_dir / rel);

                        SampleRecord rec;
                        rec.file = rel;
                        rec.signal_class = cls;
                        rec.split = split;
                        rec.snr_db = snr;
                        rec.jsr_db = jsr_opt;
                        rec.seed = seed;
                        rec.spec_digest = products.spec_digest;
                        manifest.records.push_back(std::move(rec));

                        ++done;
                        if (config.progress) config.progress(done, total);
                    }
                }
            }
        }
    }

    manifest.generator_version = kVersion;
    write_manifest(manifest, out_dir / "manifest.json");
    fs::remove(marker);
    return manifest;
}

void write_manifest(const DatasetManifest& manifest, const fs::path& path) {
    json j;
    j["schema"] = kSchema;
    j["generator_version"] = manifest.generator_version;
    j["master_seed"] = manifest.master_seed;
    j["sample_rate_hz"] = manifest.sample_rate_hz;
    j["n_samples"] = manifest.n_samples;
    j["channel"] = manifest.channel_tag;
    j["tf_method"] = to_tag(manifest.tf.method);
    j["time_window_len"] = manifest.tf.time_window_len;
    j["lag_window_len"] = manifest.tf.lag_window_len;
    j["n_freq_bins"] = manifest.tf.n_freq_bins;
    j["image_height"] = manifest.tf.image_height;
    j["image_width"] = manifest.tf.image_width;
    j["snr_grid_db"] = manifest.snr_grid_db;
    j["jsr_grid_db"] = manifest.jsr_grid_db;
    j["classes"] = manifest.class_tags;

    json records = json::array();
    for (const auto& r : manifest.records) {
        json jr;
        jr["file"] = r.file;
        jr["class"] = synth::to_tag(r.signal_class);
        jr["label"] = static_cast<int>(r.signal_class);
        jr["split"] = r.split;
        jr["snr_db"] = r.snr_db;
        if (r.jsr_db)
            jr["jsr_db"] = *r.jsr_db;
        else
            jr["jsr_db"] = nullptr;
        jr["seed"] = r.seed;
        jr["spec_digest"] = r.spec_digest;
        records.push_back(std::move(jr));
    }
    j["records"] = std::move(records);

    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write manifest: " + path.string());
    out << j.dump(2) << '\n';
    if (!out) throw std::runtime_error("manifest write failed: " + path.string());
}

DatasetManifest read_manifest(const fs::path& path) {
    if (fs::exists(path.parent_path() / kPartialMarker))
        throw std::runtime_error("dataset at " + path.parent_path().string() +
                                 " is incomplete (generation was interrupted)");
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open manifest: " + path.string());
    json j = json::parse(in);
    if (j.value("schema", "") != kSchema)
        throw std::runtime_error("unexpected manifest schema in " + path.string());

    DatasetManifest m;
    m.generator_version = j.at("generator_version").get<std::string>();
    m.master_seed = j.at("master_seed").get<std::uint64_t>();
    m.sample_rate_hz = j.at("sample_rate_hz").get<double>();
    m.n_samples = j.at("n_samples").get<int>();
    m.channel_tag = j.at("channel").get<std::string>();
    m.tf.method = tf_method_from_tag(j.at("tf_method").get<std::string>());
    m.tf.time_window_len = j.at("time_window_len").get<int>();
    m.tf.lag_window_len = j.at("lag_window_len").get<int>();
    m.tf.n_freq_bins = j.at("n_freq_bins").get<int>();
    m.tf.image_height = j.at("image_height").get<int>();
    m.tf.image_width = j.at("image_width").get<int>();
    m.snr_grid_db = j.at("snr_grid_db").get<std::vector<double>>();
    m.jsr_grid_db = j.at("jsr_grid_db").get<std::vector<double>>();
    m.class_tags = j.at("classes").get<std::vector<std::string>>();

    for (const auto& jr : j.at("records")) {
        SampleRecord r;
        r.file = jr.at("file").get<std::string>();
        r.signal_class = synth::class_from_tag(jr.at("class").get<std::string>());
        if (jr.at("label").get<int>() != static_cast<int>(r.signal_class))
            throw std::runtime_error("manifest label does not match class tag for " + r.file);
        r.split = jr.at("split").get<std::string>();
        r.snr_db = jr.at("snr_db").get<double>();
        if (!jr.at("jsr_db").is_null()) r.jsr_db = jr.at("jsr_db").get<double>();
        r.seed = jr.at("seed").get<std::uint64_t>();
        r.spec_digest = jr.at("spec_digest").get<std::uint64_t>();
        m.records.push_back(std::move(r));
    }
    return m;
}

Dataset load_dataset(const fs::path& manifest_path, const std::string& split) {
    if (split != "train" && split != "test" && split != "all")
        throw std::invalid_argument("load_dataset: split must be train, test or all");
    const DatasetManifest manifest = read_manifest(manifest_path);
    const fs::path root = manifest_path.parent_path();

    Dataset ds;
    ds.image_height = manifest.tf.image_height;
    ds.image_width = manifest.tf.image_width;
    for (const auto& r : manifest.records)
        if (split == "all" || r.split == split) ds.records.push_back(r);

    const Eigen::Index n = static_cast<Eigen::Index>(ds.records.size());
    const Eigen::Index dim =
        static_cast<Eigen::Index>(ds.image_height) * ds.image_width;
    ds.images.resize(n, dim);
    ds.labels.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const GrayImage img = read_pgm(root / ds.records[i].file);
        if (img.height != ds.image_height || img.width != ds.image_width)
            throw std::runtime_error("image size mismatch in " + ds.records[i].file);
        for (Eigen::Index p = 0; p < dim; ++p)
            ds.images(i, p) = static_cast<float>(img.pixels[p]) / 255.0f;
        ds.labels[i] = static_cast<int>(ds.records[i].signal_class);
    }
    return ds;
}

} // namespace jamscope::dataset
