// Command line front end: synthesize single frames, sweep datasets to disk,
// train the three classifiers, score them, and run the open-set novelty
// check. Exit codes: 0 ok, 1 runtime failure, 2 usage error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "jamscope/cnn.hpp"
#include "jamscope/dataset.hpp"
#include "jamscope/eval.hpp"
#include "jamscope/features.hpp"
#include "jamscope/gnb.hpp"
#include "jamscope/knn.hpp"
#include "jamscope/model_io.hpp"
#include "jamscope/version.hpp"

namespace fs = std::filesystem;
using namespace jamscope;

namespace {

struct TfOpts {
    std::string method = "spwvd";
    int freq_bins = 64;
    int time_window = 33;
    int lag_window = 31;
    int image_size = 64;
};

void add_tf_options(CLI::App* cmd, TfOpts& o) {
    cmd->add_option("--method", o.method, "time-frequency distribution")
        ->check(CLI::IsMember({"wvd", "pwvd", "spwvd"}))
        ->capture_default_str();
    cmd->add_option("--freq-bins", o.freq_bins, "frequency bins in the raw grid")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--time-window", o.time_window, "time smoothing window length (odd)")
        ->capture_default_str();
    cmd->add_option("--lag-window", o.lag_window, "lag window length (odd)")
        ->capture_default_str();
    cmd->add_option("--image-size", o.image_size, "spectrogram side in pixels")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
}

dataset::TfConfig to_tf_config(const TfOpts& o) {
    dataset::TfConfig tf;
    tf.method = dataset::tf_method_from_tag(o.method);
    tf.n_freq_bins = o.freq_bins;
    tf.time_window_len = o.time_window;
    tf.lag_window_len = o.lag_window;
    tf.image_height = o.image_size;
    tf.image_width = o.image_size;
    return tf;
}

void write_iq(const ComplexSeries& x, const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write iq file: " + path.string());
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        const float re = static_cast<float>(x.samples[i].real());
        const float im = static_cast<float>(x.samples[i].imag());
        out.write(reinterpret_cast<const char*>(&re), sizeof(float));
        out.write(reinterpret_cast<const char*>(&im), sizeof(float));
    }
    if (!out) throw std::runtime_error("iq write failed: " + path.string());
}

fs::path resolve_manifest(const fs::path& data) {
    return fs::is_directory(data) ? data / "manifest.json" : data;
}

// ---- synth ----

struct SynthOpts {
    std::string signal_class;
    std::string channel = "gaussian";
    std::string out;
    std::string spectrogram;
    std::uint64_t seed = 1;
    double snr_db = 10.0;
    double jsr_db = 0.0;
    bool jsr_set = false;
    double sample_rate = 2.0e6;
    int n_samples = 600;
    TfOpts tf;
};

void run_synth(const SynthOpts& o) {
    dataset::SampleSpec spec;
    spec.signal_class = synth::class_from_tag(o.signal_class);
    spec.snr_db = o.snr_db;
    if (o.jsr_set) spec.jsr_db = o.jsr_db;
    spec.fading = channel::fading_from_tag(o.channel);
    spec.sample_rate_hz = o.sample_rate;
    spec.n_samples = o.n_samples;

    const dataset::SampleProducts p = dataset::synthesize_sample(spec, to_tf_config(o.tf), o.seed);
    write_iq(p.channel.received, o.out);
    std::printf("wrote %lld iq samples (%s, seed %llu, digest %016llx) to %s\n",
                static_cast<long long>(p.channel.received.size()), o.signal_class.c_str(),
                static_cast<unsigned long long>(o.seed),
                static_cast<unsigned long long>(p.spec_digest), o.out.c_str());
    if (!o.spectrogram.empty()) {
        write_pgm(p.image, o.spectrogram);
        std::printf("spectrogram %dx%d to %s\n", p.image.height, p.image.width,
                    o.spectrogram.c_str());
    }
}

// ---- dataset ----

struct DatasetOpts {
    std::string out;
    std::vector<std::string> classes;
    std::vector<double> snr_grid{-6.0, -2.0, 2.0, 6.0, 10.0};
    std::vector<double> jsr_grid{-5.0, 0.0, 5.0, 10.0};
    int n_train = 10;
    int n_test = 5;
    std::string channel = "gaussian";
    std::uint64_t seed = 7;
    double sample_rate = 2.0e6;
    int n_samples = 600;
    TfOpts tf;
};

void run_dataset(const DatasetOpts& o) {
    dataset::SweepConfig cfg;
    cfg.master_seed = o.seed;
    if (!o.classes.empty()) {
        cfg.classes.clear();
        for (const auto& tag : o.classes) cfg.classes.push_back(synth::class_from_tag(tag));
    }
    cfg.snr_grid_db = o.snr_grid;
    cfg.jsr_grid_db = o.jsr_grid;
    cfg.n_train_per_cell = o.n_train;
    cfg.n_test_per_cell = o.n_test;
    cfg.fading = channel::fading_from_tag(o.channel);
    cfg.sample_rate_hz = o.sample_rate;
    cfg.n_samples = o.n_samples;
    cfg.tf = to_tf_config(o.tf);

    long long total = 0;
    for (auto c : cfg.classes) {
        const long long cells = static_cast<long long>(cfg.snr_grid_db.size()) *
                                (synth::is_abnormal(c) ? cfg.jsr_grid_db.size() : 1);
        total += cells * (cfg.n_train_per_cell + cfg.n_test_per_cell);
    }
    if (total > 5000)
        std::fprintf(stderr,
                     "note: %lld samples is a paper-scale sweep; expect a long single-core run\n",
                     total);
    const long long step = std::max(1LL, total / 20);
    cfg.progress = [step](int done, int total_n) {
        if (done % step == 0 || done == total_n)
            std::printf("  %d/%d\n", done, total_n);
    };

    const dataset::DatasetManifest manifest = dataset::generate_dataset(cfg, o.out);
    std::printf("dataset: %zu samples under %s (manifest.json)\n", manifest.records.size(),
                o.out.c_str());
}

// ---- train ----

struct TrainOpts {
    std::string data;
    std::string model;
    std::string out;
    int epochs = 50;
    int batch = 32;
    double lr = 1.0e-3;
    int patience = 10;
    double val_frac = 0.15;
    std::uint64_t seed = 1;
    int k = 5;
};

// per-class shuffle, then carve off roughly val_frac of each class (never a
// whole class); an empty carve falls back to validating on the training set
void split_train_val(const dataset::Dataset& ds, double val_frac, std::uint64_t seed,
                     Eigen::MatrixXf& xt, Eigen::VectorXi& yt, Eigen::MatrixXf& xv,
                     Eigen::VectorXi& yv) {
    std::map<int, std::vector<Eigen::Index>> by_class;
    for (Eigen::Index i = 0; i < ds.labels.size(); ++i) by_class[ds.labels[i]].push_back(i);

    SeededRng rng(seed ^ 0x76616c73706c6974ull);
    std::vector<Eigen::Index> train_idx, val_idx;
    for (auto& [label, idx] : by_class) {
        for (std::size_t i = idx.size(); i > 1; --i)
            std::swap(idx[i - 1], idx[rng.integer(static_cast<std::uint64_t>(i))]);
        const auto want = static_cast<std::size_t>(std::lround(val_frac * idx.size()));
        const std::size_t n_val = std::min(idx.size() - 1, want);
        for (std::size_t i = 0; i < idx.size(); ++i)
            (i < n_val ? val_idx : train_idx).push_back(idx[i]);
    }
    if (val_idx.empty()) val_idx = train_idx;

    auto gather = [&](const std::vector<Eigen::Index>& rows, Eigen::MatrixXf& x,
                      Eigen::VectorXi& y) {
        x.resize(static_cast<Eigen::Index>(rows.size()), ds.images.cols());
        y.resize(static_cast<Eigen::Index>(rows.size()));
        for (std::size_t i = 0; i < rows.size(); ++i) {
            x.row(static_cast<Eigen::Index>(i)) = ds.images.row(rows[i]);
            y[static_cast<Eigen::Index>(i)] = ds.labels[rows[i]];
        }
    };
    gather(train_idx, xt, yt);
    gather(val_idx, xv, yv);
}

void run_train(const TrainOpts& o) {
    const dataset::Dataset ds = dataset::load_dataset(resolve_manifest(o.data), "train");
    std::printf("training %s on %lld samples (%dx%d images)\n", o.model.c_str(),
                static_cast<long long>(ds.labels.size()), ds.image_height, ds.image_width);

    if (o.model == "knn") {
        const Eigen::MatrixXf f = classify::pool_features(ds.images, ds.image_height,
                                                          ds.image_width);
        const classify::KnnModel m =
            classify::knn_fit(f, ds.labels, o.k, synth::kNumClosedSetClasses);
        model_io::save_knn(o.out, m);
    } else if (o.model == "gnb") {
        const Eigen::MatrixXf f = classify::pool_features(ds.images, ds.image_height,
                                                          ds.image_width);
        const classify::GnbModel m = classify::gnb_fit(f, ds.labels,
                                                       synth::kNumClosedSetClasses);
        model_io::save_gnb(o.out, m);
    } else {
        classify::CnnConfig cfg;
        cfg.image_height = ds.image_height;
        cfg.image_width = ds.image_width;
        cfg.n_classes = synth::kNumClosedSetClasses;

        Eigen::MatrixXf xt, xv;
        Eigen::VectorXi yt, yv;
        split_train_val(ds, o.val_frac, o.seed, xt, yt, xv, yv);

        classify::TrainConfig tc;
        tc.batch_size = o.batch;
        tc.learning_rate = o.lr;
        tc.max_epochs = o.epochs;
        tc.early_stop_patience = o.patience;
        tc.seed = o.seed;
        tc.on_epoch = [](int epoch, double train_loss, double val_loss, double val_acc) {
            std::printf("  epoch %3d  train %.4f  val %.4f  acc %.3f\n", epoch, train_loss,
                        val_loss, val_acc);
        };
        const classify::TrainedCnn trained = classify::cnn_train(cfg, tc, xt, yt, xv, yv);
        std::printf("best epoch %d: val loss %.4f, val acc %.3f\n", trained.result.best_epoch,
                    trained.result.best_val_loss, trained.result.best_val_acc);
        model_io::save_cnn(o.out, trained.config, trained.params);
    }
    std::printf("saved %s model to %s\n", o.model.c_str(), o.out.c_str());
}

// ---- eval ----

struct EvalOpts {
    std::string data;
    std::string model;
    std::string out;
    std::string split = "test";
    std::string group = "none";
};

Eigen::VectorXi predict_with(const fs::path& model_path, const dataset::Dataset& ds) {
    const std::string type = model_io::peek_model_type(model_path);
    if (type == "knn") {
        const auto f = model_io::load_knn(model_path);
        return classify::knn_predict(
            f.model, classify::pool_features(ds.images, ds.image_height, ds.image_width));
    }
    if (type == "gnb") {
        const auto f = model_io::load_gnb(model_path);
        return classify::gnb_predict(
            f.model, classify::pool_features(ds.images, ds.image_height, ds.image_width));
    }
    const auto f = model_io::load_cnn(model_path);
    return classify::cnn_predict(f.config, f.params, ds.images);
}

void run_eval(const EvalOpts& o) {
    const dataset::Dataset ds = dataset::load_dataset(resolve_manifest(o.data), o.split);
    const Eigen::VectorXi pred = predict_with(o.model, ds);
    const eval::EvalReport report = eval::evaluate(ds, pred, o.group);

    fs::create_directories(o.out);
    eval::write_report_json(report, fs::path(o.out) / "report.json");
    eval::write_confusion_csv(report, fs::path(o.out) / "confusion.csv");
    write_pgm(eval::confusion_heatmap(report), fs::path(o.out) / "confusion.pgm");

    std::printf("accuracy %.4f over %d samples (%s split)\n", report.accuracy, report.n_samples,
                o.split.c_str());
    for (const auto& [key, acc] : report.group_accuracy)
        std::printf("  %-10s acc %.4f  (n=%d)\n", key.c_str(), acc, report.group_counts.at(key));
    std::printf("report under %s\n", o.out.c_str());
}

// ---- novel ----

struct NovelOpts {
    std::string data;
    std::string model;
    std::string split = "test";
    double threshold = 0.95;
};

void run_novel(const NovelOpts& o) {
    const fs::path model_path = o.model;
    if (model_io::peek_model_type(model_path) != "cnn")
        throw std::runtime_error("novelty scoring uses the cnn's softmax; got a " +
                                 model_io::peek_model_type(model_path) + " model");
    const dataset::Dataset ds = dataset::load_dataset(resolve_manifest(o.data), o.split);
    const auto f = model_io::load_cnn(model_path);
    const Eigen::MatrixXf probs = classify::cnn_probabilities(f.config, f.params, ds.images);

    std::map<std::string, std::pair<int, int>> per_class; // tag -> {flagged, total}
    int known_flagged = 0, known_total = 0, novel_flagged = 0, novel_total = 0;
    const Eigen::VectorXi flags = eval::detect_novel(probs, o.threshold);
    for (Eigen::Index i = 0; i < flags.size(); ++i) {
        const auto cls = ds.records[static_cast<std::size_t>(i)].signal_class;
        auto& [hit, total] = per_class[synth::to_tag(cls)];
        hit += flags[i];
        total += 1;
        if (synth::is_novel(cls)) {
            novel_flagged += flags[i];
            novel_total += 1;
        } else {
            known_flagged += flags[i];
            known_total += 1;
        }
    }

    std::printf("max-softmax novelty flags at threshold %.2f (%s split)\n", o.threshold,
                o.split.c_str());
    std::printf("%-18s %6s  %s\n", "class", "n", "flag rate");
    for (const auto& [tag, counts] : per_class)
        std::printf("%-18s %6d  %.3f\n", tag.c_str(), counts.second,
                    static_cast<double>(counts.first) / counts.second);
    if (known_total > 0)
        std::printf("known classes: flag rate %.3f (%d/%d)\n",
                    static_cast<double>(known_flagged) / known_total, known_flagged, known_total);
    if (novel_total > 0)
        std::printf("novel classes: flag rate %.3f (%d/%d)\n",
                    static_cast<double>(novel_flagged) / novel_total, novel_flagged, novel_total);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"jamming-signal workbench: synthesis, datasets, classifiers, novelty"};
    app.set_version_flag("--version", std::string(kVersion));
    app.set_config("--config");
    app.require_subcommand(1);

    SynthOpts so;
    CLI::App* synth_cmd = app.add_subcommand("synth", "synthesize one received frame");
    synth_cmd->add_option("--class", so.signal_class, "signal class tag")->required();
    synth_cmd->add_option("--out", so.out, "output iq file (interleaved float32)")->required();
    synth_cmd->add_option("--seed", so.seed, "sample seed")->capture_default_str();
    synth_cmd->add_option("--snr", so.snr_db, "channel snr in dB")->capture_default_str();
    synth_cmd->add_option("--jsr", so.jsr_db, "jamming-to-signal ratio in dB (jammed classes)")
        ->each([&so](const std::string&) { so.jsr_set = true; });
    synth_cmd->add_option("--channel", so.channel, "gaussian | rayleigh | freq-selective")
        ->capture_default_str();
    synth_cmd->add_option("--samples", so.n_samples, "frame length")->capture_default_str();
    synth_cmd->add_option("--fs", so.sample_rate, "sample rate in Hz")->capture_default_str();
    synth_cmd->add_option("--spectrogram", so.spectrogram, "also write this pgm image");
    add_tf_options(synth_cmd, so.tf);
    synth_cmd->callback([&so] { run_synth(so); });

    DatasetOpts dso;
    CLI::App* dataset_cmd = app.add_subcommand("dataset", "generate a seeded dataset sweep");
    dataset_cmd->add_option("--out", dso.out, "output directory")->required();
    dataset_cmd->add_option("--classes", dso.classes, "class tags (default: all nine)")
        ->delimiter(',');
    dataset_cmd->add_option("--snr", dso.snr_grid, "snr grid in dB")->delimiter(',');
    dataset_cmd->add_option("--jsr", dso.jsr_grid, "jsr grid in dB for jammed classes")
        ->delimiter(',');
    dataset_cmd->add_option("--train", dso.n_train, "training samples per cell")
        ->capture_default_str();
    dataset_cmd->add_option("--test", dso.n_test, "test samples per cell")
        ->capture_default_str();
    dataset_cmd->add_option("--channel", dso.channel, "gaussian | rayleigh | freq-selective")
        ->capture_default_str();
    dataset_cmd->add_option("--seed", dso.seed, "master seed")->capture_default_str();
    dataset_cmd->add_option("--samples", dso.n_samples, "frame length")->capture_default_str();
    dataset_cmd->add_option("--fs", dso.sample_rate, "sample rate in Hz")->capture_default_str();
    add_tf_options(dataset_cmd, dso.tf);
    dataset_cmd->callback([&dso] { run_dataset(dso); });

    TrainOpts to;
    CLI::App* train_cmd = app.add_subcommand("train", "fit a classifier on the train split");
    train_cmd->add_option("--data", to.data, "dataset manifest (or its directory)")->required();
    train_cmd->add_option("--model", to.model, "cnn | knn | gnb")
        ->required()
        ->check(CLI::IsMember({"cnn", "knn", "gnb"}));
    train_cmd->add_option("--out", to.out, "model file to write")->required();
    train_cmd->add_option("--epochs", to.epochs, "max training epochs")->capture_default_str();
    train_cmd->add_option("--batch", to.batch, "minibatch size")->capture_default_str();
    train_cmd->add_option("--lr", to.lr, "adam learning rate")->capture_default_str();
    train_cmd->add_option("--patience", to.patience, "early-stopping patience")
        ->capture_default_str();
    train_cmd->add_option("--val-frac", to.val_frac, "fraction held out for validation")
        ->capture_default_str();
    train_cmd->add_option("--seed", to.seed, "shuffle/init seed")->capture_default_str();
    train_cmd->add_option("--k", to.k, "neighbour count for knn")->capture_default_str();
    train_cmd->callback([&to] { run_train(to); });

    EvalOpts eo;
    CLI::App* eval_cmd = app.add_subcommand("eval", "score a model on a dataset split");
    eval_cmd->add_option("--data", eo.data, "dataset manifest (or its directory)")->required();
    eval_cmd->add_option("--model", eo.model, "model file")->required();
    eval_cmd->add_option("--out", eo.out, "report directory")->required();
    eval_cmd->add_option("--split", eo.split, "train | test | all")->capture_default_str();
    eval_cmd->add_option("--group", eo.group, "none | snr | jsr")
        ->check(CLI::IsMember({"none", "snr", "jsr"}))
        ->capture_default_str();
    eval_cmd->callback([&eo] { run_eval(eo); });

    NovelOpts no;
    CLI::App* novel_cmd = app.add_subcommand("novel", "max-softmax novelty flag rates");
    novel_cmd->add_option("--data", no.data, "dataset manifest (or its directory)")->required();
    novel_cmd->add_option("--model", no.model, "cnn model file")->required();
    novel_cmd->add_option("--split", no.split, "train | test | all")->capture_default_str();
    novel_cmd->add_option("--threshold", no.threshold, "flag when top softmax falls below this")
        ->capture_default_str();
    novel_cmd->callback([&no] { run_novel(no); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
