#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "jamscope/channel.hpp"
#include "jamscope/image.hpp"
#include "jamscope/series.hpp"
#include "jamscope/synth.hpp"
#include "jamscope/tfa.hpp"

namespace jamscope::dataset {

enum class TfMethod { Wvd, Pwvd, Spwvd };

const char* to_tag(TfMethod m);
TfMethod tf_method_from_tag(const std::string& tag);

struct TfConfig {
    TfMethod method = TfMethod::Spwvd;
    int time_window_len = 33;
    // light lag smoothing at native image resolution: heavier windows or a
    // finer grid followed by area averaging both wash out one-bin ridges
    int lag_window_len = 31;
    int n_freq_bins = 64;
    int image_height = 64;
    int image_width = 64;
};

// Everything that determines one sample, apart from the seed.
struct SampleSpec {
    synth::SignalClass signal_class = synth::SignalClass::Fh;
    double snr_db = 10.0;
    std::optional<double> jsr_db; // absent for the two normal classes
    channel::Fading fading = channel::GaussianChannel{};
    double sample_rate_hz = 2.0e6;
    int n_samples = 600;
};

struct SampleProducts {
    ComplexSeries carrier;                      // underlying communication signal
    std::optional<ComplexSeries> interference;  // scaled jamming component, if any
    ComplexSeries clean;                        // carrier (+ interference)
    channel::ChannelOutput channel;
    ComplexSeries analytic;
    tfa::TFGrid grid;
    GrayImage image;
    std::uint64_t spec_digest = 0;
};

// Deterministic per-sample pipeline: one seed fixes every draw.
SampleProducts synthesize_sample(const SampleSpec& spec, const TfConfig& tf, std::uint64_t seed);

std::uint64_t child_seed(std::uint64_t master_seed, const std::string& class_tag, double snr_db,
                         std::optional<double> jsr_db, int index, const std::string& split);

struct SweepConfig {
    std::uint64_t master_seed = 7;
    std::vector<synth::SignalClass> classes = synth::closed_set_classes();
    std::vector<double> snr_grid_db{-6.0, -2.0, 2.0, 6.0, 10.0};
    std::vector<double> jsr_grid_db{-5.0, 0.0, 5.0, 10.0};
    int n_train_per_cell = 1;
    int n_test_per_cell = 1;
    channel::Fading fading = channel::GaussianChannel{};
    double sample_rate_hz = 2.0e6;
    int n_samples = 600;
    TfConfig tf;
    std::function<void(int done, int total)> progress; // optional
};

struct SampleRecord {
    std::string file; // image path relative to the manifest directory
    synth::SignalClass signal_class = synth::SignalClass::Fh;
    std::string split = "train";
    double snr_db = 0.0;
    std::optional<double> jsr_db;
    std::uint64_t seed = 0;
    std::uint64_t spec_digest = 0;
};

struct DatasetManifest {
    std::uint64_t master_seed = 0;
    double sample_rate_hz = 0.0;
    int n_samples = 0;
    std::string channel_tag;
    TfConfig tf;
    std::vector<double> snr_grid_db;
    std::vector<double> jsr_grid_db;
    std::vector<std::string> class_tags;
    std::vector<SampleRecord> records;
    std::string generator_version;
};

// Writes images/ plus manifest.json under out_dir and returns the manifest.
DatasetManifest generate_dataset(const SweepConfig& config,
                                 const std::filesystem::path& out_dir);

void write_manifest(const DatasetManifest& manifest, const std::filesystem::path& path);
DatasetManifest read_manifest(const std::filesystem::path& path);

struct Dataset {
    Eigen::MatrixXf images; // one row per sample, pixels in [0,1], row-major layout
    Eigen::VectorXi labels; // class indices per synth::SignalClass
    std::vector<SampleRecord> records;
    int image_height = 0;
    int image_width = 0;
};

// split is "train", "test" or "all"
Dataset load_dataset(const std::filesystem::path& manifest_path, const std::string& split);

} // namespace jamscope::dataset
