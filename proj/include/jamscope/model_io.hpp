#pragma once

#include <filesystem>
#include <string>

#include "jamscope/cnn.hpp"
#include "jamscope/gnb.hpp"
#include "jamscope/knn.hpp"

namespace jamscope::model_io {

// Versioned little-endian binary container; parameters stored as f32.

struct CnnFile {
    classify::CnnConfig config;
    Eigen::VectorXf params;
    std::string version;
};

struct KnnFile {
    classify::KnnModel model;
    std::string version;
};

struct GnbFile {
    classify::GnbModel model;
    std::string version;
};

void save_cnn(const std::filesystem::path& path, const classify::CnnConfig& config,
              const Eigen::VectorXf& params);
CnnFile load_cnn(const std::filesystem::path& path);

void save_knn(const std::filesystem::path& path, const classify::KnnModel& model);
KnnFile load_knn(const std::filesystem::path& path);

void save_gnb(const std::filesystem::path& path, const classify::GnbModel& model);
GnbFile load_gnb(const std::filesystem::path& path);

// "cnn", "knn" or "gnb"
std::string peek_model_type(const std::filesystem::path& path);

} // namespace jamscope::model_io
