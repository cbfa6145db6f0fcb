#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "jamscope/dataset.hpp"
#include "jamscope/image.hpp"

namespace jamscope::eval {

struct EvalReport {
    int n_samples = 0;
    double accuracy = 0.0;
    std::vector<std::string> class_tags;
    Eigen::MatrixXi confusion; // rows true class, columns predicted class
    std::map<std::string, double> class_accuracy;
    std::map<std::string, double> group_accuracy; // e.g. "snr=2" -> accuracy
    std::map<std::string, int> group_counts;
};

// Closed-set scoring; group_by is "none", "snr" or "jsr".
EvalReport evaluate(const dataset::Dataset& ds, const Eigen::VectorXi& predictions,
                    const std::string& group_by = "none");

void write_report_json(const EvalReport& report, const std::filesystem::path& path);
void write_confusion_csv(const EvalReport& report, const std::filesystem::path& path);
GrayImage confusion_heatmap(const EvalReport& report, int cell_px = 16);

// Open-set rule: a sample is flagged novel when its top softmax probability
// falls below the threshold.
Eigen::VectorXi detect_novel(const Eigen::MatrixXf& probs, double threshold = 0.95);
double novel_flag_rate(const Eigen::MatrixXf& probs, double threshold = 0.95);

} // namespace jamscope::eval
