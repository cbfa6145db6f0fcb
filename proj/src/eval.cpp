#include "jamscope/eval.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace jamscope::eval {

namespace {

std::string group_key(const std::string& group_by, const dataset::SampleRecord& rec) {
    char buf[48];
    if (group_by == "snr") {
        std::snprintf(buf, sizeof(buf), "snr=%g", rec.snr_db);
    } else if (group_by == "jsr") {
        if (!rec.jsr_db) return "jsr=na";
        std::snprintf(buf, sizeof(buf), "jsr=%g", *rec.jsr_db);
    } else {
        throw std::invalid_argument("evaluate: group_by must be none, snr or jsr");
    }
    return buf;
}

} // namespace

EvalReport evaluate(const dataset::Dataset& ds, const Eigen::VectorXi& predictions,
                    const std::string& group_by) {
    if (predictions.size() != ds.labels.size())
        throw std::invalid_argument("evaluate: prediction/label count mismatch");
    if (ds.labels.size() == 0) throw std::invalid_argument("evaluate: empty dataset");

    const int n_classes = synth::kNumClosedSetClasses;
    EvalReport report;
    report.n_samples = static_cast<int>(ds.labels.size());
    for (auto c : synth::closed_set_classes()) report.class_tags.emplace_back(synth::to_tag(c));
    report.confusion = Eigen::MatrixXi::Zero(n_classes, n_classes);

    std::map<std::string, int> group_correct;
    int correct = 0;
    for (Eigen::Index i = 0; i < ds.labels.size(); ++i) {
        const int truth = ds.labels[i];
        const int pred = predictions[i];
        if (truth < 0 || truth >= n_classes)
            throw std::invalid_argument(
                "evaluate: closed-set scoring got a novel label; use detect_novel for those");
        if (pred < 0 || pred >= n_classes)
            throw std::invalid_argument("evaluate: prediction outside the closed set");
        report.confusion(truth, pred) += 1;
        const bool hit = truth == pred;
        correct += hit ? 1 : 0;
        if (group_by != "none") {
            const std::string key = group_key(group_by, ds.records[static_cast<std::size_t>(i)]);
            report.group_counts[key] += 1;
            group_correct[key] += hit ? 1 : 0;
        }
    }
    report.accuracy = static_cast<double>(correct) / static_cast<double>(report.n_samples);
    for (const auto& [key, count] : report.group_counts)
        report.group_accuracy[key] = static_cast<double>(group_correct[key]) / count;
    for (int c = 0; c < n_classes; ++c) {
        const int row_total = report.confusion.row(c).sum();
        if (row_total > 0)
            report.class_accuracy[report.class_tags[static_cast<std::size_t>(c)]] =
                static_cast<double>(report.confusion(c, c)) / row_total;
    }
    return report;
}

void write_report_json(const EvalReport& report, const std::filesystem::path& path) {
    nlohmann::json j;
    j["schema"] = "jamscope-eval/1";
    j["n_samples"] = report.n_samples;
    j["accuracy"] = report.accuracy;
    j["classes"] = report.class_tags;
    std::vector<std::vector<int>> confusion;
    for (Eigen::Index r = 0; r < report.confusion.rows(); ++r) {
        std::vector<int> row;
        for (Eigen::Index c = 0; c < report.confusion.cols(); ++c)
            row.push_back(report.confusion(r, c));
        confusion.push_back(std::move(row));
    }
    j["confusion"] = confusion;
    j["class_accuracy"] = report.class_accuracy;
    j["group_accuracy"] = report.group_accuracy;
    j["group_counts"] = report.group_counts;

    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write report: " + path.string());
    out << j.dump(2) << '\n';
    if (!out) throw std::runtime_error("report write failed: " + path.string());
}

void write_confusion_csv(const EvalReport& report, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write confusion csv: " + path.string());
    out << "true\\pred";
    for (const auto& tag : report.class_tags) out << ',' << tag;
    out << '\n';
    for (Eigen::Index r = 0; r < report.confusion.rows(); ++r) {
        out << report.class_tags[static_cast<std::size_t>(r)];
        for (Eigen::Index c = 0; c < report.confusion.cols(); ++c)
            out << ',' << report.confusion(r, c);
        out << '\n';
    }
    if (!out) throw std::runtime_error("confusion csv write failed: " + path.string());
}

GrayImage confusion_heatmap(const EvalReport& report, int cell_px) {
    if (cell_px < 1) throw std::invalid_argument("confusion_heatmap: cell size must be >= 1");
    const int n = static_cast<int>(report.confusion.rows());
    GrayImage img;
    img.height = n * cell_px;
    img.width = n * cell_px;
    img.pixels.assign(static_cast<std::size_t>(img.height) * img.width, 0);
    for (int r = 0; r < n; ++r) {
        const int row_total = report.confusion.row(r).sum();
        for (int c = 0; c < n; ++c) {
            const double frac =
                row_total > 0 ? static_cast<double>(report.confusion(r, c)) / row_total : 0.0;
            const auto value = static_cast<std::uint8_t>(std::lround(frac * 255.0));
            for (int pr = 0; pr < cell_px; ++pr)
                for (int pc = 0; pc < cell_px; ++pc)
                    img.at(r * cell_px + pr, c * cell_px + pc) = value;
        }
    }
    return img;
}

Eigen::VectorXi detect_novel(const Eigen::MatrixXf& probs, double threshold) {
    if (threshold <= 0.0 || threshold > 1.0)
        throw std::invalid_argument("detect_novel: threshold outside (0, 1]");
    Eigen::VectorXi out(probs.rows());
    for (Eigen::Index i = 0; i < probs.rows(); ++i)
        out[i] = probs.row(i).maxCoeff() < static_cast<float>(threshold) ? 1 : 0;
    return out;
}

double novel_flag_rate(const Eigen::MatrixXf& probs, double threshold) {
    if (probs.rows() == 0) throw std::invalid_argument("novel_flag_rate: empty input");
    return static_cast<double>(detect_novel(probs, threshold).sum()) /
           static_cast<double>(probs.rows());
}

} // namespace jamscope::eval
