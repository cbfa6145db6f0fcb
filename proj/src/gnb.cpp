#include "jamscope/gnb.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace jamscope::classify {

GnbModel gnb_fit(const Eigen::MatrixXf& features, const Eigen::VectorXi& labels, int n_classes,
                 double var_floor_frac) {
    if (features.rows() != labels.size())
        throw std::invalid_argument("gnb_fit: feature/label count mismatch");
    if (features.rows() == 0) throw std::invalid_argument("gnb_fit: empty training set");
    if (n_classes < 1) throw std::invalid_argument("gnb_fit: n_classes must be >= 1");

    const Eigen::Index dim = features.cols();
    std::vector<int> counts(static_cast<std::size_t>(n_classes), 0);
    for (Eigen::Index i = 0; i < labels.size(); ++i) {
        if (labels[i] < 0 || labels[i] >= n_classes)
            throw std::invalid_argument("gnb_fit: label outside [0, n_classes)");
        ++counts[static_cast<std::size_t>(labels[i])];
    }
    GnbModel model;
    model.n_classes = n_classes;
    model.means = Eigen::MatrixXf::Zero(n_classes, dim);
    model.variances = Eigen::MatrixXf::Zero(n_classes, dim);
    model.log_priors.resize(n_classes);

    for (Eigen::Index i = 0; i < features.rows(); ++i)
        model.means.row(labels[i]) += features.row(i);
    for (int c = 0; c < n_classes; ++c)
        if (counts[static_cast<std::size_t>(c)] > 0)
            model.means.row(c) /= static_cast<float>(counts[static_cast<std::size_t>(c)]);

    for (Eigen::Index i = 0; i < features.rows(); ++i) {
        const Eigen::RowVectorXf d = features.row(i) - model.means.row(labels[i]);
        model.variances.row(labels[i]) += d.cwiseProduct(d);
    }
    for (int c = 0; c < n_classes; ++c)
        if (counts[static_cast<std::size_t>(c)] > 0)
            model.variances.row(c) /= static_cast<float>(counts[static_cast<std::size_t>(c)]);

    const Eigen::RowVectorXf global_mean = features.colwise().mean();
    const double global_var =
        (features.rowwise() - global_mean).array().square().mean();
    const float floor =
        static_cast<float>(std::max(var_floor_frac * global_var, 1e-12));
    model.variances = model.variances.cwiseMax(floor);

    // a class never seen in training gets a -inf prior and is never predicted
    for (int c = 0; c < n_classes; ++c)
        model.log_priors[c] =
            counts[static_cast<std::size_t>(c)] > 0
                ? std::log(static_cast<float>(counts[static_cast<std::size_t>(c)]) /
                           static_cast<float>(features.rows()))
                : -std::numeric_limits<float>::infinity();
    return model;
}

Eigen::MatrixXf gnb_log_posterior(const GnbModel& model, const Eigen::MatrixXf& queries) {
    if (queries.cols() != model.means.cols())
        throw std::invalid_argument("gnb_log_posterior: feature dimension mismatch");

    constexpr float kLog2Pi = 1.8378770664093453f;
    Eigen::MatrixXf out(queries.rows(), model.n_classes);
    for (int c = 0; c < model.n_classes; ++c) {
        const auto var = model.variances.row(c).array();
        const float log_det_term = -0.5f * (var.log() + kLog2Pi).sum();
        for (Eigen::Index i = 0; i < queries.rows(); ++i) {
            const auto d = (queries.row(i) - model.means.row(c)).array();
            out(i, c) = model.log_priors[c] + log_det_term - 0.5f * (d * d / var).sum();
        }
    }
    return out;
}

Eigen::VectorXi gnb_predict(const GnbModel& model, const Eigen::MatrixXf& queries) {
    const Eigen::MatrixXf lp = gnb_log_posterior(model, queries);
    Eigen::VectorXi out(queries.rows());
    for (Eigen::Index i = 0; i < queries.rows(); ++i) {
        Eigen::Index best;
        lp.row(i).maxCoeff(&best);
        out[i] = static_cast<int>(best);
    }
    return out;
}

} // namespace jamscope::classify
