#pragma once

#include <Eigen/Dense>

namespace jamscope::classify {

struct GnbModel {
    int n_classes = 9;
    Eigen::MatrixXf means;      // n_classes x dim
    Eigen::MatrixXf variances;  // n_classes x dim, floored
    Eigen::VectorXf log_priors; // n_classes
};

// Per-class variances are floored at var_floor_frac times the mean global
// feature variance (and at 1e-12 absolutely) to keep log densities finite.
// Classes absent from the training labels get a -inf log prior, so they
// stay addressable in the model but are never predicted.
GnbModel gnb_fit(const Eigen::MatrixXf& features, const Eigen::VectorXi& labels, int n_classes,
                 double var_floor_frac = 1e-6);

Eigen::MatrixXf gnb_log_posterior(const GnbModel& model, const Eigen::MatrixXf& queries);
Eigen::VectorXi gnb_predict(const GnbModel& model, const Eigen::MatrixXf& queries);

} // namespace jamscope::classify
