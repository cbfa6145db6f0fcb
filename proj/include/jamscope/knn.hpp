#pragma once

#include <Eigen/Dense>

namespace jamscope::classify {

struct KnnModel {
    int k = 5;
    int n_classes = 9;
    Eigen::MatrixXf train_features; // one row per training sample
    Eigen::VectorXi train_labels;
};

KnnModel knn_fit(const Eigen::MatrixXf& features, const Eigen::VectorXi& labels, int k,
                 int n_classes);

// Majority vote over the k nearest neighbours (Euclidean distance).
// Equal distances rank by class index, vote ties break by smaller summed
// distance and then by lower class index, so predictions do not depend on
// the order of the training rows.
Eigen::VectorXi knn_predict(const KnnModel& model, const Eigen::MatrixXf& queries);

} // namespace jamscope::classify
