#include "jamscope/knn.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace jamscope::classify {

KnnModel knn_fit(const Eigen::MatrixXf& features, const Eigen::VectorXi& labels, int k,
                 int n_classes) {
    if (features.rows() != labels.size())
        throw std::invalid_argument("knn_fit: feature/label count mismatch");
    if (features.rows() == 0) throw std::invalid_argument("knn_fit: empty training set");
    if (k < 1 || k > features.rows())
        throw std::invalid_argument("knn_fit: k outside [1, n_train]");
    if (n_classes < 1) throw std::invalid_argument("knn_fit: n_classes must be >= 1");
    for (Eigen::Index i = 0; i < labels.size(); ++i)
        if (labels[i] < 0 || labels[i] >= n_classes)
            throw std::invalid_argument("knn_fit: label outside [0, n_classes)");
    return {k, n_classes, features, labels};
}

Eigen::VectorXi knn_predict(const KnnModel& model, const Eigen::MatrixXf& queries) {
    if (queries.cols() != model.train_features.cols())
        throw std::invalid_argument("knn_predict: feature dimension mismatch");

    const Eigen::Index n_train = model.train_features.rows();
    Eigen::VectorXi out(queries.rows());
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n_train));

    for (Eigen::Index q = 0; q < queries.rows(); ++q) {
        const Eigen::VectorXf dist2 =
            (model.train_features.rowwise() - queries.row(q)).rowwise().squaredNorm();

        std::iota(order.begin(), order.end(), Eigen::Index{0});
        const auto closer = [&](Eigen::Index a, Eigen::Index b) {
            if (dist2[a] != dist2[b]) return dist2[a] < dist2[b];
            return model.train_labels[a] < model.train_labels[b];
        };
        std::nth_element(order.begin(), order.begin() + (model.k - 1), order.end(), closer);

        std::vector<int> votes(static_cast<std::size_t>(model.n_classes), 0);
        std::vector<double> summed(static_cast<std::size_t>(model.n_classes), 0.0);
        for (int i = 0; i < model.k; ++i) {
            const int label = model.train_labels[order[static_cast<std::size_t>(i)]];
            ++votes[static_cast<std::size_t>(label)];
            summed[static_cast<std::size_t>(label)] +=
                std::sqrt(static_cast<double>(dist2[order[static_cast<std::size_t>(i)]]));
        }

        int best = 0;
        for (int c = 1; c < model.n_classes; ++c) {
            if (votes[c] > votes[best] ||
                (votes[c] == votes[best] && summed[c] < summed[best]))
                best = c;
        }
        out[q] = best;
    }
    return out;
}

} // namespace jamscope::classify
