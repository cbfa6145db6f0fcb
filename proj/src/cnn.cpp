#include "jamscope/cnn.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace jamscope::classify {

namespace {

void check_labels(const Eigen::VectorXi& labels, Eigen::Index n_rows, int n_classes,
                  const char* what) {
    if (labels.size() != n_rows)
        throw std::invalid_argument(std::string(what) + ": image/label count mismatch");
    for (Eigen::Index i = 0; i < labels.size(); ++i)
        if (labels[i] < 0 || labels[i] >= n_classes)
            throw std::invalid_argument(std::string(what) +
                                        ": label outside [0, n_classes); "
                                        "novel classes cannot be used for training");
}

struct ValScore {
    double loss = 0.0;
    double accuracy = 0.0;
};

ValScore score(const CompactCnn<float>& net, const Eigen::MatrixXf& images,
               const Eigen::VectorXi& labels, int chunk) {
    ValScore s;
    Eigen::Index correct = 0;
    for (Eigen::Index start = 0; start < images.rows(); start += chunk) {
        const Eigen::Index n = std::min<Eigen::Index>(chunk, images.rows() - start);
        const Eigen::MatrixXf probs = net.forward(images.middleRows(start, n));
        for (Eigen::Index i = 0; i < n; ++i) {
            const int label = labels[start + i];
            s.loss -= std::log(std::max(probs(i, label), std::numeric_limits<float>::min()));
            Eigen::Index best;
            probs.row(i).maxCoeff(&best);
            if (static_cast<int>(best) == label) ++correct;
        }
    }
    s.loss /= static_cast<double>(images.rows());
    s.accuracy = static_cast<double>(correct) / static_cast<double>(images.rows());
    return s;
}

} // namespace

TrainedCnn cnn_train(const CnnConfig& config, const TrainConfig& train,
                     const Eigen::MatrixXf& train_images, const Eigen::VectorXi& train_labels,
                     const Eigen::MatrixXf& val_images, const Eigen::VectorXi& val_labels) {
    if (train.batch_size < 1) throw std::invalid_argument("cnn_train: batch_size must be >= 1");
    if (train.max_epochs < 1) throw std::invalid_argument("cnn_train: max_epochs must be >= 1");
    if (train_images.rows() == 0 || val_images.rows() == 0)
        throw std::invalid_argument("cnn_train: empty train or validation set");
    check_labels(train_labels, train_images.rows(), config.n_classes, "cnn_train");
    check_labels(val_labels, val_images.rows(), config.n_classes, "cnn_train");

    CompactCnn<float> net(config);
    SeededRng rng(train.seed);
    net.init(rng);

    const Eigen::Index n_params = net.n_params();
    Eigen::VectorXf m = Eigen::VectorXf::Zero(n_params);
    Eigen::VectorXf v = Eigen::VectorXf::Zero(n_params);
    Eigen::VectorXf grad(n_params);
    Eigen::VectorXf best_params = net.params();

    double lr = train.learning_rate;
    long step = 0;
    int stall = 0, decay_stall = 0;
    const int decay_after = std::max(1, train.early_stop_patience / 2);

    TrainResult result;
    result.best_val_loss = std::numeric_limits<double>::infinity();

    std::vector<Eigen::Index> order(static_cast<std::size_t>(train_images.rows()));
    std::iota(order.begin(), order.end(), Eigen::Index{0});

    for (int epoch = 1; epoch <= train.max_epochs; ++epoch) {
        for (std::size_t i = order.size() - 1; i > 0; --i)
            std::swap(order[i], order[rng.integer(i + 1)]);

        double epoch_loss = 0.0;
        for (Eigen::Index start = 0; start < train_images.rows(); start += train.batch_size) {
            const Eigen::Index n =
                std::min<Eigen::Index>(train.batch_size, train_images.rows() - start);
            Eigen::MatrixXf batch(n, train_images.cols());
            Eigen::VectorXi batch_labels(n);
            for (Eigen::Index i = 0; i < n; ++i) {
                batch.row(i) = train_images.row(order[static_cast<std::size_t>(start + i)]);
                batch_labels[i] = train_labels[order[static_cast<std::size_t>(start + i)]];
            }

            const float batch_loss = net.gradients(batch, batch_labels, grad);
            if (!std::isfinite(batch_loss))
                throw std::runtime_error("cnn_train: loss diverged (non-finite)");
            epoch_loss += static_cast<double>(batch_loss) * static_cast<double>(n);

            ++step;
            const float b1 = static_cast<float>(train.adam_beta1);
            const float b2 = static_cast<float>(train.adam_beta2);
            m = b1 * m + (1.0f - b1) * grad;
            v = b2 * v + (1.0f - b2) * grad.cwiseProduct(grad);
            const float c1 =
                static_cast<float>(1.0 - std::pow(train.adam_beta1, static_cast<double>(step)));
            const float c2 =
                static_cast<float>(1.0 - std::pow(train.adam_beta2, static_cast<double>(step)));
            net.params().array() -=
                static_cast<float>(lr) * (m.array() / c1) /
                ((v.array() / c2).sqrt() + static_cast<float>(train.adam_eps));
        }
        epoch_loss /= static_cast<double>(train_images.rows());

        const ValScore val = score(net, val_images, val_labels, train.batch_size);
        result.train_loss.push_back(epoch_loss);
        result.val_loss.push_back(val.loss);
        result.val_acc.push_back(val.accuracy);
        result.epochs_run = epoch;
        if (train.on_epoch) train.on_epoch(epoch, epoch_loss, val.loss, val.accuracy);

        if (val.loss < result.best_val_loss) {
            result.best_val_loss = val.loss;
            result.best_val_acc = val.accuracy;
            result.best_epoch = epoch;
            best_params = net.params();
            stall = 0;
            decay_stall = 0;
        } else {
            ++stall;
            ++decay_stall;
        }
        if (decay_stall >= decay_after) {
            lr *= train.lr_decay;
            decay_stall = 0;
        }
        if (stall >= train.early_stop_patience) break;
    }

    return {config, std::move(best_params), std::move(result)};
}

Eigen::MatrixXf cnn_probabilities(const CnnConfig& config, const Eigen::VectorXf& params,
                                  const Eigen::MatrixXf& images, int chunk) {
    CompactCnn<float> net(config);
    if (params.size() != net.n_params())
        throw std::invalid_argument("cnn_probabilities: parameter count does not match config");
    net.params() = params;

    Eigen::MatrixXf probs(images.rows(), config.n_classes);
    for (Eigen::Index start = 0; start < images.rows(); start += chunk) {
        const Eigen::Index n = std::min<Eigen::Index>(chunk, images.rows() - start);
        probs.middleRows(start, n) = net.forward(images.middleRows(start, n));
    }
    return probs;
}

Eigen::VectorXi cnn_predict(const CnnConfig& config, const Eigen::VectorXf& params,
                            const Eigen::MatrixXf& images, int chunk) {
    const Eigen::MatrixXf probs = cnn_probabilities(config, params, images, chunk);
    Eigen::VectorXi out(probs.rows());
    for (Eigen::Index i = 0; i < probs.rows(); ++i) {
        Eigen::Index best;
        probs.row(i).maxCoeff(&best);
        out[i] = static_cast<int>(best);
    }
    return out;
}

} // namespace jamscope::classify
