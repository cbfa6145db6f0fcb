#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "jamscope/rng.hpp"

namespace jamscope::classify {

struct CnnConfig {
    int image_height = 64;
    int image_width = 64;
    std::array<int, 3> conv_channels{8, 16, 32};
    int dense_units = 128;
    int n_classes = 9;
};

struct TrainConfig {
    int batch_size = 32;
    double learning_rate = 1.0e-3;
    int max_epochs = 50;
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double adam_eps = 1.0e-8;
    int early_stop_patience = 10;
    double lr_decay = 0.5; // halves the step after patience/2 stalled epochs
    std::uint64_t seed = 1;
    std::function<void(int epoch, double train_loss, double val_loss, double val_acc)> on_epoch;
};

struct TrainResult {
    int epochs_run = 0;
    int best_epoch = -1;
    double best_val_loss = 0.0;
    double best_val_acc = 0.0;
    std::vector<double> train_loss;
    std::vector<double> val_loss;
    std::vector<double> val_acc;
};

// Three conv(3x3, same) + ReLU + maxpool(2) blocks, then two dense layers
// and a softmax. Activations are kept as channels x (batch * height * width)
// matrices so convolutions run as a single GEMM over im2col patches.
template <typename Scalar>
class CompactCnn {
public:
    using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
    using IdxMat = Eigen::Matrix<Eigen::Index, Eigen::Dynamic, Eigen::Dynamic>;

    explicit CompactCnn(const CnnConfig& config) : config_(config) {
        if (config.image_height < 8 || config.image_width < 8 ||
            config.image_height % 8 != 0 || config.image_width % 8 != 0)
            throw std::invalid_argument("CompactCnn: image sides must be multiples of 8");
        for (int c : config.conv_channels)
            if (c < 1) throw std::invalid_argument("CompactCnn: conv channels must be >= 1");
        if (config.dense_units < 1 || config.n_classes < 2)
            throw std::invalid_argument("CompactCnn: dense/class sizes invalid");

        int h = config.image_height, w = config.image_width, c_in = 1;
        Eigen::Index offset = 0;
        for (int l = 0; l < 3; ++l) {
            const int c_out = config.conv_channels[static_cast<std::size_t>(l)];
            conv_w_[l] = {offset, c_out, c_in * 9};
            offset += conv_w_[l].rows * conv_w_[l].cols;
            conv_b_[l] = {offset, c_out, 1};
            offset += c_out;
            height_[l] = h;
            width_[l] = w;
            in_ch_[l] = c_in;
            h /= 2;
            w /= 2;
            c_in = c_out;
        }
        flat_dim_ = static_cast<Eigen::Index>(c_in) * h * w;
        d1_w_ = {offset, config.dense_units, flat_dim_};
        offset += d1_w_.rows * d1_w_.cols;
        d1_b_ = {offset, config.dense_units, 1};
        offset += config.dense_units;
        d2_w_ = {offset, config.n_classes, config.dense_units};
        offset += d2_w_.rows * d2_w_.cols;
        d2_b_ = {offset, config.n_classes, 1};
        offset += config.n_classes;
        params_ = Vec::Zero(offset);
    }

    const CnnConfig& config() const { return config_; }
    Eigen::Index n_params() const { return params_.size(); }
    Vec& params() { return params_; }
    const Vec& params() const { return params_; }

    // weights U(-sqrt(6/fan_in), +sqrt(6/fan_in)), biases zero
    void init(SeededRng& rng) {
        params_.setZero();
        for (int l = 0; l < 3; ++l) init_block(conv_w_[l], rng);
        init_block(d1_w_, rng);
        init_block(d2_w_, rng);
    }

    Mat forward(const Eigen::Ref<const Mat>& images) const {
        Workspace ws;
        run_forward(images, ws);
        return ws.probs.transpose();
    }

    Eigen::VectorXi predict(const Eigen::Ref<const Mat>& images) const {
        const Mat probs = forward(images);
        Eigen::VectorXi out(probs.rows());
        for (Eigen::Index i = 0; i < probs.rows(); ++i) {
            Eigen::Index best;
            probs.row(i).maxCoeff(&best);
            out[i] = static_cast<int>(best);
        }
        return out;
    }

    Scalar loss(const Eigen::Ref<const Mat>& images, const Eigen::VectorXi& labels) const {
        Workspace ws;
        run_forward(images, ws);
        return cross_entropy(ws.probs, labels);
    }

    // mean cross-entropy over the batch plus its gradient w.r.t. params()
    Scalar gradients(const Eigen::Ref<const Mat>& images, const Eigen::VectorXi& labels,
                     Vec& grad) const {
        Workspace ws;
        run_forward(images, ws);
        const Scalar loss_value = cross_entropy(ws.probs, labels);

        grad.setZero(params_.size());
        const Eigen::Index batch = images.rows();

        // softmax + cross-entropy
        Mat delta = ws.probs; // n_classes x B
        for (Eigen::Index b = 0; b < batch; ++b) delta(labels[b], b) -= Scalar(1);
        delta /= static_cast<Scalar>(batch);

        // dense layers
        view(grad, d2_w_) = delta * ws.a1.transpose();
        view(grad, d2_b_) = delta.rowwise().sum();
        Mat d_a1 = view(params_, d2_w_).transpose() * delta;
        Mat d_z1 = d_a1.cwiseProduct((ws.z1.array() > Scalar(0)).template cast<Scalar>().matrix());
        view(grad, d1_w_) = d_z1 * ws.flat.transpose();
        view(grad, d1_b_) = d_z1.rowwise().sum();
        Mat d_flat = view(params_, d1_w_).transpose() * d_z1;

        // unflatten back to channel-major layout
        const int h3 = height_[2] / 2, w3 = width_[2] / 2;
        const int c3 = config_.conv_channels[2];
        Mat d_pool(c3, batch * h3 * w3);
        for (Eigen::Index b = 0; b < batch; ++b)
            for (int ch = 0; ch < c3; ++ch)
                for (int r = 0; r < h3; ++r)
                    for (int c = 0; c < w3; ++c)
                        d_pool(ch, (b * h3 + r) * w3 + c) =
                            d_flat((static_cast<Eigen::Index>(ch) * h3 + r) * w3 + c, b);

        for (int l = 2; l >= 0; --l) {
            const int h = height_[l], w = width_[l];
            // pool scatter
            Mat d_relu = Mat::Zero(ws.pre[l].rows(), ws.pre[l].cols());
            for (Eigen::Index ch = 0; ch < d_pool.rows(); ++ch)
                for (Eigen::Index p = 0; p < d_pool.cols(); ++p)
                    d_relu(ch, ws.argmax[l](ch, p)) += d_pool(ch, p);
            // ReLU mask
            Mat d_pre =
                d_relu.cwiseProduct((ws.pre[l].array() > Scalar(0)).template cast<Scalar>().matrix());
            view(grad, conv_w_[l]) = d_pre * ws.cols[l].transpose();
            view(grad, conv_b_[l]) = d_pre.rowwise().sum();
            if (l > 0) {
                const Mat d_cols = view(params_, conv_w_[l]).transpose() * d_pre;
                col2im(d_cols, static_cast<int>(batch), h, w, in_ch_[l], d_pool);
            }
        }
        return loss_value;
    }

private:
    struct Block {
        Eigen::Index offset = 0;
        Eigen::Index rows = 0;
        Eigen::Index cols = 0;
    };

    struct Workspace {
        std::array<Mat, 3> cols;
        std::array<Mat, 3> pre;
        std::array<IdxMat, 3> argmax;
        Mat flat, z1, a1, probs;
    };

    Eigen::Map<Mat> view(Vec& v, const Block& b) const {
        return Eigen::Map<Mat>(v.data() + b.offset, b.rows, b.cols);
    }
    Eigen::Map<const Mat> view(const Vec& v, const Block& b) const {
        return Eigen::Map<const Mat>(v.data() + b.offset, b.rows, b.cols);
    }

    void init_block(const Block& b, SeededRng& rng) {
        const double bound = std::sqrt(6.0 / static_cast<double>(b.cols));
        auto w = view(params_, b);
        for (Eigen::Index j = 0; j < w.cols(); ++j)
            for (Eigen::Index i = 0; i < w.rows(); ++i)
                w(i, j) = static_cast<Scalar>(rng.uniform(-bound, bound));
    }

    static void im2col(const Mat& a, int batch, int h, int w, int c_in, Mat& k) {
        k.resize(static_cast<Eigen::Index>(c_in) * 9, a.cols());
        for (int b = 0; b < batch; ++b) {
            for (int r = 0; r < h; ++r) {
                for (int c = 0; c < w; ++c) {
                    const Eigen::Index col = (static_cast<Eigen::Index>(b) * h + r) * w + c;
                    for (int ci = 0; ci < c_in; ++ci) {
                        for (int kr = -1; kr <= 1; ++kr) {
                            for (int kc = -1; kc <= 1; ++kc) {
                                const Eigen::Index row = ci * 9 + (kr + 1) * 3 + (kc + 1);
                                const int rr = r + kr, cc = c + kc;
                                k(row, col) =
                                    (rr >= 0 && rr < h && cc >= 0 && cc < w)
                                        ? a(ci, (static_cast<Eigen::Index>(b) * h + rr) * w + cc)
                                        : Scalar(0);
                            }
                        }
                    }
                }
            }
        }
    }

    static void col2im(const Mat& dk, int batch, int h, int w, int c_in, Mat& da) {
        da = Mat::Zero(c_in, static_cast<Eigen::Index>(batch) * h * w);
        for (int b = 0; b < batch; ++b) {
            for (int r = 0; r < h; ++r) {
                for (int c = 0; c < w; ++c) {
                    const Eigen::Index col = (static_cast<Eigen::Index>(b) * h + r) * w + c;
                    for (int ci = 0; ci < c_in; ++ci) {
                        for (int kr = -1; kr <= 1; ++kr) {
                            for (int kc = -1; kc <= 1; ++kc) {
                                const int rr = r + kr, cc = c + kc;
                                if (rr < 0 || rr >= h || cc < 0 || cc >= w) continue;
                                da(ci, (static_cast<Eigen::Index>(b) * h + rr) * w + cc) +=
                                    dk(ci * 9 + (kr + 1) * 3 + (kc + 1), col);
                            }
                        }
                    }
                }
            }
        }
    }

    static void maxpool(const Mat& r, int batch, int h, int w, Mat& p, IdxMat& amax) {
        const int h2 = h / 2, w2 = w / 2;
        p.resize(r.rows(), static_cast<Eigen::Index>(batch) * h2 * w2);
        amax.resize(r.rows(), p.cols());
        for (int b = 0; b < batch; ++b) {
            for (int r2 = 0; r2 < h2; ++r2) {
                for (int c2 = 0; c2 < w2; ++c2) {
                    const Eigen::Index pcol = (static_cast<Eigen::Index>(b) * h2 + r2) * w2 + c2;
                    for (Eigen::Index ch = 0; ch < r.rows(); ++ch) {
                        Scalar best = -std::numeric_limits<Scalar>::infinity();
                        Eigen::Index best_col = 0;
                        for (int dr = 0; dr < 2; ++dr) {
                            for (int dc = 0; dc < 2; ++dc) {
                                const Eigen::Index col =
                                    (static_cast<Eigen::Index>(b) * h + 2 * r2 + dr) * w +
                                    (2 * c2 + dc);
                                if (r(ch, col) > best) {
                                    best = r(ch, col);
                                    best_col = col;
                                }
                            }
                        }
                        p(ch, pcol) = best;
                        amax(ch, pcol) = best_col;
                    }
                }
            }
        }
    }

    void run_forward(const Eigen::Ref<const Mat>& images, Workspace& ws) const {
        const Eigen::Index batch = images.rows();
        if (batch < 1) throw std::invalid_argument("CompactCnn: empty batch");
        if (images.cols() != static_cast<Eigen::Index>(config_.image_height) * config_.image_width)
            throw std::invalid_argument("CompactCnn: image size does not match the config");

        // row-major pixel rows concatenate directly into the channel layout
        Mat act(1, batch * images.cols());
        for (Eigen::Index b = 0; b < batch; ++b)
            act.block(0, b * images.cols(), 1, images.cols()) = images.row(b);

        for (int l = 0; l < 3; ++l) {
            im2col(act, static_cast<int>(batch), height_[l], width_[l], in_ch_[l], ws.cols[l]);
            ws.pre[l] = view(params_, conv_w_[l]) * ws.cols[l];
            ws.pre[l].colwise() += view(params_, conv_b_[l]).col(0);
            Mat relu = ws.pre[l].cwiseMax(Scalar(0));
            maxpool(relu, static_cast<int>(batch), height_[l], width_[l], act, ws.argmax[l]);
        }

        const int h3 = height_[2] / 2, w3 = width_[2] / 2;
        const int c3 = config_.conv_channels[2];
        ws.flat.resize(flat_dim_, batch);
        for (Eigen::Index b = 0; b < batch; ++b)
            for (int ch = 0; ch < c3; ++ch)
                for (int r = 0; r < h3; ++r)
                    for (int c = 0; c < w3; ++c)
                        ws.flat((static_cast<Eigen::Index>(ch) * h3 + r) * w3 + c, b) =
                            act(ch, (b * h3 + r) * w3 + c);

        ws.z1 = view(params_, d1_w_) * ws.flat;
        ws.z1.colwise() += view(params_, d1_b_).col(0);
        ws.a1 = ws.z1.cwiseMax(Scalar(0));
        Mat logits = view(params_, d2_w_) * ws.a1;
        logits.colwise() += view(params_, d2_b_).col(0);

        ws.probs.resize(logits.rows(), logits.cols());
        for (Eigen::Index b = 0; b < batch; ++b) {
            const Scalar m = logits.col(b).maxCoeff();
            ws.probs.col(b) = (logits.col(b).array() - m).exp();
            ws.probs.col(b) /= ws.probs.col(b).sum();
        }
    }

    static Scalar cross_entropy(const Mat& probs, const Eigen::VectorXi& labels) {
        if (labels.size() != probs.cols())
            throw std::invalid_argument("CompactCnn: label count does not match the batch");
        Scalar total = 0;
        for (Eigen::Index b = 0; b < probs.cols(); ++b) {
            if (labels[b] < 0 || labels[b] >= probs.rows())
                throw std::invalid_argument("CompactCnn: label outside [0, n_classes)");
            total -= std::log(std::max(probs(labels[b], b),
                                       std::numeric_limits<Scalar>::min()));
        }
        return total / static_cast<Scalar>(probs.cols());
    }

    CnnConfig config_;
    Vec params_;
    std::array<Block, 3> conv_w_, conv_b_;
    Block d1_w_, d1_b_, d2_w_, d2_b_;
    std::array<int, 3> height_{}, width_{}, in_ch_{};
    Eigen::Index flat_dim_ = 0;
};

struct TrainedCnn {
    CnnConfig config;
    Eigen::VectorXf params;
    TrainResult result;
};

TrainedCnn cnn_train(const CnnConfig& config, const TrainConfig& train,
                     const Eigen::MatrixXf& train_images, const Eigen::VectorXi& train_labels,
                     const Eigen::MatrixXf& val_images, const Eigen::VectorXi& val_labels);

// forward pass for a stored model, in manageable chunks
Eigen::MatrixXf cnn_probabilities(const CnnConfig& config, const Eigen::VectorXf& params,
                                  const Eigen::MatrixXf& images, int chunk = 64);
Eigen::VectorXi cnn_predict(const CnnConfig& config, const Eigen::VectorXf& params,
                            const Eigen::MatrixXf& images, int chunk = 64);

} // namespace jamscope::classify
