#include "jamscope/features.hpp"

#include <stdexcept>

namespace jamscope::classify {

Eigen::MatrixXf pool_features(const Eigen::MatrixXf& images, int height, int width, int block) {
    if (block < 1 || height % block != 0 || width % block != 0)
        throw std::invalid_argument("pool_features: block must divide both image dimensions");
    if (images.cols() != static_cast<Eigen::Index>(height) * width)
        throw std::invalid_argument("pool_features: image dimension mismatch");

    const int ph = height / block;
    const int pw = width / block;
    const float inv_area = 1.0f / static_cast<float>(block * block);
    Eigen::MatrixXf out(images.rows(), static_cast<Eigen::Index>(ph) * pw);
    for (Eigen::Index i = 0; i < images.rows(); ++i) {
        for (int br = 0; br < ph; ++br) {
            for (int bc = 0; bc < pw; ++bc) {
                float acc = 0.0f;
                for (int r = br * block; r < (br + 1) * block; ++r)
                    for (int c = bc * block; c < (bc + 1) * block; ++c)
                        acc += images(i, static_cast<Eigen::Index>(r) * width + c);
                out(i, static_cast<Eigen::Index>(br) * pw + bc) = acc * inv_area;
            }
        }
    }
    return out;
}

} // namespace jamscope::classify
