#pragma once

#include <Eigen/Dense>

namespace jamscope::classify {

// Block-average pooling of row-major flattened images. Each row of `images`
// is one height x width image; the result rows are (height/block) x
// (width/block) pooled images, same layout.
Eigen::MatrixXf pool_features(const Eigen::MatrixXf& images, int height, int width,
                              int block = 8);

} // namespace jamscope::classify
