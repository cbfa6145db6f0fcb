#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <vector>

namespace jamscope {

// 8-bit grayscale image, row-major. Row 0 is the lowest frequency band when
// produced by tfa::to_image; column index is time.
struct GrayImage {
    int height = 0;
    int width = 0;
    std::vector<std::uint8_t> pixels; // height*width, row-major

    std::uint8_t& at(int r, int c) { return pixels[static_cast<std::size_t>(r) * width + c]; }
    std::uint8_t at(int r, int c) const { return pixels[static_cast<std::size_t>(r) * width + c]; }

    bool operator==(const GrayImage&) const = default;
};

// Binary PGM (P5, maxval 255). Lossless, so written datasets round-trip
// byte-exactly.
void write_pgm(const GrayImage& img, const std::filesystem::path& path);
GrayImage read_pgm(const std::filesystem::path& path);

// Image as floats in [0,1], shape height x width.
Eigen::MatrixXf to_float_matrix(const GrayImage& img);

} // namespace jamscope
