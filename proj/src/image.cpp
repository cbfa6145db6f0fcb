#include "jamscope/image.hpp"

#include <fstream>
#include <stdexcept>
#include <string>

namespace jamscope {

void write_pgm(const GrayImage& img, const std::filesystem::path& path) {
    if (img.height < 1 || img.width < 1 ||
        img.pixels.size() != static_cast<std::size_t>(img.height) * img.width)
        throw std::invalid_argument("write_pgm: inconsistent image dimensions");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_pgm: cannot open " + path.string());
    out << "P5\n" << img.width << " " << img.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(img.pixels.data()),
              static_cast<std::streamsize>(img.pixels.size()));
    if (!out) throw std::runtime_error("write_pgm: write failed for " + path.string());
}

GrayImage read_pgm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("read_pgm: cannot open " + path.string());
    std::string magic;
    int w = 0, h = 0, maxval = 0;
    in >> magic >> w >> h >> maxval;
    if (magic != "P5" || w < 1 || h < 1 || maxval != 255)
        throw std::runtime_error("read_pgm: unsupported or corrupt header in " + path.string());
    in.get(); // single whitespace after maxval
    GrayImage img;
    img.width = w;
    img.height = h;
    img.pixels.resize(static_cast<std::size_t>(w) * h);
    in.read(reinterpret_cast<char*>(img.pixels.data()),
            static_cast<std::streamsize>(img.pixels.size()));
    if (!in) throw std::runtime_error("read_pgm: truncated pixel data in " + path.string());
    return img;
}

Eigen::MatrixXf to_float_matrix(const GrayImage& img) {
    Eigen::MatrixXf m(img.height, img.width);
    for (int r = 0; r < img.height; ++r)
        for (int c = 0; c < img.width; ++c)
            m(r, c) = static_cast<float>(img.at(r, c)) / 255.0f;
    return m;
}

} // namespace jamscope
