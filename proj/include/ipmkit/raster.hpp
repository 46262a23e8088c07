#pragma once

#include <cstdint>
#include <vector>

namespace ipm {

/// 8-bit image, row-major, interleaved channels (1 = gray, 3 = RGB).
struct Raster {
    int width = 0;
    int height = 0;
    int channels = 1;
    std::vector<std::uint8_t> data;

    Raster() = default;
    Raster(int w, int h, int c, std::uint8_t fill = 0)
        : width(w), height(h), channels(c),
          data(static_cast<std::size_t>(w) * h * c, fill) {}

    std::uint8_t& at(int x, int y, int c = 0) {
        return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
    }
    std::uint8_t at(int x, int y, int c = 0) const {
        return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
    }

    bool same_shape(const Raster& o) const {
        return width == o.width && height == o.height && channels == o.channels;
    }
};

}  // namespace ipm
