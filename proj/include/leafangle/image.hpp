#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace leafangle {

/// Interleaved 8-bit pixel grid, row-major. Color images are RGB.
struct Image {
    int width = 0;
    int height = 0;
    int channels = 1;
    std::vector<std::uint8_t> data;

    Image() = default;
    Image(int w, int h, int c = 1)
        : width(w), height(h), channels(c),
          data(static_cast<std::size_t>(w) * static_cast<std::size_t>(h) * static_cast<std::size_t>(c), 0) {}

    bool empty() const noexcept { return width <= 0 || height <= 0; }

    std::uint8_t& at(int x, int y, int c = 0) {
        return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
    }
    std::uint8_t at(int x, int y, int c = 0) const {
        return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
    }

    bool operator==(const Image&) const = default;
};

/// Binary grid for one instance; `bits` is row-major, one byte (0/1) per pixel.
struct InstanceMask {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> bits;

    InstanceMask() = default;
    InstanceMask(int w, int h)
        : width(w), height(h), bits(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), 0) {}

    bool test(int x, int y) const { return bits[static_cast<std::size_t>(y) * width + x] != 0; }
    void set(int x, int y, bool on = true) { bits[static_cast<std::size_t>(y) * width + x] = on ? 1 : 0; }

    std::size_t area() const noexcept {
        std::size_t n = 0;
        for (auto b : bits) n += (b != 0);
        return n;
    }

    bool operator==(const InstanceMask&) const = default;
};

}  // namespace leafangle
