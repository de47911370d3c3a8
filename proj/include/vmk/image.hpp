#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

namespace vmk {

// RGB raster, row-major, intensities in [0,1].
struct Image {
    int h = 0;
    int w = 0;
    std::vector<float> px;  // h*w*3

    Image() = default;
    Image(int h_, int w_, float fill = 0.0f) : h(h_), w(w_), px(std::size_t(h_) * w_ * 3, fill) {}

    float* at(int y, int x) { return px.data() + (std::size_t(y) * w + x) * 3; }
    const float* at(int y, int x) const { return px.data() + (std::size_t(y) * w + x) * 3; }
};

// byte <-> intensity maps used by the PPM layer (and anything that needs
// bit-exact goldens)
inline uint8_t to_byte(float v) {
    if (v <= 0.0f) return 0;
    if (v >= 1.0f) return 255;
    return static_cast<uint8_t>(v * 255.0f + 0.5f);
}
inline float from_byte(uint8_t b) { return static_cast<float>(b) / 255.0f; }

// Binary PPM (P6, maxval 255). write(read(p)) is byte-identical for canonical
// files; maxval != 255 is rejected.
Image read_ppm(const std::filesystem::path& path);
void write_ppm(const std::filesystem::path& path, const Image& img);

}  // namespace vmk
