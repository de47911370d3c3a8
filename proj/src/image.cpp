#include "vmk/image.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <string>

#include "vmk/errors.hpp"

namespace vmk {

namespace {

// reads the next whitespace-delimited header token, honoring '#' comments
std::string next_token(std::istream& in) {
    std::string tok;
    int c;
    while ((c = in.get()) != EOF) {
        if (c == '#') {
            while ((c = in.get()) != EOF && c != '\n') {
            }
            continue;
        }
        if (!std::isspace(c)) {
            tok.push_back(static_cast<char>(c));
            break;
        }
    }
    while ((c = in.get()) != EOF && !std::isspace(c)) tok.push_back(static_cast<char>(c));
    return tok;
}

}  // namespace

Image read_ppm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open image: " + path.string());

    if (next_token(in) != "P6") throw IoError("not a P6 ppm: " + path.string());
    const std::string ws = next_token(in);
    const std::string hs = next_token(in);
    const std::string ms = next_token(in);
    int w = 0, h = 0, maxval = 0;
    try {
        w = std::stoi(ws);
        h = std::stoi(hs);
        maxval = std::stoi(ms);
    } catch (const std::exception&) {
        throw IoError("malformed ppm header: " + path.string());
    }
    if (w <= 0 || h <= 0) throw IoError("malformed ppm dimensions: " + path.string());
    if (maxval != 255) throw IoError("unsupported ppm maxval (want 255): " + path.string());

    std::vector<uint8_t> raw(std::size_t(w) * h * 3);
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (static_cast<std::size_t>(in.gcount()) != raw.size())
        throw IoError("truncated ppm payload: " + path.string());

    Image img(h, w);
    for (std::size_t i = 0; i < raw.size(); ++i) img.px[i] = from_byte(raw[i]);
    return img;
}

void write_ppm(const std::filesystem::path& path, const Image& img) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write image: " + path.string());
    char header[64];
    const int n = std::snprintf(header, sizeof(header), "P6\n%d %d\n255\n", img.w, img.h);
    out.write(header, n);
    std::vector<uint8_t> raw(img.px.size());
    for (std::size_t i = 0; i < raw.size(); ++i) raw[i] = to_byte(img.px[i]);
    out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (!out) throw IoError("short write: " + path.string());
}

}  // namespace vmk
