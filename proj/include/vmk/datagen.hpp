#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "vmk/image.hpp"
#include "vmk/rng.hpp"

namespace vmk::datagen {

struct PaletteColor {
    const char* name;
    float r, g, b;
};

// 12 fixed albedos; names are short so every caption fits in 64 bytes
const std::array<PaletteColor, 12>& palette();

struct Primitive {
    enum Kind { cube, ball };
    Kind kind = cube;
    int color = 0;   // palette index
    float size = 0;  // half-extent (cube) or radius (ball)
    float dx = 0, dz = 0;
    float cy = 0;  // assigned by stacking
};

struct ObjectSpec {
    uint64_t id = 0;
    std::vector<Primitive> prims;  // bottom to top
};

struct ViewSet {
    std::vector<Image> views;
    std::vector<float> azimuth_deg;
    float elevation_deg = 30.0f;
};

ObjectSpec random_object(uint64_t id, Rng& rng);

Image render(const ObjectSpec& spec, float azimuth_deg, float elevation_deg, int resolution);
ViewSet render_views(const ObjectSpec& spec, int n_views, float elevation_deg, int resolution);

std::string make_caption(const ObjectSpec& spec);

struct ManifestRow {
    uint64_t object_id = 0;
    std::string split;  // "train" | "heldout"
    std::string caption;
    int ref_index = 0;
    std::vector<std::string> view_paths;  // relative to the dataset dir
};

struct Manifest {
    int n_views = 8;
    std::vector<ManifestRow> rows;
};

// renders n_objects and writes images + per-object spec files + manifest.csv
Manifest build_dataset(int n_objects, uint64_t seed, const std::filesystem::path& out_dir,
                       int n_views = 8, float elevation_deg = 30.0f, int resolution = 32);

struct DatasetObject {
    uint64_t id = 0;
    std::string split;
    std::string caption;
    int ref_index = 0;
    std::vector<Image> views;
};

struct Dataset {
    int n_views = 8;
    std::vector<DatasetObject> objects;

    std::vector<const DatasetObject*> split_objects(const std::string& split) const;
};

Dataset load_dataset(const std::filesystem::path& dir);

// deterministic 90/10 split on the object id
std::string split_of(uint64_t object_id);

}  // namespace vmk::datagen
