#include "vmk/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "vmk/errors.hpp"

namespace vmk::datagen {

namespace {

constexpr float kCamRadius = 3.0f;
constexpr float kFocal = 1.7f;
constexpr float kAmbient = 0.3f;
constexpr int kMaxSteps = 160;
constexpr float kHitEps = 1e-4f;
constexpr float kMaxDist = 8.0f;

struct Vec3 {
    float x = 0, y = 0, z = 0;
};

Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
Vec3 operator*(float s, Vec3 a) { return {s * a.x, s * a.y, s * a.z}; }
float dot3(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
Vec3 cross3(Vec3 a, Vec3 b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
Vec3 normalize3(Vec3 a) {
    const float inv = 1.0f / std::sqrt(dot3(a, a));
    return inv * a;
}

// exact at the axis angles so that symmetric scenes render symmetrically
// down to the bit
void sincos_deg(float deg, float& s, float& c) {
    float a = std::fmod(deg, 360.0f);
    if (a < 0) a += 360.0f;
    if (a == 0.0f) {
        s = 0;
        c = 1;
        return;
    }
    if (a == 90.0f) {
        s = 1;
        c = 0;
        return;
    }
    if (a == 180.0f) {
        s = 0;
        c = -1;
        return;
    }
    if (a == 270.0f) {
        s = -1;
        c = 0;
        return;
    }
    const float rad = a * 0.017453292519943295f;
    s = std::sin(rad);
    c = std::cos(rad);
}

float sdf_prim(const Primitive& p, Vec3 q) {
    const Vec3 c{p.dx, p.cy, p.dz};
    const Vec3 d = q - c;
    if (p.kind == Primitive::ball) return std::sqrt(dot3(d, d)) - p.size;
    const float ax = std::fabs(d.x) - p.size;
    const float ay = std::fabs(d.y) - p.size;
    const float az = std::fabs(d.z) - p.size;
    const float mx = std::max(ax, 0.0f), my = std::max(ay, 0.0f), mz = std::max(az, 0.0f);
    const float outside = std::sqrt(mx * mx + my * my + mz * mz);
    const float inside = std::min(std::max(ax, std::max(ay, az)), 0.0f);
    return outside + inside;
}

float sdf_scene(const ObjectSpec& spec, Vec3 q) {
    float d = 1e9f;
    for (const auto& p : spec.prims) d = std::min(d, sdf_prim(p, q));
    return d;
}

Vec3 sdf_normal(const ObjectSpec& spec, Vec3 q) {
    const float h = 1e-3f;
    const float dx = sdf_scene(spec, {q.x + h, q.y, q.z}) - sdf_scene(spec, {q.x - h, q.y, q.z});
    const float dy = sdf_scene(spec, {q.x, q.y + h, q.z}) - sdf_scene(spec, {q.x, q.y - h, q.z});
    const float dz = sdf_scene(spec, {q.x, q.y, q.z + h}) - sdf_scene(spec, {q.x, q.y, q.z - h});
    return normalize3({dx, dy, dz});
}

uint64_t mix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

}  // namespace

const std::array<PaletteColor, 12>& palette() {
    static const std::array<PaletteColor, 12> p = {{
        {"red", 0.85f, 0.10f, 0.10f},
        {"blue", 0.15f, 0.25f, 0.90f},
        {"cyan", 0.10f, 0.80f, 0.85f},
        {"pink", 0.95f, 0.45f, 0.70f},
        {"gray", 0.55f, 0.55f, 0.55f},
        {"teal", 0.05f, 0.55f, 0.50f},
        {"gold", 0.90f, 0.70f, 0.10f},
        {"jade", 0.15f, 0.65f, 0.35f},
        {"plum", 0.55f, 0.20f, 0.60f},
        {"rust", 0.70f, 0.30f, 0.12f},
        {"mint", 0.60f, 0.95f, 0.70f},
        {"navy", 0.10f, 0.12f, 0.45f},
    }};
    return p;
}

ObjectSpec random_object(uint64_t id, Rng& rng) {
    ObjectSpec spec;
    spec.id = id;
    const int n = 1 + static_cast<int>(rng.uniform_below(3));
    float top = 0.0f;
    for (int i = 0; i < n; ++i) {
        Primitive p;
        p.kind = rng.uniform_below(2) ? Primitive::ball : Primitive::cube;
        p.color = static_cast<int>(rng.uniform_below(palette().size()));
        p.size = 0.20f + 0.18f * static_cast<float>(rng.uniform());
        p.dx = 0.10f * static_cast<float>(rng.uniform() - 0.5);
        p.dz = 0.10f * static_cast<float>(rng.uniform() - 0.5);
        p.cy = (i == 0) ? 0.0f : top + p.size;
        top = p.cy + p.size;
        spec.prims.push_back(p);
    }
    // recenter the stack vertically and keep it inside the frame
    const float lo = spec.prims.front().cy - spec.prims.front().size;
    const float hi = top;
    const float mid = 0.5f * (lo + hi);
    for (auto& p : spec.prims) p.cy -= mid;
    const float height = hi - lo;
    if (height > 1.2f) {
        const float s = 1.2f / height;
        for (auto& p : spec.prims) {
            p.size *= s;
            p.cy *= s;
            p.dx *= s;
            p.dz *= s;
        }
    }
    return spec;
}

Image render(const ObjectSpec& spec, float azimuth_deg, float elevation_deg, int resolution) {
    float sa, ca, se, ce;
    sincos_deg(azimuth_deg, sa, ca);
    sincos_deg(elevation_deg, se, ce);

    const Vec3 cam{kCamRadius * ce * ca, kCamRadius * se, kCamRadius * ce * sa};
    const Vec3 fwd = normalize3({-cam.x, -cam.y, -cam.z});
    const Vec3 right = normalize3(cross3(fwd, Vec3{0, 1, 0}));
    const Vec3 up = cross3(right, fwd);

    Image img(resolution, resolution, 1.0f);
    for (int y = 0; y < resolution; ++y) {
        for (int x = 0; x < resolution; ++x) {
            const float u = (static_cast<float>(x) + 0.5f) / resolution - 0.5f;
            const float v = 0.5f - (static_cast<float>(y) + 0.5f) / resolution;
            const Vec3 dir = normalize3(kFocal * fwd + u * right + v * up);

            float t = 0.0f;
            int hit_prim = -1;
            Vec3 p = cam;
            for (int step = 0; step < kMaxSteps; ++step) {
                p = cam + t * dir;
                const float d = sdf_scene(spec, p);
                if (d < kHitEps) {
                    float best = 1e9f;
                    for (std::size_t i = 0; i < spec.prims.size(); ++i) {
                        const float di = sdf_prim(spec.prims[i], p);
                        if (di < best) {
                            best = di;
                            hit_prim = static_cast<int>(i);
                        }
                    }
                    break;
                }
                t += d;
                if (t > kMaxDist) break;
            }
            if (hit_prim < 0) continue;  // background stays white

            const Vec3 n = sdf_normal(spec, p);
            const Vec3 light = -1.0f * dir;  // headlight
            const float lambert = std::max(0.0f, dot3(n, light));
            const float shade = kAmbient + (1.0f - kAmbient) * lambert;
            const auto& col = palette()[spec.prims[hit_prim].color];
            float* px = img.at(y, x);
            px[0] = std::clamp(col.r * shade, 0.0f, 1.0f);
            px[1] = std::clamp(col.g * shade, 0.0f, 1.0f);
            px[2] = std::clamp(col.b * shade, 0.0f, 1.0f);
        }
    }
    return img;
}

ViewSet render_views(const ObjectSpec& spec, int n_views, float elevation_deg, int resolution) {
    if (n_views < 1) throw ConfigError("n_views must be >= 1");
    ViewSet vs;
    vs.elevation_deg = elevation_deg;
    const float step = 360.0f / static_cast<float>(n_views);
    for (int i = 0; i < n_views; ++i) {
        const float az = step * static_cast<float>(i);
        vs.azimuth_deg.push_back(az);
        vs.views.push_back(render(spec, az, elevation_deg, resolution));
    }
    return vs;
}

std::string make_caption(const ObjectSpec& spec) {
    std::string out;
    for (std::size_t i = 0; i < spec.prims.size(); ++i) {
        const auto& p = spec.prims[i];
        const char* shape = (p.kind == Primitive::cube) ? "cube" : "ball";
        if (i == 0) {
            out += "a ";
        } else {
            out += " with a ";
        }
        out += palette()[p.color].name;
        out += ' ';
        out += shape;
        if (i > 0) out += " on top";
    }
    return out;
}

std::string split_of(uint64_t object_id) {
    return mix64(object_id) % 10 == 9 ? "heldout" : "train";
}

Manifest build_dataset(int n_objects, uint64_t seed, const std::filesystem::path& out_dir,
                       int n_views, float elevation_deg, int resolution) {
    if (n_objects < 1) throw ConfigError("n_objects must be >= 1");
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    std::ofstream manifest(out_dir / "manifest.csv");
    if (!manifest) throw IoError("cannot write manifest in " + out_dir.string());

    manifest << "object_id,split,caption,ref_index";
    for (int v = 0; v < n_views; ++v) manifest << ",view" << v;
    manifest << "\n";

    Manifest result;
    result.n_views = n_views;
    Rng master(seed);
    for (int i = 0; i < n_objects; ++i) {
        Rng obj_rng(master.next_u64());
        const auto id = static_cast<uint64_t>(i);
        const ObjectSpec spec = random_object(id, obj_rng);
        const int ref_index = static_cast<int>(obj_rng.uniform_below(static_cast<uint64_t>(n_views)));
        const ViewSet vs = render_views(spec, n_views, elevation_deg, resolution);

        ManifestRow row;
        row.object_id = id;
        row.split = split_of(id);
        row.caption = make_caption(spec);
        row.ref_index = ref_index;

        char buf[64];
        for (int v = 0; v < n_views; ++v) {
            std::snprintf(buf, sizeof(buf), "obj_%04d_view_%d.ppm", i, v);
            write_ppm(out_dir / buf, vs.views[static_cast<std::size_t>(v)]);
            row.view_paths.emplace_back(buf);
        }
        std::snprintf(buf, sizeof(buf), "obj_%04d_spec.txt", i);
        std::ofstream meta(out_dir / buf);
        meta << row.caption << "\n";
        for (const auto& p : spec.prims) {
            char line[160];
            std::snprintf(line, sizeof(line), "prim %s %s %.6f %.6f %.6f\n",
                          p.kind == Primitive::cube ? "cube" : "ball", palette()[p.color].name,
                          double(p.size), double(p.dx), double(p.dz));
            meta << line;
        }

        manifest << row.object_id << ',' << row.split << ',' << row.caption << ',' << row.ref_index;
        for (const auto& path : row.view_paths) manifest << ',' << path;
        manifest << "\n";
        result.rows.push_back(std::move(row));
    }
    if (!manifest) throw IoError("short write on manifest");
    return result;
}

std::vector<const DatasetObject*> Dataset::split_objects(const std::string& split) const {
    std::vector<const DatasetObject*> out;
    for (const auto& o : objects)
        if (o.split == split) out.push_back(&o);
    return out;
}

Dataset load_dataset(const std::filesystem::path& dir) {
    std::ifstream in(dir / "manifest.csv");
    if (!in) throw IoError("cannot open manifest: " + (dir / "manifest.csv").string());
    std::string line;
    if (!std::getline(in, line)) throw IoError("empty manifest");
    // header tells us the view count
    int n_views = 0;
    {
        std::stringstream ss(line);
        std::string col;
        while (std::getline(ss, col, ','))
            if (col.rfind("view", 0) == 0) ++n_views;
    }
    if (n_views == 0) throw IoError("manifest lists no views");

    Dataset ds;
    ds.n_views = n_views;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string col;
        DatasetObject obj;
        std::getline(ss, col, ',');
        obj.id = std::stoull(col);
        std::getline(ss, obj.split, ',');
        std::getline(ss, obj.caption, ',');
        std::getline(ss, col, ',');
        obj.ref_index = std::stoi(col);
        for (int v = 0; v < n_views; ++v) {
            if (!std::getline(ss, col, ',')) throw IoError("manifest row too short");
            obj.views.push_back(read_ppm(dir / col));
        }
        ds.objects.push_back(std::move(obj));
    }
    if (ds.objects.empty()) throw IoError("manifest has no objects");
    return ds;
}

}  // namespace vmk::datagen
