// Copyright (c) 2026, the fedvox authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "fedvox/binio.hpp"
#include "fedvox/common.hpp"
#include "fedvox/rng.hpp"

namespace fedvox {

// Modality channel order is fixed everywhere: T1, T1ce, T2, FLAIR.
inline constexpr int kNumModalities = 4;
inline constexpr const char* kModalityNames[kNumModalities] = {"t1", "t1ce", "t2", "flair"};

struct ModalityContrast {
    double tissue_mean = 0.4;
    double tumor_delta = 0.1;
    double noise_sd = 0.05;
};

// Parameters of the synthetic multimodal generator. Tumors are unions of
// axis-aligned ellipsoids at integer centers with per-axis radii drawn from
// [radius_min, radius_max].
struct SynthSpec {
    int n_volumes = 8;
    int dx = 32, dy = 32, dz = 32;
    int tumor_count_min = 1, tumor_count_max = 2;
    double tumor_radius_min = 3.0, tumor_radius_max = 6.0;
    std::array<ModalityContrast, kNumModalities> contrast{};
    uint64_t seed = 0;

    void validate() const {
        require(n_volumes >= 1, "synth spec: n_volumes must be >= 1");
        require(dx >= 16 && dy >= 16 && dz >= 16, "synth spec: dims must be >= 16 per axis");
        require(tumor_count_min >= 0 && tumor_count_max >= tumor_count_min,
                "synth spec: tumor_count range must satisfy 0 <= min <= max");
        require(tumor_radius_min > 0.0 && tumor_radius_max >= tumor_radius_min,
                "synth spec: tumor_radius range must satisfy 0 < min <= max");
        const int min_dim = std::min({dx, dy, dz});
        require(2.0 * tumor_radius_max + 1.0 <= static_cast<double>(min_dim),
                "synth spec: tumor_radius_max does not fit inside the volume");
        for (int c = 0; c < kNumModalities; ++c) {
            require(contrast[c].noise_sd >= 0.0,
                    std::string("synth spec: noise_sd must be >= 0 for ") + kModalityNames[c]);
            require(contrast[c].tissue_mean >= 0.0 && contrast[c].tissue_mean <= 1.0,
                    std::string("synth spec: tissue_mean must be in [0,1] for ") + kModalityNames[c]);
        }
        // T2 and FLAIR must carry strictly more tumor contrast than T1 and
        // T1ce so the attention analysis has a recoverable ground truth.
        const double weak = std::max(contrast[0].tumor_delta, contrast[1].tumor_delta);
        require(contrast[2].tumor_delta > weak,
                "synth spec: tumor_delta for t2 must exceed tumor_delta for t1 and t1ce");
        require(contrast[3].tumor_delta > weak,
                "synth spec: tumor_delta for flair must exceed tumor_delta for t1 and t1ce");
    }
};

// A four-channel intensity grid plus a binary tumor mask. Grids are stored
// x-fastest; intensities are normalized to [0,1].
struct Volume {
    int dx = 0, dy = 0, dz = 0;
    std::array<std::vector<float>, kNumModalities> channels;
    std::vector<uint8_t> mask;
    std::string case_id;

    size_t voxel_count() const { return static_cast<size_t>(dx) * dy * dz; }
    size_t index(int x, int y, int z) const {
        return static_cast<size_t>(x) + static_cast<size_t>(dx) * (static_cast<size_t>(y) + static_cast<size_t>(dy) * z);
    }

    bool operator==(const Volume& o) const {
        return dx == o.dx && dy == o.dy && dz == o.dz && channels == o.channels && mask == o.mask &&
               case_id == o.case_id;
    }
};

namespace detail {

// Draw order per tumor: center x,y,z (integers), then radii x,y,z.
inline void mark_tumors(Volume& v, const SynthSpec& spec, SplitMix64& rng) {
    const int lo = spec.tumor_count_min, hi = spec.tumor_count_max;
    const int count = lo + static_cast<int>(hi > lo ? rng.below(static_cast<uint64_t>(hi - lo + 1)) : 0);
    for (int t = 0; t < count; ++t) {
        int center[3];
        double radius[3];
        const int dims[3] = {v.dx, v.dy, v.dz};
        // Radii are drawn after the center, so the center range must admit
        // the largest radius; using radius_max keeps every ellipsoid inside.
        const int margin = static_cast<int>(std::ceil(spec.tumor_radius_max));
        for (int a = 0; a < 3; ++a) {
            const int span = dims[a] - 2 * margin;
            center[a] = margin + static_cast<int>(span > 0 ? rng.below(static_cast<uint64_t>(span)) : 0);
        }
        for (int a = 0; a < 3; ++a) radius[a] = rng.uniform(spec.tumor_radius_min, spec.tumor_radius_max);

        const int x0 = std::max(0, center[0] - margin), x1 = std::min(v.dx - 1, center[0] + margin);
        const int y0 = std::max(0, center[1] - margin), y1 = std::min(v.dy - 1, center[1] + margin);
        const int z0 = std::max(0, center[2] - margin), z1 = std::min(v.dz - 1, center[2] + margin);
        for (int z = z0; z <= z1; ++z)
            for (int y = y0; y <= y1; ++y)
                for (int x = x0; x <= x1; ++x) {
                    const double ex = (x - center[0]) / radius[0];
                    const double ey = (y - center[1]) / radius[1];
                    const double ez = (z - center[2]) / radius[2];
                    if (ex * ex + ey * ey + ez * ez <= 1.0) v.mask[v.index(x, y, z)] = 1;
                }
    }
}

}  // namespace detail

// Generates volume `index` of the dataset. The per-volume stream seed is
// spec.seed XOR index, so volumes can be produced in any order (or in
// parallel) with identical results. Lane 0 of that seed drives tumor
// geometry; lane 1+c drives channel c's noise, so changing one channel's
// noise_sd never perturbs the others.
inline Volume synth_volume(const SynthSpec& spec, int index) {
    spec.validate();
    require(index >= 0 && index < spec.n_volumes, "synth: volume index out of range");
    const uint64_t vseed = spec.seed ^ static_cast<uint64_t>(index);

    Volume v;
    v.dx = spec.dx;
    v.dy = spec.dy;
    v.dz = spec.dz;
    v.mask.assign(v.voxel_count(), 0);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "case_%04d", index);
    v.case_id = buf;

    SplitMix64 geom(substream(vseed, 0));
    detail::mark_tumors(v, spec, geom);

    const size_t n = v.voxel_count();
    for (int c = 0; c < kNumModalities; ++c) {
        const ModalityContrast& mc = spec.contrast[c];
        auto& grid = v.channels[c];
        grid.resize(n);
        SplitMix64 noise(substream(vseed, 1 + static_cast<uint64_t>(c)));
        for (size_t i = 0; i < n; ++i) {
            double val = mc.tissue_mean + (v.mask[i] ? mc.tumor_delta : 0.0);
            if (mc.noise_sd > 0.0) val += mc.noise_sd * noise.gaussian();
            grid[i] = static_cast<float>(std::clamp(val, 0.0, 1.0));
        }
    }
    return v;
}

inline std::vector<Volume> synth_dataset(const SynthSpec& spec) {
    spec.validate();
    std::vector<Volume> out;
    out.reserve(static_cast<size_t>(spec.n_volumes));
    for (int i = 0; i < spec.n_volumes; ++i) out.push_back(synth_volume(spec, i));
    return out;
}

// Volume file format "MMV1", little-endian:
//   magic "MMV1" | u32 version=1 | u32 dx,dy,dz | u32 id_len + id bytes
//   | 4 channels of f32, x-fastest, channel-major (T1,T1ce,T2,FLAIR)
//   | mask as u8, x-fastest.
inline constexpr uint32_t kVolumeFormatVersion = 1;

inline void write_volume(const Volume& v, const std::filesystem::path& path) {
    require(v.dx > 0 && v.dy > 0 && v.dz > 0, "write_volume: empty volume");
    const size_t n = v.voxel_count();
    for (const auto& ch : v.channels) require(ch.size() == n, "write_volume: channel/dims mismatch");
    require(v.mask.size() == n, "write_volume: mask/dims mismatch");

    BinWriter w;
    w.magic("MMV1");
    w.u32(kVolumeFormatVersion);
    w.u32(static_cast<uint32_t>(v.dx));
    w.u32(static_cast<uint32_t>(v.dy));
    w.u32(static_cast<uint32_t>(v.dz));
    w.str(v.case_id);
    for (const auto& ch : v.channels) w.array(ch);
    w.array(v.mask);
    w.save(path);
}

inline Volume read_volume(const std::filesystem::path& path) {
    BinReader r(path);
    r.magic("MMV1");
    const uint32_t version = r.u32();
    if (version != kVolumeFormatVersion) throw FormatError("unsupported MMV1 version");
    Volume v;
    v.dx = static_cast<int>(r.u32());
    v.dy = static_cast<int>(r.u32());
    v.dz = static_cast<int>(r.u32());
    if (v.dx <= 0 || v.dy <= 0 || v.dz <= 0) throw FormatError("bad dims in MMV1 header");
    v.case_id = r.str();
    const size_t n = v.voxel_count();
    for (auto& ch : v.channels) ch = r.array<float>(n);
    v.mask = r.array<uint8_t>(n);
    r.expect_eof();
    return v;
}

}  // namespace fedvox
