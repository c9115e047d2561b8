// Copyright (c) 2026, the fedvox authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <vector>

#include "fedvox/common.hpp"

namespace fedvox {

inline constexpr uint32_t kPrunedLabel = 0xffffffffu;

// A per-voxel supervoxel assignment over a (dx,dy,dz) grid, x-fastest.
struct Labeling {
    int dx = 0, dy = 0, dz = 0;
    std::vector<uint32_t> label_of;
    uint32_t n_labels = 0;

    size_t voxel_count() const { return static_cast<size_t>(dx) * dy * dz; }
    size_t index(int x, int y, int z) const {
        return static_cast<size_t>(x) + static_cast<size_t>(dx) * (static_cast<size_t>(y) + static_cast<size_t>(dy) * z);
    }
};

namespace detail {

struct SlicCenter {
    double x, y, z;    // position, voxel coordinates
    double intensity;  // mean intensity of members
};

// Squared gradient magnitude from clamped central differences.
inline double gradient_mag2(const std::vector<float>& g, int dx, int dy, int dz, int x, int y, int z) {
    auto at = [&](int xx, int yy, int zz) {
        xx = std::clamp(xx, 0, dx - 1);
        yy = std::clamp(yy, 0, dy - 1);
        zz = std::clamp(zz, 0, dz - 1);
        return static_cast<double>(g[static_cast<size_t>(xx) + static_cast<size_t>(dx) * (yy + static_cast<size_t>(dy) * zz)]);
    };
    const double gx = at(x + 1, y, z) - at(x - 1, y, z);
    const double gy = at(x, y + 1, z) - at(x, y - 1, z);
    const double gz = at(x, y, z + 1) - at(x, y, z - 1);
    return gx * gx + gy * gy + gz * gz;
}

template <typename Fn>
inline void for_each_6neighbor(size_t vi, int dx, int dy, int dz, Fn&& fn) {
    const int x = static_cast<int>(vi % dx);
    const int y = static_cast<int>((vi / dx) % dy);
    const int z = static_cast<int>(vi / (static_cast<size_t>(dx) * dy));
    if (x > 0) fn(vi - 1);
    if (x < dx - 1) fn(vi + 1);
    if (y > 0) fn(vi - static_cast<size_t>(dx));
    if (y < dy - 1) fn(vi + static_cast<size_t>(dx));
    if (z > 0) fn(vi - static_cast<size_t>(dx) * dy);
    if (z < dz - 1) fn(vi + static_cast<size_t>(dx) * dy);
}

}  // namespace detail

// 3D SLIC: grid-seeded, locality-windowed k-means on joint (intensity,
// position) space. Centers start on a regular grid with spacing
// S = (n_voxels/K)^(1/3), are perturbed to the lowest-gradient voxel in
// their 3x3x3 neighborhood, and each assignment pass is restricted to a
// +-S window per center with
//   D^2 = d_int^2 + (m/S)^2 * d_sp^2.
// Ties go to the lower cluster id. Deterministic for fixed inputs; the
// seed parameter is accepted for interface stability but unused.
inline Labeling slic3d(const std::vector<float>& channel, int dx, int dy, int dz, int K, double m, int iters,
                       uint64_t /*seed*/ = 0) {
    const size_t n_voxels = static_cast<size_t>(dx) * dy * dz;
    require(dx > 0 && dy > 0 && dz > 0, "slic3d: dims must be positive");
    require(channel.size() == n_voxels, "slic3d: channel size does not match dims");
    require(K >= 8, "slic3d: K must be >= 8");
    require(static_cast<size_t>(K) <= n_voxels, "slic3d: K exceeds voxel count");
    require(iters >= 1, "slic3d: iters must be >= 1");

    const double S = std::cbrt(static_cast<double>(n_voxels) / K);

    // Regular grid of centers, roughly K of them.
    const int nx = std::max(1, static_cast<int>(std::lround(dx / S)));
    const int ny = std::max(1, static_cast<int>(std::lround(dy / S)));
    const int nz = std::max(1, static_cast<int>(std::lround(dz / S)));
    std::vector<detail::SlicCenter> centers;
    centers.reserve(static_cast<size_t>(nx) * ny * nz);
    for (int k = 0; k < nz; ++k)
        for (int j = 0; j < ny; ++j)
            for (int i = 0; i < nx; ++i) {
                // Cell-midpoint placement; the -0.5 keeps opposing centers
                // symmetric about cell boundaries so flat regions split
                // evenly instead of tie-breaking a whole voxel layer one way.
                const int cx = static_cast<int>(std::floor((i + 0.5) * dx / nx - 0.5));
                const int cy = static_cast<int>(std::floor((j + 0.5) * dy / ny - 0.5));
                const int cz = static_cast<int>(std::floor((k + 0.5) * dz / nz - 0.5));
                // Perturb to the lowest-gradient voxel in the 3x3x3 box.
                // The unperturbed center is visited first so a flat gradient
                // keeps it in place.
                double best = std::numeric_limits<double>::infinity();
                int bx = cx, by = cy, bz = cz;
                for (int oz = 0; oz <= 2; ++oz)
                    for (int oy = 0; oy <= 2; ++oy)
                        for (int ox = 0; ox <= 2; ++ox) {
                            const int px = cx + ((ox + 1) % 3) - 1;
                            const int py = cy + ((oy + 1) % 3) - 1;
                            const int pz = cz + ((oz + 1) % 3) - 1;
                            if (px < 0 || px >= dx || py < 0 || py >= dy || pz < 0 || pz >= dz) continue;
                            const double g = detail::gradient_mag2(channel, dx, dy, dz, px, py, pz);
                            if (g < best) {
                                best = g;
                                bx = px;
                                by = py;
                                bz = pz;
                            }
                        }
                const size_t vi = static_cast<size_t>(bx) + static_cast<size_t>(dx) * (by + static_cast<size_t>(dy) * bz);
                centers.push_back({static_cast<double>(bx), static_cast<double>(by), static_cast<double>(bz),
                                   static_cast<double>(channel[vi])});
            }

    const double spatial_w = (m / S) * (m / S);
    std::vector<uint32_t> label(n_voxels);
    std::vector<double> dist(n_voxels);
    const int win = std::max(1, static_cast<int>(std::ceil(S)));

    for (int it = 0; it < iters; ++it) {
        std::fill(dist.begin(), dist.end(), std::numeric_limits<double>::infinity());
        std::fill(label.begin(), label.end(), kPrunedLabel);
        for (uint32_t c = 0; c < centers.size(); ++c) {
            const auto& ctr = centers[c];
            const int x0 = std::max(0, static_cast<int>(std::floor(ctr.x)) - win);
            const int x1 = std::min(dx - 1, static_cast<int>(std::floor(ctr.x)) + win);
            const int y0 = std::max(0, static_cast<int>(std::floor(ctr.y)) - win);
            const int y1 = std::min(dy - 1, static_cast<int>(std::floor(ctr.y)) + win);
            const int z0 = std::max(0, static_cast<int>(std::floor(ctr.z)) - win);
            const int z1 = std::min(dz - 1, static_cast<int>(std::floor(ctr.z)) + win);
            for (int z = z0; z <= z1; ++z)
                for (int y = y0; y <= y1; ++y) {
                    size_t vi = static_cast<size_t>(x0) + static_cast<size_t>(dx) * (y + static_cast<size_t>(dy) * z);
                    for (int x = x0; x <= x1; ++x, ++vi) {
                        const double di = channel[vi] - ctr.intensity;
                        const double sx = x - ctr.x, sy = y - ctr.y, sz = z - ctr.z;
                        const double d2 = di * di + spatial_w * (sx * sx + sy * sy + sz * sz);
                        if (d2 < dist[vi]) {
                            dist[vi] = d2;
                            label[vi] = c;
                        }
                    }
                }
        }
        // Voxels outside every window (possible after centers drift): take
        // the nearest center by the same metric, full scan.
        for (size_t vi = 0; vi < n_voxels; ++vi) {
            if (label[vi] != kPrunedLabel) continue;
            const int x = static_cast<int>(vi % dx);
            const int y = static_cast<int>((vi / dx) % dy);
            const int z = static_cast<int>(vi / (static_cast<size_t>(dx) * dy));
            double bd = std::numeric_limits<double>::infinity();
            uint32_t bc = 0;
            for (uint32_t c = 0; c < centers.size(); ++c) {
                const auto& ctr = centers[c];
                const double di = channel[vi] - ctr.intensity;
                const double sx = x - ctr.x, sy = y - ctr.y, sz = z - ctr.z;
                const double d2 = di * di + spatial_w * (sx * sx + sy * sy + sz * sz);
                if (d2 < bd) {
                    bd = d2;
                    bc = c;
                }
            }
            label[vi] = bc;
        }
        // Update pass: move each center to the mean of its members.
        std::vector<double> sx(centers.size(), 0), sy(centers.size(), 0), sz(centers.size(), 0), si(centers.size(), 0);
        std::vector<size_t> cnt(centers.size(), 0);
        size_t vi = 0;
        for (int z = 0; z < dz; ++z)
            for (int y = 0; y < dy; ++y)
                for (int x = 0; x < dx; ++x, ++vi) {
                    const uint32_t c = label[vi];
                    sx[c] += x;
                    sy[c] += y;
                    sz[c] += z;
                    si[c] += channel[vi];
                    ++cnt[c];
                }
        for (size_t c = 0; c < centers.size(); ++c) {
            if (cnt[c] == 0) continue;  // empty cluster keeps its previous center
            centers[c] = {sx[c] / cnt[c], sy[c] / cnt[c], sz[c] / cnt[c], si[c] / cnt[c]};
        }
    }

    Labeling out;
    out.dx = dx;
    out.dy = dy;
    out.dz = dz;
    out.label_of = std::move(label);
    out.n_labels = static_cast<uint32_t>(centers.size());
    return out;
}

// Makes every label's voxel set 6-connected. The largest component of each
// label keeps the label (ties: earliest first voxel); orphan components of
// at least S^3/4 voxels become fresh labels; smaller orphans are merged into
// the 6-adjacent component whose label currently covers the most voxels
// (ties: lower label id). Merging always unions adjacent components, so the
// result is connected by construction. Ids are compacted in order of first
// voxel occurrence.
inline Labeling enforce_connectivity(const Labeling& l) {
    const size_t n = l.voxel_count();
    require(n > 0 && l.label_of.size() == n, "enforce_connectivity: invalid labeling");
    require(l.n_labels > 0, "enforce_connectivity: no labels");
    const int dx = l.dx, dy = l.dy, dz = l.dz;

    const double S = std::cbrt(static_cast<double>(n) / l.n_labels);
    const size_t min_size = std::max<size_t>(1, static_cast<size_t>(S * S * S / 4.0));

    // Components per label, by flood fill in scan order.
    std::vector<int32_t> comp(n, -1);
    std::vector<size_t> comp_size, comp_first;
    std::vector<uint32_t> comp_label;
    std::vector<size_t> stack;
    for (size_t start = 0; start < n; ++start) {
        if (comp[start] >= 0) continue;
        const uint32_t lab = l.label_of[start];
        const int32_t id = static_cast<int32_t>(comp_size.size());
        comp_size.push_back(0);
        comp_first.push_back(start);
        comp_label.push_back(lab);
        comp[start] = id;
        stack.push_back(start);
        while (!stack.empty()) {
            const size_t v = stack.back();
            stack.pop_back();
            ++comp_size[id];
            detail::for_each_6neighbor(v, dx, dy, dz, [&](size_t u) {
                if (comp[u] < 0 && l.label_of[u] == lab) {
                    comp[u] = id;
                    stack.push_back(u);
                }
            });
        }
    }
    const size_t n_comps = comp_size.size();

    // Union-find over components. Only adjacent components are ever joined.
    std::vector<int32_t> parent(n_comps);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int32_t(int32_t)> find = [&](int32_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };
    std::vector<size_t> root_size = comp_size;

    // Resolved label per root: keepers keep theirs, big orphans go fresh.
    constexpr uint32_t kPending = kPrunedLabel;
    std::vector<int32_t> keeper(l.n_labels, -1);
    for (int32_t c = 0; c < static_cast<int32_t>(n_comps); ++c) {
        const int32_t cur = keeper[comp_label[c]];
        if (cur < 0 || comp_size[c] > comp_size[cur]) keeper[comp_label[c]] = c;
    }
    std::vector<uint32_t> root_label(n_comps, kPending);
    uint32_t next_fresh = l.n_labels;
    for (int32_t c = 0; c < static_cast<int32_t>(n_comps); ++c) {
        if (keeper[comp_label[c]] == c)
            root_label[c] = comp_label[c];
        else if (comp_size[c] >= min_size)
            root_label[c] = next_fresh++;
    }

    // Voxels per label for the "largest neighbor label" rule, updated as
    // merges land.
    std::vector<size_t> label_total(next_fresh, 0);
    for (size_t c = 0; c < n_comps; ++c)
        if (root_label[c] != kPending) label_total[root_label[c]] += comp_size[c];

    // Precompute members per component for boundary scans.
    std::vector<std::vector<size_t>> members(n_comps);
    for (size_t vi = 0; vi < n; ++vi) members[static_cast<size_t>(comp[vi])].push_back(vi);

    // Pending orphans resolve smallest-first; an orphan whose neighbors are
    // all still pending waits for the next sweep. The box grid is connected,
    // and at least one keeper exists, so every sweep resolves someone.
    std::vector<int32_t> pending;
    for (int32_t c = 0; c < static_cast<int32_t>(n_comps); ++c)
        if (root_label[c] == kPending) pending.push_back(c);
    std::sort(pending.begin(), pending.end(), [&](int32_t a, int32_t b) {
        return comp_size[a] != comp_size[b] ? comp_size[a] < comp_size[b] : comp_first[a] < comp_first[b];
    });
    while (!pending.empty()) {
        std::vector<int32_t> next_round;
        bool progressed = false;
        for (const int32_t c : pending) {
            if (root_label[find(c)] != kPending) continue;  // absorbed already
            // Scan this orphan's boundary for resolved neighbor roots.
            int32_t best_root = -1;
            uint32_t best_label = 0;
            size_t best_total = 0;
            for (const size_t vi : members[static_cast<size_t>(c)]) {
                detail::for_each_6neighbor(vi, dx, dy, dz, [&](size_t u) {
                    const int32_t r = find(comp[u]);
                    if (r == find(c)) return;
                    const uint32_t lab = root_label[r];
                    if (lab == kPending) return;
                    if (best_root < 0 || label_total[lab] > best_total ||
                        (label_total[lab] == best_total && lab < best_label)) {
                        best_root = r;
                        best_label = lab;
                        best_total = label_total[lab];
                    }
                });
            }
            if (best_root < 0) {
                next_round.push_back(c);
                continue;
            }
            const int32_t rc = find(c);
            parent[rc] = best_root;
            root_size[best_root] += root_size[rc];
            label_total[best_label] += root_size[rc];
            progressed = true;
        }
        if (!progressed && !next_round.empty())
            throw ValidationError("enforce_connectivity: unresolved orphan components");
        pending = std::move(next_round);
    }

    // Emit with ids compacted in first-occurrence order.
    std::vector<uint32_t> remap(next_fresh, kPrunedLabel);
    uint32_t compacted = 0;
    Labeling out;
    out.dx = dx;
    out.dy = dy;
    out.dz = dz;
    out.label_of.resize(n);
    for (size_t vi = 0; vi < n; ++vi) {
        const uint32_t lab = root_label[find(comp[vi])];
        if (remap[lab] == kPrunedLabel) remap[lab] = compacted++;
        out.label_of[vi] = remap[lab];
    }
    out.n_labels = compacted;
    return out;
}

}  // namespace fedvox
