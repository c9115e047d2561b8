// Copyright (c) 2026, the fedvox authors
// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <set>

#include "fedvox/rng.hpp"
#include "fedvox/slic.hpp"

using namespace fedvox;

namespace {

// Independent flood-fill audit: every label's voxel set must form exactly
// one 6-connected component, and every voxel must carry a valid label.
bool connectivity_audit(const Labeling& l) {
    const size_t n = l.voxel_count();
    std::vector<char> seen(n, 0);
    std::set<uint32_t> done;
    std::vector<size_t> stack;
    for (size_t start = 0; start < n; ++start) {
        if (seen[start]) continue;
        const uint32_t lab = l.label_of[start];
        if (lab >= l.n_labels) return false;
        if (done.count(lab)) return false;  // second component of same label
        done.insert(lab);
        stack.push_back(start);
        seen[start] = 1;
        while (!stack.empty()) {
            const size_t v = stack.back();
            stack.pop_back();
            detail::for_each_6neighbor(v, l.dx, l.dy, l.dz, [&](size_t u) {
                if (!seen[u] && l.label_of[u] == lab) {
                    seen[u] = 1;
                    stack.push_back(u);
                }
            });
        }
    }
    return done.size() == l.n_labels;
}

std::vector<size_t> label_sizes(const Labeling& l) {
    std::vector<size_t> sz(l.n_labels, 0);
    for (uint32_t lab : l.label_of) {
        REQUIRE(lab < l.n_labels);
        ++sz[lab];
    }
    return sz;
}

}  // namespace

TEST_CASE("constant 16^3 volume with K=8 gives eight balanced blocks") {
    const int d = 16;
    std::vector<float> grid(d * d * d, 0.5f);
    Labeling l = enforce_connectivity(slic3d(grid, d, d, d, 8, 10.0, 10));
    REQUIRE(l.n_labels == 8);
    auto sz = label_sizes(l);
    for (size_t s : sz) {
        REQUIRE(s >= 461);  // 512 - 10%
        REQUIRE(s <= 563);  // 512 + 10%
    }
    REQUIRE(connectivity_audit(l));
}

TEST_CASE("K equal to voxel count makes every voxel its own cluster") {
    const int d = 4;  // small grid keeps the full-K case cheap
    std::vector<float> grid(d * d * d, 0.5f);  // flat: no gradient perturbation
    Labeling l = slic3d(grid, d, d, d, d * d * d, 10.0, 2);
    REQUIRE(l.n_labels == static_cast<uint32_t>(d * d * d));
    std::set<uint32_t> distinct(l.label_of.begin(), l.label_of.end());
    REQUIRE(distinct.size() == l.voxel_count());
}

TEST_CASE("intensity half-spaces are respected up to one voxel layer") {
    const int d = 16;
    std::vector<float> grid(d * d * d);
    for (int z = 0; z < d; ++z)
        for (int y = 0; y < d; ++y)
            for (int x = 0; x < d; ++x) grid[x + d * (y + d * z)] = x < d / 2 ? 0.2f : 0.8f;
    Labeling l = enforce_connectivity(slic3d(grid, d, d, d, 8, 0.5, 10));

    // Boundary-recall oracle: count voxels whose supervoxel straddles the
    // half-space boundary by more than one voxel layer. A supervoxel that
    // contains any voxel with x <= 6 and any with x >= 9 straddles.
    std::vector<int> min_x(l.n_labels, d), max_x(l.n_labels, -1);
    for (int z = 0; z < d; ++z)
        for (int y = 0; y < d; ++y)
            for (int x = 0; x < d; ++x) {
                const uint32_t lab = l.label_of[x + d * (y + d * z)];
                min_x[lab] = std::min(min_x[lab], x);
                max_x[lab] = std::max(max_x[lab], x);
            }
    for (uint32_t lab = 0; lab < l.n_labels; ++lab) {
        const bool straddles_beyond_one_layer = min_x[lab] <= d / 2 - 2 && max_x[lab] >= d / 2 + 1;
        REQUIRE_FALSE(straddles_beyond_one_layer);
    }
}

TEST_CASE("slic is deterministic") {
    const int d = 12;
    std::vector<float> grid;
    SplitMix64 rng(42);
    for (int i = 0; i < d * d * d; ++i) grid.push_back(static_cast<float>(rng.uniform()));
    Labeling a = slic3d(grid, d, d, d, 8, 5.0, 5);
    Labeling b = slic3d(grid, d, d, d, 8, 5.0, 5);
    REQUIRE(a.label_of == b.label_of);
}

TEST_CASE("slic validates its inputs") {
    std::vector<float> grid(16 * 16 * 16, 0.5f);
    REQUIRE_THROWS_AS(slic3d(grid, 16, 16, 16, 4, 10.0, 5), ValidationError);   // K < 8
    REQUIRE_THROWS_AS(slic3d(grid, 16, 16, 16, 5000, 10.0, 5), ValidationError);  // K > voxels
}

TEST_CASE("every voxel is assigned") {
    const int d = 10;
    std::vector<float> grid;
    SplitMix64 rng(3);
    for (int i = 0; i < d * d * d; ++i) grid.push_back(static_cast<float>(rng.uniform()));
    Labeling l = slic3d(grid, d, d, d, 27, 2.0, 8);
    for (uint32_t lab : l.label_of) REQUIRE(lab < l.n_labels);
    // partition property: sizes sum to the voxel count
    auto sz = label_sizes(l);
    size_t total = 0;
    for (size_t s : sz) total += s;
    REQUIRE(total == l.voxel_count());
}

TEST_CASE("already-connected labeling is a connectivity fixpoint") {
    const int d = 8;
    Labeling l;
    l.dx = l.dy = l.dz = d;
    l.label_of.resize(d * d * d);
    for (int z = 0; z < d; ++z)
        for (int y = 0; y < d; ++y)
            for (int x = 0; x < d; ++x) l.label_of[x + d * (y + d * z)] = (x < d / 2) ? 0 : 1;
    l.n_labels = 2;
    Labeling out = enforce_connectivity(l);
    REQUIRE(out.n_labels == 2);
    REQUIRE(out.label_of == l.label_of);  // ids already in first-occurrence order
}

TEST_CASE("a stray voxel is absorbed by its surrounding label") {
    const int d = 8;
    Labeling l;
    l.dx = l.dy = l.dz = d;
    l.label_of.assign(d * d * d, 0);
    // label 1 owns the x >= 4 half; a single label-1 voxel sits inside label 0
    for (int z = 0; z < d; ++z)
        for (int y = 0; y < d; ++y)
            for (int x = 0; x < d; ++x) l.label_of[x + d * (y + d * z)] = (x >= d / 2) ? 1 : 0;
    l.label_of[l.index(1, 1, 1)] = 1;
    l.n_labels = 2;
    Labeling out = enforce_connectivity(l);
    REQUIRE(out.n_labels == 2);
    REQUIRE(out.label_of[out.index(1, 1, 1)] == out.label_of[out.index(0, 0, 0)]);
    REQUIRE(connectivity_audit(out));
}

TEST_CASE("random labelings pass the flood-fill audit after enforcement") {
    const int d = 8;
    SplitMix64 rng(99);
    for (int rep = 0; rep < 5; ++rep) {
        Labeling l;
        l.dx = l.dy = l.dz = d;
        l.n_labels = 5;
        l.label_of.resize(d * d * d);
        for (auto& lab : l.label_of) lab = static_cast<uint32_t>(rng.below(5));
        Labeling out = enforce_connectivity(l);
        REQUIRE(connectivity_audit(out));
        // still a partition
        auto sz = label_sizes(out);
        size_t total = 0;
        for (size_t s : sz) total += s;
        REQUIRE(total == out.voxel_count());
    }
}
