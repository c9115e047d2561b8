// Copyright (c) 2026, the fedvox authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <stdexcept>
#include <string>

static_assert(std::endian::native == std::endian::little,
              "fedvox file formats are little-endian and the readers/writers assume a little-endian host");

namespace fedvox {

// Invalid arguments, specs, or configuration.
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed or truncated file contents.
struct FormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Filesystem-level failures.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw ValidationError(msg);
}

// FNV-1a 64-bit. Used for manifests and artifact fingerprints, not security.
inline uint64_t fnv1a64(const void* data, size_t n, uint64_t h = 1469598103934665603ull) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 1099511628211ull;
    }
    return h;
}

inline uint64_t fnv1a64(const std::string& s) { return fnv1a64(s.data(), s.size()); }

}  // namespace fedvox
