// Copyright (c) 2026, the fedvox authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "fedvox/common.hpp"

namespace fedvox {

// Little-endian binary writer over a whole file. Collects into a buffer so
// a failed write never leaves a partial artifact behind.
class BinWriter {
public:
    void magic(const char tag[4]) { buf_.insert(buf_.end(), tag, tag + 4); }

    template <typename T>
    void pod(T v) {
        static_assert(std::is_trivially_copyable_v<T>);
        const auto* p = reinterpret_cast<const char*>(&v);
        buf_.insert(buf_.end(), p, p + sizeof(T));
    }

    void u32(uint32_t v) { pod(v); }
    void u64(uint64_t v) { pod(v); }
    void f32(float v) { pod(v); }

    void str(const std::string& s) {
        u32(static_cast<uint32_t>(s.size()));
        buf_.insert(buf_.end(), s.begin(), s.end());
    }

    template <typename T>
    void array(const T* data, size_t n) {
        static_assert(std::is_trivially_copyable_v<T>);
        const auto* p = reinterpret_cast<const char*>(data);
        buf_.insert(buf_.end(), p, p + n * sizeof(T));
    }

    template <typename T>
    void array(const std::vector<T>& v) {
        array(v.data(), v.size());
    }

    size_t size() const { return buf_.size(); }

    void save(const std::filesystem::path& path) const {
        std::ofstream f(path, std::ios::binary | std::ios::trunc);
        if (!f) throw IoError("cannot open for writing: " + path.string());
        f.write(buf_.data(), static_cast<std::streamsize>(buf_.size()));
        if (!f) throw IoError("write failed: " + path.string());
    }

    const std::vector<char>& bytes() const { return buf_; }

private:
    std::vector<char> buf_;
};

// Bounds-checked reader over a fully loaded file. Throws FormatError on any
// truncation so readers never return partially filled objects.
class BinReader {
public:
    explicit BinReader(const std::filesystem::path& path) {
        std::ifstream f(path, std::ios::binary | std::ios::ate);
        if (!f) throw IoError("cannot open for reading: " + path.string());
        const auto size = f.tellg();
        f.seekg(0);
        buf_.resize(static_cast<size_t>(size));
        f.read(buf_.data(), size);
        if (!f) throw IoError("read failed: " + path.string());
    }

    explicit BinReader(std::vector<char> bytes) : buf_(std::move(bytes)) {}

    void magic(const char tag[4]) {
        if (remaining() < 4 || std::memcmp(buf_.data() + pos_, tag, 4) != 0)
            throw FormatError(std::string("bad magic, expected \"") + std::string(tag, 4) + "\"");
        pos_ += 4;
    }

    template <typename T>
    T pod() {
        static_assert(std::is_trivially_copyable_v<T>);
        if (remaining() < sizeof(T)) throw FormatError("truncated payload");
        T v;
        std::memcpy(&v, buf_.data() + pos_, sizeof(T));
        pos_ += sizeof(T);
        return v;
    }

    uint32_t u32() { return pod<uint32_t>(); }
    uint64_t u64() { return pod<uint64_t>(); }
    float f32() { return pod<float>(); }

    std::string str(size_t max_len = 1u << 20) {
        const uint32_t n = u32();
        if (n > max_len || remaining() < n) throw FormatError("truncated string");
        std::string s(buf_.data() + pos_, n);
        pos_ += n;
        return s;
    }

    template <typename T>
    void array(T* out, size_t n) {
        static_assert(std::is_trivially_copyable_v<T>);
        if (remaining() < n * sizeof(T)) throw FormatError("truncated array");
        std::memcpy(out, buf_.data() + pos_, n * sizeof(T));
        pos_ += n * sizeof(T);
    }

    template <typename T>
    std::vector<T> array(size_t n) {
        std::vector<T> v(n);
        if (n) array(v.data(), n);
        return v;
    }

    size_t remaining() const { return buf_.size() - pos_; }

    void expect_eof() const {
        if (pos_ != buf_.size()) throw FormatError("trailing bytes after payload");
    }

private:
    std::vector<char> buf_;
    size_t pos_ = 0;
};

}  // namespace fedvox
