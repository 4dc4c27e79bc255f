#pragma once

#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace rlam::io {

// Little-endian binary encoding, independent of host byte order, so model and
// checkpoint files are byte-stable across machines.
class BinaryWriter {
  public:
    explicit BinaryWriter(const std::string& path)
        : out_(path, std::ios::binary | std::ios::trunc) {
        if (!out_.good()) throw std::runtime_error("cannot open for write: " + path);
    }

    void u8(std::uint8_t v) { out_.put(static_cast<char>(v)); }

    void u32(std::uint32_t v) {
        char b[4];
        for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
        out_.write(b, 4);
    }

    void i32(std::int32_t v) { u32(static_cast<std::uint32_t>(v)); }

    void u64(std::uint64_t v) {
        char b[8];
        for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
        out_.write(b, 8);
    }

    void i64(std::int64_t v) { u64(static_cast<std::uint64_t>(v)); }

    void f64(double v) {
        std::uint64_t bits;
        std::memcpy(&bits, &v, 8);
        u64(bits);
    }

    void str(std::string_view s) {
        u32(static_cast<std::uint32_t>(s.size()));
        out_.write(s.data(), static_cast<std::streamsize>(s.size()));
    }

    void magic(std::string_view tag) {  // fixed 8 bytes, no length prefix
        if (tag.size() != 8) throw std::logic_error("magic must be 8 bytes");
        out_.write(tag.data(), 8);
    }

    void close() {
        out_.close();
        if (!out_.good()) throw std::runtime_error("write failed on close");
    }

  private:
    std::ofstream out_;
};

class BinaryReader {
  public:
    explicit BinaryReader(const std::string& path) : in_(path, std::ios::binary) {
        if (!in_.good()) throw std::runtime_error("cannot open for read: " + path);
    }

    std::uint8_t u8() {
        int c = in_.get();
        if (c == EOF) fail();
        return static_cast<std::uint8_t>(c);
    }

    std::uint32_t u32() {
        char b[4];
        read(b, 4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i)
            v |= static_cast<std::uint32_t>(static_cast<unsigned char>(b[i])) << (8 * i);
        return v;
    }

    std::int32_t i32() { return static_cast<std::int32_t>(u32()); }

    std::uint64_t u64() {
        char b[8];
        read(b, 8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i)
            v |= static_cast<std::uint64_t>(static_cast<unsigned char>(b[i])) << (8 * i);
        return v;
    }

    std::int64_t i64() { return static_cast<std::int64_t>(u64()); }

    double f64() {
        std::uint64_t bits = u64();
        double v;
        std::memcpy(&v, &bits, 8);
        return v;
    }

    std::string str() {
        std::uint32_t n = u32();
        std::string s(n, '\0');
        if (n > 0) read(s.data(), n);
        return s;
    }

    void expect_magic(std::string_view tag) {
        char b[8];
        read(b, 8);
        if (std::string_view(b, 8) != tag)
            throw std::runtime_error("bad file magic, expected " + std::string(tag));
    }

  private:
    void read(char* dst, std::size_t n) {
        in_.read(dst, static_cast<std::streamsize>(n));
        if (in_.gcount() != static_cast<std::streamsize>(n)) fail();
    }

    [[noreturn]] void fail() { throw std::runtime_error("truncated or corrupt file"); }

    std::ifstream in_;
};

}  // namespace rlam::io
