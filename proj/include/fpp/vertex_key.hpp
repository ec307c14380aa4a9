#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <utility>

#include "fpp/errors.hpp"
#include "fpp/hash.hpp"

namespace fpp {

// Canonical byte encoding of a vertex. Byte-equal iff same vertex; the
// lexicographic byte order is the tie-breaking order everywhere.
class VertexKey {
public:
    VertexKey() = default;
    explicit VertexKey(std::string bytes) : bytes_(std::move(bytes)) {}

    const std::string& bytes() const noexcept { return bytes_; }
    std::size_t size() const noexcept { return bytes_.size(); }
    bool empty() const noexcept { return bytes_.empty(); }

    friend bool operator==(const VertexKey&, const VertexKey&) = default;
    friend std::strong_ordering operator<=>(const VertexKey& a, const VertexKey& b) noexcept {
        const int c = a.bytes_.compare(b.bytes_);
        return c < 0 ? std::strong_ordering::less
                     : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
    }

private:
    std::string bytes_;
};

// Unordered edge: (min, max) of the endpoints plus a multiplicity index that
// is nonzero only for parallel edges of a multigraph.
struct EdgeKey {
    VertexKey lo;
    VertexKey hi;
    std::uint32_t multiplicity = 0;

    friend bool operator==(const EdgeKey&, const EdgeKey&) = default;
    friend auto operator<=>(const EdgeKey&, const EdgeKey&) = default;
};

inline EdgeKey make_edge_key(const VertexKey& u, const VertexKey& v, std::uint32_t multiplicity = 0) {
    if (v < u) return EdgeKey{v, u, multiplicity};
    return EdgeKey{u, v, multiplicity};
}

// Byte string the weight field hashes: length-prefixed lo, hi, multiplicity.
inline std::string edge_bytes(const EdgeKey& e) {
    std::string out;
    out.reserve(e.lo.size() + e.hi.size() + 8);
    const auto put32 = [&out](std::uint32_t x) {
        for (int s = 24; s >= 0; s -= 8) out.push_back(static_cast<char>((x >> s) & 0xff));
    };
    put32(static_cast<std::uint32_t>(e.lo.size()));
    out += e.lo.bytes();
    out += e.hi.bytes();
    put32(e.multiplicity);
    return out;
}

inline std::uint64_t edge_digest(const EdgeKey& e) { return hash_bytes(edge_bytes(e)); }

// Big-endian writer; signed integers are offset so that byte order matches
// numeric order.
class KeyWriter {
public:
    KeyWriter& u32(std::uint32_t x) {
        for (int s = 24; s >= 0; s -= 8) bytes_.push_back(static_cast<char>((x >> s) & 0xff));
        return *this;
    }
    KeyWriter& u64(std::uint64_t x) {
        for (int s = 56; s >= 0; s -= 8) bytes_.push_back(static_cast<char>((x >> s) & 0xff));
        return *this;
    }
    KeyWriter& i64(std::int64_t x) { return u64(static_cast<std::uint64_t>(x) ^ (1ULL << 63)); }
    KeyWriter& raw(std::string_view s) {
        bytes_.append(s);
        return *this;
    }

    VertexKey finish() { return VertexKey(std::move(bytes_)); }

private:
    std::string bytes_;
};

class KeyReader {
public:
    KeyReader(const VertexKey& key, const char* family) : data_(key.bytes()), family_(family) {}

    std::uint32_t u32() {
        need(4);
        std::uint32_t x = 0;
        for (int i = 0; i < 4; ++i) x = (x << 8) | static_cast<unsigned char>(data_[pos_++]);
        return x;
    }
    std::uint64_t u64() {
        need(8);
        std::uint64_t x = 0;
        for (int i = 0; i < 8; ++i) x = (x << 8) | static_cast<unsigned char>(data_[pos_++]);
        return x;
    }
    std::int64_t i64() { return static_cast<std::int64_t>(u64() ^ (1ULL << 63)); }
    std::string_view raw(std::size_t n) {
        need(n);
        auto out = data_.substr(pos_, n);
        pos_ += n;
        return out;
    }
    std::string_view rest() {
        auto out = data_.substr(pos_);
        pos_ = data_.size();
        return out;
    }

    void expect_end() const {
        if (pos_ != data_.size()) fail("trailing bytes");
    }
    [[noreturn]] void fail(const std::string& what) const {
        throw decode_error(std::string(family_) + ": malformed vertex key (" + what + ")");
    }

private:
    void need(std::size_t n) const {
        if (data_.size() - pos_ < n) fail("truncated");
    }

    std::string_view data_;
    std::size_t pos_ = 0;
    const char* family_;
};

}  // namespace fpp

template <>
struct std::hash<fpp::VertexKey> {
    std::size_t operator()(const fpp::VertexKey& k) const noexcept {
        return static_cast<std::size_t>(fpp::hash_bytes(k.bytes()));
    }
};
