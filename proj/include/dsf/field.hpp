#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <ostream>
#include <stdexcept>
#include <string>

namespace dsf {

inline constexpr int kMaxDim = 12;

/// Lattice vertex. The last coordinate (index dim-1) is the time/level axis.
struct Vertex {
    std::array<std::int32_t, kMaxDim> c{};
    std::uint8_t dim = 0;

    Vertex() = default;
    Vertex(std::initializer_list<std::int32_t> xs) {
        if (xs.size() < 2 || xs.size() > kMaxDim)
            throw std::invalid_argument("Vertex: dimension must be in [2, " +
                                        std::to_string(kMaxDim) + "]");
        dim = static_cast<std::uint8_t>(xs.size());
        int i = 0;
        for (auto x : xs) c[i++] = x;
    }

    int dims() const { return dim; }
    std::int32_t level() const { return c[dim - 1]; }

    std::int32_t operator[](int i) const { return c[i]; }
    std::int32_t& operator[](int i) { return c[i]; }

    bool operator==(const Vertex& o) const {
        if (dim != o.dim) return false;
        for (int i = 0; i < dim; ++i)
            if (c[i] != o.c[i]) return false;
        return true;
    }
    bool operator!=(const Vertex& o) const { return !(*this == o); }

    std::string to_string() const {
        std::string s = "(";
        for (int i = 0; i < dim; ++i) {
            if (i) s += ",";
            s += std::to_string(c[i]);
        }
        return s + ")";
    }
};

inline std::ostream& operator<<(std::ostream& os, const Vertex& v) {
    return os << v.to_string();
}

inline bool lex_less(const Vertex& a, const Vertex& b) {
    for (int i = 0; i < a.dim; ++i) {
        if (a.c[i] != b.c[i]) return a.c[i] < b.c[i];
    }
    return false;
}

inline std::int64_t l1_distance(const Vertex& a, const Vertex& b) {
    std::int64_t s = 0;
    for (int i = 0; i < a.dim; ++i) {
        std::int64_t d = std::int64_t(a.c[i]) - b.c[i];
        s += d < 0 ? -d : d;
    }
    return s;
}

/// Orders vertices by level first, then lexicographically. Used by history
/// sets so that pruning below a level is a prefix erase.
struct LevelLexLess {
    bool operator()(const Vertex& a, const Vertex& b) const {
        if (a.level() != b.level()) return a.level() < b.level();
        return lex_less(a, b);
    }
};

/// Environment parameters: dimension, openness probability, seed.
struct FieldParams {
    int d = 2;
    double p = 0.5;
    std::uint64_t seed = 1;

    FieldParams() = default;
    FieldParams(int d_, double p_, std::uint64_t seed_) : d(d_), p(p_), seed(seed_) {
        if (d < 2 || d > kMaxDim)
            throw std::invalid_argument("FieldParams: d must be in [2, " +
                                        std::to_string(kMaxDim) + "]");
        if (!(p > 0.0 && p < 1.0))
            throw std::invalid_argument("FieldParams: p must lie in (0,1)");
    }
};

namespace detail {

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

// splitmix64 finalizer
inline std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ull;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBull;
    z ^= z >> 31;
    return z;
}

}  // namespace detail

/// Full 64-bit word attached to a vertex. The mixing chain is splitmix64
/// applied per coordinate; stable across platforms and runs for a fixed seed.
inline std::uint64_t uniform_bits(const FieldParams& params, const Vertex& v) {
    if (v.dim != params.d)
        throw std::invalid_argument("uniform_bits: vertex dimension " +
                                    std::to_string(v.dim) + " != field dimension " +
                                    std::to_string(params.d));
    std::uint64_t h = detail::mix64(params.seed + detail::kGolden);
    for (int i = 0; i < v.dim; ++i) {
        std::uint64_t x = static_cast<std::uint64_t>(static_cast<std::int64_t>(v.c[i]));
        h = detail::mix64(h ^ (x + detail::kGolden * static_cast<std::uint64_t>(i + 2)));
    }
    return h;
}

/// Maps the top 53 bits of a word to [0,1).
inline double to_unit(std::uint64_t bits) { return double(bits >> 11) * 0x1.0p-53; }

/// U_v: the uniform value of a vertex. Pure in (seed, v).
inline double uniform_at(const FieldParams& params, const Vertex& v) {
    return to_unit(uniform_bits(params, v));
}

/// A vertex is open iff its uniform value is strictly below p.
inline bool is_open(const FieldParams& params, const Vertex& v) {
    return uniform_at(params, v) < params.p;
}

/// Derives an independent sub-seed; used for replica sharding.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag,
                                 std::uint64_t index = 0) {
    return detail::mix64(detail::mix64(seed ^ (detail::kGolden * (tag + 1))) + index);
}

/// Auxiliary uniform stream, disjoint from the vertex key domain. Draws are
/// indexed by (stream tag, i, j) and never touch vertex words.
inline double aux_uniform(std::uint64_t seed, std::uint64_t tag, std::uint64_t i,
                          std::uint64_t j) {
    std::uint64_t h = detail::mix64(seed ^ 0xA3EC4F1D27B5C9E1ull);
    h = detail::mix64(h ^ (tag + detail::kGolden));
    h = detail::mix64(h + i);
    h = detail::mix64(h ^ (j + detail::kGolden));
    return to_unit(h);
}

}  // namespace dsf
