#pragma once

#include "forms/rational.hpp"

#include <bit>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace forms {

// A simplex is a set of vertex labels packed into a bitmask (bit v = vertex v
// present, labels 0..63). 0 is the empty simplex, a genuine member of every
// complex here, of dimension -1.
using Simplex = std::uint64_t;

inline constexpr Simplex kEmptySimplex = 0;

inline int vertex_count(Simplex s) { return std::popcount(s); }

// dim(empty) = -1; doubles as the form degree of the basis form on s
inline int sdim(Simplex s) { return std::popcount(s) - 1; }

inline bool has_vertex(Simplex s, int v) { return (s >> v) & 1u; }

inline Simplex simplex_of(std::initializer_list<int> vs) {
    Simplex s = 0;
    for (int v : vs) {
        if (v < 0 || v > 63) throw std::domain_error("vertex label out of range 0..63");
        s |= Simplex(1) << v;
    }
    return s;
}

inline std::vector<int> vertices_of(Simplex s) {
    std::vector<int> out;
    for (Simplex m = s; m; m &= m - 1) out.push_back(std::countr_zero(m));
    return out;
}

inline Simplex mask_le(int x) {  // bits 0..x
    return (x >= 63) ? ~Simplex(0) : ((Simplex(1) << (x + 1)) - 1);
}

// number of vertices y of s with y <= x; x must be a vertex of s
inline int ord_embed(int x, Simplex s) {
    if (!has_vertex(s, x)) throw std::domain_error("ord_embed: vertex not in simplex");
    return std::popcount(s & mask_le(x));
}

// parity of the embedding sub -> sup: (-1)^{sum over x in sub of ord_embed(x, sup)}
inline int parity_beta(Simplex sub, Simplex sup) {
    if (sub & ~sup) throw std::domain_error("parity_beta: not a subsimplex");
    int acc = 0;
    for (Simplex m = sub; m; m &= m - 1)
        acc += std::popcount(sup & mask_le(std::countr_zero(m)));
    return sign_pow(acc);
}

// canonical order: by dimension, then lexicographic on the ascending vertex list
inline bool simplex_less(Simplex a, Simplex b) {
    int pa = std::popcount(a), pb = std::popcount(b);
    if (pa != pb) return pa < pb;
    while (a && b) {
        int x = std::countr_zero(a), y = std::countr_zero(b);
        if (x != y) return x < y;
        a &= a - 1;
        b &= b - 1;
    }
    return false;
}

inline std::string simplex_str(Simplex s) {
    if (!s) return "∅";
    std::string out = "{";
    bool first = true;
    for (int v : vertices_of(s)) {
        if (!first) out += ",";
        out += std::to_string(v);
        first = false;
    }
    return out + "}";
}

} // namespace forms
