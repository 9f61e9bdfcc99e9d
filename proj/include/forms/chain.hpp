#pragma once

#include "forms/complex.hpp"
#include "forms/matrix.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace forms {

// tensor grades actually used stay small; 8 leaves headroom
inline constexpr int kMaxGrade = 8;

// basis element of the grade-p tensor space: an ordered p-tuple of member
// simplexes (the empty simplex is a legal slot); p = 1 is a plain form
struct Tuple {
    std::uint8_t len = 0;
    std::array<Simplex, kMaxGrade> s{};

    Tuple() = default;
    Tuple(std::initializer_list<Simplex> slots) {
        for (Simplex x : slots) s[len++] = x;
    }
    static Tuple single(Simplex x) { return Tuple{x}; }

    int grade() const { return len; }
    Simplex operator[](int i) const { return s[i]; }
    Simplex& operator[](int i) { return s[i]; }

    bool operator==(const Tuple& o) const { return len == o.len && s == o.s; }

    Tuple sub(int from, int count) const {
        Tuple t;
        for (int i = 0; i < count; ++i) t.s[t.len++] = s[from + i];
        return t;
    }
    // replace slots [from, from+count) by the single slot x
    Tuple spliced(int from, int count, Simplex x) const {
        Tuple t;
        for (int i = 0; i < from; ++i) t.s[t.len++] = s[i];
        t.s[t.len++] = x;
        for (int i = from + count; i < len; ++i) t.s[t.len++] = s[i];
        return t;
    }
    Tuple replaced(int i, Simplex x) const {
        Tuple t = *this;
        t.s[i] = x;
        return t;
    }
};

// canonical order: grade, then slotwise canonical simplex order
struct TupleLess {
    bool operator()(const Tuple& a, const Tuple& b) const {
        if (a.len != b.len) return a.len < b.len;
        for (int i = 0; i < a.len; ++i)
            if (a.s[i] != b.s[i]) return simplex_less(a.s[i], b.s[i]);
        return false;
    }
};

struct TupleHash {
    std::size_t operator()(const Tuple& t) const {
        std::size_t h = t.len;
        for (int i = 0; i < t.len; ++i)
            h ^= std::hash<std::uint64_t>{}(t.s[i]) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        return h;
    }
};

// total form degree; each empty slot contributes -1
inline int tuple_degree(const Tuple& e) {
    int d = 0;
    for (int i = 0; i < e.len; ++i) d += sdim(e.s[i]);
    return d;
}

inline std::string tuple_str(const Tuple& e) {
    std::string out;
    for (int i = 0; i < e.len; ++i) {
        if (i) out += "⊗";
        out += simplex_str(e.s[i]);
    }
    return out;
}

inline bool has_empty_slot(const Tuple& e) {
    for (int i = 0; i < e.len; ++i)
        if (e.s[i] == 0) return true;
    return false;
}

// the degree signature of a tuple, e.g. "(0,1,1)"
inline std::string signature_str(const Tuple& e) {
    std::string out = "(";
    for (int i = 0; i < e.len; ++i) {
        if (i) out += ",";
        out += std::to_string(sdim(e.s[i]));
    }
    return out + ")";
}

// exact chain of fixed tensor grade; zero coefficients are never stored
struct Chain {
    int grade = 1;
    std::map<Tuple, Rat, TupleLess> terms;

    explicit Chain(int g = 1) : grade(g) {}

    bool zero() const { return terms.empty(); }

    void add(const Tuple& t, const Rat& c) {
        if (c == 0) return;
        auto [it, fresh] = terms.try_emplace(t, c);
        if (!fresh) {
            it->second += c;
            if (it->second == 0) terms.erase(it);
        }
    }

    Chain& axpy(const Rat& a, const Chain& o) {
        if (a != 0)
            for (const auto& [t, c] : o.terms) add(t, a * c);
        return *this;
    }
    Chain& operator+=(const Chain& o) { return axpy(1, o); }
    Chain& operator-=(const Chain& o) { return axpy(-1, o); }
    Chain& operator*=(const Rat& a) {
        if (a == 0) { terms.clear(); return *this; }
        for (auto& [t, c] : terms) c *= a;
        return *this;
    }

    Rat coeff(const Tuple& t) const {
        auto it = terms.find(t);
        return it == terms.end() ? Rat(0) : it->second;
    }

    bool operator==(const Chain& o) const { return grade == o.grade && terms == o.terms; }
};

inline Chain unit_chain(const Tuple& t) {
    Chain c(t.grade());
    c.add(t, 1);
    return c;
}

inline std::string chain_str(const Chain& c) {
    if (c.terms.empty()) return "0";
    std::string out;
    for (const auto& [t, r] : c.terms) {
        out += out.empty() ? "" : " + ";
        out += rat_str(r) + "·" + tuple_str(t);
    }
    return out;
}

// linear extension of a tuple -> Chain map
template <class F>
Chain apply_lin(int target_grade, F&& f, const Chain& x) {
    Chain out(target_grade);
    for (const auto& [t, c] : x.terms) out.axpy(c, f(t));
    return out;
}

// all grade-p tuples over the member list, ordered lexicographically by slot
inline std::vector<Tuple> enumerate_basis(const OrderedComplex& M, int p) {
    std::vector<Tuple> out;
    Tuple cur;
    cur.len = static_cast<std::uint8_t>(p);
    const auto& mem = M.members();
    std::function<void(int)> rec = [&](int i) {
        if (i == p) { out.push_back(cur); return; }
        for (Simplex s : mem) { cur.s[i] = s; rec(i + 1); }
    };
    rec(0);
    return out;
}

// tuples with envelope sigma and free set tau
inline std::vector<Tuple> enumerate_basis(const OrderedComplex& M, int p, Simplex sigma,
                                          Simplex tau) {
    if (!M.contains(sigma)) throw std::domain_error("enumerate_basis: filter envelope not in M");
    std::vector<Tuple> out;
    for (const Tuple& e : enumerate_basis(M, p)) {
        auto env = envelope(M, e.s.data(), p);
        if (!env || *env != sigma) continue;
        if (free_info(M, e.s.data(), p).tau == tau) out.push_back(e);
    }
    return out;
}

// exact sparse linear map between tensor grades; columns are images of
// source basis tuples (absent column = zero image)
struct GradedOperator {
    int source_grade = 1;
    int target_grade = 1;
    int degree = 0;  // form-degree shift of every image term
    std::map<Tuple, Chain, TupleLess> cols;
};

inline GradedOperator materialize(const OrderedComplex& M, int p_src, int p_tgt, int degree,
                                  const std::function<Chain(const Tuple&)>& fn) {
    GradedOperator op;
    op.source_grade = p_src;
    op.target_grade = p_tgt;
    op.degree = degree;
    for (const Tuple& e : enumerate_basis(M, p_src)) {
        Chain img = fn(e);
        if (!img.zero()) op.cols.emplace(e, std::move(img));
    }
    return op;
}

inline Chain apply(const GradedOperator& op, const Chain& x) {
    if (x.grade != op.source_grade) throw std::invalid_argument("apply: grade mismatch");
    Chain out(op.target_grade);
    for (const auto& [t, c] : x.terms) {
        auto it = op.cols.find(t);
        if (it != op.cols.end()) out.axpy(c, it->second);
    }
    return out;
}

// f after g
inline GradedOperator compose(const GradedOperator& f, const GradedOperator& g) {
    if (g.target_grade != f.source_grade) throw std::invalid_argument("compose: grade mismatch");
    GradedOperator out;
    out.source_grade = g.source_grade;
    out.target_grade = f.target_grade;
    out.degree = f.degree + g.degree;
    for (const auto& [e, img] : g.cols) {
        Chain c = apply(f, img);
        if (!c.zero()) out.cols.emplace(e, std::move(c));
    }
    return out;
}

inline GradedOperator add(const GradedOperator& f, const GradedOperator& g) {
    if (f.source_grade != g.source_grade || f.target_grade != g.target_grade)
        throw std::invalid_argument("add: grade mismatch");
    GradedOperator out = f;
    for (const auto& [e, img] : g.cols) {
        auto [it, fresh] = out.cols.try_emplace(e, img);
        if (!fresh) {
            it->second += img;
            if (it->second.zero()) out.cols.erase(it);
        }
    }
    return out;
}

inline GradedOperator scale(const GradedOperator& f, const Rat& a) {
    GradedOperator out = f;
    if (a == 0) { out.cols.clear(); return out; }
    for (auto& [e, img] : out.cols) img *= a;
    return out;
}

// dense matrix of a grade-preserving operator on one (envelope, free-set)
// block, entry [i][j] = coefficient of basis[i] in the image of basis[j];
// refuses operators whose image leaves the block
inline Mat block_matrix(const GradedOperator& op, const OrderedComplex& M, Simplex sigma,
                        Simplex tau) {
    if (op.source_grade != op.target_grade)
        throw std::invalid_argument("block_matrix: operator must preserve the grade");
    const std::vector<Tuple> basis = enumerate_basis(M, op.source_grade, sigma, tau);
    std::map<Tuple, int, TupleLess> index;
    for (int i = 0; i < static_cast<int>(basis.size()); ++i) index.emplace(basis[i], i);
    Mat m = mat_zero(static_cast<int>(basis.size()), static_cast<int>(basis.size()));
    for (int j = 0; j < static_cast<int>(basis.size()); ++j) {
        const Chain img = apply(op, unit_chain(basis[j]));
        for (const auto& [t, c] : img.terms) {
            auto it = index.find(t);
            if (it == index.end())
                throw std::runtime_error("block_matrix: image of " + tuple_str(basis[j]) +
                                         " leaks to " + tuple_str(t));
            m[it->second][j] = c;
        }
    }
    return m;
}

inline GradedOperator transpose(const GradedOperator& f) {
    GradedOperator out;
    out.source_grade = f.target_grade;
    out.target_grade = f.source_grade;
    out.degree = -f.degree;
    for (const auto& [e, img] : f.cols)
        for (const auto& [t, c] : img.terms) {
            auto [it, fresh] = out.cols.try_emplace(t, Chain(f.source_grade));
            it->second.add(e, c);
        }
    for (auto it = out.cols.begin(); it != out.cols.end();)
        it = it->second.zero() ? out.cols.erase(it) : std::next(it);
    return out;
}

} // namespace forms
