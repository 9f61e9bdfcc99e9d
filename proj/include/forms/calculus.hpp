#pragma once

#include "forms/chain.hpp"

#include <functional>
#include <unordered_map>

namespace forms {

// memoizing calculator for the generating operations on one fixed complex;
// caches are per-instance, so keep one Calc per thread
class Calc {
public:
    explicit Calc(const OrderedComplex& M) : M_(&M) {}
    explicit Calc(OrderedComplex&&) = delete;  // the complex must outlive the calculator

    const OrderedComplex& complex() const { return *M_; }

    // signed vertex addition; only extensions that stay inside the complex
    // survive, and the empty simplex maps to the sum of all vertices
    const Chain& d_form(Simplex sig) const {
        check_member(sig, "d_form");
        auto it = dtab_.find(sig);
        if (it != dtab_.end()) return it->second;
        Chain out(1);
        for (int x : vertices_of(M_->vertex_mask() & ~sig)) {
            const Simplex t = sig | (Simplex{1} << x);
            if (!M_->contains(t)) continue;
            out.add(Tuple::single(t), sign_pow(vertex_count(sig & mask_le(x))));
        }
        return dtab_.emplace(sig, std::move(out)).first->second;
    }

    // signed vertex removal; a point maps to +1 times the empty simplex,
    // the empty simplex maps to zero
    const Chain& del_form(Simplex sig) const {
        check_member(sig, "del_form");
        auto it = deltab_.find(sig);
        if (it != deltab_.end()) return it->second;
        Chain out(1);
        for (int x : vertices_of(sig)) {
            const Simplex t = sig & ~(Simplex{1} << x);
            out.add(Tuple::single(t), sign_pow(vertex_count(t & mask_le(x))));
        }
        return deltab_.emplace(sig, std::move(out)).first->second;
    }

    // product of two basis forms: nonzero only when the arguments meet in
    // exactly one vertex and their union is a member; the coefficient is the
    // factorial weight dim(a)! dim(b)! / (dim(a)+dim(b)+1)! and the sign is a
    // pair of relative-position parities.  The formula applies for
    // dim(a) <= dim(b); the other order is defined by graded skew symmetry.
    const Chain& wedge_pair(Simplex a, Simplex b) const {
        check_member(a, "wedge_pair");
        check_member(b, "wedge_pair");
        const auto key = std::make_pair(a, b);
        auto it = wtab_.find(key);
        if (it != wtab_.end()) return it->second;
        Chain out(1);
        if (sdim(a) > sdim(b)) {
            out.axpy(sign_pow(sdim(a) * sdim(b)), wedge_pair(b, a));
        } else if (vertex_count(a & b) == 1 && M_->contains(a | b)) {
            const int da = sdim(a), db = sdim(b);
            Rat coef(factorial(da) * factorial(db), factorial(da + db + 1));
            coef *= parity_beta(a, a | b) * parity_beta(a & b, b);
            out.add(Tuple::single(a | b), coef);
        }
        return wtab_.emplace(key, std::move(out)).first->second;
    }

    // coefficient of sig in a grade-1 chain (the evaluation pairing)
    Rat pairing(Simplex sig, const Chain& w) const {
        if (w.grade != 1) throw std::invalid_argument("pairing: expected a grade-1 chain");
        return w.coeff(Tuple::single(sig));
    }

    // shared per-complex cache for tuple-level operators layered on top of
    // this calculator, keyed by a short operator tag
    std::map<Tuple, Chain, TupleLess>& memo(const char* tag) const { return memo_[tag]; }

private:
    void check_member(Simplex s, const char* who) const {
        if (!M_->contains(s))
            throw std::domain_error(std::string(who) + ": " + simplex_str(s) + " not in complex");
    }
    const OrderedComplex* M_;
    mutable std::unordered_map<Simplex, Chain> dtab_, deltab_;
    mutable std::map<std::pair<Simplex, Simplex>, Chain> wtab_;
    mutable std::map<std::string, std::map<Tuple, Chain, TupleLess>> memo_;
};

// bilinear extension of the product to whole grade-1 chains
inline Chain wedge(const Calc& c, const Chain& a, const Chain& b) {
    if (a.grade != 1 || b.grade != 1)
        throw std::invalid_argument("wedge: expected two grade-1 chains");
    Chain out(1);
    for (const auto& [ta, ca] : a.terms)
        for (const auto& [tb, cb] : b.terms) out.axpy(ca * cb, c.wedge_pair(ta[0], tb[0]));
    return out;
}

// operation core: arity-l map from grade-l tuples to single forms, tagged
// with its form-degree shift
struct CoreOp {
    int arity = 1;
    int degree = 0;
    std::function<Chain(const Tuple&)> f;
};

inline CoreOp core_d(const Calc& c) {
    return {1, 1, [&c](const Tuple& e) { return c.d_form(e[0]); }};
}
inline CoreOp core_del(const Calc& c) {
    return {1, -1, [&c](const Tuple& e) { return c.del_form(e[0]); }};
}
inline CoreOp core_wedge(const Calc& c) {
    return {2, 0, [&c](const Tuple& e) { return c.wedge_pair(e[0], e[1]); }};
}

// lift of an arity-l core to grade-q tuples: sum over the q-l+1 contiguous
// placements, with a global (-1)^(q-1) and a per-placement sign
// (-1)^((j+1)(l+1) + l * (degree of the first j slots)); zero below grade l
inline Chain lift_apply(const CoreOp& op, const Tuple& e) {
    const int q = e.grade(), l = op.arity;
    if (q < l) return Chain(std::max(q - l + 1, 0));
    Chain out(q - l + 1);
    const int pre = sign_pow(q - 1);
    int degacc = 0;
    for (int j = 0; j + l <= q; ++j) {
        const int sgn = pre * sign_pow((j + 1) * (l + 1) + l * degacc);
        const Chain img = op.f(e.sub(j, l));
        for (const auto& [t, c] : img.terms) out.add(e.spliced(j, l, t[0]), sgn * c);
        degacc += sdim(e[j]);
    }
    return out;
}

inline Chain lift_apply(const CoreOp& op, const Chain& x) {
    return apply_lin(std::max(x.grade - op.arity + 1, 0),
                     [&](const Tuple& e) { return lift_apply(op, e); }, x);
}

// tensor-space differential and codifferential (the grade-q lifts of the
// single-form d and del) and the induced tensor Laplacian; memoized per tuple
inline const Chain& fock_d(const Calc& c, const Tuple& e) {
    auto& tab = c.memo("fock_d");
    if (auto it = tab.find(e); it != tab.end()) return it->second;
    return tab.emplace(e, lift_apply(core_d(c), e)).first->second;
}
inline const Chain& fock_del(const Calc& c, const Tuple& e) {
    auto& tab = c.memo("fock_del");
    if (auto it = tab.find(e); it != tab.end()) return it->second;
    return tab.emplace(e, lift_apply(core_del(c), e)).first->second;
}
inline Chain fock_d(const Calc& c, const Chain& x) {
    return apply_lin(x.grade, [&](const Tuple& e) { return fock_d(c, e); }, x);
}
inline Chain fock_del(const Calc& c, const Chain& x) {
    return apply_lin(x.grade, [&](const Tuple& e) { return fock_del(c, e); }, x);
}
inline const Chain& fock_laplace(const Calc& c, const Tuple& e) {
    auto& tab = c.memo("fock_laplace");
    if (auto it = tab.find(e); it != tab.end()) return it->second;
    Chain out = fock_del(c, fock_d(c, e));
    out += fock_d(c, fock_del(c, e));
    return tab.emplace(e, std::move(out)).first->second;
}
inline Chain fock_laplace(const Calc& c, const Chain& x) {
    return apply_lin(x.grade, [&](const Tuple& e) { return fock_laplace(c, e); }, x);
}

// single-form Laplacian d del + del d
inline Chain laplace_form(const Calc& c, Simplex s) {
    Chain out = apply_lin(1, [&](const Tuple& t) { return c.d_form(t[0]); }, c.del_form(s));
    out += apply_lin(1, [&](const Tuple& t) { return c.del_form(t[0]); }, c.d_form(s));
    return out;
}

// matrix of a single-form operation restricted to source degree q; columns
// run over the degree-q forms, rows over the degree-(q+shift) forms, both in
// canonical order; image terms of any other degree are rejected
inline Mat degree_matrix(const OrderedComplex& M, int q, int shift,
                         const std::function<Chain(Simplex)>& f) {
    const auto src = M.forms_of_degree(q);
    const auto dst = M.forms_of_degree(q + shift);
    std::map<Simplex, int, decltype(&simplex_less)> index(&simplex_less);
    for (int i = 0; i < static_cast<int>(dst.size()); ++i) index.emplace(dst[i], i);
    Mat m = mat_zero(static_cast<int>(dst.size()), static_cast<int>(src.size()));
    for (int j = 0; j < static_cast<int>(src.size()); ++j) {
        for (const auto& [t, c] : f(src[j]).terms) {
            auto it = index.find(t[0]);
            if (it == index.end())
                throw std::runtime_error("degree_matrix: image off the target degree at " +
                                         simplex_str(t[0]));
            m[it->second][j] = c;
        }
    }
    return m;
}

} // namespace forms
