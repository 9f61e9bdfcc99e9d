#pragma once

#include "forms/locality.hpp"

namespace forms {

// ---------------------------------------------------------------------------
// global homotopy inverse on the tensor space
// ---------------------------------------------------------------------------

// thrown when a construction needs the tensor Laplacian to be invertible and
// it is not (the complex carries a harmonic form in the relevant degrees)
struct TopologyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// exact inverse of the tensor Laplacian on one tuple, found in the tuple's
// Krylov space: reduce e, Le, L²e, ... until the first linear dependence
// sum c_t L^t e = 0; then L⁻¹e = -(1/c_0) sum_{t>=1} c_t L^(t-1) e. A zero
// constant coefficient means e meets the kernel and no inverse exists.
inline const Chain& fock_inv_laplace(const Calc& c, const Tuple& e) {
    auto& tab = c.memo("fock_inv_laplace");
    if (auto it = tab.find(e); it != tab.end()) return it->second;
    std::vector<Chain> power;             // L^t e
    std::vector<Chain> reduced;           // echelonized span of the powers
    std::vector<std::vector<Rat>> combo;  // reduced[i] written in the powers
    power.push_back(unit_chain(e));
    for (std::size_t step = 0;; ++step) {
        if (step > 4096) throw std::logic_error("fock_inv_laplace: no minimal relation found");
        Chain r = power[step];
        std::vector<Rat> cmb(step + 1, Rat(0));
        cmb[step] = 1;
        for (std::size_t i = 0; i < reduced.size(); ++i) {
            const Rat cf = r.coeff(reduced[i].terms.begin()->first);
            if (cf == 0) continue;
            r.axpy(-cf, reduced[i]);
            for (std::size_t t = 0; t < combo[i].size(); ++t) cmb[t] -= cf * combo[i][t];
        }
        if (r.zero()) {
            if (cmb[0] == 0)
                throw TopologyError("tensor Laplacian is singular at " + tuple_str(e) +
                                    ", degree signature " + signature_str(e));
            Chain out(e.grade());
            for (std::size_t t = 1; t <= step; ++t) out.axpy(-cmb[t] / cmb[0], power[t - 1]);
            return tab.emplace(e, std::move(out)).first->second;
        }
        const Rat lead = r.terms.begin()->second;
        if (lead != 1) {
            r *= Rat(1) / lead;
            for (Rat& v : cmb) v /= lead;
        }
        reduced.push_back(std::move(r));
        combo.push_back(std::move(cmb));
        power.push_back(fock_laplace(c, power[step]));
    }
}
inline Chain fock_inv_laplace(const Calc& c, const Chain& x) {
    return apply_lin(x.grade, [&](const Tuple& e) { return fock_inv_laplace(c, e); }, x);
}

// global homotopy K = del ∘ L⁻¹ on the tensor space (the two commute), the
// right inverse of d in d K + K d = 1 wherever L is invertible
inline const Chain& fock_K(const Calc& c, const Tuple& e) {
    auto& tab = c.memo("fock_K");
    if (auto it = tab.find(e); it != tab.end()) return it->second;
    return tab.emplace(e, fock_del(c, fock_inv_laplace(c, e))).first->second;
}
inline Chain fock_K(const Calc& c, const Chain& x) {
    return apply_lin(x.grade, [&](const Tuple& e) { return fock_K(c, e); }, x);
}

// ---------------------------------------------------------------------------
// the tower of higher products
// ---------------------------------------------------------------------------

enum class Flavor { naive_left, naive_right, local };

inline const char* flavor_name(Flavor f) {
    switch (f) {
        case Flavor::naive_left: return "naive-left";
        case Flavor::naive_right: return "naive-right";
        case Flavor::local: return "local";
    }
    return "?";
}

inline Flavor flavor_of(const std::string& name) {
    if (name == "naive-left") return Flavor::naive_left;
    if (name == "naive-right") return Flavor::naive_right;
    if (name == "local") return Flavor::local;
    throw std::invalid_argument("unknown flavor: " + name);
}

// m(1) = d, m(2) = wedge, and for p >= 3 a solution of
//   d m(p) + m(p) d = M(p),   M(p) = -sum_{q=2..p-1} m(q) ∘ lift(m(p+1-q)),
// built by composing the source M(p) with a homotopy inverse of d. The
// flavors differ in which inverse is used and on which side:
//   naive-left   m(p) = K ∘ M(p)    global K at grade 1
//   naive-right  m(p) = M(p) ∘ K    global K at grade p
//   local        m(p) = M(p) ∘ [K]  strictly local K at grade p
class Tower {
public:
    Tower(const Calc& c, Flavor f, int p_max)
        : c_(&c),
          flavor_(f),
          p_max_(p_max),
          mtab_(static_cast<std::size_t>(p_max) + 1),
          stab_(static_cast<std::size_t>(p_max) + 1) {
        if (p_max < 2) throw std::invalid_argument("Tower: p_max must be at least 2");
    }
    Tower(Calc&&, Flavor, int) = delete;  // the calculator must outlive the tower

    const Calc& calc() const { return *c_; }
    Flavor flavor() const { return flavor_; }
    int p_max() const { return p_max_; }

    // m(p) on one grade-p tuple; a grade-1 chain of degree sum+2-p
    const Chain& m(int p, const Tuple& e) const {
        if (p < 1 || p > p_max_) throw std::invalid_argument("Tower::m: p out of range");
        if (e.grade() != p) throw std::invalid_argument("Tower::m: tuple grade != p");
        if (p == 1) return c_->d_form(e[0]);
        if (p == 2) return c_->wedge_pair(e[0], e[1]);
        auto& tab = mtab_[static_cast<std::size_t>(p)];
        if (auto it = tab.find(e); it != tab.end()) return it->second;
        Chain out(1);
        switch (flavor_) {
            case Flavor::naive_left: out = fock_K(*c_, source(p, e)); break;
            case Flavor::naive_right: out = source(p, fock_K(*c_, e)); break;
            case Flavor::local: out = source(p, local_K(*c_, e)); break;
        }
        return tab.emplace(e, std::move(out)).first->second;
    }

    // the lifting core of m(p); its degree is 2-p
    CoreOp core(int p) const {
        return {p, 2 - p, [this, p](const Tuple& e) { return m(p, e); }};
    }

    // the defining right-hand side M(p) on a grade-p tuple; memoized, since
    // homotopy images revisit the same tuples heavily
    const Chain& source(int p, const Tuple& e) const {
        if (p < 1 || p > p_max_) throw std::invalid_argument("Tower::source: p out of range");
        auto& tab = stab_[static_cast<std::size_t>(p)];
        if (auto it = tab.find(e); it != tab.end()) return it->second;
        Chain out(1);
        for (int q = 2; q <= p - 1; ++q) {
            const Chain inner = lift_apply(core(p + 1 - q), e);  // grade q
            out.axpy(-1, apply_lin(1, [&](const Tuple& t) { return m(q, t); }, inner));
        }
        return tab.emplace(e, std::move(out)).first->second;
    }
    Chain source(int p, const Chain& x) const {
        return apply_lin(1, [&](const Tuple& e) { return source(p, e); }, x);
    }

private:
    const Calc* c_;
    Flavor flavor_;
    int p_max_;
    mutable std::vector<std::map<Tuple, Chain, TupleLess>> mtab_;
    mutable std::vector<std::map<Tuple, Chain, TupleLess>> stab_;
};

// associativity defect a∧(b∧c) - (a∧b)∧c on grade-1 chains; coincides with
// the composite lift of the product over grade-3 tuples
inline Chain associator(const Calc& c, const Chain& a, const Chain& b, const Chain& x) {
    Chain out = wedge(c, a, wedge(c, b, x));
    out -= wedge(c, wedge(c, a, b), x);
    return out;
}

// ---------------------------------------------------------------------------
// relation verifiers
// ---------------------------------------------------------------------------

// the defining relation of arity n at tensor grade g, swept over every basis
// tuple whose slots all have form degree >= 0:
//   sum_{k+l=n+1} lift(m(k)) ∘ lift_g(m(l)) = 0
inline CheckResult verify_relation(const Tower& tw, int n, int g) {
    if (n < 1 || n > tw.p_max()) throw std::invalid_argument("verify_relation: bad arity");
    CheckResult res{"relation arity " + std::to_string(n), g};
    for (const Tuple& e : enumerate_basis(tw.calc().complex(), g)) {
        if (has_empty_slot(e)) continue;
        ++res.basis_count;
        Chain total(std::max(g - n + 1, 0));
        for (int l = 1; l <= n && l <= g; ++l) {
            const Chain inner = lift_apply(tw.core(l), e);
            total += lift_apply(tw.core(n + 1 - l), inner);
        }
        if (!total.zero()) {
            res.fail(e, total);
            break;
        }
    }
    return res;
}

// solvability of the defining equation: the source commutes with the
// differential, d ∘ M(p) = M(p) ∘ d, over degree >= 0 grade-p tuples
inline CheckResult verify_consistency(const Tower& tw, int p) {
    CheckResult res{"source closure p=" + std::to_string(p), p};
    const Calc& c = tw.calc();
    for (const Tuple& e : enumerate_basis(c.complex(), p)) {
        if (has_empty_slot(e)) continue;
        ++res.basis_count;
        Chain diff = fock_d(c, tw.source(p, e));
        diff -= tw.source(p, fock_d(c, e));
        if (!diff.zero()) {
            res.fail(e, diff);
            break;
        }
    }
    return res;
}

// ---------------------------------------------------------------------------
// the conjugated differential
// ---------------------------------------------------------------------------

// an element of the tensor algebra split by grade; zero parts are dropped
using GradedChain = std::map<int, Chain>;

inline void graded_add(GradedChain& acc, const Chain& x) {
    if (x.terms.empty()) return;
    auto it = acc.find(x.grade);
    if (it == acc.end()) {
        acc.emplace(x.grade, x);
        return;
    }
    it->second += x;
    if (it->second.zero()) acc.erase(it);
}

inline bool graded_zero(const GradedChain& x) {
    for (const auto& [g, part] : x)
        if (!part.zero()) return false;
    return true;
}

// U = 1 + ∧K with the global K, its inverse by the alternating series, and
// the conjugated differential D = U d U⁻¹, nilpotent by construction.  The
// grade 1 component of D is d itself, but the grade p -> 1 components do
// not rebuild the product tower: K feeds empty-slot tuples into the lifted
// product, and on those the compatibility d(a∧b) = da∧b - a∧db fails (the
// empty simplex has a nonzero differential yet wedges to zero), so already
// the grade-2 component halves the squares of vertices.
class Conjugator {
public:
    explicit Conjugator(const Calc& c) : c_(&c) {}
    explicit Conjugator(Calc&&) = delete;

    // the grade-lowering step ∧K (homotopy first, then the lifted product)
    Chain step(const Chain& x) const {
        if (x.grade < 2) return Chain(std::max(x.grade - 1, 0));
        return lift_apply(core_wedge(*c_), fock_K(*c_, x));
    }

    GradedChain U(const GradedChain& x) const {
        GradedChain out = x;
        for (const auto& [g, part] : x) graded_add(out, step(part));
        return out;
    }

    GradedChain U_inv(const GradedChain& x) const {
        GradedChain out = x;
        GradedChain layer = x;
        int sign = -1;
        for (;;) {
            GradedChain next;
            for (const auto& [g, part] : layer) graded_add(next, step(part));
            if (next.empty()) return out;
            for (const auto& [g, part] : next) {
                Chain scaled = part;
                scaled *= Rat(sign);
                graded_add(out, scaled);
            }
            layer = std::move(next);
            sign = -sign;
        }
    }

    GradedChain D(const GradedChain& x) const {
        GradedChain mid;
        for (const auto& [g, part] : U_inv(x)) graded_add(mid, fock_d(*c_, part));
        return U(mid);
    }

    // the grade g -> tgt component of D on one tuple
    Chain component(const Tuple& e, int tgt) const {
        const GradedChain out = D({{e.grade(), unit_chain(e)}});
        const auto it = out.find(tgt);
        return it == out.end() ? Chain(tgt) : it->second;
    }

private:
    const Calc* c_;
};

} // namespace forms
