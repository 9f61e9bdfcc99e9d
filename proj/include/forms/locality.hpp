#pragma once

#include "forms/calculus.hpp"

#include <algorithm>
#include <optional>

namespace forms {

// ---------------------------------------------------------------------------
// envelope-based splitting of operators
// ---------------------------------------------------------------------------

// image terms of an operator applied to one tuple, split by comparing each
// term's envelope with the argument's envelope: equal members are strict,
// strict member supersets are raising, member subsets and Absent envelopes
// are lowering; an argument without an envelope has no strict part
struct SplitImage {
    Chain strict, raising, lowering;
};

inline SplitImage classify_image(const OrderedComplex& M, const Tuple& arg, const Chain& image) {
    SplitImage out{Chain(image.grade), Chain(image.grade), Chain(image.grade)};
    const auto src = envelope(M, arg.s.data(), arg.grade());
    for (const auto& [t, c] : image.terms) {
        const auto dst = envelope(M, t.s.data(), t.grade());
        if (!src || !dst) {
            out.lowering.add(t, c);
        } else if (*dst == *src) {
            out.strict.add(t, c);
        } else if ((*dst & *src) == *src) {
            out.raising.add(t, c);
        } else if ((*dst & *src) == *dst) {
            out.lowering.add(t, c);
        } else {
            throw std::domain_error("classify_image: incomparable envelopes " +
                                    tuple_str(arg) + " -> " + tuple_str(t));
        }
    }
    return out;
}

struct LocalityParts {
    GradedOperator strict, raising, lowering;
};

inline LocalityParts localize(const OrderedComplex& M, const GradedOperator& op) {
    LocalityParts out{op, op, op};
    out.strict.cols.clear();
    out.raising.cols.clear();
    out.lowering.cols.clear();
    for (const auto& [e, img] : op.cols) {
        SplitImage s = classify_image(M, e, img);
        if (!s.strict.zero()) out.strict.cols.emplace(e, std::move(s.strict));
        if (!s.raising.zero()) out.raising.cols.emplace(e, std::move(s.raising));
        if (!s.lowering.zero()) out.lowering.cols.emplace(e, std::move(s.lowering));
    }
    return out;
}

// strictly local differential, codifferential and their Laplacian; memoized
// per tuple since the localized machinery reapplies them heavily
inline const Chain& strict_d(const Calc& c, const Tuple& e) {
    auto& tab = c.memo("strict_d");
    if (auto it = tab.find(e); it != tab.end()) return it->second;
    return tab.emplace(e, classify_image(c.complex(), e, fock_d(c, e)).strict).first->second;
}
inline const Chain& strict_del(const Calc& c, const Tuple& e) {
    auto& tab = c.memo("strict_del");
    if (auto it = tab.find(e); it != tab.end()) return it->second;
    return tab.emplace(e, classify_image(c.complex(), e, fock_del(c, e)).strict).first->second;
}
inline Chain strict_d(const Calc& c, const Chain& x) {
    return apply_lin(x.grade, [&](const Tuple& e) { return strict_d(c, e); }, x);
}
inline Chain strict_del(const Calc& c, const Chain& x) {
    return apply_lin(x.grade, [&](const Tuple& e) { return strict_del(c, e); }, x);
}
inline const Chain& laplace_loc(const Calc& c, const Tuple& e) {
    auto& tab = c.memo("laplace_loc");
    if (auto it = tab.find(e); it != tab.end()) return it->second;
    Chain out = strict_d(c, strict_del(c, e));
    out += strict_del(c, strict_d(c, e));
    return tab.emplace(e, std::move(out)).first->second;
}
inline Chain laplace_loc(const Calc& c, const Chain& x) {
    return apply_lin(x.grade, [&](const Tuple& e) { return laplace_loc(c, e); }, x);
}

// the envelope-raising part of the lifted differential, and the part that
// leaks out of the complex (image terms with no envelope)
inline Chain raising_d(const Calc& c, const Tuple& e) {
    return classify_image(c.complex(), e, fock_d(c, e)).raising;
}
inline Chain lowering_d(const Calc& c, const Tuple& e) {
    return classify_image(c.complex(), e, fock_d(c, e)).lowering;
}
inline Chain raising_d(const Calc& c, const Chain& x) {
    return apply_lin(x.grade, [&](const Tuple& e) { return raising_d(c, e); }, x);
}
inline Chain lowering_d(const Calc& c, const Chain& x) {
    return apply_lin(x.grade, [&](const Tuple& e) { return lowering_d(c, e); }, x);
}

// ---------------------------------------------------------------------------
// block structure
// ---------------------------------------------------------------------------

// configuration: each non-free vertex of the envelope mapped to the set of
// slots it occupies; the local Laplacian preserves these classes
using Config = std::map<int, std::uint32_t>;

inline Config config_of(const OrderedComplex& M, const Tuple& e) {
    const FreeInfo fi = free_info(M, e.s.data(), e.grade());
    const auto env_o = envelope(M, e.s.data(), e.grade());
    Config cfg;
    for (int v : vertices_of(*env_o & ~fi.tau)) {
        std::uint32_t mask = 0;
        for (int i = 0; i < e.grade(); ++i)
            if (has_vertex(e[i], v)) mask |= (1u << i);
        cfg.emplace(v, mask);
    }
    return cfg;
}

inline std::map<Config, std::vector<Tuple>> config_blocks(const OrderedComplex& M, int p,
                                                          Simplex sigma, Simplex tau) {
    std::map<Config, std::vector<Tuple>> out;
    for (const Tuple& e : enumerate_basis(M, p, sigma, tau)) out[config_of(M, e)].push_back(e);
    return out;
}

// integer matrix of the local Laplacian on an explicit basis (it always has
// integer entries); refuses bases the operator does not preserve
inline IMat laplace_loc_imat(const Calc& c, const std::vector<Tuple>& basis) {
    std::map<Tuple, int, TupleLess> index;
    for (int i = 0; i < static_cast<int>(basis.size()); ++i) index.emplace(basis[i], i);
    IMat m = imat_zero(static_cast<int>(basis.size()), static_cast<int>(basis.size()));
    for (int j = 0; j < static_cast<int>(basis.size()); ++j) {
        const Chain img = laplace_loc(c, basis[j]);
        for (const auto& [t, cf] : img.terms) {
            auto it = index.find(t);
            if (it == index.end())
                throw std::runtime_error("laplace_loc_imat: image of " + tuple_str(basis[j]) +
                                         " leaves the basis at " + tuple_str(t));
            if (denominator(cf) != 1)
                throw std::runtime_error("laplace_loc_imat: non-integer entry");
            m[it->second][j] = numerator(cf);
        }
    }
    return m;
}

// spectrum of the local Laplacian on a block with an n-vertex envelope and k
// free vertices at tensor grade p: eigenvalue (n-i)p has multiplicity
// C(k,i) (p-1)^(k-i) for i = 0..k, and the multiplicities add up to p^k
struct BlockSpectrum {
    int n = 0, k = 0, p = 1;
    std::vector<int> eigenvalues;
    std::vector<Int> multiplicities;
};

inline BlockSpectrum block_spectrum(int n, int k, int p) {
    if (k < 0 || k > n || p < 1) throw std::domain_error("block_spectrum: bad parameters");
    BlockSpectrum out{n, k, p, {}, {}};
    for (int i = 0; i <= k; ++i) {
        out.eigenvalues.push_back((n - i) * p);
        out.multiplicities.push_back(binom(k, i) * ipow(p - 1, k - i));
    }
    return out;
}

// ---------------------------------------------------------------------------
// block pseudo-inverse, polynomial form
// ---------------------------------------------------------------------------

// ascending coefficients of the polynomial q with q(l) = 1/l on the block's
// nonzero eigenvalues and q(0) = 0 when 0 is an eigenvalue (n = k); the
// coefficients come from elementary symmetric functions of the eigenvalues
inline std::vector<Rat> pinv_poly(int n, int k, int p) {
    if (k < 0 || k > n || p < 1) throw std::domain_error("pinv_poly: bad parameters");
    if (n == 0) return {};  // the lone eigenvalue is 0; the pseudo-inverse vanishes
    std::vector<Rat> lams;
    for (int i = 0; i <= k; ++i)
        if (n - i > 0) lams.push_back(Rat((n - i) * p));
    const int r = static_cast<int>(lams.size());
    // S[m] = elementary symmetric function of the nonzero eigenvalues
    std::vector<Rat> S(r + 1, Rat(0));
    S[0] = 1;
    for (int i = 0; i < r; ++i)
        for (int m = i + 1; m >= 1; --m) S[m] += lams[i] * S[m - 1];
    if (k < n) {
        // all k+1 eigenvalues are nonzero: coefficient of x^t is (-1)^t S[k-t]/S[k+1]
        std::vector<Rat> q(k + 1, Rat(0));
        for (int t = 0; t <= k; ++t) q[t] = Rat(sign_pow(t)) * S[k - t] / S[k + 1];
        return q;
    }
    // n = k: inverse W on the k nonzero eigenvalues, then subtract a multiple
    // of the annihilator P of those eigenvalues to force q(0) = 0
    std::vector<Rat> w(k, Rat(0));
    for (int t = 0; t <= k - 1; ++t) w[t] = Rat(sign_pow(t)) * S[k - 1 - t] / S[k];
    std::vector<Rat> P(k + 1, Rat(0));
    for (int t = 0; t <= k; ++t) P[t] = Rat(sign_pow(k - t)) * S[k - t];
    const Rat lam = w[0] / P[0];  // W(0) / P(0)
    std::vector<Rat> q(k + 1, Rat(0));
    for (int t = 0; t < k; ++t) q[t] = w[t] - lam * P[t];
    q[k] = -lam * P[k];
    return q;
}

// the block of a tuple: every placement of its free vertices into slots, the
// non-free occupancy kept fixed; deterministic enumeration order
inline std::vector<Tuple> block_of(const OrderedComplex& M, const Tuple& e) {
    const int p = e.grade();
    if (!envelope(M, e.s.data(), p)) throw std::domain_error("block_of: tuple has no envelope");
    const FreeInfo fi = free_info(M, e.s.data(), p);
    const std::vector<int> free_verts = vertices_of(fi.tau);
    unsigned long long total = 1;
    for (int idx = 0; idx < fi.k; ++idx) total *= static_cast<unsigned>(p);
    std::vector<Tuple> out;
    out.reserve(total);
    for (unsigned long long a = 0; a < total; ++a) {
        unsigned long long rem = a;
        Tuple t = e;
        for (int i = 0; i < p; ++i) t[i] &= ~fi.tau;
        for (int idx = 0; idx < fi.k; ++idx) {
            t[static_cast<int>(rem % p)] |= (Simplex{1} << free_verts[idx]);
            rem /= p;
        }
        for (int i = 0; i < p; ++i)
            if (!M.contains(t[i]))
                throw std::domain_error("block_of: rearranged slot leaves the complex");
        out.push_back(t);
    }
    return out;
}

// q applied to the local Laplacian. Evaluated densely on the whole block of
// the tuple at its first use: Horner's rule on the integer block matrix with
// the coefficients rescaled to a common denominator, then every column is
// cached, so later tuples of the same block are lookups.
inline const Chain& pinv_chain(const Calc& c, const Tuple& e) {
    auto& tab = c.memo("pinv");
    if (auto it = tab.find(e); it != tab.end()) return it->second;
    const auto& M = c.complex();
    const int p = e.grade();
    if (!envelope(M, e.s.data(), p)) return tab.emplace(e, Chain(p)).first->second;
    const FreeInfo fi = free_info(M, e.s.data(), p);
    const std::vector<Rat> q = pinv_poly(fi.n, fi.k, p);
    const std::vector<Tuple> basis = block_of(M, e);
    if (q.empty()) {
        for (const Tuple& t : basis) tab.emplace(t, Chain(p));
        return tab.find(e)->second;
    }
    Int den = 1;
    for (const Rat& v : q) den = lcm(den, denominator(v));
    std::vector<Int> a(q.size());
    for (std::size_t t = 0; t < q.size(); ++t) a[t] = numerator(q[t] * Rat(den));
    const IMat A = laplace_loc_imat(c, basis);
    const int dim = static_cast<int>(basis.size());
    IMat Q = imat_zero(dim, dim);
    for (int i = 0; i < dim; ++i) Q[i][i] = a.back();
    for (int t = static_cast<int>(a.size()) - 2; t >= 0; --t) {
        Q = imat_mul(Q, A);
        for (int i = 0; i < dim; ++i) Q[i][i] += a[t];
    }
    for (int j = 0; j < dim; ++j) {
        Chain col(p);
        for (int i = 0; i < dim; ++i)
            if (Q[i][j] != 0) col.add(basis[i], Rat(Q[i][j], den));
        tab.emplace(basis[j], std::move(col));
    }
    return tab.find(e)->second;
}
inline Chain pinv_chain(const Calc& c, const Chain& x) {
    return apply_lin(x.grade, [&](const Tuple& e) { return pinv_chain(c, e); }, x);
}

// local homotopy: codifferential after the block pseudo-inverse; vanishes on
// tuples without an envelope and on plain forms
inline const Chain& local_K(const Calc& c, const Tuple& e) {
    auto& tab = c.memo("local_K");
    if (auto it = tab.find(e); it != tab.end()) return it->second;
    return tab.emplace(e, strict_del(c, pinv_chain(c, e))).first->second;
}
inline Chain local_K(const Calc& c, const Chain& x) {
    return apply_lin(x.grade, [&](const Tuple& e) { return local_K(c, e); }, x);
}

// ---------------------------------------------------------------------------
// closed-form pseudo-inverse by rearranging free vertices
// ---------------------------------------------------------------------------

// weight of a rearrangement that moves j of the k free vertices inside an
// n-vertex envelope at grade p, for blocks with unmoveable mass (k < n)
inline Rat comb_weight_partial(int k, int n, int j, int p) {
    const int m = k - j;
    Int f0 = ipow(p, k + 1);
    for (int t = 0; t <= k; ++t) f0 *= (n - t);
    Int num = 0;
    for (int a = 0; a <= m; ++a) {
        Int q = binom(m, a) * ipow(p, a) * factorial(k - a);
        for (int t = 0; t < a; ++t) q *= (n - k + t);
        num += q;
    }
    return Rat(num, f0);
}

// weight when every envelope vertex is free (k = n); the generating
// polynomial (1-u)^j ((p-1)u + 1)^(k-j) - 1 is integrated against du/u
inline Rat comb_weight_full(int k, int j, int p) {
    std::vector<Int> coef(k + 1, Int(0));
    for (int a = 0; a <= j; ++a)
        for (int b = 0; b <= k - j; ++b)
            coef[a + b] += Int(sign_pow(a)) * binom(j, a) * binom(k - j, b) * ipow(p - 1, b);
    Rat s(0);
    for (int t = 1; t <= k; ++t) s += Rat(coef[t], Int(t));
    return s / Rat(ipow(p, k + 1));
}

// sign of a rearrangement: walk the moved free vertices in ascending order
// through the occurrence word of the tuple, counting the jumps, then add the
// old and new slot indices of every moved vertex
inline int comb_sign(const Tuple& e, const std::vector<int>& free_verts,
                     const std::vector<int>& se, const std::vector<int>& st) {
    std::vector<std::pair<int, int>> word;
    for (int i = 0; i < e.grade(); ++i)
        for (int v : vertices_of(e[i])) word.emplace_back(i, v);
    long long par = 0;
    for (std::size_t idx = 0; idx < free_verts.size(); ++idx) {
        if (se[idx] == st[idx]) continue;
        const std::pair<int, int> oldkey{se[idx], free_verts[idx]};
        const auto it = std::find(word.begin(), word.end(), oldkey);
        const long long old = it - word.begin();
        word.erase(it);
        const std::pair<int, int> newkey{st[idx], free_verts[idx]};
        long long newpos = 0;
        for (const auto& o : word)
            if (o < newkey) ++newpos;
        par += (newpos > old ? newpos - old : old - newpos);
        word.insert(word.begin() + newpos, newkey);
        par += se[idx] + st[idx];
    }
    return sign_pow(par);
}

// the block pseudo-inverse in closed form: a signed, weighted sum over all
// placements of the free vertices into slots, non-free vertices fixed
inline Chain comb_inverse(const OrderedComplex& M, const Tuple& e) {
    const int p = e.grade();
    Chain out(p);
    if (!envelope(M, e.s.data(), p)) return out;
    const FreeInfo fi = free_info(M, e.s.data(), p);
    const std::vector<int> free_verts = vertices_of(fi.tau);
    const int k = fi.k;
    std::vector<int> se(k), st(k);
    for (int idx = 0; idx < k; ++idx)
        for (int i = 0; i < p; ++i)
            if (has_vertex(e[i], free_verts[idx])) se[idx] = i;
    const Simplex taumask = fi.tau;
    std::vector<Rat> weight_of_j(k + 1);
    for (int j = 0; j <= k; ++j)
        weight_of_j[j] = (fi.k == fi.n) ? comb_weight_full(k, j, p)
                                        : comb_weight_partial(k, fi.n, j, p);
    unsigned long long total = 1;
    for (int idx = 0; idx < k; ++idx) total *= static_cast<unsigned>(p);
    for (unsigned long long a = 0; a < total; ++a) {
        unsigned long long rem = a;
        int moved = 0;
        for (int idx = 0; idx < k; ++idx) {
            st[idx] = static_cast<int>(rem % p);
            rem /= p;
            if (st[idx] != se[idx]) ++moved;
        }
        const Rat w = weight_of_j[moved];
        if (w == 0) continue;
        Tuple t = e;
        for (int i = 0; i < p; ++i) t[i] &= ~taumask;
        for (int idx = 0; idx < k; ++idx) t[st[idx]] |= (Simplex{1} << free_verts[idx]);
        for (int i = 0; i < p; ++i)
            if (!M.contains(t[i]))
                throw std::domain_error("comb_inverse: rearranged slot leaves the complex");
        out.add(t, w * comb_sign(e, free_verts, se, st));
    }
    return out;
}

// ---------------------------------------------------------------------------
// verification helpers
// ---------------------------------------------------------------------------

struct CheckResult {
    std::string name;
    int grade = 0;
    int basis_count = 0;
    bool pass = true;
    std::string counterexample;  // empty when pass

    void fail(const Tuple& e, const Chain& defect) {
        if (!pass) return;
        pass = false;
        counterexample = tuple_str(e) + " -> " + chain_str(defect);
    }
};

// the raising part of the differential anticommutes with the strictly local
// codifferential: d+ [del] + [del] d+ = 0 on every grade-p basis tuple
inline CheckResult verify_plusminus(const Calc& c, int p) {
    CheckResult res{"plusminus", p};
    for (const Tuple& e : enumerate_basis(c.complex(), p)) {
        ++res.basis_count;
        Chain total = raising_d(c, strict_del(c, e));
        total += strict_del(c, raising_d(c, e));
        if (!total.zero()) res.fail(e, total);
    }
    return res;
}

} // namespace forms
