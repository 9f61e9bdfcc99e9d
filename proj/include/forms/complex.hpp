#pragma once

#include "forms/simplex.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>
#include <unordered_set>
#include <vector>

namespace forms {

// Finite ordered simplicial complex, downward closed, always containing the
// empty simplex. The linear order on vertices is the numeric label order.
class OrderedComplex {
public:
    // build from maximal simplexes given as vertex-label lists
    static OrderedComplex from_maximal(const std::vector<std::vector<int>>& maximal) {
        std::unordered_set<Simplex> seen;
        for (const auto& verts : maximal) {
            Simplex s = 0;
            for (int v : verts) {
                if (v < 0 || v > 63) throw std::domain_error("vertex label out of range 0..63");
                Simplex bit = Simplex(1) << v;
                if (s & bit) throw std::domain_error("duplicate vertex in simplex listing");
                s |= bit;
            }
            // enumerate all subsets of s (downward closure)
            Simplex sub = s;
            while (true) {
                seen.insert(sub);
                if (sub == 0) break;
                sub = (sub - 1) & s;
            }
        }
        seen.insert(kEmptySimplex);
        return OrderedComplex(std::vector<Simplex>(seen.begin(), seen.end()));
    }

    // build from an explicit member list; rejects families that are not
    // downward closed (there the minimal enveloping simplex would not be
    // well defined)
    static OrderedComplex from_members(const std::vector<Simplex>& members) {
        OrderedComplex M(members);
        for (Simplex s : M.members_) {
            for (Simplex m = s; m; m &= m - 1) {
                Simplex facet = s & ~(m & -m);
                if (!M.contains(facet))
                    throw std::domain_error("malformed complex: not downward closed");
            }
        }
        if (!M.contains(kEmptySimplex))
            throw std::domain_error("malformed complex: empty simplex missing");
        return M;
    }

    bool contains(Simplex s) const { return mset_.count(s) != 0; }

    // all members in canonical order (empty simplex first)
    const std::vector<Simplex>& members() const { return members_; }

    std::vector<Simplex> forms_of_degree(int deg) const {
        std::vector<Simplex> out;
        for (Simplex s : members_)
            if (sdim(s) == deg) out.push_back(s);
        return out;
    }

    Simplex vertex_mask() const { return vmask_; }
    int num_vertices() const { return std::popcount(vmask_); }

    int max_dim() const { return sdim(members_.back()); }

    // members per dimension, from -1 upward
    std::map<int, int> counts_by_dim() const {
        std::map<int, int> c;
        for (Simplex s : members_) c[sdim(s)]++;
        return c;
    }

private:
    explicit OrderedComplex(std::vector<Simplex> members) : members_(std::move(members)) {
        std::sort(members_.begin(), members_.end(), simplex_less);
        members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
        mset_ = {members_.begin(), members_.end()};
        vmask_ = 0;
        for (Simplex s : members_) vmask_ |= s;
    }

    std::vector<Simplex> members_;
    std::unordered_set<Simplex> mset_;
    Simplex vmask_ = 0;
};

// Minimal member simplex containing every slot of a tuple: by downward
// closure that is the plain union when any containing member exists, and
// no member otherwise ("absent"), reported as nullopt. Slots must be members.
inline std::optional<Simplex> envelope(const OrderedComplex& M, const Simplex* slots, int p) {
    Simplex u = 0;
    for (int i = 0; i < p; ++i) {
        if (!M.contains(slots[i])) throw std::domain_error("envelope: slot not a member simplex");
        u |= slots[i];
    }
    if (M.contains(u)) return u;
    return std::nullopt;
}

// Free vertices of a tuple: vertices of the envelope lying in exactly one
// slot. n counts envelope vertices, k the free ones.
struct FreeInfo {
    Simplex tau = 0;  // free vertex set
    int n = 0;        // vertices of the envelope
    int k = 0;        // free vertices
};

inline FreeInfo free_info(const OrderedComplex& M, const Simplex* slots, int p) {
    auto env = envelope(M, slots, p);
    if (!env) throw std::domain_error("free_info: tuple has no envelope");
    FreeInfo out;
    out.n = vertex_count(*env);
    for (Simplex m = *env; m; m &= m - 1) {
        Simplex bit = m & -m;
        int cnt = 0;
        for (int i = 0; i < p; ++i)
            if (slots[i] & bit) ++cnt;
        if (cnt == 1) out.tau |= bit;
    }
    out.k = vertex_count(out.tau);
    return out;
}

} // namespace forms
