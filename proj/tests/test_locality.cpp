#include <catch2/catch_amalgamated.hpp>

#include "forms/locality.hpp"

using namespace forms;

namespace {

OrderedComplex disc2() { return OrderedComplex::from_maximal({{1, 2, 3}}); }
OrderedComplex simplex3() { return OrderedComplex::from_maximal({{1, 2, 3, 4}}); }
OrderedComplex star4() { return OrderedComplex::from_maximal({{1, 2}, {2, 3}, {2, 4}}); }

Chain chain_of(std::initializer_list<std::pair<Tuple, Rat>> parts, int grade) {
    Chain c(grade);
    for (const auto& [t, r] : parts) c.add(t, r);
    return c;
}

} // namespace

TEST_CASE("strictly local differential and codifferential on the triangle") {
    const auto M = disc2();
    Calc c(M);
    const Simplex v1 = simplex_of({1}), v2 = simplex_of({2}), e12 = simplex_of({1, 2});

    CHECK(strict_del(c, Tuple{v1, e12}) ==
          chain_of({{Tuple{kEmptySimplex, e12}, -1}, {Tuple{v1, v2}, -1}}, 2));
    CHECK(strict_d(c, Tuple{v1, v1}).zero());
    CHECK(strict_d(c, Tuple{e12, v1}) == chain_of({{Tuple{e12, e12}, -1}}, 2));
    CHECK(strict_del(c, Tuple{v1, simplex_of({2, 3})}).zero());
}

TEST_CASE("localized operators reassemble and respect envelopes") {
    for (const auto& M : {disc2(), star4()}) {
        Calc c(M);
        const auto dF = materialize(M, 2, 2, +1, [&](const Tuple& e) {
            return lift_apply(core_d(c), e);
        });
        const LocalityParts parts = localize(M, dF);
        const auto recombined = add(add(parts.strict, parts.raising), parts.lowering);
        CHECK(recombined.cols == dF.cols);

        for (const Tuple& e : enumerate_basis(M, 2)) {
            const auto src = envelope(M, e.s.data(), 2);
            const Chain img = apply(dF, unit_chain(e));
            const SplitImage s = classify_image(M, e, img);
            for (const auto& [t, cf] : s.strict.terms)
                CHECK(envelope(M, t.s.data(), 2) == src);
            for (const auto& [t, cf] : s.raising.terms) {
                const auto dst = envelope(M, t.s.data(), 2);
                REQUIRE(src.has_value());
                REQUIRE(dst.has_value());
                CHECK(*dst != *src);
                CHECK((*dst & *src) == *src);
            }
            for (const auto& [t, cf] : s.lowering.terms) {
                const auto dst = envelope(M, t.s.data(), 2);
                if (src && dst) {
                    CHECK(*dst != *src);
                    CHECK((*dst & *src) == *dst);
                }
            }
        }
    }
}

TEST_CASE("global Laplacian matrices") {
    const auto Md = disc2();
    Calc cd(Md);
    // on the closed triangle the Laplacian is 3 times the identity everywhere
    for (Simplex s : Md.members()) {
        Chain expect = unit_chain(Tuple::single(s));
        expect *= 3;
        CHECK(laplace_form(cd, s) == expect);
    }

    const auto Ms = star4();
    Calc cs(Ms);
    const Mat lap0 = degree_matrix(Ms, 0, 0, [&](Simplex s) { return laplace_form(cs, s); });
    const Mat expect0 = {{Rat(2), Rat(0), Rat(1), Rat(1)},
                         {Rat(0), Rat(4), Rat(0), Rat(0)},
                         {Rat(1), Rat(0), Rat(2), Rat(1)},
                         {Rat(1), Rat(0), Rat(1), Rat(2)}};
    CHECK(lap0 == expect0);

    const Mat lap1 = degree_matrix(Ms, 1, 0, [&](Simplex s) { return laplace_form(cs, s); });
    const Mat expect1 = {{Rat(2), Rat(-1), Rat(-1)}, {Rat(-1), Rat(2), Rat(1)},
                         {Rat(-1), Rat(1), Rat(2)}};
    CHECK(lap1 == expect1);
}

TEST_CASE("local Laplacian golden values and block matrices") {
    const auto M = disc2();
    Calc c(M);
    const Simplex v1 = simplex_of({1}), v2 = simplex_of({2}), e12 = simplex_of({1, 2});

    CHECK(laplace_loc(c, Tuple{e12, v1}) ==
          chain_of({{Tuple{e12, v1}, 3}, {Tuple{v1, e12}, -1}}, 2));

    // two-vertex envelope, one free vertex
    const auto basis1 = enumerate_basis(M, 2, e12, v2);
    REQUIRE(basis1.size() == 2);
    CHECK(basis1[0] == Tuple{v1, e12});
    CHECK(basis1[1] == Tuple{e12, v1});
    CHECK(laplace_loc_imat(c, basis1) == IMat{{Int(3), Int(-1)}, {Int(-1), Int(3)}});

    // three-vertex envelope, one free vertex
    const auto basis2 = enumerate_basis(M, 2, simplex_of({1, 2, 3}), v2);
    REQUIRE(basis2.size() == 2);
    CHECK(basis2[0] == Tuple{simplex_of({1, 3}), simplex_of({1, 2, 3})});
    CHECK(basis2[1] == Tuple{simplex_of({1, 2, 3}), simplex_of({1, 3})});
    CHECK(laplace_loc_imat(c, basis2) == IMat{{Int(5), Int(1)}, {Int(1), Int(5)}});

    // two-vertex envelope, both vertices free
    const auto basis3 = enumerate_basis(M, 2, e12, e12);
    const IMat expect3 = {{Int(2), Int(1), Int(-1), Int(0)},
                          {Int(1), Int(2), Int(0), Int(1)},
                          {Int(-1), Int(0), Int(2), Int(-1)},
                          {Int(0), Int(1), Int(-1), Int(2)}};
    CHECK(laplace_loc_imat(c, basis3) == expect3);

    // no free vertices: the block is scalar with value n*p
    const auto basis0 = enumerate_basis(M, 2, e12, kEmptySimplex);
    REQUIRE(basis0.size() == 1);
    CHECK(laplace_loc(c, basis0[0]) == chain_of({{basis0[0], 4}}, 2));
}

TEST_CASE("block spectra") {
    const auto s21 = block_spectrum(2, 1, 2);
    CHECK(s21.eigenvalues == std::vector<int>{4, 2});
    CHECK(s21.multiplicities == std::vector<Int>{1, 1});

    const auto s31 = block_spectrum(3, 1, 2);
    CHECK(s31.eigenvalues == std::vector<int>{6, 4});

    const auto s44 = block_spectrum(4, 4, 3);
    Int total = 0;
    for (const Int& m : s44.multiplicities) total += m;
    CHECK(total == 81);
    CHECK(std::multiset<Int>(s44.multiplicities.begin(), s44.multiplicities.end()) ==
          std::multiset<Int>{Int(1), Int(8), Int(24), Int(32), Int(16)});

    CHECK_THROWS_AS(block_spectrum(1, 2, 2), std::domain_error);
}

TEST_CASE("annihilating products and eigenvalue ranks per configuration") {
    const auto M = disc2();
    Calc c(M);
    for (int p : {2, 3}) {
        for (Simplex sigma : M.members()) {
            Simplex tau = sigma;
            while (true) {
                for (const auto& [cfg, tuples] : config_blocks(M, p, sigma, tau)) {
                    const int n = vertex_count(sigma), k = vertex_count(tau);
                    const auto spec = block_spectrum(n, k, p);
                    REQUIRE(static_cast<Int>(tuples.size()) == ipow(p, k));
                    const IMat lap = laplace_loc_imat(c, tuples);
                    // product of (lap - eigenvalue) over all eigenvalues vanishes
                    IMat prod = imat_shift(lap, Int(-spec.eigenvalues[0]));
                    for (std::size_t i = 1; i < spec.eigenvalues.size(); ++i)
                        prod = imat_mul(prod, imat_shift(lap, Int(-spec.eigenvalues[i])));
                    CHECK(imat_is_zero(prod));
                    // dim ker(lap - eigenvalue) recovers each multiplicity
                    for (std::size_t i = 0; i < spec.eigenvalues.size(); ++i) {
                        Mat shifted(lap.size(), std::vector<Rat>(lap.size()));
                        for (std::size_t r = 0; r < lap.size(); ++r)
                            for (std::size_t cix = 0; cix < lap.size(); ++cix)
                                shifted[r][cix] = Rat(lap[r][cix]);
                        for (std::size_t r = 0; r < lap.size(); ++r)
                            shifted[r][r] -= spec.eigenvalues[i];
                        const int nullity = static_cast<int>(lap.size()) - mat_rank(shifted);
                        CHECK(Int(nullity) == spec.multiplicities[i]);
                    }
                }
                if (tau == 0) break;
                tau = (tau - 1) & sigma;
            }
        }
    }
}

TEST_CASE("polynomial pseudo-inverse") {
    const auto M = disc2();
    Calc c(M);
    const Simplex v1 = simplex_of({1}), e12 = simplex_of({1, 2});

    // invertible block: (1/8) [[3,1],[1,3]]
    CHECK(pinv_chain(c, Tuple{e12, v1}) ==
          chain_of({{Tuple{e12, v1}, Rat(3, 8)}, {Tuple{v1, e12}, Rat(1, 8)}}, 2));

    // scalar block without free vertices: 1/(n p)
    CHECK(pinv_chain(c, Tuple{e12, e12}) == chain_of({{Tuple{e12, e12}, Rat(1, 4)}}, 2));

    // fully free block: inverse on the image, zero on the kernel
    const auto basis3 = enumerate_basis(M, 2, e12, e12);
    const Chain kernel = chain_of({{basis3[0], 1}, {basis3[1], -1}, {basis3[2], 1},
                                   {basis3[3], 1}}, 2);
    CHECK(pinv_chain(c, kernel).zero());
    for (const Tuple& e : basis3) {
        const Chain x = unit_chain(e);
        // lap pinv lap = lap and pinv lap pinv = pinv
        CHECK(laplace_loc(c, pinv_chain(c, laplace_loc(c, x))) == laplace_loc(c, x));
        CHECK(pinv_chain(c, laplace_loc(c, pinv_chain(c, x))) == pinv_chain(c, x));
    }

    // tuples without an envelope are annihilated
    const auto Ms = star4();
    Calc cs(Ms);
    CHECK(pinv_chain(cs, Tuple{simplex_of({1, 2}), simplex_of({2, 3})}).zero());
}

TEST_CASE("closed-form pseudo-inverse agrees with the polynomial one") {
    const auto M = disc2();
    Calc c(M);
    const Simplex v1 = simplex_of({1}), e12 = simplex_of({1, 2});

    CHECK(comb_inverse(M, Tuple{e12, v1}) ==
          chain_of({{Tuple{e12, v1}, Rat(3, 8)}, {Tuple{v1, e12}, Rat(1, 8)}}, 2));
    CHECK(comb_inverse(M, Tuple{e12, e12}) == chain_of({{Tuple{e12, e12}, Rat(1, 4)}}, 2));

    for (const Tuple& e : enumerate_basis(M, 2))
        CHECK(comb_inverse(M, e) == pinv_chain(c, e));
    for (const Tuple& e : enumerate_basis(M, 3))
        CHECK(comb_inverse(M, e) == pinv_chain(c, e));

    const auto Mt = simplex3();
    Calc ct(Mt);
    for (const Tuple& e : enumerate_basis(Mt, 2))
        CHECK(comb_inverse(Mt, e) == pinv_chain(ct, e));
}

TEST_CASE("local homotopy") {
    const auto M = disc2();
    Calc c(M);

    // vanishes when the slots share no vertices, and on single forms
    CHECK(local_K(c, Tuple{simplex_of({1}), simplex_of({2, 3})}).zero());
    for (Simplex s : M.members()) CHECK(local_K(c, Tuple::single(s)).zero());

    const auto Ms = star4();
    Calc cs(Ms);
    for (const auto* pc : {&c, &cs}) {
        const auto& MM = pc->complex();
        for (const Tuple& e : enumerate_basis(MM, 2)) {
            // [K] squares to zero
            CHECK(local_K(*pc, local_K(*pc, e)).zero());
            // [d][K] + [K][d] is the identity exactly on blocks with k < n
            if (!envelope(MM, e.s.data(), 2)) continue;
            const FreeInfo fi = free_info(MM, e.s.data(), 2);
            if (fi.k >= fi.n) continue;
            Chain h = strict_d(*pc, local_K(*pc, e));
            h += local_K(*pc, strict_d(*pc, e));
            CHECK(h == unit_chain(e));
        }
    }
}

TEST_CASE("mixed-part identity and the non-locality cancellation") {
    for (const auto& M : {disc2(), star4()}) {
        Calc c(M);
        for (int p : {2, 3}) {
            const CheckResult res = verify_plusminus(c, p);
            INFO(res.counterexample);
            CHECK(res.pass);
            CHECK(res.basis_count == static_cast<int>(enumerate_basis(M, p).size()));
            for (const Tuple& e : enumerate_basis(M, p))
                CHECK(strict_d(c, strict_d(c, e)).zero());
        }
    }

    // the defect made of envelope-destroying terms is invisible to strictly
    // local operations
    const auto Ms = star4();
    Calc cs(Ms);
    bool defect_seen = false;
    for (const Tuple& e : enumerate_basis(Ms, 2)) {
        Chain eps = lowering_d(cs, local_K(cs, e));
        eps += local_K(cs, lowering_d(cs, e));
        if (!eps.zero()) defect_seen = true;
        CHECK(strict_d(cs, eps).zero());
        CHECK(strict_del(cs, eps).zero());
        CHECK(laplace_loc(cs, eps).zero());
    }
    CHECK(defect_seen);
}
