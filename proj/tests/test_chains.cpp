#include <catch2/catch_amalgamated.hpp>

#include "forms/calculus.hpp"
#include "forms/chain.hpp"

using namespace forms;

namespace {

OrderedComplex disc2() { return OrderedComplex::from_maximal({{1, 2, 3}}); }
OrderedComplex star4() { return OrderedComplex::from_maximal({{1, 2}, {2, 3}, {2, 4}}); }

} // namespace

TEST_CASE("tuple basics") {
    Tuple e{simplex_of({1}), simplex_of({1, 2})};
    CHECK(e.grade() == 2);
    CHECK(tuple_degree(e) == 1);
    CHECK(tuple_str(e) == "{1}⊗{1,2}");

    Tuple with_empty{kEmptySimplex, simplex_of({2})};
    CHECK(tuple_degree(with_empty) == -1);

    Tuple abc{simplex_of({1}), simplex_of({2}), simplex_of({3})};
    CHECK(abc.sub(1, 2) == Tuple{simplex_of({2}), simplex_of({3})});
    CHECK(abc.spliced(0, 2, simplex_of({1, 2})) == Tuple{simplex_of({1, 2}), simplex_of({3})});
    CHECK(abc.replaced(2, kEmptySimplex) ==
          Tuple{simplex_of({1}), simplex_of({2}), kEmptySimplex});
}

TEST_CASE("chain arithmetic keeps terms normalized") {
    Chain c(1);
    c.add(Tuple::single(simplex_of({1})), Rat(1, 2));
    c.add(Tuple::single(simplex_of({1})), Rat(-1, 2));
    CHECK(c.zero());

    c.add(Tuple::single(simplex_of({2})), Rat(2, 4));
    CHECK(c.coeff(Tuple::single(simplex_of({2}))) == Rat(1, 2));
    CHECK(rat_str(c.coeff(Tuple::single(simplex_of({2})))) == "1/2");

    Chain d1(1);
    d1.add(Tuple::single(simplex_of({3})), 3);
    c.axpy(Rat(1, 3), d1);
    CHECK(c.coeff(Tuple::single(simplex_of({3}))) == 1);
    c *= 0;
    CHECK(c.zero());
}

TEST_CASE("grade-1 basis is the canonical member list") {
    const auto M = disc2();
    const auto basis = enumerate_basis(M, 1);
    REQUIRE(basis.size() == 8);
    const std::vector<Simplex> expect = {
        kEmptySimplex,        simplex_of({1}),    simplex_of({2}),    simplex_of({3}),
        simplex_of({1, 2}),   simplex_of({1, 3}), simplex_of({2, 3}), simplex_of({1, 2, 3})};
    for (std::size_t i = 0; i < expect.size(); ++i) CHECK(basis[i] == Tuple::single(expect[i]));
}

TEST_CASE("filtered basis: full envelope and free set on an edge") {
    const auto M = disc2();
    const Simplex e12 = simplex_of({1, 2});
    const auto basis = enumerate_basis(M, 2, e12, e12);
    REQUIRE(basis.size() == 4);
    CHECK(basis[0] == Tuple{kEmptySimplex, e12});
    CHECK(basis[1] == Tuple{simplex_of({1}), simplex_of({2})});
    CHECK(basis[2] == Tuple{simplex_of({2}), simplex_of({1})});
    CHECK(basis[3] == Tuple{e12, kEmptySimplex});
}

TEST_CASE("filtered basis: empty envelope holds only the all-empty tuple") {
    const auto M = disc2();
    const auto basis = enumerate_basis(M, 2, kEmptySimplex, kEmptySimplex);
    REQUIRE(basis.size() == 1);
    CHECK(basis[0] == Tuple{kEmptySimplex, kEmptySimplex});
    CHECK_THROWS_AS(enumerate_basis(star4(), 2, simplex_of({1, 3}), kEmptySimplex),
                    std::domain_error);
}

TEST_CASE("envelope/free-set blocks partition the tuples with an envelope") {
    for (const auto& M : {disc2(), star4()}) {
        const int p = 2;
        const auto all = enumerate_basis(M, p);
        std::size_t absent = 0;
        for (const Tuple& e : all)
            if (!envelope(M, e.s.data(), p)) ++absent;
        std::size_t covered = 0;
        for (Simplex sigma : M.members()) {
            // free sets are subsets of the envelope; enumerate all of them
            std::vector<Simplex> subs;
            Simplex sub = sigma;
            while (true) {
                subs.push_back(sub);
                if (sub == 0) break;
                sub = (sub - 1) & sigma;
            }
            for (Simplex tau : subs) covered += enumerate_basis(M, p, sigma, tau).size();
        }
        CHECK(covered + absent == all.size());
    }
}

TEST_CASE("apply, materialize and compose on the vertex-addition operator") {
    const auto M = disc2();
    Calc calc(M);
    const auto dop = materialize(M, 1, 1, +1,
                                 [&](const Tuple& e) { return calc.d_form(e[0]); });

    Chain x = unit_chain(Tuple::single(simplex_of({1, 2})));
    Chain dx = apply(dop, x);
    REQUIRE(dx.terms.size() == 1);
    CHECK(dx.coeff(Tuple::single(simplex_of({1, 2, 3}))) == 1);

    Chain v1 = apply(dop, unit_chain(Tuple::single(simplex_of({1}))));
    CHECK(v1.coeff(Tuple::single(simplex_of({1, 2}))) == -1);
    CHECK(v1.coeff(Tuple::single(simplex_of({1, 3}))) == -1);
    CHECK(v1.terms.size() == 2);

    const auto dd = compose(dop, dop);
    CHECK(dd.cols.empty());
    CHECK(dd.degree == 2);

    const auto id = materialize(M, 1, 1, 0, [](const Tuple& e) { return unit_chain(e); });
    const auto d_id = compose(dop, id);
    CHECK(d_id.cols == dop.cols);

    Chain wrong(2);
    CHECK_THROWS_AS(apply(dop, wrong), std::invalid_argument);
}

TEST_CASE("operator algebra: add, scale, transpose") {
    const auto M = disc2();
    Calc calc(M);
    const auto dop = materialize(M, 1, 1, +1,
                                 [&](const Tuple& e) { return calc.d_form(e[0]); });
    const auto delop = materialize(M, 1, 1, -1,
                                   [&](const Tuple& e) { return calc.del_form(e[0]); });

    // vertex removal is exactly the transpose of vertex addition
    const auto dT = transpose(dop);
    CHECK(dT.degree == -1);
    CHECK(dT.cols == delop.cols);
    CHECK(transpose(dT).cols == dop.cols);

    const auto zero = add(dop, scale(dop, -1));
    CHECK(zero.cols.empty());

    const auto twice = add(dop, dop);
    CHECK(twice.cols == scale(dop, 2).cols);
}

TEST_CASE("block matrices detect leaks and capture closed blocks") {
    const auto M = disc2();
    Calc calc(M);
    // the tensor Laplacian on a closed simplex is a scalar, so every
    // (envelope, free-set) block closes up and is a multiple of the identity
    const auto lap = materialize(M, 2, 2, 0,
                                 [&](const Tuple& e) { return fock_laplace(calc, unit_chain(e)); });
    const Simplex e12 = simplex_of({1, 2});
    const Mat m = block_matrix(lap, M, e12, simplex_of({2}));
    REQUIRE(m.size() == 2);
    CHECK(m == mat_mul(mat_identity(2), {{Rat(6), Rat(0)}, {Rat(0), Rat(6)}}));

    // vertex addition on both slots leaves the block: expect a leak report
    const auto draise = materialize(M, 2, 2, +1, [&](const Tuple& e) {
        Chain out(2);
        for (const auto& [t, c] : calc.d_form(e[0]).terms) out.add(e.replaced(0, t[0]), c);
        return out;
    });
    CHECK_THROWS_AS(block_matrix(draise, M, e12, simplex_of({2})), std::runtime_error);
    CHECK_THROWS_AS(block_matrix(materialize(M, 2, 1, -1, [&](const Tuple&) { return Chain(1); }),
                                 M, e12, e12),
                    std::invalid_argument);
}

TEST_CASE("exact matrix utilities") {
    Mat a = {{Rat(2), Rat(1)}, {Rat(1), Rat(2)}};
    Mat inv = mat_inverse(a);
    CHECK(mat_mul(a, inv) == mat_identity(2));
    CHECK(inv[0][0] == Rat(2, 3));
    CHECK(inv[0][1] == Rat(-1, 3));

    Mat sing = {{Rat(1), Rat(2)}, {Rat(2), Rat(4)}};
    CHECK(mat_rank(sing) == 1);
    CHECK_THROWS_AS(mat_inverse(sing), std::domain_error);

    // (A - I)(A - 3I) annihilates the 2x2 symmetric matrix above
    Mat prod = mat_mul(mat_shift(a, Rat(-1)), mat_shift(a, Rat(-3)));
    CHECK(mat_is_zero(prod));

    IMat ia = {{Int(2), Int(1)}, {Int(1), Int(2)}};
    IMat iprod = imat_mul(imat_shift(ia, Int(-1)), imat_shift(ia, Int(-3)));
    CHECK(imat_is_zero(iprod));

    CHECK(mat_apply(a, {Rat(1), Rat(1)}) == std::vector<Rat>{Rat(3), Rat(3)});
}
