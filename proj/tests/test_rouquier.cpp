#include <catch2/catch_amalgamated.hpp>

#include "shl/rouquier.hpp"

using namespace shl;

namespace {

CoxeterPtr make_group(unsigned m) {
    return CoxeterSystem::build(CoxeterMatrix{{{1, m}, {m, 1}}}, RepChoice::geometric);
}

bool same_bs_complex(const BSComplex& A, const BSComplex& B) {
    if (A.lo != B.lo || A.terms != B.terms || A.diffs.size() != B.diffs.size()) return false;
    for (size_t t = 0; t < A.diffs.size(); ++t) {
        if (A.diffs[t].size() != B.diffs[t].size()) return false;
        for (size_t j = 0; j < A.diffs[t].size(); ++j)
            if (A.diffs[t][j] != B.diffs[t][j]) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("atom complexes have the two-term shape", "[rouquier]") {
    auto W = make_group(3);
    auto F = f_s(W, 0);
    REQUIRE(F.lo == 0);
    REQUIRE(F.hi() == 1);
    REQUIRE(F.terms[0] == std::vector<BSObject>{BSObject{{0}, 0}});
    REQUIRE(F.terms[1] == std::vector<BSObject>{BSObject{{}, -1}});
    const PolyMatrix& d = F.diffs[0][0][0];
    REQUIRE(d.rows() == 1);
    REQUIRE(d.cols() == 2);
    REQUIRE(d.m[0][0] == Poly::one(W->field(), W->rep_dim()));
    REQUIRE(d.m[0][1] == Poly::variable(W->field(), W->rep_dim(), 0));
    REQUIRE_THROWS_AS(f_s(W, 2), InputError);

    SECTION("the one-term unit complex is neutral for the tensor product") {
        auto U = unit_complex(W);
        REQUIRE(same_bs_complex(complex_tensor(F, U), F));
        REQUIRE(same_bs_complex(complex_tensor(U, F), F));
    }
}

TEST_CASE("tensor of two atoms carries the Koszul sign", "[rouquier]") {
    auto W = make_group(3);
    auto T = complex_tensor(f_s(W, 0), f_s(W, 1));
    REQUIRE(T.terms[0] == std::vector<BSObject>{BSObject{{0, 1}, 0}});
    REQUIRE(T.terms[1] == std::vector<BSObject>{BSObject{{0}, -1}, BSObject{{1}, -1}});
    REQUIRE(T.terms[2] == std::vector<BSObject>{BSObject{{}, -2}});

    // second differential: +mu on the piece that kept the first letter,
    // -mu on the piece that kept the second
    const FieldPtr& f = W->field();
    size_t n = W->rep_dim();
    REQUIRE(T.diffs[1][0][0].m[0][0] == Poly::one(f, n));
    REQUIRE(T.diffs[1][0][1].m[0][0] == -Poly::one(f, n));
    REQUIRE(T.diffs[1][0][1].m[0][1] == -Poly::variable(f, n, 1));

    SECTION("a three-letter tensor passes the built-in square check") {
        auto S = complex_tensor(T, f_s(W, 0));
        REQUIRE(S.terms[0].size() == 1);
        REQUIRE(S.terms[1].size() == 3);
        REQUIRE(S.terms[2].size() == 3);
        REQUIRE(S.terms[3].size() == 1);
    }
}

TEST_CASE("full split produces exact section pairs", "[rouquier]") {
    auto W = make_group(3);
    SoergelCatalogue cat(W);

    SECTION("an indecomposable word splits as its own top") {
        auto pieces = full_split(cat, {0, 1});
        REQUIRE(pieces.size() == 1);
        REQUIRE(pieces[0].z == W->element_of_word({0, 1}));
        REQUIRE(pieces[0].shift == 0);
    }

    SECTION("a square word splits into two shifted copies") {
        auto pieces = full_split(cat, {0, 0});
        REQUIRE(pieces.size() == 2);
        ElementId s = W->element_of_word({0});
        REQUIRE(pieces[0].z == s);
        REQUIRE(pieces[0].shift == 1);
        REQUIRE(pieces[1].z == s);
        REQUIRE(pieces[1].shift == -1);
        // cross projections vanish on the complementary copy
        const Summand& S = cat.at(s);
        REQUIRE((pieces[0].prj * pieces[1].inc).is_zero());
        REQUIRE((pieces[1].prj * pieces[0].inc).is_zero());
        REQUIRE(pieces[0].prj * pieces[0].inc == S.e);
    }
}

TEST_CASE("minimalization removes contractible pairs", "[rouquier]") {
    auto W = make_group(3);
    SoergelCatalogue cat(W);
    const FieldPtr& f = W->field();
    size_t n = W->rep_dim();

    SECTION("the cone of the identity collapses to zero") {
        BSComplex cone;
        cone.W = W;
        cone.terms = {{BSObject{{0}, 0}}, {BSObject{{0}, 0}}};
        cone.diffs = {BlockMatrix{BlockRow{PolyMatrix::identity(f, n, 2)}}};
        auto C = minimalize(cat, cone);
        REQUIRE(C.objects() == 0);
    }

    SECTION("a square word cancels one shifted pair") {
        auto C = minimalize(cat, complex_tensor(f_s(W, 0), f_s(W, 0)));
        ElementId s = W->element_of_word({0});
        REQUIRE(C.terms[0] == std::vector<SummandObject>{SummandObject{s, 1}});
        REQUIRE(C.terms[1] == std::vector<SummandObject>{SummandObject{s, -1}});
        REQUIRE(C.terms[2] == std::vector<SummandObject>{SummandObject{W->identity_id(), -2}});

        SECTION("minimal complexes pass through unchanged") {
            auto C2 = minimalize(cat, C);
            REQUIRE(C2.terms == C.terms);
            REQUIRE(C2.objects() == C.objects());
        }
    }
}

TEST_CASE("two reduced words of a braid member give the same multiplicities", "[rouquier]") {
    auto W = make_group(3);
    SoergelCatalogue cat(W);
    ElementId x = W->element_of_word({0, 1, 0});

    auto F = rouquier_complex(cat, x);
    auto other = minimalize(
        cat, complex_tensor(complex_tensor(f_s(W, 1), f_s(W, 0)), f_s(W, 1)));
    REQUIRE(multiplicity_table(F) == multiplicity_table(other));
    REQUIRE(verify_linearity(cat, F, x).pass);
    REQUIRE(verify_linearity(cat, other, x).pass);
}

TEST_CASE("minimal complexes are linear with inverse canonical multiplicities", "[rouquier]") {
    auto W = make_group(4);
    SoergelCatalogue cat(W);
    for (ElementId x : W->enumerate_group()) {
        auto F = rouquier_complex(cat, x);
        auto R = verify_linearity(cat, F, x);
        INFO(R.witness);
        REQUIRE(R.pass);
    }

    SECTION("the multiplicity table of a two-letter element is explicit") {
        ElementId x = W->element_of_word({0, 1});
        auto table = multiplicity_table(rouquier_complex(cat, x));
        REQUIRE(table.at(x).at(0) == 1);
        REQUIRE(table.at(W->element_of_word({0})).at(1) == 1);
        REQUIRE(table.at(W->element_of_word({1})).at(1) == 1);
        REQUIRE(table.at(W->identity_id()).at(2) == 1);
    }

    SECTION("a mismatched element is reported") {
        auto F = rouquier_complex(cat, W->element_of_word({0, 1}));
        auto R = verify_linearity(cat, F, W->element_of_word({0}));
        REQUIRE_FALSE(R.pass);
        REQUIRE_FALSE(R.witness.empty());
    }
}

TEST_CASE("reduced complexes have one-dimensional cohomology", "[rouquier]") {
    auto W = make_group(3);
    SoergelCatalogue cat(W);
    for (auto word : std::vector<std::vector<std::uint8_t>>{{}, {0}, {0, 1}, {0, 1, 0}}) {
        ElementId x = W->element_of_word(word);
        auto R = cohomology_check(cat, rouquier_complex(cat, x), x);
        INFO(R.witness);
        REQUIRE(R.pass);
    }

    SECTION("the wrong element is detected") {
        ElementId x = W->element_of_word({0, 1});
        auto R = cohomology_check(cat, rouquier_complex(cat, x), W->element_of_word({0}));
        REQUIRE_FALSE(R.pass);
    }
}

TEST_CASE("linearity and cohomology hold across a rank-two group", "[rouquier]") {
    auto W = make_group(4);
    SoergelCatalogue cat(W);
    for (ElementId x : W->enumerate_group()) {
        auto F = rouquier_complex(cat, x);
        REQUIRE(verify_linearity(cat, F, x).pass);
        auto R = cohomology_check(cat, F, x);
        INFO(R.witness);
        REQUIRE(R.pass);
    }
}

TEST_CASE("the Lefschetz form factors through the first differential", "[rouquier]") {
    auto W = make_group(3);
    auto rho = W->canonical_rho();

    SECTION("a single letter breaks with weight rho of the coroot") {
        auto R = factored_lefschetz_check(W, {0}, std::nullopt, Rat(0), rho);
        REQUIRE(R.pass);
        REQUIRE(R.gammas.size() == 1);
        REQUIRE(R.gammas[0] == W->eval_on_coroot(rho, 0));
    }

    SECTION("two letters break with twisted weights") {
        auto R = factored_lefschetz_check(W, {0, 1}, std::nullopt, Rat(0), rho);
        REQUIRE(R.pass);
        REQUIRE(R.gammas[0] == W->eval_on_coroot(rho, 0));
        auto srho = W->act_row(W->element_of_word({0}), rho);
        REQUIRE(R.gammas[1] == W->eval_on_coroot(srho, 1));
    }

    SECTION("guards reject bad input") {
        REQUIRE_THROWS_AS(factored_lefschetz_check(W, {0, 0}, std::nullopt, Rat(0), rho), InputError);
        REQUIRE_THROWS_AS(factored_lefschetz_check(W, {0}, std::nullopt, Rat(1), rho), InputError);
        REQUIRE_THROWS_AS(factored_lefschetz_check(W, {0}, std::optional<size_t>(0), Rat(-1), rho), InputError);
        REQUIRE_THROWS_AS(factored_lefschetz_check(W, {0}, std::optional<size_t>(2), Rat(0), rho), InputError);
    }
}

TEST_CASE("the factored identity survives the zeta deformation", "[rouquier]") {
    auto W3 = make_group(3);
    auto rho3 = W3->canonical_rho();

    SECTION("ascent with a trailing letter") {
        auto R = factored_lefschetz_check(W3, {0, 1}, std::optional<size_t>(0), Rat(1), rho3);
        REQUIRE(R.pass);
        REQUIRE(R.gammas.size() == 3);
        auto tsrho = W3->act_row(W3->element_of_word({1, 0}), rho3);
        REQUIRE(R.gammas[2] == W3->eval_on_coroot(tsrho, 0) + W3->eval_on_coroot(rho3, 0));
    }

    SECTION("descent with a large zeta") {
        auto R = factored_lefschetz_check(W3, {0}, std::optional<size_t>(0), Rat(3), rho3);
        REQUIRE(R.pass);
        REQUIRE(R.gammas.size() == 2);
    }

    SECTION("a longer word in a rank-two group") {
        auto W4 = make_group(4);
        auto rho4 = W4->canonical_rho();
        auto R = factored_lefschetz_check(W4, {0, 1, 0}, std::optional<size_t>(1), Rat(1, 2), rho4);
        REQUIRE(R.pass);
    }
}

TEST_CASE("negative-degree morphisms between summands vanish", "[rouquier]") {
    auto W = make_group(3);
    SoergelCatalogue cat(W);
    ElementId e = W->identity_id();
    ElementId s = W->element_of_word({0});
    ElementId st = W->element_of_word({0, 1});
    ElementId sts = W->element_of_word({0, 1, 0});
    for (auto [a, b] : std::vector<std::pair<ElementId, ElementId>>{
             {s, s}, {s, st}, {st, sts}, {e, s}, {sts, st}, {st, st}}) {
        std::string w;
        INFO(w);
        REQUIRE(hom_vanishing_check(cat, a, b, 2, &w));
    }
}

TEST_CASE("inverse canonical coefficients alternate in sign", "[rouquier]") {
    for (unsigned m : {3u, 4u}) {
        auto W = make_group(m);
        CanonicalBasis C(W);
        std::string w;
        INFO(w);
        REQUIRE(inverse_kl_positive(C, W->enumerate_group(), &w));
    }
}
