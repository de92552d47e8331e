#include <catch2/catch_amalgamated.hpp>
#include <set>

#include "shl/coxeter.hpp"

using namespace shl;

namespace {
CoxeterMatrix dihedral(unsigned m) { return CoxeterMatrix{{{1, m}, {m, 1}}}; }

CoxeterMatrix a3() { return CoxeterMatrix{{{1, 3, 2}, {3, 1, 3}, {2, 3, 1}}}; }

CoxeterMatrix h3() { return CoxeterMatrix{{{1, 5, 2}, {5, 1, 3}, {2, 3, 1}}}; }

using Word = std::vector<std::uint8_t>;

// Bruhat oracle: z <= x iff z is reached by a reduced subword of one fixed
// reduced word of x
std::set<ElementId> bruhat_lower_set(CoxeterSystem& W, ElementId x) {
    Word wd = W.word(x);
    std::set<ElementId> out;
    for (std::uint32_t mask = 0; mask < (1u << wd.size()); ++mask) {
        Word sub;
        for (size_t i = 0; i < wd.size(); ++i)
            if (mask & (1u << i)) sub.push_back(wd[i]);
        ElementId z = W.element_of_word(sub);
        if (W.length(z) == sub.size()) out.insert(z);
    }
    return out;
}
}  // namespace

TEST_CASE("dihedral group orders and words", "[coxeter]") {
    for (unsigned m : {2u, 3u, 4u, 5u, 6u}) {
        auto W = CoxeterSystem::build(dihedral(m), RepChoice::geometric);
        auto all = W->enumerate_group();
        CHECK(all.size() == 2 * m);
        CHECK(W->group_known_finite());
    }
    auto W = CoxeterSystem::build(dihedral(3), RepChoice::geometric);
    W->enumerate_group();
    CHECK(W->field()->degree() == 1);
    CHECK(W->word_str(W->element_of_word({0, 1, 0})) == "s t s");
    CHECK(W->element_of_word({0, 1, 0}) == W->element_of_word({1, 0, 1}));
    CHECK(W->length(W->element_of_word({0, 1, 0, 1})) == 2);
}

TEST_CASE("geometric action on simple roots", "[coxeter]") {
    auto W = CoxeterSystem::build(dihedral(3), RepChoice::geometric);
    auto s = W->element_of_word({0});
    // s . alpha_t = alpha_s + alpha_t
    auto image = W->act_row(s, W->simple_root_row(1));
    CHECK(image[0] == AlgebraicReal::one(W->field()));
    CHECK(image[1] == AlgebraicReal::one(W->field()));
    // s . alpha_s = -alpha_s
    auto neg = W->act_row(s, W->simple_root_row(0));
    CHECK(neg[0] == -AlgebraicReal::one(W->field()));
    CHECK(neg[1].is_zero());
    CHECK(W->pairing(0, 1) == AlgebraicReal::rational(W->field(), Rat(-1)));
}

TEST_CASE("rank three groups enumerate fully", "[coxeter]") {
    auto A3 = CoxeterSystem::build(a3(), RepChoice::geometric);
    auto all = A3->enumerate_group();
    CHECK(all.size() == 24);
    std::map<unsigned, int> by_len;
    for (auto w : all) by_len[A3->length(w)]++;
    CHECK(by_len == std::map<unsigned, int>{{0, 1}, {1, 3}, {2, 5}, {3, 6}, {4, 5}, {5, 3}, {6, 1}});

    auto H3 = CoxeterSystem::build(h3(), RepChoice::geometric);
    CHECK(H3->enumerate_group().size() == 120);
    CHECK(H3->field()->conductor() == 5);
    CHECK(H3->field()->degree() == 2);
}

TEST_CASE("universal rank two needs the doubled representation", "[coxeter]") {
    CoxeterMatrix inf{{{1, 0}, {0, 1}}};
    CHECK_THROWS_AS(CoxeterSystem::build(inf, RepChoice::geometric), InputError);
    auto W = CoxeterSystem::build(inf, RepChoice::doubled);
    CHECK(W->rep_dim() == 4);
    CHECK(W->enumerate_ideal(3).size() == 7);
    CHECK(W->enumerate_ideal(6).size() == 13);
    CHECK_FALSE(W->group_known_finite());
    CHECK(W->pairing(0, 1) == AlgebraicReal::rational(W->field(), Rat(-2)));
    // infinite alternating words stay reduced
    CHECK(W->is_reduced({0, 1, 0, 1, 0, 1, 0}));
    CHECK_FALSE(W->is_reduced({0, 1, 1, 0}));
}

TEST_CASE("shortlex words are minimal and stable", "[coxeter]") {
    auto W = CoxeterSystem::build(a3(), RepChoice::geometric);
    for (auto x : W->enumerate_group()) {
        auto words = W->all_reduced_words(x);
        auto min = *std::min_element(words.begin(), words.end());
        CHECK(W->word(x) == min);
        if (W->length(x) > 0) {
            // shortlex word of x is shortlex word of xs plus its last letter
            auto wd = W->word(x);
            auto s = wd.back();
            auto prefix = W->word(W->right(x, s));
            wd.pop_back();
            CHECK(wd == prefix);
        }
    }
}

TEST_CASE("Bruhat order agrees with the subword oracle", "[coxeter]") {
    auto W = CoxeterSystem::build(a3(), RepChoice::geometric);
    auto all = W->enumerate_group();
    for (auto x : all) {
        auto lower = bruhat_lower_set(*W, x);
        for (auto y : all) CHECK(W->bruhat_leq(y, x) == (lower.count(y) > 0));
    }
}

TEST_CASE("inverses and products grown on demand", "[coxeter]") {
    auto W = CoxeterSystem::build(a3(), RepChoice::geometric);
    W->enumerate_ideal(1);
    auto x = W->element_of_word({0, 1, 2});
    CHECK(W->length(x) == 3);
    auto xi = W->inverse_element(x);
    CHECK(W->word(xi) == Word{2, 1, 0});
    CHECK(W->matrix(xi) == W->inverse_matrix(x));
    // left descent into an element never seen before exercises the
    // deleted-letter path
    auto y = W->left(x, 0);
    CHECK(W->length(y) == 2);
    CHECK(W->word(y) == Word{1, 2});
}

TEST_CASE("dominant weights separate ascents from descents", "[coxeter]") {
    for (auto cm : {dihedral(4), dihedral(5), a3()}) {
        auto W = CoxeterSystem::build(cm, RepChoice::geometric);
        auto all = W->enumerate_group();
        auto rho = W->canonical_rho();
        for (size_t s = 0; s < W->rank(); ++s)
            CHECK(W->eval_on_coroot(rho, s) == AlgebraicReal::one(W->field()));
        W->validate_dominant_positivity(all, rho);
        std::vector<Rat> targets{Rat(2), Rat(7), Rat(3)};
        targets.resize(W->rank());
        W->validate_dominant_positivity(all, W->dominant_weight(targets));
    }
    CoxeterMatrix inf{{{1, 0}, {0, 1}}};
    auto W = CoxeterSystem::build(inf, RepChoice::doubled);
    auto ideal = W->enumerate_ideal(5);
    W->validate_dominant_positivity(ideal, W->canonical_rho());
}
