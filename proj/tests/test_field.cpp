#include <catch2/catch_amalgamated.hpp>

#include "shl/field.hpp"

using namespace shl;

namespace {
std::vector<Int> ints(std::initializer_list<long> v) {
    std::vector<Int> out;
    for (long x : v) out.emplace_back(x);
    return out;
}
}  // namespace

TEST_CASE("minimal polynomials of 2cos(pi/N)", "[field]") {
    // frozen values, little-endian coefficient lists, monic
    CHECK(FieldDescriptor::create(1)->minimal_polynomial() == ints({2, 1}));
    CHECK(FieldDescriptor::create(2)->minimal_polynomial() == ints({0, 1}));
    CHECK(FieldDescriptor::create(3)->minimal_polynomial() == ints({-1, 1}));
    CHECK(FieldDescriptor::create(4)->minimal_polynomial() == ints({-2, 0, 1}));
    CHECK(FieldDescriptor::create(5)->minimal_polynomial() == ints({-1, -1, 1}));
    CHECK(FieldDescriptor::create(6)->minimal_polynomial() == ints({-3, 0, 1}));
    CHECK(FieldDescriptor::create(7)->minimal_polynomial() == ints({1, -2, -1, 1}));
    CHECK(FieldDescriptor::create(12)->minimal_polynomial() == ints({1, 0, -4, 0, 1}));
}

TEST_CASE("field degrees", "[field]") {
    CHECK(FieldDescriptor::create(3)->degree() == 1);
    CHECK(FieldDescriptor::create(5)->degree() == 2);
    CHECK(FieldDescriptor::create(7)->degree() == 3);
    CHECK(FieldDescriptor::create(12)->degree() == 4);
    CHECK(FieldDescriptor::create(15)->degree() == 4);
}

TEST_CASE("sign determination picks the largest root", "[field]") {
    auto f = FieldDescriptor::create(5);  // theta = golden ratio 1.6180...
    auto th = AlgebraicReal::generator(f);
    auto one = AlgebraicReal::one(f);
    CHECK((th - one).sign() == 1);
    CHECK((th - AlgebraicReal::rational(f, Rat(2))).sign() == -1);
    CHECK((th - AlgebraicReal::rational(f, Rat(13, 8))).sign() == -1);
    CHECK((th - AlgebraicReal::rational(f, Rat(8, 5))).sign() == 1);
    CHECK((th * th - th - one).sign() == 0);
    CHECK((th * th - th - one).is_zero());

    auto f7 = FieldDescriptor::create(7);  // theta = 1.80193...
    auto t7 = AlgebraicReal::generator(f7);
    CHECK((t7 - AlgebraicReal::rational(f7, Rat(9, 5))).sign() == 1);
    CHECK((t7 - AlgebraicReal::rational(f7, Rat(1803, 1000))).sign() == -1);
}

TEST_CASE("arithmetic and inverses", "[field]") {
    auto f = FieldDescriptor::create(5);
    auto th = AlgebraicReal::generator(f);
    auto one = AlgebraicReal::one(f);
    CHECK(th * th == th + one);              // golden ratio relation
    CHECK(th.inverse() == th - one);         // 1/phi = phi - 1
    CHECK((th.inverse() * th) == one);
    CHECK((th + th) == Rat(2) * th);
    CHECK((th - th).is_zero());
    auto q = AlgebraicReal::rational(f, Rat(-3, 7));
    CHECK(q.is_rational());
    CHECK(q.rational_part() == Rat(-3, 7));
    CHECK(q.inverse().rational_part() == Rat(-7, 3));
    CHECK_THROWS_AS(AlgebraicReal::zero(f).inverse(), InputError);

    auto f12 = FieldDescriptor::create(12);
    auto t = AlgebraicReal::generator(f12);
    auto tinv = t.inverse();
    CHECK(t * tinv == AlgebraicReal::one(f12));
}

TEST_CASE("embeddings of 2cos(pi/m) for divisors", "[field]") {
    auto f = FieldDescriptor::create(12);
    CHECK(AlgebraicReal::embed(f, 1).rational_part() == Rat(-2));
    CHECK(AlgebraicReal::embed(f, 2).rational_part() == Rat(0));
    CHECK(AlgebraicReal::embed(f, 3).rational_part() == Rat(1));
    auto r2 = AlgebraicReal::embed(f, 4);   // sqrt(2)
    auto r3 = AlgebraicReal::embed(f, 6);   // sqrt(3)
    auto th = AlgebraicReal::embed(f, 12);  // the generator itself
    CHECK(th == AlgebraicReal::generator(f));
    CHECK(r2 * r2 == AlgebraicReal::rational(f, Rat(2)));
    CHECK(r3 * r3 == AlgebraicReal::rational(f, Rat(3)));
    CHECK(th * th == AlgebraicReal::rational(f, Rat(2)) + r3);
    CHECK(r2.sign() == 1);
    CHECK(r3.sign() == 1);
    CHECK((r3 - r2).sign() == 1);
    CHECK_THROWS_AS(AlgebraicReal::embed(f, 5), InputError);

    auto f5 = FieldDescriptor::create(5);
    CHECK_THROWS_AS(AlgebraicReal::embed(f5, 4), InputError);
    CHECK(AlgebraicReal::embed(f5, 5) == AlgebraicReal::generator(f5));
}

TEST_CASE("ordering is total and exact", "[field]") {
    auto f = FieldDescriptor::create(12);
    auto r2 = AlgebraicReal::embed(f, 4);
    auto r3 = AlgebraicReal::embed(f, 6);
    // sqrt(2) + sqrt(3) vs 3.146: r2 + r3 = 3.14626...
    auto s = r2 + r3;
    CHECK((s - AlgebraicReal::rational(f, Rat(3146, 1000))).sign() == 1);
    CHECK((s - AlgebraicReal::rational(f, Rat(3147, 1000))).sign() == -1);
    CHECK(s.compare(AlgebraicReal::rational(f, Rat(22, 7))) == 1);
    double a = s.approx();
    CHECK(a > 3.14626);
    CHECK(a < 3.14627);
}

TEST_CASE("keys are stable and canonical", "[field]") {
    auto f = FieldDescriptor::create(5);
    auto th = AlgebraicReal::generator(f);
    auto a = th * th;            // 1 + theta
    auto b = th + AlgebraicReal::one(f);
    CHECK(a.key() == b.key());
    CHECK(a.str() == b.str());
    CHECK(AlgebraicReal::zero(f).key() != AlgebraicReal::one(f).key());
}

TEST_CASE("mixed-field operations are rejected", "[field]") {
    auto a = AlgebraicReal::generator(FieldDescriptor::create(5));
    auto b = AlgebraicReal::generator(FieldDescriptor::create(7));
    CHECK_THROWS_AS(a + b, InternalError);
}
