#include "doctest.h"

#include "qtrop/cyclotomic.hpp"
#include "qtrop/errors.hpp"

using namespace qtrop;

TEST_CASE("cyclotomic polynomial and basis")
{
    auto f4 = CycloField::make(4);
    CHECK(f4->degree() == 2);  // Phi_4 = x^2 + 1
    CHECK(f4->min_poly()[0] == 1);
    CHECK(f4->min_poly()[1] == 0);
    CHECK(f4->min_poly()[2] == 1);

    auto f12 = CycloField::make(12);
    CHECK(f12->degree() == 4);  // Phi_12 = x^4 - x^2 + 1
    CHECK(f12->min_poly()[2] == -1);

    auto f1 = CycloField::make(1);
    CHECK(f1->degree() == 1);
    auto f2 = CycloField::make(2);
    CHECK(f2->degree() == 1);
    CHECK(f2->zeta_pow(1) == f2->from_rat(rat(-1)));
}

TEST_CASE("arithmetic in Q(i)")
{
    auto f = CycloField::make(4);
    Cyclo i = f->zeta_pow(1);
    CHECK(i * i == f->from_rat(rat(-1)));
    CHECK(i.pow(4) == f->one());
    Cyclo z = f->from_coords({rat(1), rat(1)});  // 1 + i
    CHECK(z * z == f->from_coords({rat(0), rat(2)}));
    CHECK(z * z.inverse() == f->one());
    CHECK((z - z).is_zero());
}

TEST_CASE("roots of unity including odd conductors")
{
    auto f3 = CycloField::make(3);
    CHECK(f3->max_root_of_unity_order() == 6);
    auto z6 = f3->root_of_unity(6);
    REQUIRE(z6);
    CHECK(z6->pow(6) == f3->one());
    CHECK(z6->pow(3) == f3->from_rat(rat(-1)));
    CHECK(z6->pow(2) == f3->zeta_pow(1));
    CHECK(!f3->root_of_unity(4));

    auto f12 = CycloField::make(12);
    for (unsigned long d : {1ul, 2ul, 3ul, 4ul, 6ul, 12ul}) {
        auto z = f12->root_of_unity(d);
        REQUIRE(z);
        CHECK(z->pow(static_cast<long>(d)) == f12->one());
        for (unsigned long k = 1; k < d; ++k)
            CHECK(z->pow(static_cast<long>(k)) != f12->one());
    }
    CHECK(f12->all_roots_of_unity(4).size() == 4);
    CHECK(f12->all_roots_of_unity(8).size() == 4);  // gcd(8, 12)
}

TEST_CASE("monomial detection")
{
    auto f = CycloField::make(12);
    Cyclo v = f->zeta_pow(7) * rat(-3, 5);
    auto m = v.as_monomial();
    REQUIRE(m);
    CHECK(f->zeta_pow(static_cast<long>(m->zeta_exp)) * m->scale == v);
    Cyclo w = f->one() + f->zeta_pow(1);
    CHECK(!w.as_monomial());
}

TEST_CASE("square roots: rational, Gauss sums, and failures")
{
    auto f4 = CycloField::make(4);
    auto r = f4->from_rat(rat(4)).nth_root(2);
    REQUIRE(r);
    CHECK(*r * *r == f4->from_rat(rat(4)));

    // sqrt(-1) = i in Q(i)
    auto ri = f4->from_rat(rat(-1)).nth_root(2);
    REQUIRE(ri);
    CHECK(*ri * *ri == f4->from_rat(rat(-1)));

    // sqrt(2) is not in Q(i)
    CHECK(!f4->from_rat(rat(2)).nth_root(2));

    // but is in Q(zeta_8), via the Gauss-sum path
    auto f8 = CycloField::make(8);
    auto r2 = f8->from_rat(rat(2)).nth_root(2);
    REQUIRE(r2);
    CHECK(*r2 * *r2 == f8->from_rat(rat(2)));

    // sqrt(-3) lives in Q(zeta_3)
    auto f3 = CycloField::make(3);
    auto rm3 = f3->from_rat(rat(-3)).nth_root(2);
    REQUIRE(rm3);
    CHECK(*rm3 * *rm3 == f3->from_rat(rat(-3)));

    // sqrt(5) in Q(zeta_5) but not in Q(zeta_8)
    auto f5 = CycloField::make(5);
    auto r5 = f5->from_rat(rat(5)).nth_root(2);
    REQUIRE(r5);
    CHECK(*r5 * *r5 == f5->from_rat(rat(5)));
    CHECK(!f8->from_rat(rat(5)).nth_root(2));

    // monomial with twisted phase: sqrt(-9/4 * zeta_12^2)
    auto f12 = CycloField::make(12);
    Cyclo v = f12->zeta_pow(2) * rat(-9, 4);
    auto rv = v.nth_root(2);
    REQUIRE(rv);
    CHECK(*rv * *rv == v);
}

TEST_CASE("higher roots")
{
    auto f12 = CycloField::make(12);
    // cube root of 27 zeta^3
    Cyclo v = f12->zeta_pow(3) * rat(27);
    auto r = v.nth_root(3);
    REQUIRE(r);
    CHECK(r->pow(3) == v);

    // 4th root of 16
    auto r4 = f12->from_rat(rat(16)).nth_root(4);
    REQUIRE(r4);
    CHECK(r4->pow(4) == f12->from_rat(rat(16)));

    // 6th root of zeta_12^6 = -1
    auto r6 = f12->zeta_pow(6).nth_root(6);
    REQUIRE(r6);
    CHECK(r6->pow(6) == f12->zeta_pow(6));

    // 2^{1/3} is not in any cyclotomic field
    CHECK(!f12->from_rat(rat(2)).nth_root(3));

    // all roots enumerate the full mu_n orbit
    auto roots = f12->from_rat(rat(16)).all_nth_roots(4);
    CHECK(roots.size() == 4);
    for (const auto& x : roots)
        CHECK(x.pow(4) == f12->from_rat(rat(16)));
}
