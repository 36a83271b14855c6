#include "doctest.h"

#include <random>

#include "qtrop/errors.hpp"
#include "qtrop/scalar.hpp"

using namespace qtrop;

namespace {

Scalar random_scalar(const FieldPtr& f, std::mt19937_64& rng, bool allow_zero = false)
{
    std::uniform_int_distribution<int> nterms(allow_zero ? 0 : 1, 4);
    std::uniform_int_distribution<int> num(-6, 6);
    std::uniform_int_distribution<int> den(1, 3);
    std::uniform_int_distribution<int> expn(-4, 8);
    std::uniform_int_distribution<unsigned> idx(0, f->degree() - 1);
    int n = nterms(rng);
    std::vector<Scalar::Term> terms;
    std::vector<Rat> used;
    for (int i = 0; i < n; ++i) {
        std::vector<Rat> coords(f->degree(), Rat(0));
        int v = num(rng);
        coords[idx(rng)] = rat(v == 0 ? 1 : v, den(rng));
        // keep exponents distinct so the leading coefficient stays a monomial
        Rat e;
        do {
            e = rat(expn(rng), den(rng));
        } while (std::find(used.begin(), used.end(), e) != used.end());
        used.push_back(e);
        terms.push_back({e, f->from_coords(coords)});
    }
    return Scalar(f, std::move(terms), default_precision());
}

}  // namespace

TEST_CASE("valuation and reduce")
{
    auto f = CycloField::make(4);
    // pi^{3/2} + pi^2 at level 3/2
    Scalar s = Scalar::pi_pow(f, rat(3, 2)) + Scalar::pi_pow(f, rat(2));
    auto [nu, red] = valuation_and_reduce(s, rat(3, 2));
    REQUIRE(nu);
    CHECK(*nu == rat(3, 2));
    CHECK(red == f->one());

    // zero at precision 20
    Scalar z = Scalar::zero(f);
    auto [nu0, red0] = valuation_and_reduce(z, rat(0));
    CHECK(!nu0);
    CHECK(red0.is_zero());

    // 2 pi + 3 pi
    Scalar t = Scalar::monomial(f->from_rat(rat(2)), rat(1)) +
               Scalar::monomial(f->from_rat(rat(3)), rat(1));
    auto [nu1, red1] = valuation_and_reduce(t, rat(1));
    CHECK(*nu1 == rat(1));
    CHECK(red1 == f->from_rat(rat(5)));

    CHECK_THROWS_AS((void)valuation_and_reduce(z, rat(20)), Error);
}

TEST_CASE("scalar ring basics")
{
    auto f = CycloField::make(12);
    Scalar a = Scalar::pi_pow(f, rat(1)) * rat(2);
    Scalar b = Scalar::pi_pow(f, rat(1)) * rat(-2);
    CHECK((a + b).is_zero());
    Scalar c = a * a;
    REQUIRE(c.valuation());
    CHECK(*c.valuation() == rat(2));
    CHECK(c.reduce_at(rat(2)) == f->from_rat(rat(4)));

    // inverse: (2 pi (1 + pi))^{-1} * (2 pi (1 + pi)) == 1
    Scalar u = Scalar::monomial(f->from_rat(rat(2)), rat(1)) *
               (Scalar::from_rat(f, rat(1)) + Scalar::pi_pow(f, rat(1)));
    Scalar prod = u * u.inverse();
    CHECK(prod.eq(Scalar::from_rat(f, rat(1))));
}

TEST_CASE("qth_root_scalar examples")
{
    auto f = CycloField::make(4);
    // pi^2, q = 2 -> pi
    Scalar s = Scalar::pi_pow(f, rat(2));
    CHECK(s.nth_root(2).eq(Scalar::pi_pow(f, rat(1))));

    // 4 pi^2 (1 + pi), q = 2 -> 2 pi (1 + pi/2 - pi^2/8 + ...)
    Scalar s2 = Scalar::monomial(f->from_rat(rat(4)), rat(2)) *
                (Scalar::from_rat(f, rat(1)) + Scalar::pi_pow(f, rat(1)));
    Scalar r2 = s2.nth_root(2);
    CHECK(r2.reduce_at(rat(1)) == f->from_rat(rat(2)));
    CHECK(r2.reduce_at(rat(2)) == f->from_rat(rat(1)));
    CHECK(r2.reduce_at(rat(3)) == f->from_rat(rat(-1, 4)));
    CHECK((r2 * r2).eq(s2));

    // 2 pi^2 over Q(zeta_4): sqrt(2) not representable
    Scalar bad = Scalar::monomial(f->from_rat(rat(2)), rat(2));
    CHECK_THROWS_AS((void)bad.nth_root(2), Error);
}

TEST_CASE("valuation laws and root round trips on random scalars")
{
    auto f = CycloField::make(12);
    std::mt19937_64 rng(20250810);
    for (int it = 0; it < 60; ++it) {
        Scalar a = random_scalar(f, rng);
        Scalar b = random_scalar(f, rng);
        REQUIRE(a.valuation());
        REQUIRE(b.valuation());
        Scalar p = a * b;
        REQUIRE(p.valuation());
        CHECK(*p.valuation() == *a.valuation() + *b.valuation());
        Rat mn = std::min(*a.valuation(), *b.valuation());
        Scalar s = a + b;
        if (*a.valuation() != *b.valuation()) {
            REQUIRE(s.valuation());
            CHECK(*s.valuation() == mn);
        } else if (s.valuation()) {
            CHECK(*s.valuation() >= mn);
        }
        // reduction is a ring homomorphism on leading levels
        if (p.valuation())
            CHECK(p.reduce_at(*p.valuation()) ==
                  a.reduce_at(*a.valuation()) * b.reduce_at(*b.valuation()));
    }
    // root round trips: square a random scalar, take the root back
    for (int it = 0; it < 40; ++it) {
        Scalar a = random_scalar(f, rng);
        for (unsigned long q : {2ul, 3ul}) {
            Scalar aq = a.pow(static_cast<long>(q));
            auto r = aq.try_nth_root(q);
            REQUIRE(r);
            CHECK(r->pow(static_cast<long>(q)).eq(aq));
        }
    }
}

TEST_CASE("comparison reports deciding precision")
{
    auto f = CycloField::make(4);
    Scalar a = Scalar::pi_pow(f, rat(1), rat(10));
    Scalar b = Scalar::pi_pow(f, rat(1), rat(15));
    auto cmp = a.compare(b);
    CHECK(cmp.equal);
    CHECK(cmp.decided_at == rat(10));
}
