#include "doctest.h"

#include "fixtures.hpp"
#include "qtrop/annulus.hpp"
#include "qtrop/errors.hpp"

using namespace qtrop;
using namespace qtrop::testing;

namespace {

// the normal form composed with the coordinate change must reproduce the
// input coefficients at every computed exponent
void check_substitution_identity(const AnnulusQForm& xi, const GoodForm& gf)
{
    ScalarSeries rec = reconstruct_from_good_form(gf);
    for (long k = xi.series().lo(); k <= xi.series().hi(); ++k) {
        if (k > rec.hi())
            break;
        CHECK(rec.coeff(k).eq(xi.series().coeff(k)));
    }
}

}  // namespace

TEST_CASE("dominant index examples")
{
    auto f = CycloField::make(4);
    // t^2 + pi t^3 on [0, 2] -> 2
    ScalarSeries a = series_of(f, 2, {sc(f, 1), Scalar::pi_pow(f, rat(1))});
    CHECK(dominant_index(a, AnnulusWindow(rat(0), rat(2))) == 2);
    // 1 + t on [0, 1]: tie at v = 0
    ScalarSeries b = series_of(f, 0, {sc(f, 1), sc(f, 1)});
    CHECK_THROWS_AS((void)dominant_index(b, AnnulusWindow(rat(0), rat(1))), Error);
    // pi + t on [2, 3] -> 0
    ScalarSeries c = ScalarSeries::monomial(Scalar::pi_pow(f, rat(1)), 0) +
                     ScalarSeries::monomial(sc(f, 1), 1);
    CHECK(dominant_index(c, AnnulusWindow(rat(2), rat(3))) == 0);
}

TEST_CASE("good coordinate: already normal")
{
    auto f = CycloField::make(4);
    // (t + pi^2)^2 = t^2 + 2 pi^2 t + pi^4 on [0, 1]
    Scalar pi2 = Scalar::pi_pow(f, rat(2));
    ScalarSeries s = series_of(f, 0, {pi2 * pi2, pi2 * rat(2), sc(f, 1)});
    AnnulusQForm xi(s, 2, AnnulusWindow(rat(0), rat(1)));
    CHECK(xi.dominant() == 2);
    GoodForm gf = good_coordinate(xi);
    CHECK(gf.kind == GoodForm::Case::Power);
    CHECK(gf.n == 2);
    CHECK(gf.c_n.eq(sc(f, 1)));
    CHECK(gf.c_0.eq(pi2));
    // w = 1
    CHECK(gf.unit.coeff(0).eq(sc(f, 1)));
    for (long k = 1; k <= gf.unit.hi(); ++k)
        CHECK(gf.unit.coeff(k).is_zero());
    check_substitution_identity(xi, gf);
    CHECK(q_residue_annulus(xi).eq(pi2 * pi2));
}

TEST_CASE("good coordinate: vanishing residue monomial case")
{
    auto f = CycloField::make(4);
    // t^2 (1 + pi t) on [0, 2]
    ScalarSeries s = series_of(f, 2, {sc(f, 1), Scalar::pi_pow(f, rat(1))});
    AnnulusQForm xi(s, 2, AnnulusWindow(rat(0), rat(2)));
    GoodForm gf = good_coordinate(xi);
    CHECK(gf.kind == GoodForm::Case::Monomial);
    CHECK(gf.n == 2);
    CHECK(gf.c_n.reduce_at(rat(0)) == f->one());
    // t_new = t w^2 = t + (pi/4) t^2 + O(t^3)
    ScalarSeries w2 = gf.unit * gf.unit;
    CHECK(w2.coeff(0).eq(sc(f, 1)));
    CHECK(w2.coeff(1).eq(Scalar::pi_pow(f, rat(1)) * rat(1, 4)));
    check_substitution_identity(xi, gf);
    CHECK(q_residue_annulus(xi).is_zero());
}

TEST_CASE("good coordinate: q does not divide n")
{
    auto f = CycloField::make(4);
    ScalarSeries s = series_of(f, 3, {sc(f, 1)});
    AnnulusQForm xi(s, 2, AnnulusWindow(rat(0), rat(1)));
    GoodForm gf = good_coordinate(xi);
    CHECK(gf.kind == GoodForm::Case::Monomial);
    CHECK(gf.n == 3);
    CHECK((gf.c_n * gf.c_n).eq(sc(f, 1)));
    CHECK(q_residue_annulus(xi).is_zero());
    CHECK(!is_q_power(xi));
}

TEST_CASE("is_q_power examples")
{
    auto f = CycloField::make(4);
    ScalarSeries a = series_of(f, 2, {sc(f, 1), Scalar::pi_pow(f, rat(1))});
    CHECK(is_q_power(AnnulusQForm(a, 2, AnnulusWindow(rat(0), rat(2)))));
    ScalarSeries b = series_of(f, 3, {sc(f, 1)});
    CHECK(!is_q_power(AnnulusQForm(b, 2, AnnulusWindow(rat(0), rat(1)))));
    ScalarSeries c = series_of(f, 0, {sc(f, 1), Scalar::pi_pow(f, rat(2))});
    CHECK(is_q_power(AnnulusQForm(c, 2, AnnulusWindow(rat(0), rat(1)))));
}

TEST_CASE("reverse orientation")
{
    auto f = CycloField::make(4);
    Scalar pi2 = Scalar::pi_pow(f, rat(2));

    // (t + pi^2)^2 (dt/t)^2: residue pi^4 on both orientations (q even)
    ScalarSeries s = series_of(f, 0, {pi2 * pi2, pi2 * rat(2), sc(f, 1)});
    AnnulusQForm xi(s, 2, AnnulusWindow(rat(0), rat(1)));
    AnnulusQForm rev = reverse_orientation(xi);
    CHECK(rev.dominant() == -xi.dominant());
    CHECK(q_residue_annulus(rev).eq(q_residue_annulus(xi)));

    // (t + c)(dt/t) with q = 1: classical residue changes sign
    ScalarSeries s1 = series_of(f, 0, {pi2, sc(f, 1)});
    AnnulusQForm om(s1, 1, AnnulusWindow(rat(0), rat(1)));
    CHECK(q_residue_annulus(om).eq(pi2));
    CHECK(q_residue_annulus(reverse_orientation(om)).eq(-pi2));

    // t^3 (dt/t)^2: residue 0 both ways
    ScalarSeries s3 = series_of(f, 3, {sc(f, 1)});
    AnnulusQForm m3(s3, 2, AnnulusWindow(rat(0), rat(1)));
    CHECK(q_residue_annulus(m3).is_zero());
    CHECK(q_residue_annulus(reverse_orientation(m3)).is_zero());

    // involution: twice restores the good-form invariants
    AnnulusQForm twice = reverse_orientation(rev);
    CHECK(twice.dominant() == xi.dominant());
    CHECK(q_residue_annulus(twice).eq(q_residue_annulus(xi)));
}

TEST_CASE("randomized substitution identity and equivariance")
{
    auto f = CycloField::make(12);
    std::mt19937_64 rng(424242);
    int done = 0;
    for (long q : {1L, 2L, 3L}) {
        for (int it = 0; it < 6; ++it) {
            AnnulusQForm xi = random_annulus_form(f, q, rng);
            GoodForm gf = good_coordinate(xi);
            check_substitution_identity(xi, gf);
            ++done;
        }
    }
    CHECK(done == 18);
}

TEST_CASE("residue power law on unit one-forms")
{
    auto f = CycloField::make(12);
    std::mt19937_64 rng(99);
    for (int it = 0; it < 10; ++it) {
        UnitOneForm om = random_unit_one_form(f, rng);
        for (long q : {2L, 3L}) {
            ScalarSeries xiq = om.g;
            for (long k = 1; k < q; ++k)
                xiq = xiq * om.g;
            AnnulusQForm xi(xiq, q, om.window);
            Scalar expected = om.g.coeff(0).pow(q);
            CHECK(q_residue_annulus(xi).eq(expected));
        }
    }
}

TEST_CASE("dominant index under unit change and inversion")
{
    auto f = CycloField::make(4);
    ScalarSeries s = series_of(f, 2, {sc(f, 1), Scalar::pi_pow(f, rat(3))});
    AnnulusWindow w(rat(0), rat(2));
    long n = dominant_index(s, w);
    ScalarSeries u = series_of(f, 0, {sc(f, 1), Scalar::pi_pow(f, rat(5))});
    CHECK(dominant_index(s.substitute_unit(u), w) == n);
    CHECK(dominant_index(s.substitute_inversion(Scalar::pi_pow(f, rat(2))), w) == -n);
}
