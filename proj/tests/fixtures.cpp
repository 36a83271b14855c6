#include "fixtures.hpp"

namespace qtrop::testing {

Scalar random_monomial_scalar(const FieldPtr& f, std::mt19937_64& rng, int emin, int emax,
                              long step, Rat prec)
{
    std::uniform_int_distribution<int> num(1, 4);
    std::uniform_int_distribution<int> sign(0, 1);
    std::uniform_int_distribution<unsigned long> zexp(0, f->conductor() - 1);
    std::uniform_int_distribution<int> expn(emin, emax);
    Rat scale = rat(sign(rng) ? num(rng) : -num(rng));
    Cyclo c = f->zeta_pow(static_cast<long>(zexp(rng))) * scale;
    return Scalar::monomial(c, rat(step) * rat(expn(rng)), prec);
}

AnnulusQForm random_annulus_form(const FieldPtr& f, long q, std::mt19937_64& rng)
{
    std::uniform_int_distribution<int> ndist(-4, 4);
    std::uniform_int_distribution<int> wdist(1, 2);
    std::uniform_int_distribution<int> extra(0, 3);
    std::uniform_int_distribution<int> offs(1, 3);
    std::uniform_int_distribution<int> gapd(1, 2);

    long n = ndist(rng);
    Rat v_lo(0), v_hi(wdist(rng));
    // dominant coefficient: a q-th power of a monomial so the root always
    // exists in the configured field
    Scalar root = random_monomial_scalar(f, rng, 0, 2);
    Scalar c_n = root.pow(q);
    ScalarSeries s = ScalarSeries::monomial(c_n, n, Rat(60));
    int k = extra(rng);
    for (int i = 0; i < k; ++i) {
        long e = n + (rng() % 2 == 0 ? 1 : -1) * offs(rng);
        // pick a valuation putting the term strictly above the dominant line
        // at both endpoints
        Rat need_lo = *c_n.valuation() + rat(n - e) * v_lo;
        Rat need_hi = *c_n.valuation() + rat(n - e) * v_hi;
        Rat nu = std::max(need_lo, need_hi) + rat(gapd(rng));
        Cyclo coef = f->zeta_pow(static_cast<long>(rng() % f->conductor())) * rat(1 + (int)(rng() % 3));
        s = s + ScalarSeries::monomial(Scalar::monomial(coef, nu, Rat(60)), e);
    }
    return AnnulusQForm(s, q, AnnulusWindow(v_lo, v_hi));
}

UnitOneForm random_unit_one_form(const FieldPtr& f, std::mt19937_64& rng)
{
    std::uniform_int_distribution<int> wdist(1, 2);
    std::uniform_int_distribution<int> extra(0, 3);
    std::uniform_int_distribution<int> offs(1, 3);
    std::uniform_int_distribution<int> gapd(1, 2);
    Rat v_lo(0), v_hi(wdist(rng));
    Scalar c0 = random_monomial_scalar(f, rng, 0, 2);
    ScalarSeries s = ScalarSeries::monomial(c0, 0, Rat(60));
    int k = extra(rng);
    for (int i = 0; i < k; ++i) {
        long e = (rng() % 2 == 0 ? 1 : -1) * offs(rng);
        Rat need_lo = *c0.valuation() + rat(-e) * v_lo;
        Rat need_hi = *c0.valuation() + rat(-e) * v_hi;
        Rat nu = std::max(need_lo, need_hi) + rat(gapd(rng));
        Cyclo coef = f->zeta_pow(static_cast<long>(rng() % f->conductor())) * rat(1 + (int)(rng() % 3));
        s = s + ScalarSeries::monomial(Scalar::monomial(coef, nu, Rat(60)), e);
    }
    return UnitOneForm{s, AnnulusWindow(v_lo, v_hi)};
}

}  // namespace qtrop::testing
