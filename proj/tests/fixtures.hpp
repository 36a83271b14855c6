#pragma once

#include <random>
#include <vector>

#include "qtrop/annulus.hpp"
#include "qtrop/series.hpp"

namespace qtrop::testing {

// Convenience builders shared by the unit and acceptance suites.

inline Scalar sc(const FieldPtr& f, long v) { return Scalar::from_rat(f, rat(v)); }

inline ScalarSeries series_of(const FieldPtr& f, long lo, std::vector<Scalar> coeffs)
{
    return ScalarSeries(f, lo, std::move(coeffs), true);
}

// A random monomial coefficient rho * zeta^j * pi^e whose q-th powers stay
// representable; exponent e is an integer multiple of step.
Scalar random_monomial_scalar(const FieldPtr& f, std::mt19937_64& rng, int emin, int emax,
                              long step = 1, Rat prec = Rat(60));

// A random q-form series with certified dominant index on the window:
// dominant term with a q-th-power-representable coefficient plus strictly
// dominated noise terms.
AnnulusQForm random_annulus_form(const FieldPtr& f, long q, std::mt19937_64& rng);

// A random 1-form unit g = c (1 + small) dt/t on a window, returned as the
// coefficient series plus its window; the dt/t coefficient is g.coeff(0).
struct UnitOneForm {
    ScalarSeries g;
    AnnulusWindow window;
};
UnitOneForm random_unit_one_form(const FieldPtr& f, std::mt19937_64& rng);

}  // namespace qtrop::testing
