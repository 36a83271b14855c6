#pragma once

#include <optional>

#include "qtrop/series.hpp"

namespace qtrop {

// The valuation range of the coordinate on an annulus; length = v_hi - v_lo
// is the modulus exponent. The induced orientation is the one along which
// the coordinate decreases, i.e. its valuation grows.
struct AnnulusWindow {
    Rat v_lo;
    Rat v_hi;
    bool induced_orientation = true;

    AnnulusWindow(Rat lo, Rat hi, bool induced = true)
        : v_lo(std::move(lo)), v_hi(std::move(hi)), induced_orientation(induced)
    {
        if (v_lo < 0 || v_lo >= v_hi)
            fail(ErrorKind::MalformedForm, "annulus window needs 0 <= v_lo < v_hi");
    }

    Rat length() const { return v_hi - v_lo; }
};

// The index n of the unique term a_n t^n with |a_n t^n| > |a_i t^i| on the
// whole window; endpoint checks suffice by affineness. Stored zeros and the
// truncated tail must be certifiably dominated.
long dominant_index(const ScalarSeries& f, const AnnulusWindow& w);

// xi = f(t) (dt/t)^q on an annulus window. Validity (existence of a dominant
// index) is certified at construction.
class AnnulusQForm {
public:
    AnnulusQForm(ScalarSeries f, long q, AnnulusWindow window);

    const ScalarSeries& series() const { return f_; }
    long q() const { return q_; }
    const AnnulusWindow& window() const { return window_; }
    long dominant() const { return dominant_; }

private:
    ScalarSeries f_;
    long q_;
    AnnulusWindow window_;
    long dominant_;
};

// Normal form of a q-differential on an annulus:
//   Power:    xi = (c_n t^{n/q} + c_0)^q (dt/t)^q,  q | n != 0, c_n dominant
//   Monomial: xi = c_n^q t^n (dt/t)^q   (n = 0 gives the pure residue form,
//             where c_n plays the role of the free coefficient c_0)
// together with the unit w of the coordinate change t_new = t * w(t)^q that
// carries the input coordinate to the good one.
struct GoodForm {
    enum class Case { Power, Monomial };
    Case kind;
    long n;
    Scalar c_n;
    Scalar c_0;  // zero scalar in the monomial case
    ScalarSeries unit;
    long q;
    AnnulusWindow window;
};

GoodForm good_coordinate(const AnnulusQForm& xi);

// Substitutes t -> t w(t)^q into the normal form and returns the recovered
// coefficient series of xi; used by the good_coordinate postcondition.
ScalarSeries reconstruct_from_good_form(const GoodForm& gf);

// c_0^q when the form is a q-th power along the annulus (q | n, including
// n = 0); exact zero otherwise.
Scalar q_residue_annulus(const AnnulusQForm& xi);

// q divides the dominant index (= minus the level slope along the skeleton).
bool is_q_power(const AnnulusQForm& xi);

// The form in the coordinate s = pi^{v_lo+v_hi} t^{-1}: same window, reversed
// orientation; the q-residue picks up (-1)^q.
AnnulusQForm reverse_orientation(const AnnulusQForm& xi);

// Iteration knobs for good_coordinate.
struct GoodCoordinateOptions {
    int max_rounds = 64;
    long window_pad = 4;
};

GoodForm good_coordinate(const AnnulusQForm& xi, const GoodCoordinateOptions& opts);

}  // namespace qtrop
