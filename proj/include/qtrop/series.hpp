#pragma once

#include <algorithm>
#include <cassert>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qtrop/cyclotomic.hpp"
#include "qtrop/errors.hpp"
#include "qtrop/scalar.hpp"

namespace qtrop {

inline constexpr long kDefaultWindow = 40;

template <class C>
struct CoeffTraits;

template <>
struct CoeffTraits<Cyclo> {
    static Cyclo zero(const FieldPtr& f, const Rat&) { return f->zero(); }
    static Cyclo one(const FieldPtr& f, const Rat&) { return f->one(); }
    static bool is_zero(const Cyclo& c) { return c.is_zero(); }
    static bool eq(const Cyclo& a, const Cyclo& b) { return a == b; }
    static std::optional<Cyclo> nth_root(const Cyclo& c, unsigned long n) { return c.nth_root(n); }
    static Cyclo inverse(const Cyclo& c) { return c.inverse(); }
    static Cyclo pow(const Cyclo& c, long e) { return c.pow(e); }
};

template <>
struct CoeffTraits<Scalar> {
    static Scalar zero(const FieldPtr& f, const Rat&) { return Scalar::exact_zero(f); }
    static Scalar one(const FieldPtr& f, const Rat& prec) { return Scalar::from_rat(f, Rat(1), prec); }
    static bool is_zero(const Scalar& c) { return c.is_zero(); }
    static bool eq(const Scalar& a, const Scalar& b) { return a.eq(b); }
    static std::optional<Scalar> nth_root(const Scalar& c, unsigned long n)
    {
        return c.try_nth_root(n);
    }
    static Scalar inverse(const Scalar& c) { return c.inverse(); }
    static Scalar pow(const Scalar& c, long e) { return c.pow(e); }
};

// A truncated Laurent series sum_{i=lo}^{hi} c_i t^i over C (the valued
// field or the residue field). Exponents below lo carry exact zeros;
// exponents above hi are exact zeros when tail_exact(), otherwise unknown.
template <class C>
class Series {
public:
    using Traits = CoeffTraits<C>;

    Series() = default;

    Series(FieldPtr field, long lo, std::vector<C> coeffs, bool tail_exact,
           Rat scalar_prec = default_precision(), std::string var = "t")
        : field_(std::move(field)),
          var_(std::move(var)),
          lo_(lo),
          coeffs_(std::move(coeffs)),
          tail_exact_(tail_exact),
          scalar_prec_(std::move(scalar_prec))
    {
        if (coeffs_.empty())
            coeffs_.push_back(Traits::zero(field_, scalar_prec_));
    }

    static Series zero(const FieldPtr& f, Rat scalar_prec = default_precision())
    {
        return Series(f, 0, {}, true, std::move(scalar_prec));
    }

    static Series constant(const C& c, Rat scalar_prec = default_precision())
    {
        return Series(field_of(c), 0, {c}, true, std::move(scalar_prec));
    }

    static Series monomial(const C& c, long e, Rat scalar_prec = default_precision())
    {
        return Series(field_of(c), e, {c}, true, std::move(scalar_prec));
    }

    static FieldPtr field_of(const Cyclo& c) { return c.field(); }
    static FieldPtr field_of(const Scalar& c) { return c.field(); }

    const FieldPtr& field() const { return field_; }
    const std::string& var() const { return var_; }
    long lo() const { return lo_; }
    long hi() const { return lo_ + static_cast<long>(coeffs_.size()) - 1; }
    bool tail_exact() const { return tail_exact_; }
    const Rat& scalar_prec() const { return scalar_prec_; }

    C coeff(long k) const
    {
        if (k < lo_)
            return Traits::zero(field_, scalar_prec_);
        if (k > hi()) {
            if (!tail_exact_)
                fail(ErrorKind::PrecisionExhausted,
                     "coefficient of " + var_ + "^" + std::to_string(k) +
                         " lies beyond the computed window");
            return Traits::zero(field_, scalar_prec_);
        }
        return coeffs_[static_cast<size_t>(k - lo_)];
    }

    bool is_identically_zero() const
    {
        if (!tail_exact_)
            return false;
        return std::all_of(coeffs_.begin(), coeffs_.end(),
                           [](const C& c) { return Traits::is_zero(c); });
    }

    bool is_zero_to_window() const
    {
        return std::all_of(coeffs_.begin(), coeffs_.end(),
                           [](const C& c) { return Traits::is_zero(c); });
    }

    // Lowest exponent with a (nonzero-to-precision) coefficient.
    std::optional<long> lowest_nonzero() const
    {
        for (long k = lo_; k <= hi(); ++k)
            if (!Traits::is_zero(coeff(k)))
                return k;
        return std::nullopt;
    }

    std::vector<long> support() const
    {
        std::vector<long> s;
        for (long k = lo_; k <= hi(); ++k)
            if (!Traits::is_zero(coeff(k)))
                s.push_back(k);
        return s;
    }

    Series operator-() const
    {
        Series r = *this;
        for (auto& c : r.coeffs_)
            c = -c;
        return r;
    }

    friend Series operator+(const Series& a, const Series& b)
    {
        long lo = std::min(a.lo_, b.lo_);
        long hi;
        bool exact = a.tail_exact_ && b.tail_exact_;
        if (exact)
            hi = std::max(a.hi(), b.hi());
        else if (a.tail_exact_)
            hi = b.hi();
        else if (b.tail_exact_)
            hi = a.hi();
        else
            hi = std::min(a.hi(), b.hi());
        if (hi < lo)
            hi = lo;
        Rat prec = std::min(a.scalar_prec_, b.scalar_prec_);
        std::vector<C> out;
        out.reserve(static_cast<size_t>(hi - lo + 1));
        for (long k = lo; k <= hi; ++k)
            out.push_back(a.coeff_clamped(k) + b.coeff_clamped(k));
        return Series(a.field_ ? a.field_ : b.field_, lo, std::move(out), exact, prec, a.var_);
    }

    friend Series operator-(const Series& a, const Series& b) { return a + (-b); }

    friend Series operator*(const Series& a, const Series& b)
    {
        // Window bookkeeping uses the lowest nonzero exponents: an unknown
        // tail of one factor reaches exponent k only through coefficients of
        // the other factor below k - hi, which vanish (within the declared
        // scalar precision, the library-wide convention) below its lowest
        // nonzero exponent.
        auto nu_a = a.lowest_nonzero();
        auto nu_b = b.lowest_nonzero();
        if ((!nu_a && a.tail_exact_) || (!nu_b && b.tail_exact_))
            return zero(a.field_ ? a.field_ : b.field_,
                        std::min(a.scalar_prec_, b.scalar_prec_));
        long off_a = nu_a ? *nu_a : a.hi() + 1;
        long off_b = nu_b ? *nu_b : b.hi() + 1;
        long lo = a.lo_ + b.lo_;
        bool exact = a.tail_exact_ && b.tail_exact_;
        long hi;
        if (exact)
            hi = a.hi() + b.hi();
        else if (a.tail_exact_)
            hi = b.hi() + off_a;
        else if (b.tail_exact_)
            hi = a.hi() + off_b;
        else
            hi = std::min(a.hi() + off_b, b.hi() + off_a);
        if (hi < lo)
            hi = lo;
        Rat prec = std::min(a.scalar_prec_, b.scalar_prec_);
        std::vector<C> out(static_cast<size_t>(hi - lo + 1),
                           Traits::zero(a.field_ ? a.field_ : b.field_, prec));
        for (long i = a.lo_; i <= a.hi(); ++i) {
            const C& ai = a.coeffs_[static_cast<size_t>(i - a.lo_)];
            if (Traits::is_zero(ai))
                continue;
            for (long j = b.lo_; j <= b.hi(); ++j) {
                long k = i + j;
                if (k < lo || k > hi)
                    continue;
                const C& bj = b.coeffs_[static_cast<size_t>(j - b.lo_)];
                if (Traits::is_zero(bj))
                    continue;
                out[static_cast<size_t>(k - lo)] = out[static_cast<size_t>(k - lo)] + ai * bj;
            }
        }
        return Series(a.field_ ? a.field_ : b.field_, lo, std::move(out), exact, prec, a.var_);
    }

    Series scaled(const C& c) const
    {
        Series r = *this;
        for (auto& x : r.coeffs_)
            x = x * c;
        return r;
    }

    Series shifted(long d) const
    {
        Series r = *this;
        r.lo_ += d;
        return r;
    }

    // t d/dt: coefficient i picks up a factor i.
    Series euler_derivative() const
    {
        Series r = *this;
        for (long k = r.lo_; k <= r.hi(); ++k)
            r.coeffs_[static_cast<size_t>(k - r.lo_)] =
                r.coeffs_[static_cast<size_t>(k - r.lo_)] * Rat(k);
        return r;
    }

    // d/dt against dt: coefficient of t^i becomes i * c_i at t^{i-1}.
    Series derivative() const { return euler_derivative().shifted(-1); }

    // Formal antiderivative of f dt/t: coefficient i -> c_i / i; the free
    // coefficient must vanish.
    Series antiderivative_dlog() const
    {
        Series r = *this;
        for (long k = r.lo_; k <= r.hi(); ++k) {
            auto& c = r.coeffs_[static_cast<size_t>(k - r.lo_)];
            if (k == 0) {
                if (!Traits::is_zero(c))
                    fail(ErrorKind::MalformedForm,
                         "antiderivative of a form with nonzero dlog coefficient");
                continue;
            }
            c = c * rat(1, k);
        }
        return r;
    }

    // f(y) with t = y^q: exponents multiply by q.
    Series exponents_scaled_up(long q) const
    {
        assert(q >= 1);
        long lo = lo_ * q;
        long hi_in = hi();
        long hi_out = hi_in * q;
        std::vector<C> out(static_cast<size_t>(hi_out - lo + 1),
                           Traits::zero(field_, scalar_prec_));
        for (long k = lo_; k <= hi_in; ++k)
            out[static_cast<size_t>(k * q - lo)] = coeffs_[static_cast<size_t>(k - lo_)];
        return Series(field_, lo, std::move(out), tail_exact_, scalar_prec_, var_);
    }

    // Inverse of the above: support must lie in qZ (within precision).
    Series exponents_scaled_down(long q) const
    {
        assert(q >= 1);
        long lo = lo_ >= 0 ? (lo_ + q - 1) / q : -((-lo_) / q);
        long hi_out = hi() >= 0 ? hi() / q : -((-hi() + q - 1) / q);
        if (hi_out < lo)
            hi_out = lo;
        std::vector<C> out(static_cast<size_t>(hi_out - lo + 1),
                           Traits::zero(field_, scalar_prec_));
        for (long k = lo_; k <= hi(); ++k) {
            const C& c = coeffs_[static_cast<size_t>(k - lo_)];
            if (Traits::is_zero(c))
                continue;
            if (k % q != 0)
                fail(ErrorKind::ExponentNotDivisible,
                     "series support is not contained in " + std::to_string(q) + "Z");
            out[static_cast<size_t>(k / q - lo)] = c;
        }
        return Series(field_, lo, std::move(out), tail_exact_, scalar_prec_, var_);
    }

    Series with_var(std::string v) const
    {
        Series r = *this;
        r.var_ = std::move(v);
        return r;
    }

    // Restrict knowledge to exponents <= new_hi; the tail becomes unknown
    // even when nothing is dropped (the claim weakens, never strengthens).
    // An exact-tail series is first padded with its known zeros up to new_hi.
    Series truncated_above(long new_hi) const
    {
        Series r = *this;
        if (new_hi < hi() || (tail_exact_ && new_hi > hi()))
            r.coeffs_.resize(static_cast<size_t>(std::max<long>(new_hi - lo_ + 1, 1)),
                             Traits::zero(field_, scalar_prec_));
        r.tail_exact_ = false;
        return r;
    }

    // Drop zero coefficients at the window edges. Only exact-tail series can
    // trim on the high side without losing information.
    Series trimmed() const
    {
        long l = lo_, h = hi();
        while (l < h && Traits::is_zero(coeff(l)))
            ++l;
        if (tail_exact_)
            while (h > l && Traits::is_zero(coeff(h)))
                --h;
        std::vector<C> out(coeffs_.begin() + (l - lo_), coeffs_.begin() + (h - lo_ + 1));
        return Series(field_, l, std::move(out), tail_exact_, scalar_prec_, var_);
    }

    Series pow(long e) const
    {
        if (e < 0)
            fail(ErrorKind::MalformedForm, "negative series power; invert explicitly");
        Series acc = constant(Traits::one(field_, scalar_prec_), scalar_prec_);
        acc.var_ = var_;
        for (long k = 0; k < e; ++k)
            acc = acc * *this;
        return acc;
    }

    // 1/f for f = c_m t^m (1 + w), w supported strictly above m. The result
    // is computed on the mirrored default window and has an unknown tail.
    Series inverse_lowest(long hi_out) const
    {
        auto m = lowest_nonzero();
        if (!m)
            fail(ErrorKind::PrecisionExhausted, "inverse of a zero-to-precision series");
        const C& lead = coeff(*m);
        C lead_inv = Traits::inverse(lead);
        // w = f / (c_m t^m) - 1, support >= 1
        Series w = shifted(-*m).scaled(lead_inv);
        w.coeffs_[0] = Traits::zero(field_, scalar_prec_);
        long span = hi_out + *m;  // relative degree needed
        Series acc = constant(Traits::one(field_, scalar_prec_), scalar_prec_);
        Series pw = acc;
        for (long j = 1; j <= span; ++j) {
            pw = (pw * (-w)).truncated_above(span);
            if (pw.is_zero_to_window())
                break;
            acc = acc + pw;
        }
        return acc.scaled(lead_inv).shifted(-*m).truncated_above(hi_out);
    }

    // n-th root of f = c_m t^m (1 + w) with q | m and w supported strictly
    // above m; binomial series for the unit part.
    Series nth_root_lowest(unsigned long n, long hi_out) const
    {
        if (n == 0)
            fail(ErrorKind::MalformedForm, "0th series root");
        auto m = lowest_nonzero();
        if (!m)
            fail(ErrorKind::PrecisionExhausted, "root of a zero-to-precision series");
        if (*m % static_cast<long>(n) != 0)
            fail(ErrorKind::ExponentNotDivisible,
                 "leading exponent " + std::to_string(*m) + " is not divisible by " +
                     std::to_string(n));
        auto lead_root = Traits::nth_root(coeff(*m), n);
        if (!lead_root)
            fail(ErrorKind::RootNotRepresentable,
                 "leading series coefficient has no " + std::to_string(n) +
                     "-th root in the coefficient field; enlarging the conductor may help");
        C lead_inv = Traits::inverse(coeff(*m));
        Series w = shifted(-*m).scaled(lead_inv);
        w.coeffs_[0] = Traits::zero(field_, scalar_prec_);
        long mq = *m / static_cast<long>(n);
        long span = hi_out - mq;
        Series acc = constant(Traits::one(field_, scalar_prec_), scalar_prec_);
        Series pw = acc;
        Rat binom(1);
        Rat inv_n(1, static_cast<long>(n));
        for (long j = 1; j <= span; ++j) {
            binom *= (inv_n - Rat(j - 1)) / Rat(j);
            pw = (pw * w).truncated_above(span);
            if (pw.is_zero_to_window())
                break;
            acc = acc + pw.scaled_rat(binom);
        }
        return acc.scaled(*lead_root).shifted(mq).truncated_above(hi_out);
    }

    Series scaled_rat(const Rat& r) const
    {
        Series out = *this;
        for (auto& c : out.coeffs_)
            c = c * r;
        return out;
    }

    // f(t * u(t)) for a unit u with invertible free coefficient.
    Series substitute_unit(const Series& u) const
    {
        if (Traits::is_zero(u.coeff(0)))
            fail(ErrorKind::MalformedForm, "substitution unit has vanishing free coefficient");
        Series acc = Series::zero(field_, scalar_prec_);
        acc.var_ = var_;
        // u^i computed incrementally in both directions
        long span = std::max(std::abs(lo_), std::abs(hi())) + 8;
        Series upos = constant(Traits::one(field_, scalar_prec_), scalar_prec_);
        Series uneg = upos;
        Series uinv = u.inverse_lowest(u.hi() + std::max<long>(hi() - lo_, 8));
        std::vector<Series> pows_pos, pows_neg;  // u^i, u^{-i}
        pows_pos.push_back(upos);
        for (long i = lo_; i <= hi(); ++i) {
            const C& ai = coeff(i);
            if (Traits::is_zero(ai))
                continue;
            Series ui = unit_power(u, uinv, i, pows_pos, pows_neg);
            acc = acc + ui.scaled(ai).shifted(i);
        }
        (void)span;
        (void)uneg;
        return acc;
    }

    // Compositional inverse of the coordinate change t -> t u(t): returns w
    // with (s w(s)) u(s w(s)) = s to degree hi_out. The non-constant part of
    // u must be supported in strictly positive degrees; each fixed-point
    // round w <- 1/u(s w(s)) gains one degree of agreement.
    friend Series invert_unit_change(const Series& u, long hi_out)
    {
        if (Traits::is_zero(u.coeff(0)))
            fail(ErrorKind::MalformedForm, "coordinate-change unit has vanishing free coefficient");
        for (long k = u.lo(); k < 0; ++k)
            if (!Traits::is_zero(u.coeff(k)))
                fail(ErrorKind::MalformedForm,
                     "plain unit reversion requires positive-degree support");
        Series w = constant(Traits::inverse(u.coeff(0)), u.scalar_prec_);
        w.var_ = u.var_;
        for (long round = 0; round <= hi_out + 1; ++round) {
            Series next = u.substitute_unit(w).inverse_lowest(hi_out).truncated_above(hi_out);
            if (series_eq(next, w) && round > 0)
                return next;
            w = next;
        }
        return w;
    }

    // f(K t^{-1}): exponents negate, coefficient i is multiplied by K^i.
    // Requires an exact tail (the mirrored series must know its low end).
    Series substitute_inversion(const C& k_const) const
    {
        if (!tail_exact_)
            fail(ErrorKind::PrecisionExhausted,
                 "inversion of a series with unknown tail");
        if (Traits::is_zero(k_const))
            fail(ErrorKind::MalformedForm, "inversion constant must be nonzero");
        long lo = -hi(), hi_out = -lo_;
        std::vector<C> out(static_cast<size_t>(hi_out - lo + 1),
                           Traits::zero(field_, scalar_prec_));
        for (long i = lo_; i <= hi(); ++i) {
            const C& ai = coeffs_[static_cast<size_t>(i - lo_)];
            if (Traits::is_zero(ai))
                continue;
            out[static_cast<size_t>(-i - lo)] = ai * Traits::pow(k_const, i);
        }
        return Series(field_, lo, std::move(out), true, scalar_prec_, var_);
    }

    friend bool series_eq(const Series& a, const Series& b)
    {
        long lo = std::min(a.lo_, b.lo_);
        long hi = (a.tail_exact_ && b.tail_exact_) ? std::max(a.hi(), b.hi())
                                                   : std::min(a.hi(), b.hi());
        for (long k = lo; k <= hi; ++k)
            if (!Traits::eq(a.coeff_clamped(k), b.coeff_clamped(k)))
                return false;
        return true;
    }

    std::string to_string() const
    {
        std::ostringstream os;
        bool first = true;
        for (long k = lo_; k <= hi(); ++k) {
            const C& c = coeffs_[static_cast<size_t>(k - lo_)];
            if (Traits::is_zero(c))
                continue;
            if (!first)
                os << " + ";
            os << "(" << c.to_string() << ")";
            if (k != 0)
                os << "*" << var_ << "^" << k;
            first = false;
        }
        if (first)
            os << "0";
        if (!tail_exact_)
            os << " + O(" << var_ << "^" << hi() + 1 << ")";
        return os.str();
    }

private:
    C coeff_clamped(long k) const
    {
        if (k < lo_ || k > hi())
            return Traits::zero(field_, scalar_prec_);
        return coeffs_[static_cast<size_t>(k - lo_)];
    }

    static Series unit_power(const Series& u, const Series& uinv, long i,
                             std::vector<Series>& pows_pos, std::vector<Series>& pows_neg)
    {
        if (i >= 0) {
            while (static_cast<long>(pows_pos.size()) <= i)
                pows_pos.push_back(pows_pos.back() * u);
            return pows_pos[static_cast<size_t>(i)];
        }
        long j = -i;
        if (pows_neg.empty())
            pows_neg.push_back(uinv);
        while (static_cast<long>(pows_neg.size()) < j)
            pows_neg.push_back(pows_neg.back() * uinv);
        return pows_neg[static_cast<size_t>(j - 1)];
    }

    FieldPtr field_;
    std::string var_ = "t";
    long lo_ = 0;
    std::vector<C> coeffs_;
    bool tail_exact_ = true;
    Rat scalar_prec_ = default_precision();
};

using ScalarSeries = Series<Scalar>;
using ResidueSeries = Series<Cyclo>;

}  // namespace qtrop
