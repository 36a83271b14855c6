#include "qtrop/scalar.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <sstream>

#include "qtrop/errors.hpp"

namespace qtrop {

Scalar::Scalar(FieldPtr field, std::vector<Term> terms, Rat precision)
    : field_(std::move(field)), terms_(std::move(terms)), prec_(std::move(precision))
{
    normalize();
}

void Scalar::normalize()
{
    std::sort(terms_.begin(), terms_.end(),
              [](const Term& a, const Term& b) { return a.exp < b.exp; });
    std::vector<Term> merged;
    for (auto& t : terms_) {
        if (!merged.empty() && merged.back().exp == t.exp)
            merged.back().coeff += t.coeff;
        else
            merged.push_back(std::move(t));
    }
    terms_.clear();
    for (auto& t : merged)
        if (!t.coeff.is_zero() && t.exp < prec_)
            terms_.push_back(std::move(t));
}

Scalar Scalar::zero(const FieldPtr& f, Rat precision)
{
    return Scalar(f, {}, std::move(precision));
}

Scalar Scalar::from_cyclo(const Cyclo& c, Rat precision)
{
    return Scalar(c.field(), {Term{Rat(0), c}}, std::move(precision));
}

Scalar Scalar::from_rat(const FieldPtr& f, const Rat& r, Rat precision)
{
    return from_cyclo(f->from_rat(r), std::move(precision));
}

Scalar Scalar::monomial(const Cyclo& c, const Rat& e, Rat precision)
{
    return Scalar(c.field(), {Term{e, c}}, std::move(precision));
}

Scalar Scalar::pi_pow(const FieldPtr& f, const Rat& e, Rat precision)
{
    return monomial(f->one(), e, std::move(precision));
}

std::optional<Rat> Scalar::valuation() const
{
    if (terms_.empty())
        return std::nullopt;
    return terms_.front().exp;
}

Rat Scalar::valuation_or_precision() const
{
    return terms_.empty() ? prec_ : terms_.front().exp;
}

const Cyclo& Scalar::leading_coeff() const
{
    if (terms_.empty())
        fail(ErrorKind::PrecisionExhausted, "leading coefficient of a zero-to-precision scalar");
    return terms_.front().coeff;
}

Scalar Scalar::operator-() const
{
    Scalar r = *this;
    for (auto& t : r.terms_)
        t.coeff = -t.coeff;
    return r;
}

static void check_field(const Scalar& a, const Scalar& b)
{
    if (a.field() && b.field() && a.field()->conductor() != b.field()->conductor())
        fail(ErrorKind::MalformedForm, "scalar arithmetic across different conductors");
}

Scalar operator+(const Scalar& a, const Scalar& b)
{
    check_field(a, b);
    std::vector<Scalar::Term> terms = a.terms();
    for (const auto& t : b.terms())
        terms.push_back(t);
    Rat prec = std::min(a.precision(), b.precision());
    return Scalar(a.field() ? a.field() : b.field(), std::move(terms), prec);
}

Scalar operator-(const Scalar& a, const Scalar& b) { return a + (-b); }

Scalar operator*(const Scalar& a, const Scalar& b)
{
    check_field(a, b);
    // result exact below min(Pa + vb, Pb + va)
    Rat prec = std::min(a.precision() + b.valuation_or_precision(),
                        b.precision() + a.valuation_or_precision());
    std::map<Rat, Cyclo> acc;
    for (const auto& s : a.terms())
        for (const auto& t : b.terms()) {
            Rat e = s.exp + t.exp;
            if (e >= prec)
                continue;
            auto it = acc.find(e);
            if (it == acc.end())
                acc.emplace(e, s.coeff * t.coeff);
            else
                it->second += s.coeff * t.coeff;
        }
    std::vector<Scalar::Term> terms;
    terms.reserve(acc.size());
    for (auto& [e, c] : acc)
        terms.push_back({e, std::move(c)});
    return Scalar(a.field() ? a.field() : b.field(), std::move(terms), prec);
}

Scalar Scalar::operator*(const Rat& r) const
{
    if (r == 0)
        return zero(field_, prec_);
    Scalar out = *this;
    for (auto& t : out.terms_)
        t.coeff *= r;
    return out;
}

Scalar Scalar::operator*(const Cyclo& c) const
{
    // multiplying by an exact field constant keeps the precision
    if (c.is_zero())
        return zero(field_, prec_);
    Scalar out = *this;
    for (auto& t : out.terms_)
        t.coeff *= c;
    return out;
}

Scalar Scalar::inverse() const
{
    if (terms_.empty())
        fail(ErrorKind::PrecisionExhausted, "inverse of a zero-to-precision scalar");
    const Rat v = terms_.front().exp;
    const Rat rel = prec_ - v;  // relative precision
    // this = c pi^v (1 + w), val(w) > 0: invert the unit by geometric series.
    Cyclo lead_inv = terms_.front().coeff.inverse();
    std::vector<Term> wt;
    for (size_t i = 1; i < terms_.size(); ++i)
        wt.push_back({terms_[i].exp - v, terms_[i].coeff * lead_inv});
    Scalar w(field_, std::move(wt), rel);
    Scalar acc = from_rat(field_, Rat(1), rel);
    if (!w.is_zero()) {
        Rat wv = *w.valuation();
        Scalar pw = from_rat(field_, Rat(1), rel);
        for (long k = 1; Rat(k) * wv < rel; ++k) {
            pw = pw * (-w);
            if (pw.is_zero())
                break;
            acc = acc + pw;
        }
    }
    // shift back: result = lead_inv pi^{-v} * acc, exact below rel - v
    std::vector<Term> out;
    for (const auto& t : acc.terms())
        out.push_back({t.exp - v, t.coeff * lead_inv});
    return Scalar(field_, std::move(out), rel - v);
}

Scalar Scalar::pow(long e) const
{
    if (e < 0)
        return inverse().pow(-e);
    if (e == 0)
        return from_rat(field_, Rat(1), prec_);
    Scalar acc = *this;
    for (long k = 1; k < e; ++k)
        acc = acc * *this;
    return acc;
}

Scalar Scalar::nth_root(unsigned long n) const
{
    auto r = try_nth_root(n);
    if (!r)
        fail(ErrorKind::RootNotRepresentable,
             "leading coefficient " + leading_coeff().to_string() + " has no " +
                 std::to_string(n) + "-th root in Q(zeta_" +
                 std::to_string(field_->conductor()) +
                 "); enlarging the conductor may make it representable");
    return *r;
}

std::optional<Scalar> Scalar::try_nth_root(unsigned long n) const
{
    if (n == 0)
        fail(ErrorKind::MalformedForm, "0th root of scalar");
    if (n == 1)
        return *this;
    if (terms_.empty())
        return zero(field_, prec_ / Rat(static_cast<long>(n)));
    const Rat v = terms_.front().exp;
    auto lead_root = terms_.front().coeff.nth_root(n);
    if (!lead_root)
        return std::nullopt;
    const Rat rel = prec_ - v;
    // unit part 1 + w, binomial series (1+w)^{1/n} = sum C(1/n, m) w^m
    Cyclo lead_inv = terms_.front().coeff.inverse();
    std::vector<Term> wt;
    for (size_t i = 1; i < terms_.size(); ++i)
        wt.push_back({terms_[i].exp - v, terms_[i].coeff * lead_inv});
    Scalar w(field_, std::move(wt), rel);
    Scalar acc = from_rat(field_, Rat(1), rel);
    if (!w.is_zero()) {
        Rat wv = *w.valuation();
        Scalar pw = from_rat(field_, Rat(1), rel);
        Rat binom(1);  // C(1/n, m)
        Rat inv_n(1, static_cast<long>(n));
        for (long m = 1; Rat(m) * wv < rel; ++m) {
            binom *= (inv_n - Rat(m - 1)) / Rat(m);
            pw = pw * w;
            if (pw.is_zero())
                break;
            acc = acc + pw * binom;
        }
    }
    // result = lead_root pi^{v/n} * acc
    std::vector<Term> out;
    for (const auto& t : acc.terms())
        out.push_back({t.exp + v / Rat(static_cast<long>(n)), t.coeff * *lead_root});
    return Scalar(field_, std::move(out), rel + v / Rat(static_cast<long>(n)));
}

std::vector<Scalar> Scalar::all_nth_roots(unsigned long n) const
{
    std::vector<Scalar> out;
    auto base = try_nth_root(n);
    if (!base)
        return out;
    if (base->is_zero())
        return {*base};
    for (const Cyclo& z : field_->all_roots_of_unity(n))
        out.push_back(*base * z);
    return out;
}

Cyclo Scalar::reduce_at(const Rat& level) const
{
    if (level >= prec_)
        fail(ErrorKind::PrecisionExhausted, "reduction level " + qtrop::to_string(level) +
                                                " is not below precision " + qtrop::to_string(prec_));
    for (const auto& t : terms_)
        if (t.exp == level)
            return t.coeff;
    return field_->zero();
}

Scalar::Comparison Scalar::compare(const Scalar& o) const
{
    Scalar d = *this - o;
    return Comparison{d.is_zero(), d.precision()};
}

Scalar Scalar::truncated(const Rat& new_precision) const
{
    return Scalar(field_, terms_, std::min(prec_, new_precision));
}

Scalar Scalar::with_precision(const Rat& new_precision) const
{
    return Scalar(field_, terms_, new_precision);
}

std::string Scalar::to_string() const
{
    if (terms_.empty())
        return prec_ >= exact_precision() ? "0" : "O(pi^" + qtrop::to_string(prec_) + ")";
    std::ostringstream os;
    bool first = true;
    for (const auto& t : terms_) {
        if (!first)
            os << " + ";
        os << "(" << t.coeff.to_string() << ")";
        if (t.exp != 0)
            os << "*pi^(" << qtrop::to_string(t.exp) << ")";
        first = false;
    }
    os << " + O(pi^" << qtrop::to_string(prec_) << ")";
    return os.str();
}

std::pair<std::optional<Rat>, Cyclo> valuation_and_reduce(const Scalar& s, const Rat& level)
{
    return {s.valuation(), s.reduce_at(level)};
}

}  // namespace qtrop
