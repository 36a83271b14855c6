#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qtrop/cyclotomic.hpp"
#include "qtrop/rational.hpp"

namespace qtrop {

// Default pi-exponent cutoff for scalars.
inline Rat default_precision() { return Rat(20); }

// Sentinel precision for values known exactly (structural zeros, exact
// constants): far beyond any working precision.
inline Rat exact_precision() { return Rat(1000000000); }

// An element of the base valued field: a truncated Puiseux series
//   sum_j c_j * pi^{e_j},  e_0 < e_1 < ...  (rational exponents)
// exact below its precision P: every term with exponent < P is stored.
// The zero-to-precision element has no terms. Values are immutable in
// spirit: all operations return new scalars.
class Scalar {
public:
    struct Term {
        Rat exp;
        Cyclo coeff;  // nonzero
    };

    Scalar() = default;
    Scalar(FieldPtr field, std::vector<Term> terms, Rat precision);

    static Scalar zero(const FieldPtr& f, Rat precision = default_precision());
    static Scalar exact_zero(const FieldPtr& f) { return zero(f, exact_precision()); }
    static Scalar from_cyclo(const Cyclo& c, Rat precision = default_precision());
    static Scalar from_rat(const FieldPtr& f, const Rat& r, Rat precision = default_precision());
    // c * pi^e
    static Scalar monomial(const Cyclo& c, const Rat& e, Rat precision = default_precision());
    static Scalar pi_pow(const FieldPtr& f, const Rat& e, Rat precision = default_precision());

    const FieldPtr& field() const { return field_; }
    const std::vector<Term>& terms() const { return terms_; }
    const Rat& precision() const { return prec_; }

    bool is_zero() const { return terms_.empty(); }
    // nullopt encodes the infinity sentinel of the zero-to-precision element.
    std::optional<Rat> valuation() const;
    // valuation, with zero treated as precision (the tightest honest bound).
    Rat valuation_or_precision() const;

    const Cyclo& leading_coeff() const;

    Scalar operator-() const;
    friend Scalar operator+(const Scalar& a, const Scalar& b);
    friend Scalar operator-(const Scalar& a, const Scalar& b);
    friend Scalar operator*(const Scalar& a, const Scalar& b);
    Scalar operator*(const Rat& r) const;
    Scalar operator*(const Cyclo& c) const;

    Scalar inverse() const;
    friend Scalar operator/(const Scalar& a, const Scalar& b) { return a * b.inverse(); }
    Scalar pow(long e) const;

    // r with r^n = *this (within precision); RootNotRepresentable when the
    // leading coefficient has no n-th root in Q(zeta_N).
    Scalar nth_root(unsigned long n) const;
    std::optional<Scalar> try_nth_root(unsigned long n) const;
    // All n-th roots in the field (empty when none representable).
    std::vector<Scalar> all_nth_roots(unsigned long n) const;

    // Coefficient of pi^level; PrecisionExhausted if level >= precision.
    Cyclo reduce_at(const Rat& level) const;

    // Equality decided at the smaller precision of the two operands.
    struct Comparison {
        bool equal;
        Rat decided_at;  // precision at which the verdict holds
    };
    Comparison compare(const Scalar& o) const;
    bool eq(const Scalar& o) const { return compare(o).equal; }

    Scalar truncated(const Rat& new_precision) const;
    // Same value, higher declared precision: only valid when the tail is
    // known to vanish (use for exact inputs).
    Scalar with_precision(const Rat& new_precision) const;

    std::string to_string() const;

private:
    void normalize();

    FieldPtr field_;
    std::vector<Term> terms_;
    Rat prec_ = default_precision();
};

// (valuation, reduction at level): the reduction is the coefficient of
// pi^level; nonzero exactly when the valuation equals the level.
std::pair<std::optional<Rat>, Cyclo> valuation_and_reduce(const Scalar& s, const Rat& level);

}  // namespace qtrop
