#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "qtrop/rational.hpp"

namespace qtrop {

class Cyclo;

// The coefficient field Q(zeta_N): rationals extended by a primitive N-th
// root of unity, represented in the power basis 1, zeta, ..., zeta^{phi(N)-1}
// modulo the N-th cyclotomic polynomial. One field object is shared by all
// values of a computation; arithmetic across different conductors is an error.
class CycloField : public std::enable_shared_from_this<CycloField> {
public:
    static std::shared_ptr<const CycloField> make(unsigned long conductor);

    unsigned long conductor() const { return conductor_; }
    unsigned degree() const { return degree_; }  // phi(N)

    // Coefficients of the N-th cyclotomic polynomial, constant term first.
    const std::vector<Int>& min_poly() const { return min_poly_; }

    Cyclo zero() const;
    Cyclo one() const;
    Cyclo from_rat(const Rat& r) const;
    Cyclo from_coords(std::vector<Rat> coords) const;

    // zeta_N^k for any integer k.
    Cyclo zeta_pow(long k) const;

    // Largest order of a root of unity in the field: N for even N, 2N for odd.
    unsigned long max_root_of_unity_order() const;

    // A primitive d-th root of unity, when one exists in the field.
    std::optional<Cyclo> root_of_unity(unsigned long d) const;

    // All d-th roots of unity contained in the field (a cyclic group of
    // order gcd(d, max_root_of_unity_order())).
    std::vector<Cyclo> all_roots_of_unity(unsigned long d) const;

private:
    explicit CycloField(unsigned long conductor);

    unsigned long conductor_;
    unsigned degree_;
    std::vector<Int> min_poly_;
    // x^{phi+k} mod min_poly for k = 0 .. phi-2, to make reduction a table walk.
    std::vector<std::vector<Rat>> reductions_;

    friend class Cyclo;
};

using FieldPtr = std::shared_ptr<const CycloField>;

// An element of Q(zeta_N) in reduced power-basis form. Exact arithmetic,
// decidable equality.
class Cyclo {
public:
    Cyclo() = default;

    const FieldPtr& field() const { return field_; }
    const std::vector<Rat>& coords() const { return c_; }

    bool is_zero() const;
    bool is_rational() const;
    // The value as a rational, when is_rational().
    Rat rational_value() const;

    Cyclo operator-() const;
    Cyclo& operator+=(const Cyclo& o);
    Cyclo& operator-=(const Cyclo& o);
    Cyclo& operator*=(const Cyclo& o);
    Cyclo& operator*=(const Rat& r);

    friend Cyclo operator+(Cyclo a, const Cyclo& b) { return a += b; }
    friend Cyclo operator-(Cyclo a, const Cyclo& b) { return a -= b; }
    friend Cyclo operator*(Cyclo a, const Cyclo& b) { return a *= b; }
    friend Cyclo operator*(Cyclo a, const Rat& r) { return a *= r; }
    friend Cyclo operator*(const Rat& r, Cyclo a) { return a *= r; }

    Cyclo inverse() const;  // error on zero
    friend Cyclo operator/(const Cyclo& a, const Cyclo& b) { return a * b.inverse(); }

    bool operator==(const Cyclo& o) const;
    bool operator!=(const Cyclo& o) const { return !(*this == o); }

    Cyclo pow(long e) const;

    // Writes the element as r * zeta_N^j when it has that shape.
    struct Monomial {
        Rat scale;
        unsigned long zeta_exp;
    };
    std::optional<Monomial> as_monomial() const;

    // One n-th root within the representable fragment: monomial elements
    // (rational times a root of unity) plus, for square roots, arbitrary
    // rationals via quadratic Gauss sums. Returns nullopt when no root is
    // found in the fragment; every returned value r satisfies r^n == *this
    // exactly (verified before returning).
    std::optional<Cyclo> nth_root(unsigned long n) const;

    // All n-th roots in the field, given that at least one exists.
    std::vector<Cyclo> all_nth_roots(unsigned long n) const;

    std::string to_string() const;

private:
    Cyclo(FieldPtr field, std::vector<Rat> coords);

    std::optional<Cyclo> sqrt_in_field() const;
    std::optional<Cyclo> odd_root(unsigned long n) const;

    FieldPtr field_;
    std::vector<Rat> c_;

    friend class CycloField;
};

// sqrt of a squarefree integer inside Q(zeta_N) via quadratic Gauss sums;
// nullopt when the conductor of Q(sqrt(m0)) does not divide the field's
// root-of-unity order.
std::optional<Cyclo> sqrt_of_squarefree(const FieldPtr& field, const Int& m0);

}  // namespace qtrop
