#pragma once

#include <gmpxx.h>

#include <optional>
#include <stdexcept>
#include <string>

namespace qtrop {

// Exact rationals. All exponents, levels and lengths in the library are Rat;
// no floating point anywhere.
using Rat = mpq_class;
using Int = mpz_class;

inline Rat rat(long num, long den = 1)
{
    Rat r(num, den);
    r.canonicalize();
    return r;
}

inline Rat rat_parse(const std::string& s)
{
    Rat r(s);
    r.canonicalize();
    return r;
}

inline bool is_integer(const Rat& r) { return r.get_den() == 1; }

inline Int floor_div(const Int& a, const Int& b)
{
    Int q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

// r = a/q for an integer a, i.e. q*r is an integer.
inline bool divides(long q, const Rat& r)
{
    Rat s = r / rat(q);
    return is_integer(s);
}

// Exact integer n-th root: returns the root only when op is a perfect n-th
// power (negative op allowed for odd n).
inline std::optional<Int> exact_root(const Int& op, unsigned long n)
{
    if (n == 0)
        throw std::invalid_argument("exact_root: n must be positive");
    if (sgn(op) < 0 && n % 2 == 0)
        return std::nullopt;
    Int r;
    int exact = mpz_root(r.get_mpz_t(), op.get_mpz_t(), n);
    if (!exact)
        return std::nullopt;
    return r;
}

// Exact rational n-th root, if one exists in Q.
inline std::optional<Rat> exact_root(const Rat& op, unsigned long n)
{
    auto num = exact_root(Int(op.get_num()), n);
    if (!num)
        return std::nullopt;
    auto den = exact_root(Int(op.get_den()), n);
    if (!den)
        return std::nullopt;
    Rat r(*num, *den);
    r.canonicalize();
    return r;
}

inline std::string to_string(const Rat& r) { return r.get_str(); }

inline long to_long(const Int& z)
{
    if (!z.fits_slong_p())
        throw std::overflow_error("integer too large: " + z.get_str());
    return z.get_si();
}

inline long to_long(const Rat& r)
{
    if (!is_integer(r))
        throw std::invalid_argument("not an integer: " + to_string(r));
    return to_long(Int(r.get_num()));
}

}  // namespace qtrop
