#include "qtrop/cyclotomic.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <numeric>
#include <sstream>

#include "qtrop/errors.hpp"

namespace qtrop {

namespace {

// Dense integer polynomials, constant term first.
using IPoly = std::vector<Int>;

void trim(IPoly& p)
{
    while (!p.empty() && p.back() == 0)
        p.pop_back();
}

// Exact division of integer polynomials (remainder must vanish).
IPoly exact_div(IPoly num, const IPoly& den)
{
    IPoly q(num.size() >= den.size() ? num.size() - den.size() + 1 : 0, Int(0));
    while (num.size() >= den.size() && !num.empty()) {
        Int lead = num.back() / den.back();
        assert(lead * den.back() == num.back());
        size_t shift = num.size() - den.size();
        q[shift] = lead;
        for (size_t i = 0; i < den.size(); ++i)
            num[shift + i] -= lead * den[i];
        trim(num);
    }
    assert(num.empty());
    return q;
}

IPoly cyclotomic_poly(unsigned long n, std::map<unsigned long, IPoly>& cache)
{
    auto it = cache.find(n);
    if (it != cache.end())
        return it->second;
    // x^n - 1 divided by the product of Phi_d over proper divisors d of n.
    IPoly num(n + 1, Int(0));
    num[0] = -1;
    num[n] = 1;
    for (unsigned long d = 1; d < n; ++d) {
        if (n % d != 0)
            continue;
        num = exact_div(std::move(num), cyclotomic_poly(d, cache));
    }
    cache.emplace(n, num);
    return num;
}

unsigned long euler_phi(unsigned long n)
{
    unsigned long result = n;
    for (unsigned long p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            while (n % p == 0)
                n /= p;
            result -= result / p;
        }
    }
    if (n > 1)
        result -= result / n;
    return result;
}

}  // namespace

CycloField::CycloField(unsigned long conductor) : conductor_(conductor)
{
    if (conductor == 0)
        fail(ErrorKind::MalformedForm, "conductor must be positive");
    std::map<unsigned long, IPoly> cache;
    min_poly_ = cyclotomic_poly(conductor, cache);
    degree_ = static_cast<unsigned>(euler_phi(conductor));
    assert(min_poly_.size() == degree_ + 1);
    assert(min_poly_.back() == 1);

    // Reduction table: x^{phi + k} mod Phi, k = 0..phi-2.
    auto mul_by_x = [this](const std::vector<Rat>& v) {
        std::vector<Rat> next(degree_, Rat(0));
        Rat carry = v[degree_ - 1];
        for (unsigned i = degree_ - 1; i >= 1; --i)
            next[i] = v[i - 1];
        if (carry != 0)
            for (unsigned i = 0; i < degree_; ++i)
                next[i] -= carry * Rat(min_poly_[i]);
        return next;
    };
    if (degree_ >= 2) {
        std::vector<Rat> cur(degree_, Rat(0));
        for (unsigned i = 0; i < degree_; ++i)
            cur[i] = -Rat(min_poly_[i]);  // x^phi
        for (unsigned k = 0; k + 1 < degree_; ++k) {
            reductions_.push_back(cur);
            cur = mul_by_x(cur);
        }
    }
}

std::shared_ptr<const CycloField> CycloField::make(unsigned long conductor)
{
    return std::shared_ptr<const CycloField>(new CycloField(conductor));
}

Cyclo CycloField::zero() const
{
    return Cyclo(shared_from_this(), std::vector<Rat>(degree_, Rat(0)));
}

Cyclo CycloField::one() const { return from_rat(Rat(1)); }

Cyclo CycloField::from_rat(const Rat& r) const
{
    std::vector<Rat> c(degree_, Rat(0));
    c[0] = r;
    return Cyclo(shared_from_this(), std::move(c));
}

Cyclo CycloField::from_coords(std::vector<Rat> coords) const
{
    if (coords.size() != degree_)
        fail(ErrorKind::MalformedForm, "coordinate vector has wrong length for conductor " +
                                           std::to_string(conductor_));
    return Cyclo(shared_from_this(), std::move(coords));
}

Cyclo CycloField::zeta_pow(long k) const
{
    long n = static_cast<long>(conductor_);
    long j = ((k % n) + n) % n;
    std::vector<Rat> cur(degree_, Rat(0));
    cur[0] = 1;
    // multiply by x, j times, reducing via x^phi = -(lower part of Phi)
    for (long e = 0; e < j; ++e) {
        std::vector<Rat> next(degree_, Rat(0));
        Rat carry = cur[degree_ - 1];
        for (unsigned i = degree_ - 1; i >= 1; --i)
            next[i] = cur[i - 1];
        if (carry != 0)
            for (unsigned i = 0; i < degree_; ++i)
                next[i] -= carry * Rat(min_poly_[i]);
        cur = std::move(next);
    }
    return Cyclo(shared_from_this(), std::move(cur));
}

unsigned long CycloField::max_root_of_unity_order() const
{
    return conductor_ % 2 == 0 ? conductor_ : 2 * conductor_;
}

std::optional<Cyclo> CycloField::root_of_unity(unsigned long d) const
{
    if (d == 0)
        return std::nullopt;
    unsigned long m = max_root_of_unity_order();
    if (m % d != 0)
        return std::nullopt;
    if (conductor_ % d == 0)
        return zeta_pow(static_cast<long>(conductor_ / d));
    // N odd, d even, d | 2N: build from zeta_{2N} = -zeta_N^{(N+1)/2}.
    unsigned long k = m / d;  // zeta_d = zeta_{2N}^k
    long sign = (k % 2 == 0) ? 1 : -1;
    Cyclo z = zeta_pow(static_cast<long>((k * ((conductor_ + 1) / 2)) % conductor_));
    return sign == 1 ? z : -z;
}

std::vector<Cyclo> CycloField::all_roots_of_unity(unsigned long d) const
{
    unsigned long m = max_root_of_unity_order();
    unsigned long g = std::gcd(d, m);
    std::vector<Cyclo> out;
    auto gen = root_of_unity(g);
    assert(gen);
    Cyclo cur = one();
    for (unsigned long i = 0; i < g; ++i) {
        out.push_back(cur);
        cur = cur * *gen;
    }
    return out;
}

Cyclo::Cyclo(FieldPtr field, std::vector<Rat> coords) : field_(std::move(field)), c_(std::move(coords)) {}

bool Cyclo::is_zero() const
{
    return std::all_of(c_.begin(), c_.end(), [](const Rat& r) { return r == 0; });
}

bool Cyclo::is_rational() const
{
    for (size_t i = 1; i < c_.size(); ++i)
        if (c_[i] != 0)
            return false;
    return true;
}

Rat Cyclo::rational_value() const
{
    if (!is_rational())
        fail(ErrorKind::MalformedForm, "element is not rational: " + to_string());
    return c_.empty() ? Rat(0) : c_[0];
}

Cyclo Cyclo::operator-() const
{
    Cyclo r = *this;
    for (auto& x : r.c_)
        x = -x;
    return r;
}

static void check_same_field(const Cyclo& a, const Cyclo& b)
{
    if (a.field() != b.field() && a.field()->conductor() != b.field()->conductor())
        fail(ErrorKind::MalformedForm, "cyclotomic arithmetic across different conductors");
}

Cyclo& Cyclo::operator+=(const Cyclo& o)
{
    check_same_field(*this, o);
    for (size_t i = 0; i < c_.size(); ++i)
        c_[i] += o.c_[i];
    return *this;
}

Cyclo& Cyclo::operator-=(const Cyclo& o)
{
    check_same_field(*this, o);
    for (size_t i = 0; i < c_.size(); ++i)
        c_[i] -= o.c_[i];
    return *this;
}

Cyclo& Cyclo::operator*=(const Cyclo& o)
{
    check_same_field(*this, o);
    const unsigned phi = field_->degree();
    std::vector<Rat> prod(2 * phi - 1, Rat(0));
    for (unsigned i = 0; i < phi; ++i) {
        if (c_[i] == 0)
            continue;
        for (unsigned j = 0; j < phi; ++j) {
            if (o.c_[j] == 0)
                continue;
            prod[i + j] += c_[i] * o.c_[j];
        }
    }
    std::vector<Rat> red(prod.begin(), prod.begin() + phi);
    for (unsigned k = 0; k + 1 < phi; ++k) {
        const Rat& coef = prod[phi + k];
        if (coef == 0)
            continue;
        const auto& row = field_->reductions_[k];
        for (unsigned i = 0; i < phi; ++i)
            red[i] += coef * row[i];
    }
    c_ = std::move(red);
    return *this;
}

Cyclo& Cyclo::operator*=(const Rat& r)
{
    for (auto& x : c_)
        x *= r;
    return *this;
}

bool Cyclo::operator==(const Cyclo& o) const
{
    check_same_field(*this, o);
    return c_ == o.c_;
}

Cyclo Cyclo::pow(long e) const
{
    if (e < 0)
        return inverse().pow(-e);
    Cyclo base = *this;
    Cyclo acc = field_->one();
    unsigned long k = static_cast<unsigned long>(e);
    while (k) {
        if (k & 1)
            acc *= base;
        base *= base;
        k >>= 1;
    }
    return acc;
}

Cyclo Cyclo::inverse() const
{
    if (is_zero())
        fail(ErrorKind::MalformedForm, "division by zero in Q(zeta)");
    // Extended Euclid in Q[x] against the (irreducible) cyclotomic polynomial:
    // u * this + v * Phi = 1, so u is the inverse.
    using QPoly = std::vector<Rat>;
    auto deg = [](const QPoly& p) -> long {
        for (size_t i = p.size(); i-- > 0;)
            if (p[i] != 0)
                return static_cast<long>(i);
        return -1;
    };
    QPoly r0(field_->min_poly_.size());
    for (size_t i = 0; i < r0.size(); ++i)
        r0[i] = Rat(field_->min_poly_[i]);
    QPoly r1(c_.begin(), c_.end());
    while (!r1.empty() && r1.back() == 0)
        r1.pop_back();
    QPoly s0 = {Rat(0)}, s1 = {Rat(1)};  // cofactors of `this`
    while (deg(r1) > 0) {
        long d0 = deg(r0), d1 = deg(r1);
        QPoly q(d0 - d1 + 1, Rat(0));
        QPoly rem = r0;
        for (long k = d0 - d1; k >= 0; --k) {
            Rat coef = rem[k + d1] / r1[d1];
            q[k] = coef;
            if (coef == 0)
                continue;
            for (long i = 0; i <= d1; ++i)
                rem[k + i] -= coef * r1[i];
        }
        // s_new = s0 - q * s1
        QPoly snew(std::max(s0.size(), q.size() + s1.size()), Rat(0));
        for (size_t i = 0; i < s0.size(); ++i)
            snew[i] = s0[i];
        for (size_t i = 0; i < q.size(); ++i) {
            if (q[i] == 0)
                continue;
            for (size_t j = 0; j < s1.size(); ++j)
                snew[i + j] -= q[i] * s1[j];
        }
        r0 = std::move(r1);
        r1 = std::move(rem);
        while (!r1.empty() && r1.back() == 0)
            r1.pop_back();
        s0 = std::move(s1);
        s1 = std::move(snew);
    }
    // r1 is a nonzero constant (Phi is irreducible over Q).
    assert(deg(r1) == 0);
    Rat unit = r1[0];
    std::vector<Rat> inv(field_->degree(), Rat(0));
    for (size_t i = 0; i < s1.size() && i < inv.size(); ++i)
        inv[i] = s1[i] / unit;
    Cyclo result(field_, std::move(inv));
    assert((result * *this) == field_->one());
    return result;
}

std::optional<Cyclo::Monomial> Cyclo::as_monomial() const
{
    if (is_zero())
        return Monomial{Rat(0), 0};
    const unsigned long n = field_->conductor();
    for (unsigned long j = 0; j < n; ++j) {
        Cyclo cand = *this * field_->zeta_pow(-static_cast<long>(j));
        if (cand.is_rational())
            return Monomial{cand.rational_value(), j};
    }
    return std::nullopt;
}

std::optional<Cyclo> sqrt_of_squarefree(const FieldPtr& field, const Int& m0)
{
    if (m0 == 1)
        return field->one();
    if (m0 == 0)
        return field->zero();
    Int a = abs(m0);
    // conductor of Q(sqrt(m0)): |m0| when m0 = 1 mod 4, else 4|m0|
    Int cond = ((m0 - 1) % 4 == 0) ? a : 4 * a;
    unsigned long m = field->max_root_of_unity_order();
    if (!cond.fits_ulong_p() || m % cond.get_ui() != 0)
        return std::nullopt;

    // a is small here (it divides the root-of-unity order)
    std::vector<unsigned long> primes;
    {
        unsigned long rest = a.get_ui();
        for (unsigned long p = 2; p * p <= rest; ++p)
            while (rest % p == 0) {
                primes.push_back(p);
                rest /= p;
            }
        if (rest > 1)
            primes.push_back(rest);
    }

    Cyclo g = field->one();
    Int g_squared(1);
    for (unsigned long p : primes) {
        if (p == 2) {
            // sqrt(2) = zeta_8 + zeta_8^{-1}
            auto z8 = field->root_of_unity(8);
            if (!z8)
                return std::nullopt;
            g *= (*z8 + z8->inverse());
            g_squared *= 2;
        } else {
            // Gauss sum for odd p: (sum_a (a|p) zeta_p^a)^2 = (-1)^{(p-1)/2} p
            auto zp = field->root_of_unity(p);
            if (!zp)
                return std::nullopt;
            Cyclo sum = field->zero();
            Cyclo zpow = field->one();
            for (unsigned long aa = 1; aa < p; ++aa) {
                zpow = zpow * *zp;
                int ls = mpz_legendre(Int(static_cast<long>(aa)).get_mpz_t(),
                                      Int(static_cast<long>(p)).get_mpz_t());
                if (ls == 1)
                    sum += zpow;
                else if (ls == -1)
                    sum -= zpow;
            }
            g *= sum;
            g_squared *= (p % 4 == 1) ? Int(static_cast<long>(p)) : -Int(static_cast<long>(p));
        }
    }
    if (g_squared != m0) {
        assert(g_squared == -m0);
        auto i = field->root_of_unity(4);
        if (!i)
            return std::nullopt;
        g *= *i;
    }
    if ((g * g) != field->from_rat(Rat(m0)))
        return std::nullopt;
    return g;
}

std::optional<Cyclo> Cyclo::sqrt_in_field() const
{
    if (is_zero())
        return field_->zero();
    auto mono = as_monomial();
    if (!mono)
        return std::nullopt;  // outside the implemented fragment
    const unsigned long n = field_->conductor();
    const Rat& rho = mono->scale;
    // candidates r = s * zeta^u with 2u = j (mod N) or 2u = j + N/2 (mod N)
    for (unsigned long u = 0; u < n; ++u) {
        unsigned long two_u = (2 * u) % n;
        Rat target;  // s^2 must equal target
        if (two_u == mono->zeta_exp)
            target = rho;
        else if (n % 2 == 0 && two_u == (mono->zeta_exp + n / 2) % n)
            target = -rho;
        else
            continue;
        // s = (t/den) * sqrt(m0) with target = t^2 m0 / den^2, m0 squarefree
        Int den = target.get_den();
        Int v = Int(target.get_num()) * den;  // target = v / den^2
        Int t(1);
        for (unsigned long p = 2; p <= 100000 && Int(p) * Int(p) <= abs(v); ++p)
            while (v % (Int(p) * Int(p)) == 0) {
                v /= Int(p) * Int(p);
                t *= p;
            }
        if (v > 0 && mpz_perfect_square_p(v.get_mpz_t())) {
            Int s;
            mpz_sqrt(s.get_mpz_t(), v.get_mpz_t());
            t *= s;
            v = 1;
        }
        auto root = sqrt_of_squarefree(field_, v);
        if (!root)
            continue;
        Rat tq(t, den);
        tq.canonicalize();
        Cyclo cand = *root * tq;
        cand *= field_->zeta_pow(static_cast<long>(u));
        if (cand * cand == *this)
            return cand;
    }
    return std::nullopt;
}

std::optional<Cyclo> Cyclo::odd_root(unsigned long n) const
{
    if (n == 1)
        return *this;
    if (is_zero())
        return field_->zero();
    auto mono = as_monomial();
    if (!mono)
        return std::nullopt;
    const unsigned long N = field_->conductor();
    for (unsigned long u = 0; u < N; ++u) {
        unsigned long nu = (n * u) % N;
        Rat target;
        if (nu == mono->zeta_exp)
            target = mono->scale;
        else if (N % 2 == 0 && nu == (mono->zeta_exp + N / 2) % N)
            target = -mono->scale;
        else
            continue;
        auto s = exact_root(target, n);  // odd n: sign passes through
        if (!s)
            continue;
        Cyclo cand = field_->from_rat(*s) * field_->zeta_pow(static_cast<long>(u));
        if (cand.pow(static_cast<long>(n)) == *this)
            return cand;
    }
    return std::nullopt;
}

std::optional<Cyclo> Cyclo::nth_root(unsigned long n) const
{
    if (n == 0)
        fail(ErrorKind::MalformedForm, "0th root");
    unsigned long odd = n;
    unsigned twos = 0;
    while (odd % 2 == 0) {
        odd /= 2;
        ++twos;
    }
    auto cur = odd_root(odd);
    if (!cur)
        return std::nullopt;
    unsigned long cur_pow = odd;  // invariant: cur^cur_pow == *this
    for (unsigned i = 0; i < twos; ++i) {
        std::optional<Cyclo> next;
        // Phases of the current root can differ in square-rootability:
        // scan the whole coset cur * mu_{cur_pow}.
        for (const Cyclo& zc : field_->all_roots_of_unity(cur_pow)) {
            next = (*cur * zc).sqrt_in_field();
            if (next)
                break;
        }
        if (!next)
            return std::nullopt;
        cur = next;
        cur_pow *= 2;
    }
    assert(cur->pow(static_cast<long>(n)) == *this);
    return cur;
}

std::vector<Cyclo> Cyclo::all_nth_roots(unsigned long n) const
{
    std::vector<Cyclo> out;
    auto base = nth_root(n);
    if (!base)
        return out;
    if (base->is_zero())
        return {*base};
    for (const Cyclo& z : field_->all_roots_of_unity(n))
        out.push_back(*base * z);
    return out;
}

std::string Cyclo::to_string() const
{
    std::ostringstream os;
    bool first = true;
    for (size_t i = 0; i < c_.size(); ++i) {
        if (c_[i] == 0)
            continue;
        if (!first)
            os << " + ";
        os << c_[i].get_str();
        if (i >= 1)
            os << "*z^" << i;
        first = false;
    }
    if (first)
        os << "0";
    return os.str();
}

}  // namespace qtrop
