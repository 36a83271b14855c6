#include "qtrop/annulus.hpp"

#include <algorithm>
#include <cassert>

namespace qtrop {

namespace {

Rat line_at(const Scalar& c, long i, const Rat& v)
{
    return c.valuation_or_precision() + Rat(i) * v;
}

// Norm-exponent of the stored part of a series on [vlo, vhi]: the minimum of
// coefficient lines at the endpoints. Zero-to-precision coefficients enter
// through their precision bound.
Rat stored_norm(const ScalarSeries& s, const Rat& vlo, const Rat& vhi)
{
    bool any = false;
    Rat best;
    for (long i = s.lo(); i <= s.hi(); ++i) {
        const Scalar c = s.coeff(i);
        for (const Rat& v : {vlo, vhi}) {
            Rat l = line_at(c, i, v);
            if (!any || l < best) {
                best = l;
                any = true;
            }
        }
    }
    if (!any)
        return Rat(100000);
    return best;
}

// Windowed series with a rigorous error bound: the represented object equals
// the stored polynomial plus unrepresented content of norm-exponent >= err
// on the annulus. err == nullopt means the representation is exact.
struct WS {
    ScalarSeries s;
    std::optional<Rat> err;
};

Rat min_err(const std::optional<Rat>& a, const Rat& b)
{
    return a ? std::min(*a, b) : b;
}

std::optional<Rat> combine_err(const std::optional<Rat>& a, const std::optional<Rat>& b)
{
    if (!a)
        return b;
    if (!b)
        return a;
    return std::min(*a, *b);
}

struct Ctx {
    FieldPtr field;
    Rat vlo, vhi;   // annulus window of the working coordinate
    long wlo, whi;  // working exponent range
    Rat sprec;
    Rat target;  // norm-exponent below which nothing may be discarded silently

    Rat norm(const WS& x) const
    {
        Rat n = stored_norm(x.s, vlo, vhi);
        return x.err ? std::min(n, *x.err) : n;
    }

    WS normalize(const ScalarSeries& s, std::optional<Rat> err) const
    {
        if (!s.tail_exact())
            fail(ErrorKind::InsufficientPrecision,
                 "windowed computation received a series with an untracked tail");
        // pad/clip the stored window to the working range, folding clipped
        // coefficients into the error bound
        std::vector<Scalar> out(static_cast<size_t>(whi - wlo + 1), Scalar::exact_zero(field));
        for (long i = s.lo(); i <= s.hi(); ++i) {
            Scalar c = s.coeff(i);
            if (i < wlo || i > whi) {
                err = min_err(err, std::min(line_at(c, i, vlo), line_at(c, i, vhi)));
                continue;
            }
            out[static_cast<size_t>(i - wlo)] = std::move(c);
        }
        return WS{ScalarSeries(field, wlo, std::move(out), true, sprec), err};
    }

    WS from_plain(const ScalarSeries& s) const { return normalize(s, std::nullopt); }

    ScalarSeries plain_one() const
    {
        return ScalarSeries::constant(Scalar::from_rat(field, Rat(1), sprec), sprec);
    }

    WS one() const { return from_plain(plain_one()); }

    WS add(const WS& a, const WS& b) const { return WS{a.s + b.s, combine_err(a.err, b.err)}; }

    WS mul(const WS& a, const WS& b) const
    {
        std::optional<Rat> err;
        if (a.err)
            err = min_err(err, *a.err + stored_norm(b.s, vlo, vhi));
        if (b.err)
            err = min_err(err, *b.err + stored_norm(a.s, vlo, vhi));
        if (a.err && b.err)
            err = min_err(err, *a.err + *b.err);
        return normalize(a.s * b.s, err);
    }

    WS scaled(const WS& a, const Scalar& c) const
    {
        std::optional<Rat> err;
        if (a.err)
            err = *a.err + c.valuation_or_precision();
        return WS{a.s.scaled(c), err};
    }

    // (1 + v)^e for rational e where v = u - 1 has positive norm; binomial.
    WS unit_pow_rat(const WS& u, const Rat& e) const
    {
        WS v = normalize(u.s - plain_one(), u.err);
        Rat g = norm(v);
        if (g <= 0)
            fail(ErrorKind::InsufficientPrecision,
                 "unit power needs a remainder of positive norm-exponent; got " +
                     qtrop::to_string(g));
        WS acc = one();
        WS pw = one();
        Rat binom(1);
        long m = 1;
        while (Rat(m - 1) * g < target) {
            binom *= (e - Rat(m - 1)) / Rat(m);
            pw = mul(pw, v);
            if (binom != 0)
                acc = add(acc, WS{pw.s.scaled_rat(binom), pw.err});
            ++m;
            if (m > 4000)
                fail(ErrorKind::InsufficientPrecision, "binomial series did not close");
        }
        acc.err = min_err(acc.err, Rat(m - 1) * g);
        return acc;
    }

    // Newton inversion x <- x (2 - u x): the residual 1 - u x squares each
    // round, so norm doubles.
    WS unit_inverse(const WS& u) const
    {
        WS v = normalize(u.s - plain_one(), u.err);
        Rat g = norm(v);
        if (g <= 0)
            fail(ErrorKind::InsufficientPrecision,
                 "unit inverse needs a remainder of positive norm-exponent; got " +
                     qtrop::to_string(g));
        WS x = one();
        Rat reached = g;
        WS two = from_plain(plain_one().scaled_rat(Rat(2)));
        while (reached < target) {
            WS ux = mul(u, x);
            x = mul(x, add(two, WS{-ux.s, ux.err}));
            reached = reached * 2;
        }
        x.err = min_err(x.err, reached);
        return x;
    }

    // f(t * u(t)) for a unit u = 1 + small.
    WS substitute_unit(const WS& f, const WS& u) const
    {
        WS acc = normalize(ScalarSeries::zero(field, sprec), std::nullopt);
        std::vector<WS> pows_pos{one()};
        std::vector<WS> pows_neg;
        std::optional<WS> uinv;
        for (long i = f.s.lo(); i <= f.s.hi(); ++i) {
            Scalar c = f.s.coeff(i);
            if (c.is_zero())
                continue;
            const WS* ui;
            if (i >= 0) {
                while (static_cast<long>(pows_pos.size()) <= i)
                    pows_pos.push_back(mul(pows_pos.back(), u));
                ui = &pows_pos[static_cast<size_t>(i)];
            } else {
                if (!uinv)
                    uinv = unit_inverse(u);
                if (pows_neg.empty())
                    pows_neg.push_back(*uinv);
                while (static_cast<long>(pows_neg.size()) < -i)
                    pows_neg.push_back(mul(pows_neg.back(), *uinv));
                ui = &pows_neg[static_cast<size_t>(-i - 1)];
            }
            WS term = scaled(*ui, c);
            term = normalize(term.s.shifted(i), term.err);
            acc = add(acc, term);
        }
        // the substituted unit has norm 0, so f's own error survives as is
        if (f.err)
            acc.err = min_err(acc.err, *f.err);
        if (u.err)
            acc.err = min_err(acc.err, stored_norm(f.s, vlo, vhi) + *u.err);
        return acc;
    }

    // w with (s w(s)) u(s w(s)) = s, by Newton on G(w) = w u(sw) - 1 whose
    // Frechet derivative is multiplication by J = u(sw) + sw u'(sw).
    WS revert_unit(const WS& u) const
    {
        WS vpart = normalize(u.s - plain_one(), u.err);
        Rat g = norm(vpart);
        if (g <= 0)
            fail(ErrorKind::InsufficientPrecision, "unit reversion needs positive norm-exponent");
        WS uprime{u.s.euler_derivative(), u.err};  // (s u')(s)
        WS w = one();
        Rat reached = g;
        while (reached < target) {
            WS u_at = substitute_unit(u, w);
            WS wu = mul(w, u_at);
            WS G = normalize(wu.s - plain_one(), wu.err);
            // J = u(sw) + (sw) u'(sw); the euler derivative carries the
            // argument factor already
            WS J = add(u_at, substitute_unit(uprime, w));
            WS step = mul(G, unit_inverse(J));
            w = add(w, WS{-step.s, step.err});
            reached = reached * 2;
        }
        // verify the defining identity to the target
        WS resid = add(mul(w, substitute_unit(u, w)), WS{-plain_one(), std::nullopt});
        Rat ok = norm(normalize(resid.s, resid.err));
        if (ok < target)
            fail(ErrorKind::IterationDivergence,
                 "coordinate reversion did not contract (residual norm " + qtrop::to_string(ok) +
                     " below target " + qtrop::to_string(target) + ")");
        w.err = min_err(w.err, ok);
        return w;
    }

    // exp(sum_{m != 0} h_m/m t^m) for h of positive norm with no free term:
    // the unit u with z = y u solving dz/z = (1 + h) dy/y.
    WS exp_dlog(const WS& h) const
    {
        Rat g = norm(h);
        if (g <= 0)
            fail(ErrorKind::InsufficientPrecision, "exp needs positive norm-exponent");
        WS arg{h.s.antiderivative_dlog(), h.err};
        WS acc = one();
        WS pw = one();
        Rat factorial(1);
        long j = 1;
        while (Rat(j - 1) * g < target) {
            factorial *= Rat(j);
            pw = mul(pw, arg);
            acc = add(acc, WS{pw.s.scaled_rat(Rat(1) / factorial), pw.err});
            ++j;
            if (j > 4000)
                fail(ErrorKind::InsufficientPrecision, "exponential series did not close");
        }
        acc.err = min_err(acc.err, Rat(j - 1) * g);
        return acc;
    }

    // 1 + z w'(z)/w(z)
    WS dlog_factor(const WS& w) const
    {
        WS num{w.s.euler_derivative(), w.err};
        return add(one(), mul(num, unit_inverse(w)));
    }

    WS pow(const WS& base, long e) const
    {
        WS acc = one();
        if (e >= 0) {
            for (long k = 0; k < e; ++k)
                acc = mul(acc, base);
            return acc;
        }
        WS binv = unit_inverse(base);
        for (long k = 0; k < -e; ++k)
            acc = mul(acc, binv);
        return acc;
    }

    void check_support_lattice(const WS& x, long q, long offset, const char* who) const
    {
        for (long i = x.s.lo(); i <= x.s.hi(); ++i) {
            if (x.s.coeff(i).is_zero())
                continue;
            if (((i - offset) % q + q) % q != 0)
                fail(ErrorKind::MalformedForm,
                     std::string("equivariance violated: ") + who + " has support at exponent " +
                         std::to_string(i) + " off the lattice");
        }
    }
};

}  // namespace

long dominant_index(const ScalarSeries& f, const AnnulusWindow& w)
{
    if (!f.tail_exact())
        fail(ErrorKind::InsufficientPrecision,
             "dominant index requires a series with certified tail");
    std::vector<long> cand;
    for (long i = f.lo(); i <= f.hi(); ++i)
        if (!f.coeff(i).is_zero())
            cand.push_back(i);
    if (cand.empty())
        fail(ErrorKind::PrecisionExhausted, "form is zero to precision on the window");

    auto argmin = [&](const Rat& v) -> std::pair<long, bool> {
        long best = cand.front();
        bool unique = true;
        Rat bestline = line_at(f.coeff(best), best, v);
        for (size_t k = 1; k < cand.size(); ++k) {
            Rat l = line_at(f.coeff(cand[k]), cand[k], v);
            if (l < bestline) {
                bestline = l;
                best = cand[k];
                unique = true;
            } else if (l == bestline) {
                unique = false;
            }
        }
        return {best, unique};
    };
    auto [n_lo, uniq_lo] = argmin(w.v_lo);
    auto [n_hi, uniq_hi] = argmin(w.v_hi);
    if (!uniq_lo || !uniq_hi || n_lo != n_hi)
        fail(ErrorKind::NoDominantTerm,
             "no single term dominates on the window (the form has a zero or "
             "pole along the annulus)");
    long n = n_lo;
    // stored zero coefficients must be dominated through their precision
    for (long i = f.lo(); i <= f.hi(); ++i) {
        const Scalar c = f.coeff(i);
        if (!c.is_zero() || i == n)
            continue;
        for (const Rat& v : {w.v_lo, w.v_hi})
            if (line_at(c, i, v) <= line_at(f.coeff(n), n, v))
                fail(ErrorKind::InsufficientPrecision,
                     "scalar precision too small to certify dominance at exponent " +
                         std::to_string(i));
    }
    return n;
}

AnnulusQForm::AnnulusQForm(ScalarSeries f, long q, AnnulusWindow window)
    : f_(std::move(f)), q_(q), window_(std::move(window))
{
    if (q_ < 1)
        fail(ErrorKind::MalformedForm, "q must be a positive integer");
    dominant_ = dominant_index(f_, window_);
}

bool is_q_power(const AnnulusQForm& xi)
{
    return xi.dominant() % xi.q() == 0;
}

AnnulusQForm reverse_orientation(const AnnulusQForm& xi)
{
    const FieldPtr& f = xi.series().field();
    Scalar k_const =
        Scalar::pi_pow(f, xi.window().v_lo + xi.window().v_hi, xi.series().scalar_prec());
    ScalarSeries rev = xi.series().substitute_inversion(k_const);
    if (xi.q() % 2 != 0)
        rev = -rev;
    AnnulusWindow w(xi.window().v_lo, xi.window().v_hi, !xi.window().induced_orientation);
    return AnnulusQForm(std::move(rev), xi.q(), std::move(w));
}

GoodForm good_coordinate(const AnnulusQForm& xi) { return good_coordinate(xi, {}); }

GoodForm good_coordinate(const AnnulusQForm& xi, const GoodCoordinateOptions& opts)
{
    const long q = xi.q();
    const long n = xi.dominant();
    const ScalarSeries& f = xi.series();
    const FieldPtr& field = f.field();
    const Rat sprec = f.scalar_prec();

    // q-th root of the dominant coefficient; the unit-part roots are formal.
    Scalar b = f.coeff(n).nth_root(static_cast<unsigned long>(q));

    // Pull back along phi^*(t) = y^q; the y-annulus has window [v/q].
    Ctx ctx;
    ctx.field = field;
    ctx.vlo = xi.window().v_lo / Rat(q);
    ctx.vhi = xi.window().v_hi / Rat(q);
    ctx.wlo = q * (f.lo() - opts.window_pad) - std::abs(n);
    ctx.whi = q * (f.hi() + opts.window_pad) + std::abs(n);
    ctx.sprec = sprec;
    ctx.target =
        sprec +
        Rat(std::max(std::abs(ctx.wlo), std::abs(ctx.whi))) * std::max(ctx.vhi, Rat(1)) + Rat(8);

    ScalarSeries pulled = f.exponents_scaled_up(q);
    // omega = b y^n (1 + alpha(y^q)) dy/y with (1 + alpha)^q = 1 + lambda
    WS lam_unit = ctx.from_plain(pulled.shifted(-q * n).scaled(f.coeff(n).inverse()));
    WS unit = ctx.unit_pow_rat(lam_unit, rat(1, q));
    ctx.check_support_lattice(unit, q, 0, "cover unit root");
    WS g = ctx.mul(ctx.from_plain(ScalarSeries::monomial(b, n, sprec)), unit);
    ctx.check_support_lattice(g, q, n, "cover form");

    // y = z W(z) accumulates the good-coordinate change on the cover.
    WS W = ctx.one();
    bool w_trivial = true;

    auto off_support = [&](const WS& cur) {
        std::vector<long> idx;
        for (long i = cur.s.lo(); i <= cur.s.hi(); ++i)
            if (i != n && i != 0 && !cur.s.coeff(i).is_zero())
                idx.push_back(i);
        return idx;
    };
    auto gap_of = [&](const WS& cur, const std::vector<long>& idx) {
        bool any = false;
        Rat g2;
        for (long i : idx)
            for (const Rat& v : {ctx.vlo, ctx.vhi}) {
                Rat d = line_at(cur.s.coeff(i), i, v) - line_at(cur.s.coeff(n), n, v);
                if (!any || d < g2) {
                    g2 = d;
                    any = true;
                }
            }
        return g2;
    };

    if (n == 0) {
        // one-shot normalization: z = y exp(int h dy/y) with h = g/g_0 - 1
        Scalar c0 = g.s.coeff(0);
        if (c0.is_zero())
            fail(ErrorKind::InsufficientPrecision, "free coefficient vanished on the cover");
        std::optional<Rat> herr;
        if (g.err)
            herr = *g.err - c0.valuation_or_precision();
        WS h = ctx.normalize(g.s.scaled(c0.inverse()) - ctx.plain_one(), herr);
        if (!off_support(h).empty()) {
            WS u = ctx.exp_dlog(h);
            ctx.check_support_lattice(u, q, 0, "n = 0 unit");
            W = ctx.revert_unit(u);
            w_trivial = false;
            ctx.check_support_lattice(W, q, 0, "n = 0 reversion");
            g = ctx.mul(ctx.substitute_unit(g, W), ctx.dlog_factor(W));
        }
        if (!off_support(g).empty() || !(g.s.coeff(0) - c0).is_zero())
            fail(ErrorKind::IterationDivergence, "n = 0 normalization left residual terms");
    } else {
        std::optional<Rat> last_gap;
        for (int round = 0; round < opts.max_rounds; ++round) {
            auto idx = off_support(g);
            if (idx.empty())
                break;
            Rat cur_gap = gap_of(g, idx);
            if (cur_gap <= 0)
                fail(ErrorKind::NoDominantTerm, "iteration lost dominance on the cover annulus");
            if (last_gap && cur_gap <= *last_gap)
                fail(ErrorKind::IterationDivergence,
                     "good-coordinate round failed to increase the gap (" +
                         qtrop::to_string(cur_gap) + " after " + qtrop::to_string(*last_gap) +
                         ")");
            last_gap = cur_gap;

            // u^n = 1 + sum_{j != 0, n} (n/j) (g_j/g_n) z^{j-n}
            Scalar gn_inv = g.s.coeff(n).inverse();
            ScalarSeries corr = ScalarSeries::zero(field, sprec);
            for (long j : idx)
                corr =
                    corr + ScalarSeries::monomial(g.s.coeff(j) * gn_inv * rat(n, j), j - n, sprec);
            WS U = ctx.add(ctx.one(), ctx.normalize(corr, std::nullopt));
            WS u = ctx.unit_pow_rat(U, rat(1, n));
            ctx.check_support_lattice(u, q, 0, "iteration unit");
            WS w_rev = ctx.revert_unit(u);
            ctx.check_support_lattice(w_rev, q, 0, "iteration reversion");
            g = ctx.mul(ctx.substitute_unit(g, w_rev), ctx.dlog_factor(w_rev));
            ctx.check_support_lattice(g, q, n, "iterated form");
            W = ctx.mul(ctx.substitute_unit(W, w_rev), w_rev);
            w_trivial = false;
        }
        if (!off_support(g).empty())
            fail(ErrorKind::IterationDivergence,
                 "good-coordinate iteration did not terminate within the round limit");
    }

    // Descend: t = z^q W(z)^q = t_new v(t_new); the reported unit w satisfies
    // t_new = t w(t)^q.
    Ctx tctx;
    tctx.field = field;
    tctx.vlo = xi.window().v_lo;
    tctx.vhi = xi.window().v_hi;
    tctx.wlo = f.lo() - opts.window_pad - std::abs(n);
    tctx.whi = f.hi() + opts.window_pad + std::abs(n);
    tctx.sprec = sprec;
    tctx.target = ctx.target;

    ScalarSeries w_plain = tctx.plain_one();
    if (!w_trivial) {
        WS wq_cover = ctx.pow(W, q);
        ScalarSeries v_t = wq_cover.s.exponents_scaled_down(q);
        WS v_ws = tctx.normalize(v_t, wq_cover.err);
        WS r_t = tctx.revert_unit(v_ws);
        WS w_unit = tctx.unit_pow_rat(r_t, rat(1, q));
        w_plain = w_unit.s;
    }

    Scalar c_n = g.s.coeff(n);
    Scalar c_0 = g.s.coeff(0);

    GoodForm out{GoodForm::Case::Monomial,
                 n,
                 n == 0 ? c_0 : c_n,
                 Scalar::zero(field, sprec),
                 w_plain.truncated_above(tctx.whi),
                 q,
                 xi.window()};
    if (n % q != 0) {
        if (!c_0.is_zero())
            fail(ErrorKind::MalformedForm, "nonzero free coefficient with q not dividing n");
    } else if (n != 0 && !c_0.is_zero()) {
        out.kind = GoodForm::Case::Power;
        out.c_0 = c_0;
    }
    return out;
}

ScalarSeries reconstruct_from_good_form(const GoodForm& gf)
{
    const FieldPtr& field = gf.c_n.field();
    const Rat sprec = gf.unit.scalar_prec();
    Ctx tctx;
    tctx.field = field;
    tctx.vlo = gf.window.v_lo;
    tctx.vhi = gf.window.v_hi;
    tctx.wlo = std::min(gf.unit.lo(), -std::abs(gf.n)) - 4;
    tctx.whi = std::max(gf.unit.hi(), std::abs(gf.n)) + 4;
    tctx.sprec = sprec;
    tctx.target = sprec +
                  Rat(std::max(std::abs(tctx.wlo), std::abs(tctx.whi))) *
                      std::max(tctx.vhi, Rat(1)) +
                  Rat(8);

    // materialize the unit's stored window; content beyond it was certified
    // by the producer
    std::vector<Scalar> uc;
    for (long i = gf.unit.lo(); i <= gf.unit.hi(); ++i)
        uc.push_back(gf.unit.coeff(i));
    WS w = tctx.from_plain(ScalarSeries(field, gf.unit.lo(), std::move(uc), true, sprec));
    WS wq = tctx.pow(w, gf.q);
    // t_new = t wq(t); the dt/t pieces contribute (1 + t wq'/wq)^q
    WS jac_q = tctx.pow(tctx.dlog_factor(wq), gf.q);

    WS total = tctx.normalize(ScalarSeries::zero(field, sprec), std::nullopt);
    if (gf.kind == GoodForm::Case::Power) {
        // sum_k C(q,k) c_n^k c_0^{q-k} (t wq)^{kn/q}
        for (long k = 0; k <= gf.q; ++k) {
            long e = k * gf.n;
            if (e % gf.q != 0)
                fail(ErrorKind::MalformedForm, "power case requires q | n");
            long te = e / gf.q;
            Rat binom(1);
            for (long i = 0; i < k; ++i)
                binom *= Rat(gf.q - i) / Rat(i + 1);
            Scalar coef = gf.c_n.pow(k) * gf.c_0.pow(gf.q - k) * binom;
            if (coef.is_zero())
                continue;
            WS term = tctx.scaled(tctx.pow(wq, te), coef);
            term = tctx.normalize(term.s.shifted(te), term.err);
            total = tctx.add(total, term);
        }
    } else {
        WS term = tctx.scaled(tctx.pow(wq, gf.n), gf.c_n.pow(gf.q));
        total = tctx.normalize(term.s.shifted(gf.n), term.err);
    }
    WS result = tctx.mul(total, jac_q);
    return result.s.truncated_above(tctx.whi);
}

Scalar q_residue_annulus(const AnnulusQForm& xi)
{
    GoodForm gf = good_coordinate(xi);
    if (gf.n == 0)
        return gf.c_n.pow(gf.q);
    if (gf.n % gf.q == 0 && gf.kind == GoodForm::Case::Power)
        return gf.c_0.pow(gf.q);
    return Scalar::zero(xi.series().field(), Rat(gf.q) * xi.series().scalar_prec());
}

}  // namespace qtrop
