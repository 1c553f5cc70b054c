#include <algorithm>
#include <functional>
#include <set>

#include "twistsel/errors.hpp"
#include "twistsel/factor.hpp"
#include "twistsel/integer.hpp"

namespace twistsel {

namespace {

constexpr std::uint64_t max_aux_prime = 100'000;

/* --- arithmetic in (Z/m)[x], nonnegative residues --- */

zpoly reduce_mod(zpoly const & f, mpz_class const & m)
{
    std::vector<mpz_class> v;
    for (auto const & c : f.coeffs())
        v.push_back(mod(c, m));
    return zpoly(std::move(v));
}

zpoly mul_mod(zpoly const & a, zpoly const & b, mpz_class const & m)
{
    return reduce_mod(a * b, m);
}

/* division by a monic polynomial modulo m */
std::pair<zpoly, zpoly> divmod_monic(zpoly const & a, zpoly const & b, mpz_class const & m)
{
    if (a.degree() < b.degree())
        return {zpoly(), reduce_mod(a, m)};
    std::vector<mpz_class> r = reduce_mod(a, m).coeffs();
    r.resize(static_cast<std::size_t>(a.degree()) + 1, 0);
    int db = b.degree();
    std::vector<mpz_class> q(static_cast<std::size_t>(a.degree() - db + 1), 0);
    for (int i = a.degree(); i >= db; --i) {
        mpz_class c = mod(r[static_cast<std::size_t>(i)], m);
        q[static_cast<std::size_t>(i - db)] = c;
        if (c == 0)
            continue;
        for (int j = 0; j <= db; ++j) {
            mpz_class & t = r[static_cast<std::size_t>(i - db + j)];
            t = mod(mpz_class(t - c * b.coeffs()[static_cast<std::size_t>(j)]), m);
        }
    }
    r.resize(static_cast<std::size_t>(db));
    return {zpoly(std::move(q)), reduce_mod(zpoly(std::move(r)), m)};
}

zpoly lift_fp(fp_poly const & f)
{
    std::vector<mpz_class> v;
    for (auto c : f)
        v.emplace_back(static_cast<unsigned long>(c));
    return zpoly(std::move(v));
}

/* Extended Euclid over F_p: s*a + t*b = 1 (a, b coprime). */
std::pair<fp_poly, fp_poly> fp_xgcd(fp_poly a, fp_poly b, std::uint64_t p)
{
    fp_poly s0{1}, s1{}, t0{}, t1{1};
    while (!b.empty()) {
        auto [q, r] = fp::divmod(a, b, p);
        a = std::move(b);
        b = std::move(r);
        fp_poly s2 = fp::sub(s0, fp::mul(q, s1, p), p);
        fp_poly t2 = fp::sub(t0, fp::mul(q, t1, p), p);
        s0 = std::move(s1);
        s1 = std::move(s2);
        t0 = std::move(t1);
        t1 = std::move(t2);
    }
    if (fp::degree(a) != 0)
        throw std::logic_error("fp_xgcd: inputs not coprime");
    std::uint64_t inv = invmod(a[0], p);
    for (auto & c : s0)
        c = mulmod(c, inv, p);
    for (auto & c : t0)
        c = mulmod(c, inv, p);
    return {s0, t0};
}

/* Quadratic Hensel lifting of f = cof * fac (fac monic) from p to a
 * modulus of at least `target`. Returns (lifted monic factor, modulus). */
std::pair<zpoly, mpz_class> hensel_lift(zpoly const & f, fp_poly const & fac, std::uint64_t p,
                                        mpz_class const & target)
{
    fp_poly fbar = fp::reduce(f, p);
    fp_poly cbar = fp::divmod(fbar, fac, p).first;
    auto [s_bar, t_bar] = fp_xgcd(cbar, fac, p); /* s*cof + t*fac = 1 */
    zpoly g = lift_fp(cbar), h = lift_fp(fac), s = lift_fp(s_bar), t = lift_fp(t_bar);
    mpz_class m(static_cast<unsigned long>(p));
    while (m < target) {
        mpz_class m2 = m * m;
        zpoly e = reduce_mod(f - g * h, m2);
        auto [q, r] = divmod_monic(mul_mod(s, e, m2), h, m2);
        zpoly g2 = reduce_mod(g + t * e + q * g, m2);
        zpoly h2 = reduce_mod(h + r, m2);
        zpoly b = reduce_mod(s * g2 + t * h2 - zpoly::constant(1), m2);
        auto [c, d] = divmod_monic(mul_mod(s, b, m2), h2, m2);
        zpoly s2 = reduce_mod(s - d, m2);
        zpoly t2 = reduce_mod(t - t * b - c * g2, m2);
        g = std::move(g2);
        h = std::move(h2);
        s = std::move(s2);
        t = std::move(t2);
        m = std::move(m2);
    }
    return {h, m};
}

zpoly symmetric(zpoly const & f, mpz_class const & m)
{
    mpz_class half = m / 2;
    std::vector<mpz_class> v;
    for (auto const & c : f.coeffs()) {
        mpz_class r = mod(c, m);
        if (r > half)
            r -= m;
        v.push_back(r);
    }
    return zpoly(std::move(v));
}

/* Subset sums of factor degrees, restricted to [0, cap]. */
std::vector<bool> degree_sums(std::vector<int> const & degs, int cap)
{
    std::vector<bool> ok(static_cast<std::size_t>(cap) + 1, false);
    ok[0] = true;
    for (int d : degs) {
        for (int s = cap; s >= d; --s) {
            if (ok[static_cast<std::size_t>(s - d)])
                ok[static_cast<std::size_t>(s)] = true;
        }
    }
    return ok;
}

bool good_prime(zpoly const & f, std::uint64_t p)
{
    mpz_class pm(static_cast<unsigned long>(p));
    if (mod(f.lc(), pm) == 0)
        return false;
    return fp::is_squarefree(fp::reduce(f, p), p);
}

struct pool_entry {
    zpoly lifted; /* monic modulo the lifting modulus */
    int degree;
};

bool zpoly_less(zpoly const & a, zpoly const & b)
{
    if (a.degree() != b.degree())
        return a.degree() < b.degree();
    return std::lexicographical_compare(a.coeffs().begin(), a.coeffs().end(),
                                        b.coeffs().begin(), b.coeffs().end());
}

} // namespace

std::pair<std::vector<zpoly>, zpoly> small_factors_squarefree(zpoly const & f0, int bound,
                                                             factor_options const & opt)
{
    zpoly f = primitive_part(f0);
    int n = f.degree();
    if (n < 1)
        return {{}, f};
    if (n == 1)
        return bound >= 1 ? std::pair{std::vector<zpoly>{f}, zpoly::constant(1)}
                          : std::pair{std::vector<zpoly>{}, f};
    bool full = bound >= n;
    int cap = std::min(bound, n);

    /* auxiliary primes and degree patterns */
    std::vector<std::uint64_t> primes;
    std::vector<std::vector<int>> patterns;
    for (std::uint64_t p : primes_up_to(max_aux_prime)) {
        if (p == 2)
            continue;
        if (!good_prime(f, p))
            continue;
        primes.push_back(p);
        patterns.push_back(fp::factor_degrees(fp::reduce(f, p), p));
        if (static_cast<int>(primes.size()) >= opt.pattern_primes)
            break;
    }
    if (primes.empty())
        throw resource_error("no squarefree reduction prime below " +
                             std::to_string(max_aux_prime));

    std::vector<bool> allowed(static_cast<std::size_t>(cap) + 1, true);
    for (auto const & degs : patterns) {
        auto sums = degree_sums(degs, cap);
        for (int s = 0; s <= cap; ++s)
            allowed[static_cast<std::size_t>(s)] =
                allowed[static_cast<std::size_t>(s)] && sums[static_cast<std::size_t>(s)];
    }
    bool any_allowed = false;
    for (int s = 1; s <= cap; ++s) {
        if (s < n && allowed[static_cast<std::size_t>(s)])
            any_allowed = true;
    }
    if (!any_allowed) {
        /* f is irreducible or has no factor of degree <= bound */
        if (full)
            return {{f}, zpoly::constant(1)};
        return {{}, f};
    }

    /* the prime with the fewest factors that take part in recombination */
    std::size_t best = 0;
    auto cost = [&](std::size_t i) {
        return std::count_if(patterns[i].begin(), patterns[i].end(),
                             [&](int d) { return d <= cap; });
    };
    for (std::size_t i = 1; i < primes.size(); ++i) {
        if (cost(i) < cost(best))
            best = i;
    }
    std::uint64_t p = primes[best];

    std::vector<fp_poly> mod_factors;
    for (auto const & [g, m] : fp::factor(fp::reduce(f, p), p)) {
        if (fp::degree(g) <= cap)
            mod_factors.push_back(g);
    }

    /* Mignotte-type bound on lc(f) * g / lc(g) for a factor g of degree <= cap */
    mpz_class norm2 = 0;
    for (auto const & c : f.coeffs())
        norm2 += c * c;
    mpz_class norm;
    mpz_sqrt(norm.get_mpz_t(), norm2.get_mpz_t());
    norm += 1;
    mpz_class binom;
    mpz_bin_uiui(binom.get_mpz_t(), static_cast<unsigned long>(cap),
                 static_cast<unsigned long>(cap / 2));
    mpz_class target = 2 * abs(f.lc()) * binom * norm + 1;

    std::vector<pool_entry> pool;
    mpz_class modulus;
    for (auto const & g : mod_factors) {
        auto [lifted, m] = hensel_lift(f, g, p, target);
        modulus = m;
        pool.push_back({std::move(lifted), fp::degree(g)});
    }

    std::vector<zpoly> found;
    std::uint64_t candidates = 0;
    bool progress = true;
    int s = 1;
    while (progress || s <= static_cast<int>(pool.size())) {
        progress = false;
        int r = static_cast<int>(pool.size());
        if (s > r)
            break;
        if (full && 2 * s > r)
            break;
        std::vector<int> idx;
        std::optional<std::vector<int>> hit;
        zpoly hit_factor, hit_quot;
        mpz_class lcf = f.lc();
        mpz_class f0c = f.coeff(0) * lcf;
        std::function<void(int, int)> rec = [&](int start, int deg) {
            if (hit)
                return;
            if (static_cast<int>(idx.size()) == s) {
                if (deg > cap || !allowed[static_cast<std::size_t>(deg)] || deg >= f.degree())
                    return;
                if (++candidates > opt.max_candidates)
                    throw resource_error("recombination exceeded candidate limit");
                mpz_class c0 = lcf;
                for (int i : idx)
                    c0 = mod(mpz_class(c0 * pool[static_cast<std::size_t>(i)].lifted.coeff(0)),
                             modulus);
                if (c0 > modulus / 2)
                    c0 -= modulus;
                if (c0 == 0 ? f0c != 0 : (f0c != 0 && !mpz_divisible_p(f0c.get_mpz_t(),
                                                                        c0.get_mpz_t())))
                    return;
                zpoly prod = zpoly::constant(lcf);
                for (int i : idx)
                    prod = mul_mod(prod, pool[static_cast<std::size_t>(i)].lifted, modulus);
                zpoly cand = primitive_part(symmetric(prod, modulus));
                if (cand.degree() != deg)
                    return;
                if (auto q = exact_quotient(f, cand)) {
                    hit = idx;
                    hit_factor = cand;
                    hit_quot = *q;
                }
                return;
            }
            for (int i = start; i < r; ++i) {
                int d = deg + pool[static_cast<std::size_t>(i)].degree;
                if (d > cap)
                    continue;
                idx.push_back(i);
                rec(i + 1, d);
                idx.pop_back();
                if (hit)
                    return;
            }
        };
        rec(0, 0);
        if (hit) {
            found.push_back(hit_factor);
            f = hit_quot;
            std::vector<pool_entry> rest;
            for (int i = 0; i < r; ++i) {
                if (std::find(hit->begin(), hit->end(), i) == hit->end())
                    rest.push_back(std::move(pool[static_cast<std::size_t>(i)]));
            }
            pool = std::move(rest);
            progress = true;
            continue;
        }
        ++s;
    }
    if (full) {
        if (f.degree() > 0)
            found.push_back(f);
        f = zpoly::constant(1);
    } else if (f.degree() >= 1 && f.degree() <= bound) {
        /* every modular factor of a remaining small factor sits in the pool,
         * so a remaining cofactor of degree <= bound is irreducible */
        found.push_back(f);
        f = zpoly::constant(1);
    }
    std::sort(found.begin(), found.end(), zpoly_less);
    return {found, f};
}

namespace {

/* Yun's squarefree decomposition over Z: f = prod parts[i]^(i+1). */
std::vector<zpoly> squarefree_parts(zpoly const & f)
{
    std::vector<zpoly> parts;
    zpoly fd = f.derivative();
    zpoly a = gcd(f, fd);
    if (a.degree() == 0)
        return {f};
    zpoly b = *exact_quotient(f, a);
    zpoly c = *exact_quotient(fd, a);
    zpoly d = c - b.derivative();
    while (b.degree() > 0) {
        zpoly g = d.is_zero() ? b : gcd(b, d);
        parts.push_back(g);
        b = *exact_quotient(b, g);
        c = *exact_quotient(d, g);
        d = c - b.derivative();
        if (d.is_zero() && b.degree() > 0) {
            parts.push_back(b);
            break;
        }
    }
    return parts;
}

bool squarefree_by_reduction(zpoly const & f)
{
    for (std::uint64_t p : primes_up_to(2000)) {
        if (good_prime(f, p))
            return true;
    }
    return false;
}

} // namespace

factorization factor_poly_q(zpoly const & f, factor_options const & opt)
{
    if (f.is_zero())
        throw invalid_parameter("cannot factor the zero polynomial");
    factorization out;
    out.unit = content(f);
    zpoly g = primitive_part(f);
    int bound = opt.degree_bound.value_or(g.degree() <= 30 ? g.degree() : 12);
    out.residual = zpoly::constant(1);
    if (g.degree() == 0)
        return out;

    std::vector<zpoly> parts;
    if (squarefree_by_reduction(g)) {
        parts.push_back(g);
    } else {
        parts = squarefree_parts(g);
    }
    for (std::size_t i = 0; i < parts.size(); ++i) {
        zpoly part = primitive_part(parts[i]);
        if (part.degree() < 1)
            continue;
        int mult = static_cast<int>(i) + 1;
        auto [facs, cof] = small_factors_squarefree(part, bound, opt);
        for (auto & h : facs)
            out.factors.push_back({std::move(h), mult});
        for (int k = 0; k < mult; ++k)
            out.residual = out.residual * cof;
    }
    out.complete = out.residual.degree() == 0;
    /* fold the sign/constant produced by primitive parts into unit */
    zpoly prod = zpoly::constant(out.unit) * out.residual;
    for (auto const & e : out.factors) {
        for (int k = 0; k < e.multiplicity; ++k)
            prod = prod * e.factor;
    }
    if (prod != f) {
        auto q = exact_quotient(f, prod);
        if (!q || q->degree() != 0)
            throw std::logic_error("factor_poly_q: product check failed");
        out.unit *= q->lc();
    }
    std::sort(out.factors.begin(), out.factors.end(), [](auto const & a, auto const & b) {
        return zpoly_less(a.factor, b.factor);
    });
    return out;
}

bool is_irreducible(zpoly const & f)
{
    if (f.degree() < 1)
        return false;
    factor_options opt;
    opt.degree_bound = f.degree();
    auto fz = factor_poly_q(f, opt);
    return fz.factors.size() == 1 && fz.factors[0].multiplicity == 1 && fz.complete;
}

} // namespace twistsel
