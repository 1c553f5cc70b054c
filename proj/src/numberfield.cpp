#include "twistsel/numberfield.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <optional>

#include "twistsel/errors.hpp"
#include "twistsel/factor.hpp"
#include "twistsel/integer.hpp"

namespace twistsel {

namespace {

zpoly lift(fp_poly const & f)
{
    std::vector<mpz_class> c;
    for (auto v : f)
        c.emplace_back(static_cast<unsigned long>(v));
    return zpoly(std::move(c));
}

zpoly zpow(zpoly const & f, int e)
{
    zpoly r = zpoly::constant(1);
    for (int i = 0; i < e; ++i)
        r = r * f;
    return r;
}

/* lowest-degree coefficient first, then by value */
bool coeffs_less(zpoly const & a, zpoly const & b)
{
    return std::lexicographical_compare(a.coeffs().begin(), a.coeffs().end(), b.coeffs().begin(),
                                        b.coeffs().end());
}

int val(mpz_class const & n, mpz_class const & p)
{
    return n == 0 ? std::numeric_limits<int>::max() : valuation(n, p);
}

/* Number of roots in Z_p of a squarefree monic f, by lifting residue classes
 * r + p^k Z_p until Hensel's lemma isolates a single root; nullopt when the
 * depth cap is hit. */
std::optional<int> count_padic_roots(zpoly const & f, mpz_class const & p, int cap)
{
    zpoly df = f.derivative();
    int count = 0;
    bool ok = true;
    std::function<void(mpz_class const &, mpz_class const &, int)> explore =
        [&](mpz_class const & r, mpz_class const & pk, int k) {
            if (!ok)
                return;
            int s = val(df.eval(r), p);
            int fr = val(f.eval(r), p);
            if (s != std::numeric_limits<int>::max() && k > s && fr >= k + s && fr > 2 * s) {
                ++count;
                return;
            }
            if (k >= cap) {
                ok = false;
                return;
            }
            mpz_class next = pk * p;
            for (mpz_class d = 0; d < p; ++d) {
                mpz_class r2 = r + d * pk;
                if (mod(f.eval(r2), next) == 0)
                    explore(r2, next, k + 1);
            }
        };
    for (mpz_class r = 0; r < p; ++r) {
        if (mod(f.eval(r), p) == 0)
            explore(r, p, 1);
    }
    if (!ok)
        return std::nullopt;
    return count;
}

} // namespace

mpz_class poly_discriminant(zpoly const & f)
{
    int n = f.degree();
    if (n < 1)
        throw invalid_parameter("discriminant of a constant polynomial");
    mpz_class res = resultant(f, f.derivative());
    if (res == 0)
        throw invalid_parameter("polynomial is not squarefree: " + to_string(f));
    mpz_class d = res / f.lc();
    if ((static_cast<long>(n) * (n - 1) / 2) % 2 == 1)
        d = -d;
    return d;
}

number_field make_number_field(zpoly const & minpoly)
{
    if (minpoly.degree() < 1 || minpoly.lc() != 1)
        throw invalid_parameter("defining polynomial must be monic of positive degree: " +
                                to_string(minpoly));
    if (!is_irreducible(minpoly))
        throw invalid_parameter("defining polynomial is reducible: " + to_string(minpoly));
    number_field k;
    k.minpoly = minpoly;
    k.degree = minpoly.degree();
    k.disc = poly_discriminant(minpoly);
    return k;
}

prime_split dedekind_split(number_field const & k, std::uint64_t p)
{
    if (!is_prime(p))
        throw invalid_parameter("not a prime: " + std::to_string(p));
    auto const & f = k.minpoly;
    auto parts = fp::factor(fp::reduce(f, p), p);

    zpoly g = zpoly::constant(1), h = zpoly::constant(1);
    fp_poly repeated{1};
    for (auto const & [gi, e] : parts) {
        zpoly li = lift(gi);
        g = g * li;
        h = h * zpow(li, e - 1);
        if (e >= 2)
            repeated = fp::mul(repeated, gi, p);
    }
    zpoly diff = f - g * h;
    auto q = exact_quotient(diff, zpoly::constant(mpz_class(static_cast<unsigned long>(p))));
    if (!q)
        throw std::logic_error("dedekind_split: lift does not agree modulo p");
    fp_poly fbar = fp::reduce(*q, p);

    prime_split out;
    if (fp::degree(repeated) > 0) {
        fp_poly common = fp::gcd(fbar, repeated, p);
        if (fp::degree(common) > 0)
            return out;
    }
    out.determined = true;
    for (auto const & [gi, e] : parts)
        out.shape.emplace_back(e, fp::degree(gi));
    std::sort(out.shape.begin(), out.shape.end());
    return out;
}

std::optional<int> padic_root_count(number_field const & k, std::uint64_t p)
{
    if (!is_prime(p))
        throw invalid_parameter("not a prime: " + std::to_string(p));
    mpz_class pz(static_cast<unsigned long>(p));
    return count_padic_roots(k.minpoly, pz, 2 * valuation(k.disc, pz) + 4);
}

prime_split split_by_padic_roots(number_field const & k, std::uint64_t p)
{
    prime_split out;
    auto roots = padic_root_count(k, p);
    if (roots && *roots == k.degree) {
        out.determined = true;
        out.shape.assign(static_cast<std::size_t>(k.degree), {1, 1});
    }
    return out;
}

zeta_verdict zeta_in_field(number_field const & k, std::uint64_t ell)
{
    if (ell < 3 || !is_prime(ell))
        throw invalid_parameter("ell must be an odd prime");
    auto need = static_cast<int>(ell - 1);
    if (k.degree % need != 0)
        return zeta_verdict::no;
    auto split = dedekind_split(k, ell);
    if (!split.determined)
        return zeta_verdict::undetermined;
    for (auto const & [e, f] : split.shape) {
        (void)f;
        if (e % need == 0)
            return zeta_verdict::undetermined;
    }
    return zeta_verdict::no;
}

number_field adjoin_sqrt(zpoly const & g, zpoly const & f)
{
    if (g.degree() < 1 || !is_irreducible(g))
        throw invalid_parameter("base polynomial must be irreducible: " + to_string(g));
    qpoly mod = monic(to_qpoly(g));
    qpoly beta = rem(to_qpoly(f), mod);
    if (beta.is_zero())
        throw precondition_error("f vanishes at the root of g; the square root is degenerate");
    int m = mod.degree();
    auto n = static_cast<std::size_t>(2 * m);

    /* t^i mod g for i <= m */
    std::vector<qpoly> tp{qpoly::constant(1)};
    for (int i = 1; i <= m; ++i)
        tp.push_back(rem(tp.back() * qpoly::x(), mod));
    std::vector<qpoly> tb;
    for (int i = 0; i < m; ++i)
        tb.push_back(rem(tp[static_cast<std::size_t>(i)] * beta, mod));

    /* multiplication by y + k t on the basis t^i, t^i y of Q[t]/(g)[y]/(y^2 - beta) */
    for (long k = 0;; ++k) {
        std::vector<std::vector<mpq_class>> mat(n, std::vector<mpq_class>(n, 0));
        for (int i = 0; i < m; ++i) {
            auto col = static_cast<std::size_t>(i), ycol = static_cast<std::size_t>(m + i);
            mat[ycol][col] += 1;
            auto const & next = tp[static_cast<std::size_t>(i + 1)];
            for (int j = 0; j < m; ++j) {
                auto row = static_cast<std::size_t>(j);
                mat[row][col] += k * next.coeff(j);
                mat[row][ycol] += tb[static_cast<std::size_t>(i)].coeff(j);
                mat[row + static_cast<std::size_t>(m)][ycol] += k * next.coeff(j);
            }
        }
        qpoly r = charpoly(mat);
        if (gcd(r, r.derivative()).degree() > 0)
            continue;
        zpoly z = integral_monic(r);
        factor_options opt;
        opt.degree_bound = z.degree();
        auto fac = factor_poly_q(z, opt);
        zpoly best;
        for (auto const & e : fac.factors) {
            auto const & c = e.factor;
            if (best.is_zero() || c.degree() > best.degree() ||
                (c.degree() == best.degree() && coeffs_less(c, best)))
                best = c;
        }
        return make_number_field(best);
    }
}

} // namespace twistsel
