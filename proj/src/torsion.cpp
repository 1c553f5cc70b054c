#include "twistsel/torsion.hpp"

#include <algorithm>
#include <functional>
#include <map>

#include "twistsel/errors.hpp"
#include "twistsel/factor.hpp"
#include "twistsel/integer.hpp"
#include "twistsel/numberfield.hpp"

namespace twistsel {

namespace {

/* r_n with psi_n = r_n (n odd) or y r_n (n even) on y^2 = x^3 + A x + B */
class short_recurrence {
    zpoly f2_; /* (x^3 + A x + B)^2 */
    std::map<int, zpoly> memo_;

  public:
    short_recurrence(mpz_class const & A, mpz_class const & B)
    {
        zpoly f{B, A, 0, 1};
        f2_ = f * f;
        memo_[0] = zpoly();
        memo_[1] = zpoly::constant(1);
        memo_[2] = zpoly::constant(2);
        memo_[3] = zpoly{-A * A, 12 * B, 6 * A, 0, 3};
        memo_[4] = zpoly{-8 * B * B - A * A * A, -4 * A * B, -5 * A * A, 20 * B, 5 * A, 0, 1} *
                   mpz_class(4);
    }

    zpoly const & get(int n)
    {
        auto it = memo_.find(n);
        if (it != memo_.end())
            return it->second;
        zpoly r;
        int m = n / 2;
        if (n % 2 == 1) {
            zpoly a = get(m + 2) * get(m) * get(m) * get(m);
            zpoly b = get(m - 1) * get(m + 1) * get(m + 1) * get(m + 1);
            r = m % 2 == 0 ? f2_ * a - b : a - f2_ * b;
        } else {
            zpoly inner = get(m + 2) * get(m - 1) * get(m - 1) - get(m - 2) * get(m + 1) * get(m + 1);
            zpoly full = get(m) * inner;
            auto q = exact_quotient(full, zpoly::constant(2));
            if (!q)
                throw std::logic_error("division polynomial recurrence: odd coefficient");
            r = *q;
        }
        return memo_[n] = std::move(r);
    }
};

mpz_class pow_z(mpz_class const & b, unsigned long e)
{
    mpz_class r;
    mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
    return r;
}

mpz_class lcm_z(mpz_class const & a, mpz_class const & b)
{
    mpz_class r;
    mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

void require_odd_prime(int ell, int hi)
{
    if (ell < 3 || ell % 2 == 0 || !is_prime(static_cast<std::uint64_t>(ell)))
        throw invalid_parameter("ell must be an odd prime, got " + std::to_string(ell));
    if (ell > hi)
        throw unsupported("ell = " + std::to_string(ell) + " exceeds the supported bound " +
                          std::to_string(hi));
}

std::vector<mpq_class> rational_roots(zpoly const & f)
{
    std::vector<mpq_class> roots;
    for (auto const & h : small_factors_squarefree(f, 1).first) {
        if (h.degree() == 1)
            roots.emplace_back(mpq_class(-h.coeff(0), h.coeff(1)));
    }
    for (auto & r : roots)
        r.canonicalize();
    std::sort(roots.begin(), roots.end());
    return roots;
}

} // namespace

division_poly division_polynomial(curve const & e, int n)
{
    if (n < 1 || n > max_division_index)
        throw unsupported("division polynomial index must be in [1, " +
                          std::to_string(max_division_index) + "], got " + std::to_string(n));
    auto const & v = e.invariants();
    mpq_class a = -v.c4 / 48, b = -v.c6 / 864;

    /* integral model y^2 = x^3 + A x + B with A = a L^4, B = b L^6 */
    mpz_class L = 1;
    for (;;) {
        mpq_class A = a * pow_z(L, 4), B = b * pow_z(L, 6);
        if (A.get_den() == 1 && B.get_den() == 1)
            break;
        L *= lcm_z(mpz_class(A.get_den()), mpz_class(B.get_den()));
    }
    mpq_class A = a * pow_z(L, 4), B = b * pow_z(L, 6);
    short_recurrence rec(A.get_num(), B.get_num());
    zpoly R = rec.get(n);

    /* r_n is weighted homogeneous of weight w in (x, a, b) with weights
     * (2, 4, 6), so r_n(x) = L^-w R_n(L^2 x) */
    long w = n % 2 == 1 ? static_cast<long>(n) * n - 1 : static_cast<long>(n) * n - 4;
    std::vector<mpq_class> c;
    for (int i = 0; i <= R.degree(); ++i) {
        long expo = 2L * i - w;
        mpq_class scale = expo >= 0 ? mpq_class(pow_z(L, static_cast<unsigned long>(expo)))
                                    : mpq_class(1, pow_z(L, static_cast<unsigned long>(-expo)));
        c.push_back(mpq_class(R.coeff(i)) * scale);
    }
    qpoly r(std::move(c));
    division_poly out;
    out.n = n;
    out.y_factor = n % 2 == 0;
    if (out.y_factor)
        r = r * mpq_class(1, 2);
    out.psi = taylor_shift(r, v.b2 / 12);
    return out;
}

zpoly division_polynomial_z(curve const & e, int n)
{
    return to_primitive_zpoly(division_polynomial(e, n).psi).second;
}

std::optional<point> rational_ell_torsion_point(curve const & e, int ell)
{
    require_odd_prime(ell, max_division_index);
    for (auto const & x0 : rational_roots(division_polynomial_z(e, ell))) {
        mpq_class h = e.a1() * x0 + e.a3();
        mpq_class disc = h * h + 4 * (x0 * x0 * x0 + e.a2() * x0 * x0 + e.a4() * x0 + e.a6());
        auto s = exact_sqrt(disc);
        if (!s)
            continue;
        point p = point::affine(x0, (-h + *s) / 2);
        if (point_order(e, p, ell) == ell)
            return p;
    }
    return std::nullopt;
}

factor_shape psi_factor_shape(curve const & e, int ell, int bound)
{
    require_odd_prime(ell, 13);
    if (bound < 1 || bound > 12)
        throw invalid_parameter("degree bound must be in [1, 12], got " + std::to_string(bound));
    factor_shape out;
    out.ell = ell;
    out.degree_bound = bound;
    auto [facs, cof] = small_factors_squarefree(division_polynomial_z(e, ell), bound);
    out.factors = std::move(facs);
    out.residual = std::move(cof);
    out.residual_degree = std::max(out.residual.degree(), 0);
    return out;
}

zpoly curve_rhs_z(curve const & e)
{
    qpoly f;
    if (e.a1() == 0 && e.a3() == 0) {
        f = qpoly{e.a6(), e.a4(), e.a2(), 1};
    } else {
        auto const & v = e.invariants();
        f = qpoly{v.b6, 2 * v.b4, v.b2, 4};
    }
    mpz_class den = 1;
    for (auto const & c : f.coeffs())
        den = lcm_z(den, mpz_class(c.get_den()));
    /* smallest square divisible by den */
    mpz_class sq = 1;
    for (auto const & pp : factorize(den)) {
        for (int i = 0; i < (pp.e + 1) / 2 * 2; ++i)
            sq *= pp.p;
    }
    std::vector<mpz_class> out;
    for (auto const & c : f.coeffs())
        out.emplace_back(mpz_class(c * sq));
    return zpoly(std::move(out));
}

bool closed_under_doubling(curve const & e, zpoly const & g0)
{
    if (g0.degree() < 1)
        throw invalid_parameter("kernel candidate must have positive degree");
    auto const & v = e.invariants();
    qpoly g = monic(to_qpoly(g0));
    qpoly num{-v.b8, -2 * v.b6, -v.b4, 0, 1};
    qpoly den{v.b6, 2 * v.b4, v.b2, 4};
    if (gcd(den, g).degree() > 0)
        return false;
    int m = g.degree();
    std::vector<qpoly> np{qpoly::constant(1)}, dp{qpoly::constant(1)};
    for (int i = 1; i <= m; ++i) {
        np.push_back(rem(np.back() * num, g));
        dp.push_back(rem(dp.back() * den, g));
    }
    qpoly acc;
    for (int i = 0; i <= m; ++i)
        acc = acc + np[static_cast<std::size_t>(i)] * dp[static_cast<std::size_t>(m - i)] * g.coeff(i);
    return rem(acc, g).is_zero();
}

isogeny_witness has_rational_isogeny(curve const & e, int ell)
{
    require_odd_prime(ell, 13);
    int m = (ell - 1) / 2;
    auto facs = small_factors_squarefree(division_polynomial_z(e, ell), m).first;
    isogeny_witness out;
    std::vector<std::size_t> pick;
    std::function<bool(std::size_t, int)> search = [&](std::size_t start, int deg) {
        if (deg == m) {
            zpoly g = zpoly::constant(1);
            for (auto i : pick)
                g = g * facs[i];
            if (closed_under_doubling(e, g)) {
                out.exists = true;
                out.kernel = primitive_part(g);
                return true;
            }
            return false;
        }
        for (std::size_t i = start; i < facs.size(); ++i) {
            if (deg + facs[i].degree() > m)
                continue;
            pick.push_back(i);
            if (search(i + 1, deg + facs[i].degree()))
                return true;
            pick.pop_back();
        }
        return false;
    };
    search(0, 0);
    return out;
}

zpoly torsion_field_polynomial(curve const & e, int ell, zpoly const & g)
{
    require_odd_prime(ell, max_division_index);
    if (g.degree() < 1 || !is_irreducible(g))
        throw invalid_parameter("torsion field needs an irreducible factor, got " + to_string(g));
    if (!rem(to_qpoly(division_polynomial_z(e, ell)), to_qpoly(g)).is_zero())
        throw invalid_parameter(to_string(g) + " does not divide psi_" + std::to_string(ell));
    return adjoin_sqrt(g, curve_rhs_z(e)).minpoly;
}

} // namespace twistsel
