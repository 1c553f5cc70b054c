#include "twistsel/curve.hpp"

#include <limits>
#include <map>
#include <sstream>

#include "twistsel/errors.hpp"
#include "twistsel/integer.hpp"

namespace twistsel {

curve_invariants compute_invariants(std::array<mpq_class, 5> const & a)
{
    auto const & [a1, a2, a3, a4, a6] = a;
    curve_invariants v;
    v.b2 = a1 * a1 + 4 * a2;
    v.b4 = 2 * a4 + a1 * a3;
    v.b6 = a3 * a3 + 4 * a6;
    v.b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
    v.c4 = v.b2 * v.b2 - 24 * v.b4;
    v.c6 = -v.b2 * v.b2 * v.b2 + 36 * v.b2 * v.b4 - 216 * v.b6;
    v.disc = -v.b2 * v.b2 * v.b8 - 8 * v.b4 * v.b4 * v.b4 - 27 * v.b6 * v.b6 +
             9 * v.b2 * v.b4 * v.b6;
    if (v.disc != 0)
        v.j = v.c4 * v.c4 * v.c4 / v.disc;
    return v;
}

curve::curve(std::array<mpq_class, 5> const & a) : a_(a), inv_(compute_invariants(a))
{
    if (inv_.disc == 0)
        throw invalid_parameter("singular Weierstrass model " + to_string());
}

curve::curve(mpq_class a1, mpq_class a2, mpq_class a3, mpq_class a4, mpq_class a6)
    : curve(std::array<mpq_class, 5>{std::move(a1), std::move(a2), std::move(a3), std::move(a4),
                                     std::move(a6)})
{
}

namespace {

std::string strip(std::string_view s)
{
    std::string out;
    for (char c : s) {
        if (c != ' ' && c != '\t' && c != '\n')
            out += c;
    }
    return out;
}

} // namespace

curve curve::parse(std::string_view text)
{
    std::string s = strip(text);
    if (s.size() < 2 || s.front() != '[' || s.back() != ']')
        throw invalid_parameter("curve must look like [a1,a2,a3,a4,a6]: " + std::string(text));
    std::array<mpq_class, 5> a;
    std::stringstream ss(s.substr(1, s.size() - 2));
    std::string item;
    std::size_t i = 0;
    while (std::getline(ss, item, ',')) {
        if (i == 5)
            throw invalid_parameter("curve needs exactly five coefficients: " + std::string(text));
        a[i++] = parse_rational(item);
    }
    if (i != 5)
        throw invalid_parameter("curve needs exactly five coefficients: " + std::string(text));
    return curve(a);
}

std::string curve::to_string() const
{
    std::string s = "[";
    for (std::size_t i = 0; i < 5; ++i) {
        if (i)
            s += ",";
        s += twistsel::to_string(a_[i]);
    }
    return s + "]";
}

bool curve::is_integral() const
{
    for (auto const & c : a_) {
        if (c.get_den() != 1)
            return false;
    }
    return true;
}

curve apply_transform(curve const & e, transform const & w)
{
    auto const & [a1, a2, a3, a4, a6] = e.coeffs();
    auto const & [u, r, s, t] = w;
    if (u == 0)
        throw invalid_parameter("transform with u = 0");
    mpq_class u2 = u * u, u3 = u2 * u;
    return curve(
        (a1 + 2 * s) / u,
        (a2 - s * a1 + 3 * r - s * s) / u2,
        (a3 + r * a1 + 2 * t) / u3,
        (a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1 + 3 * r * r - 2 * s * t) / (u2 * u2),
        (a6 + r * a4 + r * r * a2 + r * r * r - t * a3 - t * t - r * t * a1) / (u3 * u3));
}

namespace {

/* Integer model used inside Tate's algorithm. */
struct imodel {
    mpz_class a1, a2, a3, a4, a6;

    void rst(mpz_class const & r, mpz_class const & s, mpz_class const & t)
    {
        mpz_class n1 = a1 + 2 * s;
        mpz_class n2 = a2 - s * a1 + 3 * r - s * s;
        mpz_class n3 = a3 + r * a1 + 2 * t;
        mpz_class n4 = a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1 + 3 * r * r - 2 * s * t;
        mpz_class n6 = a6 + r * a4 + r * r * a2 + r * r * r - t * a3 - t * t - r * t * a1;
        a1 = n1, a2 = n2, a3 = n3, a4 = n4, a6 = n6;
    }

    std::array<mpq_class, 5> as_array() const
    {
        return {mpq_class(a1), mpq_class(a2), mpq_class(a3), mpq_class(a4), mpq_class(a6)};
    }
};

struct ib {
    mpz_class b2, b4, b6, b8, c4, c6, disc;
};

ib int_invariants(imodel const & m)
{
    ib v;
    v.b2 = m.a1 * m.a1 + 4 * m.a2;
    v.b4 = 2 * m.a4 + m.a1 * m.a3;
    v.b6 = m.a3 * m.a3 + 4 * m.a6;
    v.b8 = m.a1 * m.a1 * m.a6 + 4 * m.a2 * m.a6 - m.a1 * m.a3 * m.a4 + m.a2 * m.a3 * m.a3 -
           m.a4 * m.a4;
    v.c4 = v.b2 * v.b2 - 24 * v.b4;
    v.c6 = -v.b2 * v.b2 * v.b2 + 36 * v.b2 * v.b4 - 216 * v.b6;
    v.disc = -v.b2 * v.b2 * v.b8 - 8 * v.b4 * v.b4 * v.b4 - 27 * v.b6 * v.b6 +
             9 * v.b2 * v.b4 * v.b6;
    return v;
}

/* valuation that treats 0 as +infinity */
int val(mpz_class const & n, mpz_class const & p)
{
    return n == 0 ? std::numeric_limits<int>::max() : valuation(n, p);
}

bool divides(mpz_class const & p, mpz_class const & n)
{
    return mpz_divisible_p(n.get_mpz_t(), p.get_mpz_t()) != 0;
}

mpz_class exact_div(mpz_class const & n, mpz_class const & d)
{
    if (!divides(d, n))
        throw std::logic_error("Tate's algorithm: inexact division");
    mpz_class q;
    mpz_divexact(q.get_mpz_t(), n.get_mpz_t(), d.get_mpz_t());
    return q;
}

mpz_class inv_mod(mpz_class const & a, mpz_class const & p)
{
    mpz_class r;
    if (!mpz_invert(r.get_mpz_t(), a.get_mpz_t(), p.get_mpz_t()))
        throw std::logic_error("Tate's algorithm: non-invertible residue");
    return r;
}

/* root mod p of a polynomial given lowest degree first that is also a root
 * of its derivative (p small) */
mpz_class multiple_root_small(std::vector<mpz_class> const & c, mpz_class const & p)
{
    for (mpz_class x = 0; x < p; ++x) {
        mpz_class v = 0, dv = 0;
        for (std::size_t i = c.size(); i-- > 0;)
            v = v * x + c[i];
        for (std::size_t i = c.size(); i-- > 1;)
            dv = dv * x + c[i] * static_cast<unsigned long>(i);
        if (divides(p, v) && divides(p, dv))
            return x;
    }
    throw std::logic_error("Tate's algorithm: expected multiple root not found");
}

std::string kodaira_symbol(std::string base, int n)
{
    return base + std::to_string(n);
}

local_data tate(imodel m, mpz_class const & p, int ord_j)
{
    local_data ld;
    ld.p = p;
    ld.ord_j = ord_j;
    mpz_class const p2 = p * p, p3 = p2 * p;
    bool const small = p <= 3;
    mpz_class const half = p == 2 ? mpz_class(0) : inv_mod(2, p);
    for (;;) {
        ib v = int_invariants(m);
        int n = valuation(v.disc, p);
        ld.ord_delta_min = n;
        if (n == 0) {
            ld.kind = reduction_kind::good;
            ld.kodaira = "I0";
            ld.conductor_exponent = 0;
            return ld;
        }

        /* move the singular point of the reduction to (0,0) */
        mpz_class r, t;
        if (small) {
            bool found = false;
            for (mpz_class x = 0; x < p && !found; ++x) {
                for (mpz_class y = 0; y < p && !found; ++y) {
                    mpz_class f = y * y + m.a1 * x * y + m.a3 * y - x * x * x - m.a2 * x * x -
                                  m.a4 * x - m.a6;
                    mpz_class fx = m.a1 * y - 3 * x * x - 2 * m.a2 * x - m.a4;
                    mpz_class fy = 2 * y + m.a1 * x + m.a3;
                    if (divides(p, f) && divides(p, fx) && divides(p, fy)) {
                        r = x;
                        t = y;
                        found = true;
                    }
                }
            }
            if (!found)
                throw std::logic_error("Tate's algorithm: no singular point mod p");
        } else {
            if (divides(p, v.c4))
                r = mod(mpz_class(-v.b2 * inv_mod(12, p)), p);
            else
                r = mod(mpz_class(-(v.c6 + v.b2 * v.c4) * inv_mod(mpz_class(12 * v.c4), p)), p);
            t = mod(mpz_class(-(m.a1 * r + m.a3) * half), p);
        }
        m.rst(r, 0, t);
        v = int_invariants(m);

        if (!divides(p, v.b2)) {
            bool split;
            mpz_class mc6 = -v.c6;
            if (p == 2)
                split = mod(mc6, mpz_class(8)) == 1;
            else
                split = kronecker(mc6, p) == 1;
            ld.kind = split ? reduction_kind::split_multiplicative
                            : reduction_kind::nonsplit_multiplicative;
            ld.kodaira = kodaira_symbol("I", n);
            ld.conductor_exponent = 1;
            return ld;
        }
        ld.kind = reduction_kind::additive;
        if (val(m.a6, p) < 2) {
            ld.kodaira = "II";
            ld.conductor_exponent = n;
            return ld;
        }
        if (val(v.b8, p) < 3) {
            ld.kodaira = "III";
            ld.conductor_exponent = n - 1;
            return ld;
        }
        if (val(v.b6, p) < 3) {
            ld.kodaira = "IV";
            ld.conductor_exponent = n - 2;
            return ld;
        }

        /* now arrange p | a1, a2; p^2 | a3, a4; p^3 | a6 */
        mpz_class s;
        if (p == 2) {
            s = mod(m.a2, p);
            t = 2 * mod(exact_div(m.a6, 4), p);
        } else {
            s = mod(mpz_class(-m.a1 * half), p);
            t = p * mod(mpz_class(-exact_div(m.a3, p) * half), p);
        }
        m.rst(0, s, t);

        mpz_class b = exact_div(m.a2, p), c = exact_div(m.a4, p2), d = exact_div(m.a6, p3);
        mpz_class w = 27 * d * d - b * b * c * c + 4 * b * b * b * d - 18 * b * c * d + 4 * c * c * c;
        mpz_class x = 3 * c - b * b;

        if (!divides(p, w)) {
            ld.kodaira = "I0*";
            ld.conductor_exponent = n - 4;
            return ld;
        }
        if (!divides(p, x)) {
            /* double root: I_m^* */
            mpz_class root = small ? multiple_root_small({d, c, b, 1}, p)
                                   : mod(mpz_class((b * c - 9 * d) * inv_mod(mpz_class(2 * x), p)), p);
            m.rst(p * root, 0, 0);
            int mm = 1;
            mpz_class mx = p2, my = p2;
            for (;;) {
                mpz_class a3t = exact_div(m.a3, my);
                mpz_class a6t = exact_div(m.a6, mx * my);
                if (!divides(p, mpz_class(a3t * a3t + 4 * a6t)))
                    break;
                mpz_class yr = p == 2 ? mod(a6t, p) : mod(mpz_class(-a3t * half), p);
                m.rst(0, 0, my * yr);
                my *= p;
                ++mm;
                mpz_class a2t = exact_div(m.a2, p);
                mpz_class a4t = exact_div(m.a4, p * mx);
                a6t = exact_div(m.a6, mx * my);
                if (!divides(p, mpz_class(a4t * a4t - 4 * a2t * a6t)))
                    break;
                mpz_class xr = p == 2 ? mod(mpz_class(a6t * a2t), p)
                                      : mod(mpz_class(-a4t * half * inv_mod(a2t, p)), p);
                m.rst(mx * xr, 0, 0);
                mx *= p;
                ++mm;
            }
            ld.kodaira = kodaira_symbol("I", mm) + "*";
            ld.conductor_exponent = n - 4 - mm;
            return ld;
        }

        /* triple root */
        mpz_class root = small ? multiple_root_small({d, c, b, 1}, p)
                               : mod(mpz_class(-b * inv_mod(3, p)), p);
        m.rst(p * root, 0, 0);
        mpz_class x3 = exact_div(m.a3, p2), x6 = exact_div(m.a6, p2 * p2);
        if (!divides(p, mpz_class(x3 * x3 + 4 * x6))) {
            ld.kodaira = "IV*";
            ld.conductor_exponent = n - 6;
            return ld;
        }
        mpz_class yr = p == 2 ? mod(x6, p) : mod(mpz_class(-x3 * half), p);
        m.rst(0, 0, p2 * yr);
        if (val(m.a4, p) < 4) {
            ld.kodaira = "III*";
            ld.conductor_exponent = n - 7;
            return ld;
        }
        if (val(m.a6, p) < 6) {
            ld.kodaira = "II*";
            ld.conductor_exponent = n - 8;
            return ld;
        }
        /* not minimal at p: scale by u = p and start over */
        m.a1 = exact_div(m.a1, p);
        m.a2 = exact_div(m.a2, p2);
        m.a3 = exact_div(m.a3, p3);
        m.a4 = exact_div(m.a4, p2 * p2);
        m.a6 = exact_div(m.a6, p3 * p3);
    }
}

/* Smallest m > 0 with m^i a_i integral, and the scaled model. */
std::pair<mpz_class, imodel> integral_model(curve const & e)
{
    std::map<mpz_class, int> need;
    auto const & a = e.coeffs();
    int const weights[5] = {1, 2, 3, 4, 6};
    for (int i = 0; i < 5; ++i) {
        mpz_class den = a[static_cast<std::size_t>(i)].get_den();
        if (den == 1)
            continue;
        for (auto const & pp : factorize(den)) {
            int k = (pp.e + weights[i] - 1) / weights[i];
            int & cur = need[pp.p];
            cur = std::max(cur, k);
        }
    }
    mpz_class scale = 1;
    for (auto const & [p, k] : need) {
        mpz_class pk;
        mpz_pow_ui(pk.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(k));
        scale *= pk;
    }
    imodel m;
    mpz_class *out[5] = {&m.a1, &m.a2, &m.a3, &m.a4, &m.a6};
    for (int i = 0; i < 5; ++i) {
        mpz_class sw;
        mpz_pow_ui(sw.get_mpz_t(), scale.get_mpz_t(), static_cast<unsigned long>(weights[i]));
        mpq_class v = a[static_cast<std::size_t>(i)] * sw;
        *out[i] = v.get_num();
    }
    return {scale, m};
}

int ord_j_of(curve const & e, mpz_class const & p)
{
    auto const & v = e.invariants();
    if (v.j == 0)
        return ord_infinity;
    return valuation(v.j, p);
}

void require_prime(mpz_class const & p)
{
    if (p < 2 || !is_prime(p))
        throw invalid_parameter("not a prime: " + p.get_str());
}

} // namespace

local_data local_reduction(curve const & e, mpz_class const & p)
{
    require_prime(p);
    return tate(integral_model(e).second, p, ord_j_of(e, p));
}

minimal_result minimal_model(curve const & e)
{
    auto [scale, m] = integral_model(e);
    ib v = int_invariants(m);
    mpz_class U = 1;
    for (auto const & pp : factorize(v.disc)) {
        if (pp.e < 12)
            continue;
        local_data ld = tate(m, pp.p, 0);
        int k = (pp.e - ld.ord_delta_min) / 12;
        for (int i = 0; i < k; ++i)
            U *= pp.p;
    }
    mpz_class U2 = U * U, U4 = U2 * U2;
    mpz_class c4 = exact_div(v.c4, U4), c6 = exact_div(v.c6, U4 * U2);

    /* reduced model from (c4, c6) */
    mpz_class b2 = mod(mpz_class(-c6), mpz_class(12));
    if (b2 > 6)
        b2 -= 12;
    mpz_class b4 = exact_div(mpz_class(b2 * b2 - c4), 24);
    mpz_class b6 = exact_div(mpz_class(-b2 * b2 * b2 + 36 * b2 * b4 - c6), 216);
    mpz_class a1 = mod(b2, mpz_class(2)), a3 = mod(b6, mpz_class(2));
    curve model(mpq_class(a1), mpq_class(exact_div(mpz_class(b2 - a1), 4)), mpq_class(a3),
                mpq_class(exact_div(mpz_class(b4 - a1 * a3), 2)),
                mpq_class(exact_div(mpz_class(b6 - a3), 4)));

    transform w;
    w.u = mpq_class(U, scale);
    w.u.canonicalize();
    w.s = (w.u * model.a1() - e.a1()) / 2;
    w.r = (w.u * w.u * model.a2() - e.a2() + w.s * e.a1() + w.s * w.s) / 3;
    w.t = (w.u * w.u * w.u * model.a3() - e.a3() - w.r * e.a1()) / 2;
    if (!(apply_transform(e, w) == model))
        throw std::logic_error("minimal_model: transform reconstruction failed for " +
                               e.to_string());
    return {model, w};
}

curve short_model(curve const & e)
{
    auto const & v = e.invariants();
    return curve(0, 0, 0, -v.c4 / 48, -v.c6 / 864);
}

curve quadratic_twist(curve const & e, mpz_class const & d)
{
    if (d == 0 || !is_squarefree(d))
        throw invalid_parameter("twist parameter must be squarefree and nonzero: " + d.get_str());
    curve s = short_model(e);
    mpq_class dq(d);
    return curve(0, 0, 0, s.a4() * dq * dq, s.a6() * dq * dq * dq);
}

std::string to_string(reduction_kind k)
{
    switch (k) {
    case reduction_kind::good:
        return "Good";
    case reduction_kind::split_multiplicative:
        return "MultiplicativeSplit";
    case reduction_kind::nonsplit_multiplicative:
        return "MultiplicativeNonsplit";
    case reduction_kind::additive:
        return "Additive";
    }
    return "?";
}

conductor_data conductor(curve const & e)
{
    minimal_result mr = minimal_model(e);
    conductor_data out;
    out.n = 1;
    for (auto const & pp : factorize(mpz_class(mr.model.invariants().disc))) {
        local_data ld = local_reduction(mr.model, pp.p);
        for (int i = 0; i < ld.conductor_exponent; ++i)
            out.n *= pp.p;
        out.bad.push_back(std::move(ld));
    }
    return out;
}

namespace {

std::uint64_t residue(mpq_class const & q, std::uint64_t p)
{
    mpz_class pm(static_cast<unsigned long>(p));
    mpz_class den = mod(mpz_class(q.get_den()), pm);
    if (den == 0)
        throw precondition_error("coefficient not integral at p");
    mpz_class inv;
    mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), pm.get_mpz_t());
    return mod(mpz_class(q.get_num() * inv), pm).get_ui();
}

/* #E(F_p) including the point at infinity; coefficients already reduced */
std::uint64_t count_points(std::array<std::uint64_t, 5> const & a, std::uint64_t p)
{
    auto const [a1, a2, a3, a4, a6] = a;
    std::uint64_t count = 1;
    if (p <= 3) {
        for (std::uint64_t x = 0; x < p; ++x) {
            for (std::uint64_t y = 0; y < p; ++y) {
                std::uint64_t lhs = (y * y + a1 * x * y + a3 * y) % p;
                std::uint64_t rhs = (x * x * x + a2 * x * x + a4 * x + a6) % p;
                if (lhs == rhs)
                    ++count;
            }
        }
        return count;
    }
    /* y^2 + A y - R = 0 has 1 + legendre(A^2 + 4R) solutions */
    std::vector<signed char> chi(p, -1);
    chi[0] = 0;
    for (std::uint64_t y = 1; y <= p / 2; ++y)
        chi[mulmod(y, y, p)] = 1;
    for (std::uint64_t x = 0; x < p; ++x) {
        std::uint64_t A = (mulmod(a1, x, p) + a3) % p;
        std::uint64_t x2 = mulmod(x, x, p);
        std::uint64_t R = (mulmod(x2, x, p) + mulmod(a2, x2, p) + mulmod(a4, x, p) + a6) % p;
        std::uint64_t D = (mulmod(A, A, p) + mulmod(4, R, p)) % p;
        count += static_cast<std::uint64_t>(1 + chi[D]);
    }
    return count;
}

} // namespace

long ap(curve const & e, std::uint64_t p)
{
    if (!is_prime(p))
        throw invalid_parameter("not a prime: " + std::to_string(p));
    if (p > ap_limit)
        throw unsupported("point counting is limited to p <= " + std::to_string(ap_limit));
    curve m = minimal_model(e).model;
    mpz_class pm(static_cast<unsigned long>(p));
    if (divides(pm, mpz_class(m.invariants().disc.get_num())))
        throw precondition_error("bad reduction at p = " + std::to_string(p));
    std::array<std::uint64_t, 5> a;
    for (std::size_t i = 0; i < 5; ++i)
        a[i] = residue(m.coeffs()[i], p);
    return static_cast<long>(p + 1) - static_cast<long>(count_points(a, p));
}

std::string to_string(supersingular_verdict v)
{
    switch (v) {
    case supersingular_verdict::yes:
        return "Yes";
    case supersingular_verdict::no:
        return "No";
    case supersingular_verdict::not_applicable:
        return "NotApplicable";
    }
    return "?";
}

supersingular_result is_supersingular(curve const & e, std::uint64_t ell)
{
    if (ell < 5)
        throw unsupported("supersingularity test needs ell >= 5");
    if (!is_prime(ell))
        throw invalid_parameter("not a prime: " + std::to_string(ell));
    if (ell > ap_limit)
        throw unsupported("point counting is limited to p <= " + std::to_string(ap_limit));
    mpz_class lm(static_cast<unsigned long>(ell));
    local_data ld = local_reduction(e, lm);
    if (ld.ord_j < 0)
        return {supersingular_verdict::not_applicable, "ord_ell(j) < 0"};
    if (ld.kind == reduction_kind::good) {
        long a = ap(e, ell);
        return {a == 0 ? supersingular_verdict::yes : supersingular_verdict::no,
                "good reduction, a_ell = " + std::to_string(a)};
    }
    /* potentially good reduction: supersingularity depends on j mod ell only */
    std::uint64_t j = residue(e.invariants().j, ell);
    std::array<std::uint64_t, 5> a{0, 0, 0, 0, 0};
    if (j == 0) {
        a[4] = 1;
    } else if (j == 1728 % ell) {
        a[3] = 1;
    } else {
        std::uint64_t k = invmod((1728 % ell + ell - j) % ell, ell);
        a[3] = mulmod(mulmod(3, j, ell), k, ell);
        a[4] = mulmod(mulmod(2, j, ell), k, ell);
    }
    long trace = static_cast<long>(ell + 1) - static_cast<long>(count_points(a, ell));
    return {trace == 0 ? supersingular_verdict::yes : supersingular_verdict::no,
            "potentially good reduction, decided from j mod ell = " + std::to_string(j)};
}

point point::parse(std::string_view text)
{
    std::string s = strip(text);
    if (s == "inf" || s == "infinity" || s == "0")
        return at_infinity();
    if (s.size() < 5 || s.front() != '(' || s.back() != ')')
        throw invalid_parameter("point must look like (x,y) or inf: " + std::string(text));
    std::string body = s.substr(1, s.size() - 2);
    auto comma = body.find(',');
    if (comma == std::string::npos || body.find(',', comma + 1) != std::string::npos)
        throw invalid_parameter("point must look like (x,y) or inf: " + std::string(text));
    return affine(parse_rational(body.substr(0, comma)), parse_rational(body.substr(comma + 1)));
}

std::string point::to_string() const
{
    if (infinity)
        return "inf";
    return "(" + twistsel::to_string(x) + "," + twistsel::to_string(y) + ")";
}

bool on_curve(curve const & e, point const & p)
{
    if (p.infinity)
        return true;
    mpq_class const & x = p.x;
    mpq_class const & y = p.y;
    return y * y + e.a1() * x * y + e.a3() * y == x * x * x + e.a2() * x * x + e.a4() * x + e.a6();
}

point negate(curve const & e, point const & p)
{
    if (p.infinity)
        return p;
    return point::affine(p.x, -p.y - e.a1() * p.x - e.a3());
}

point add(curve const & e, point const & p, point const & q)
{
    if (p.infinity)
        return q;
    if (q.infinity)
        return p;
    mpq_class lambda, nu;
    if (p.x == q.x) {
        if (p.y + q.y + e.a1() * q.x + e.a3() == 0)
            return point::at_infinity();
        mpq_class den = 2 * p.y + e.a1() * p.x + e.a3();
        lambda = (3 * p.x * p.x + 2 * e.a2() * p.x + e.a4() - e.a1() * p.y) / den;
        nu = (-p.x * p.x * p.x + e.a4() * p.x + 2 * e.a6() - e.a3() * p.y) / den;
    } else {
        mpq_class dx = q.x - p.x;
        lambda = (q.y - p.y) / dx;
        nu = (p.y * q.x - q.y * p.x) / dx;
    }
    mpq_class x3 = lambda * lambda + e.a1() * lambda - e.a2() - p.x - q.x;
    mpq_class y3 = -(lambda + e.a1()) * x3 - nu - e.a3();
    return point::affine(x3, y3);
}

point multiply(curve const & e, point const & p, long n)
{
    point base = n < 0 ? negate(e, p) : p;
    unsigned long k = n < 0 ? static_cast<unsigned long>(-n) : static_cast<unsigned long>(n);
    point acc = point::at_infinity();
    while (k) {
        if (k & 1)
            acc = add(e, acc, base);
        base = add(e, base, base);
        k >>= 1;
    }
    return acc;
}

std::optional<int> point_order(curve const & e, point const & p, int bound)
{
    if (!on_curve(e, p))
        throw invalid_parameter("point " + p.to_string() + " is not on " + e.to_string());
    point q = p;
    for (int n = 1; n <= bound; ++n) {
        if (q.infinity)
            return n;
        q = add(e, q, p);
    }
    return std::nullopt;
}

point to_model(point const & p, transform const & w)
{
    if (p.infinity)
        return p;
    mpq_class u2 = w.u * w.u;
    mpq_class x = (p.x - w.r) / u2;
    mpq_class y = (p.y - w.s * (p.x - w.r) - w.t) / (u2 * w.u);
    return point::affine(x, y);
}

bool in_kernel_of_reduction(curve const & e, point const & p, mpz_class const & ell)
{
    if (p.infinity)
        throw invalid_parameter("kernel-of-reduction test needs an affine point");
    if (!on_curve(e, p))
        throw invalid_parameter("point " + p.to_string() + " is not on " + e.to_string());
    local_data ld = local_reduction(e, ell);
    if (ld.kind != reduction_kind::good)
        throw precondition_error("kernel of reduction needs good reduction at " + ell.get_str());
    minimal_result mr = minimal_model(e);
    point q = to_model(p, mr.w);
    if (q.x == 0)
        return false;
    return valuation(q.x, ell) < 0;
}

} // namespace twistsel
