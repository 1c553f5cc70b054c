#include "twistsel/quadclass.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <numeric>
#include <sstream>
#include <tuple>
#include <unordered_map>

#include "twistsel/errors.hpp"
#include "twistsel/integer.hpp"

namespace twistsel {

namespace {

using i128 = __int128;

std::int64_t floor_div(i128 a, i128 b)
{
    i128 q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0)))
        --q;
    return static_cast<std::int64_t>(q);
}

std::int64_t mod64(i128 a, std::int64_t m)
{
    i128 r = a % m;
    return static_cast<std::int64_t>(r < 0 ? r + m : r);
}

/* u a + v b = g = gcd(a, b) >= 0 */
std::int64_t ext_gcd(std::int64_t a, std::int64_t b, std::int64_t & u, std::int64_t & v)
{
    std::int64_t r0 = a, r1 = b, s0 = 1, s1 = 0, t0 = 0, t1 = 1;
    while (r1 != 0) {
        std::int64_t q = r0 / r1;
        std::tie(r0, r1) = std::make_pair(r1, r0 - q * r1);
        std::tie(s0, s1) = std::make_pair(s1, s0 - q * s1);
        std::tie(t0, t1) = std::make_pair(t1, t0 - q * t1);
    }
    if (r0 < 0) {
        r0 = -r0;
        s0 = -s0;
        t0 = -t0;
    }
    u = s0;
    v = t0;
    return r0;
}

void check_discriminant(std::int64_t D)
{
    if (D >= 0)
        throw unsupported("only negative discriminants are supported, got " + std::to_string(D));
    if (mod64(D, 4) > 1)
        throw invalid_parameter("discriminant must be 0 or 1 mod 4, got " + std::to_string(D));
    if (-D > max_abs_discriminant)
        throw resource_error("discriminant too large: " + std::to_string(D));
}

} // namespace

std::int64_t field_discriminant(std::int64_t d)
{
    if (d == 0 || d == 1 || !is_squarefree(mpz_class(static_cast<long>(d))))
        throw invalid_parameter("d must be squarefree and not 0 or 1, got " + std::to_string(d));
    return mod64(d, 4) == 1 ? d : 4 * d;
}

bool qform::is_reduced() const
{
    if (a <= 0 || std::llabs(b) > a || a > c)
        return false;
    if ((std::llabs(b) == a || a == c) && b < 0)
        return false;
    return true;
}

std::string qform::to_string() const
{
    return "(" + std::to_string(a) + "," + std::to_string(b) + "," + std::to_string(c) + ")";
}

qform qform::parse(std::string const & text)
{
    std::string s;
    for (char ch : text) {
        if (ch != ' ')
            s += ch;
    }
    if (s.size() < 7 || s.front() != '(' || s.back() != ')')
        throw invalid_parameter("form must look like (a,b,c): " + text);
    std::istringstream in(s.substr(1, s.size() - 2));
    qform f;
    char c1 = 0, c2 = 0;
    if (!(in >> f.a >> c1 >> f.b >> c2 >> f.c) || c1 != ',' || c2 != ',' || !in.eof())
        throw invalid_parameter("form must look like (a,b,c): " + text);
    return f;
}

qform reduce(qform f)
{
    if (f.a <= 0 || f.disc() >= 0)
        throw invalid_parameter("not a positive definite form: " + f.to_string());
    for (;;) {
        if (f.b <= -f.a || f.b > f.a) {
            /* b + 2as in (-a, a] */
            std::int64_t s = floor_div(static_cast<i128>(f.a) - f.b, 2 * static_cast<i128>(f.a));
            i128 c = static_cast<i128>(f.a) * s * s + static_cast<i128>(f.b) * s + f.c;
            f.b += 2 * f.a * s;
            f.c = static_cast<std::int64_t>(c);
        }
        if (f.a > f.c) {
            f = {f.c, -f.b, f.a};
            continue;
        }
        if (f.a == f.c && f.b < 0)
            f.b = -f.b;
        return f;
    }
}

qform principal_form(std::int64_t D)
{
    check_discriminant(D);
    std::int64_t b = mod64(D, 2);
    return {1, b, (b * b - D) / 4};
}

qform inverse(qform const & f)
{
    return reduce({f.a, -f.b, f.c});
}

qform compose(qform const & f, qform const & g)
{
    if (f.disc() != g.disc())
        throw invalid_parameter("composing forms of different discriminants: " + f.to_string() +
                                " " + g.to_string());
    qform f1 = f, f2 = g;
    if (f1.a > f2.a)
        std::swap(f1, f2);
    std::int64_t D = f.disc();
    std::int64_t s = (f1.b + f2.b) / 2, n = f2.b - s;
    std::int64_t y1, d;
    if (f2.a % f1.a == 0) {
        y1 = 0;
        d = f1.a;
    } else {
        std::int64_t u, v;
        d = ext_gcd(f2.a, f1.a, u, v);
        y1 = u;
    }
    std::int64_t x2, y2, d1;
    if (s % d == 0) {
        y2 = -1;
        x2 = 0;
        d1 = d;
    } else {
        std::int64_t u, v;
        d1 = ext_gcd(s, d, u, v);
        x2 = u;
        y2 = -v;
    }
    std::int64_t v1 = f1.a / d1, v2 = f2.a / d1;
    std::int64_t r = mod64(static_cast<i128>(y1) * y2 % v1 * n - static_cast<i128>(x2) * f2.c, v1);
    i128 b3 = f2.b + 2 * static_cast<i128>(v2) * r;
    i128 a3 = static_cast<i128>(v1) * v2;
    i128 c3 = (b3 * b3 - D) / (4 * a3);
    return reduce({static_cast<std::int64_t>(a3), static_cast<std::int64_t>(b3),
                   static_cast<std::int64_t>(c3)});
}

qform power(qform const & f, std::int64_t n)
{
    qform base = n < 0 ? inverse(f) : reduce(f);
    std::uint64_t e = static_cast<std::uint64_t>(n < 0 ? -n : n);
    qform acc = principal_form(f.disc());
    while (e) {
        if (e & 1)
            acc = compose(acc, base);
        base = compose(base, base);
        e >>= 1;
    }
    return acc;
}

std::vector<qform> reduced_forms(std::int64_t D)
{
    check_discriminant(D);
    std::vector<qform> out;
    for (std::int64_t a = 1; 3 * a * a <= -D; ++a) {
        for (std::int64_t b = -a + 1; b <= a; ++b) {
            std::int64_t num = b * b - D;
            if (num % (4 * a) != 0)
                continue;
            std::int64_t c = num / (4 * a);
            qform f{a, b, c};
            if (!f.is_reduced())
                continue;
            if (std::gcd(std::gcd(a, std::llabs(b)), c) != 1)
                continue;
            out.push_back(f);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

class_group_data class_group_structure(std::int64_t D)
{
    class_group_data out;
    out.D = D;
    out.forms = reduced_forms(D);
    out.h = static_cast<std::int64_t>(out.forms.size());
    auto const h = out.forms.size();
    std::map<qform, std::size_t> index;
    for (std::size_t i = 0; i < h; ++i)
        index[out.forms[i]] = i;
    std::size_t const id = index.at(principal_form(D));
    auto mul = [&](std::size_t i, std::size_t j) { return index.at(compose(out.forms[i], out.forms[j])); };

    /* Greedy cyclic decomposition: an element of maximal order modulo the
     * subgroup found so far spans a direct summand, and its coset contains a
     * lift of the same order. */
    std::vector<char> in_h(h, 0);
    std::vector<std::size_t> members{id};
    in_h[id] = 1;
    while (members.size() < h) {
        std::size_t best = h;
        std::int64_t best_m = 0;
        for (std::size_t x = 0; x < h; ++x) {
            if (in_h[x])
                continue;
            std::int64_t m = 1;
            for (std::size_t y = x; !in_h[y]; y = mul(y, x))
                ++m;
            if (m > best_m) {
                best_m = m;
                best = x;
            }
        }
        std::size_t gen = h;
        for (auto hh : members) {
            std::size_t y = mul(best, hh);
            std::size_t pw = y;
            for (std::int64_t k = 1; k < best_m; ++k)
                pw = mul(pw, y);
            if (pw == id) {
                gen = y;
                break;
            }
        }
        if (gen == h)
            throw std::logic_error("class group decomposition failed for D = " + std::to_string(D));
        std::vector<std::size_t> grown;
        std::size_t pw = id;
        for (std::int64_t k = 0; k < best_m; ++k) {
            for (auto hh : members)
                grown.push_back(mul(pw, hh));
            pw = mul(pw, gen);
        }
        for (auto g : grown)
            in_h[g] = 1;
        members = std::move(grown);
        out.structure.push_back(best_m);
        out.generators.push_back(out.forms[gen]);
    }
    std::reverse(out.structure.begin(), out.structure.end());
    std::reverse(out.generators.begin(), out.generators.end());
    return out;
}

int ell_rank(std::vector<std::int64_t> const & structure, std::int64_t ell)
{
    return static_cast<int>(
        std::count_if(structure.begin(), structure.end(), [&](std::int64_t n) { return n % ell == 0; }));
}

ell_rank_result ell_rank(std::int64_t D, std::int64_t ell)
{
    if (ell < 2 || !is_prime(static_cast<std::uint64_t>(ell)))
        throw invalid_parameter("ell must be prime, got " + std::to_string(ell));
    ell_rank_result r;
    r.rank = ell_rank(class_group_structure(D).structure, ell);
    mpz_ui_pow_ui(r.torsion_order.get_mpz_t(), static_cast<unsigned long>(ell),
                  static_cast<unsigned long>(r.rank));
    return r;
}

std::vector<mpz_class> smith_diagonal(std::vector<std::vector<mpz_class>> m)
{
    std::size_t rows = m.size(), cols = rows ? m[0].size() : 0;
    std::size_t n = std::min(rows, cols);
    std::vector<mpz_class> diag;
    for (std::size_t t = 0; t < n; ++t) {
        for (;;) {
            /* smallest nonzero entry of the trailing block to (t, t) */
            std::size_t pi = rows, pj = cols;
            for (std::size_t i = t; i < rows; ++i) {
                for (std::size_t j = t; j < cols; ++j) {
                    if (m[i][j] != 0 && (pi == rows || abs(m[i][j]) < abs(m[pi][pj]))) {
                        pi = i;
                        pj = j;
                    }
                }
            }
            if (pi == rows)
                break;
            std::swap(m[t], m[pi]);
            for (auto & row : m)
                std::swap(row[t], row[pj]);
            bool dirty = false;
            for (std::size_t i = t + 1; i < rows; ++i) {
                if (m[i][t] == 0)
                    continue;
                mpz_class q = m[i][t] / m[t][t];
                for (std::size_t j = t; j < cols; ++j)
                    m[i][j] -= q * m[t][j];
                dirty |= m[i][t] != 0;
            }
            for (std::size_t j = t + 1; j < cols; ++j) {
                if (m[t][j] == 0)
                    continue;
                mpz_class q = m[t][j] / m[t][t];
                for (std::size_t i = t; i < rows; ++i)
                    m[i][j] -= q * m[i][t];
                dirty |= m[t][j] != 0;
            }
            if (dirty)
                continue;
            /* pivot must divide the rest of the block */
            std::size_t bad = rows;
            for (std::size_t i = t + 1; i < rows && bad == rows; ++i) {
                for (std::size_t j = t + 1; j < cols; ++j) {
                    if (m[i][j] % m[t][t] != 0) {
                        bad = i;
                        break;
                    }
                }
            }
            if (bad == rows)
                break;
            for (std::size_t j = t; j < cols; ++j)
                m[t][j] += m[bad][j];
        }
        diag.push_back(abs(m[t][t]));
    }
    return diag;
}

namespace {

/* Arithmetic in O_K = Z[w], w^2 = delta w + q, with elements x + y w. */
struct quad_order {
    std::int64_t D;
    mpz_class delta, q;

    explicit quad_order(std::int64_t disc) : D(disc)
    {
        delta = mod64(D, 2);
        q = (mpz_class(static_cast<long>(D)) - delta) / 4;
    }

    std::pair<mpz_class, mpz_class> mul(std::pair<mpz_class, mpz_class> const & u,
                                        std::pair<mpz_class, mpz_class> const & v) const
    {
        mpz_class yy = u.second * v.second;
        return {u.first * v.first + q * yy, u.first * v.second + u.second * v.first + delta * yy};
    }

    mpz_class norm(mpz_class const & x, mpz_class const & y) const
    {
        return x * x + delta * x * y - q * y * y;
    }
    /* twice the bilinear form attached to the norm */
    mpz_class bil2(std::pair<mpz_class, mpz_class> const & u, std::pair<mpz_class, mpz_class> const & v) const
    {
        return 2 * u.first * v.first + delta * (u.first * v.second + u.second * v.first) -
               2 * q * u.second * v.second;
    }
};

/* Z-basis {A, B + C w} in Hermite form: 0 <= B < A, C | A, C | B. */
struct ideal {
    mpz_class A, B, C;
};

ideal hnf(std::vector<std::pair<mpz_class, mpz_class>> v)
{
    /* gcd on the w coordinate */
    for (;;) {
        std::size_t piv = v.size();
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (v[i].second != 0 && (piv == v.size() || abs(v[i].second) < abs(v[piv].second)))
                piv = i;
        }
        bool done = true;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i == piv || v[i].second == 0)
                continue;
            mpz_class t = v[i].second / v[piv].second;
            v[i].first -= t * v[piv].first;
            v[i].second -= t * v[piv].second;
            done &= v[i].second == 0;
        }
        if (done) {
            ideal I;
            I.A = 0;
            for (std::size_t i = 0; i < v.size(); ++i) {
                if (i != piv)
                    I.A = gcd(I.A, v[i].first);
            }
            I.B = v[piv].first;
            I.C = v[piv].second;
            if (I.C < 0) {
                I.B = -I.B;
                I.C = -I.C;
            }
            mpz_class r;
            mpz_fdiv_r(r.get_mpz_t(), I.B.get_mpz_t(), I.A.get_mpz_t());
            I.B = r;
            return I;
        }
    }
}

ideal ideal_mul(quad_order const & o, ideal const & I, ideal const & J)
{
    std::pair<mpz_class, mpz_class> i1{I.A, 0}, i2{I.B, I.C}, j1{J.A, 0}, j2{J.B, J.C};
    return hnf({o.mul(i1, j1), o.mul(i1, j2), o.mul(i2, j1), o.mul(i2, j2)});
}

ideal ideal_pow(quad_order const & o, ideal base, std::int64_t e)
{
    ideal acc{1, 0, 1};
    while (e) {
        if (e & 1)
            acc = ideal_mul(o, acc, base);
        base = ideal_mul(o, base, base);
        e >>= 1;
    }
    return acc;
}

ideal ideal_of_form(quad_order const & o, qform const & f)
{
    /* a Z + (-b + sqrt D)/2 Z, and (-b + sqrt D)/2 = w - (b + delta)/2 */
    mpz_class b = f.b;
    mpz_class B = -(b + o.delta) / 2;
    mpz_class A = f.a;
    mpz_fdiv_r(B.get_mpz_t(), B.get_mpz_t(), A.get_mpz_t());
    return {A, B, 1};
}

/* generator of a principal ideal: its shortest vector under the norm form */
std::pair<mpz_class, mpz_class> principal_generator(quad_order const & o, ideal const & I)
{
    std::pair<mpz_class, mpz_class> v1{I.A, 0}, v2{I.B, I.C};
    for (;;) {
        if (o.norm(v2.first, v2.second) < o.norm(v1.first, v1.second))
            std::swap(v1, v2);
        mpz_class num = o.bil2(v1, v2), den = 2 * o.norm(v1.first, v1.second);
        mpz_class mu;
        mpz_class t = 2 * num + den, d2 = 2 * den;
        mpz_fdiv_q(mu.get_mpz_t(), t.get_mpz_t(), d2.get_mpz_t());
        if (mu == 0)
            break;
        v2.first -= mu * v1.first;
        v2.second -= mu * v1.second;
    }
    if (o.norm(v1.first, v1.second) != I.A * I.C)
        throw std::logic_error("ideal expected to be principal is not");
    return v1;
}

/* proper equivalent of f whose first coefficient is coprime to P */
qform coprime_representative(qform const & f, mpz_class const & P)
{
    for (std::int64_t r = 1;; ++r) {
        for (std::int64_t x = -r; x <= r; ++x) {
            for (std::int64_t y : {-r, r}) {
                for (int flip = 0; flip < 2; ++flip) {
                    std::int64_t X = flip ? y : x, Y = flip ? x : y;
                    if (std::gcd(X, Y) != 1)
                        continue;
                    i128 n = static_cast<i128>(f.a) * X * X + static_cast<i128>(f.b) * X * Y +
                             static_cast<i128>(f.c) * Y * Y;
                    mpz_class nz = static_cast<long>(n);
                    if (gcd(nz, P) != 1)
                        continue;
                    /* X s - R Y = 1 */
                    std::int64_t s, t;
                    ext_gcd(X, Y, s, t);
                    std::int64_t R = -t;
                    i128 b2 = 2 * static_cast<i128>(f.a) * X * R +
                              static_cast<i128>(f.b) * (static_cast<i128>(X) * s + static_cast<i128>(R) * Y) +
                              2 * static_cast<i128>(f.c) * Y * s;
                    qform g{static_cast<std::int64_t>(n), static_cast<std::int64_t>(b2), 0};
                    g.c = static_cast<std::int64_t>((b2 * b2 - f.disc()) / (4 * n));
                    return g;
                }
            }
        }
    }
}

/* One cyclic factor of (O/pO)*: F_p* through an embedding w -> root, or
 * F_{p^2}* for inert p. */
struct unit_component {
    std::uint64_t p = 0;
    bool inert = false;
    std::uint64_t root = 0; /* split case */
    std::uint64_t dq = 0, qq = 0; /* w^2 = dq w + qq mod p, inert case */
    std::uint64_t order = 0;
    std::pair<std::uint64_t, std::uint64_t> gen{0, 0};

    using elt = std::pair<std::uint64_t, std::uint64_t>;

    elt mul(elt const & u, elt const & v) const
    {
        if (!inert)
            return {mulmod(u.first, v.first, p), 0};
        std::uint64_t yy = mulmod(u.second, v.second, p);
        std::uint64_t x = (mulmod(u.first, v.first, p) + mulmod(qq, yy, p)) % p;
        std::uint64_t y = (mulmod(u.first, v.second, p) + mulmod(u.second, v.first, p) +
                           mulmod(dq, yy, p)) %
                          p;
        return {x, y};
    }

    elt pow(elt b, std::uint64_t e) const
    {
        elt acc{1, 0};
        while (e) {
            if (e & 1)
                acc = mul(acc, b);
            b = mul(b, b);
            e >>= 1;
        }
        return acc;
    }

    elt image(mpz_class const & x, mpz_class const & y) const
    {
        mpz_class pz(static_cast<unsigned long>(p));
        auto xr = static_cast<std::uint64_t>(mod(x, pz).get_ui());
        auto yr = static_cast<std::uint64_t>(mod(y, pz).get_ui());
        if (!inert)
            return {(xr + mulmod(yr, root, p)) % p, 0};
        return {xr, yr};
    }

    std::uint64_t key(elt const & u) const { return u.first * p + u.second; }

    std::uint64_t dlog(elt const & target) const
    {
        if (order == 1)
            return 0;
        auto m = static_cast<std::uint64_t>(std::ceil(std::sqrt(static_cast<double>(order))));
        std::unordered_map<std::uint64_t, std::uint64_t> baby;
        elt cur{1, 0};
        for (std::uint64_t j = 0; j < m; ++j) {
            baby.emplace(key(cur), j);
            cur = mul(cur, gen);
        }
        elt giant = pow(gen, (order - m % order) % order); /* gen^-m */
        elt y = target;
        for (std::uint64_t i = 0; i <= m; ++i) {
            auto it = baby.find(key(y));
            if (it != baby.end())
                return (i * m + it->second) % order;
            y = mul(y, giant);
        }
        throw std::logic_error("discrete logarithm not found");
    }
};

std::vector<std::uint64_t> prime_divisors(std::uint64_t n)
{
    std::vector<std::uint64_t> out;
    for (auto const & pp : factorize(mpz_class(static_cast<unsigned long>(n))))
        out.push_back(pp.p.get_ui());
    return out;
}

void find_generator(unit_component & c)
{
    auto qs = prime_divisors(c.order);
    for (std::uint64_t a = 0; a < c.p * c.p; ++a) {
        unit_component::elt g = c.inert ? unit_component::elt{a % c.p, a / c.p} : unit_component::elt{a, 0};
        if (!c.inert && a >= c.p)
            break;
        if (g.first == 0 && g.second == 0)
            continue;
        bool ok = true;
        for (auto q : qs) {
            if (c.pow(g, c.order / q) == unit_component::elt{1, 0}) {
                ok = false;
                break;
            }
        }
        if (ok) {
            c.gen = g;
            return;
        }
    }
    throw std::logic_error("no generator found");
}

std::uint64_t sqrt_mod(std::uint64_t a, std::uint64_t p)
{
    a %= p;
    if (a == 0 || p == 2)
        return a;
    /* Tonelli-Shanks */
    std::uint64_t q = p - 1, s = 0;
    while (q % 2 == 0) {
        q /= 2;
        ++s;
    }
    std::uint64_t z = 2;
    while (powmod(z, (p - 1) / 2, p) != p - 1)
        ++z;
    std::uint64_t m = s, c = powmod(z, q, p), t = powmod(a, q, p), r = powmod(a, (q + 1) / 2, p);
    while (t != 1) {
        std::uint64_t i = 0, tt = t;
        while (tt != 1) {
            tt = mulmod(tt, tt, p);
            ++i;
        }
        std::uint64_t b = c;
        for (std::uint64_t j = 0; j + i + 1 < m; ++j)
            b = mulmod(b, b, p);
        m = i;
        c = mulmod(b, b, p);
        t = mulmod(t, c, p);
        r = mulmod(r, b, p);
    }
    return r;
}

} // namespace

ray_class_data ray_class_group(std::int64_t d, std::vector<std::int64_t> const & S)
{
    if (d >= 0)
        throw unsupported("ray class groups need d < 0, got " + std::to_string(d));
    std::int64_t D = field_discriminant(d);
    if (d > -5)
        throw unsupported("d = " + std::to_string(d) + " is excluded (d >= -4)");
    ray_class_data out;
    out.d = d;
    out.D = D;
    out.moduli = S;
    std::sort(out.moduli.begin(), out.moduli.end());
    out.moduli.erase(std::unique(out.moduli.begin(), out.moduli.end()), out.moduli.end());
    mpz_class Dz(static_cast<long>(D));
    for (auto p : out.moduli) {
        if (p < 2 || !is_prime(static_cast<std::uint64_t>(p)))
            throw invalid_parameter("modulus entry is not prime: " + std::to_string(p));
        if (kronecker(Dz, mpz_class(static_cast<long>(p))) == 0)
            throw precondition_error(std::to_string(p) + " ramifies in Q(sqrt " + std::to_string(d) +
                                     ")");
        if (p > 1'000'000)
            throw resource_error("modulus prime too large for discrete logarithms: " +
                                 std::to_string(p));
    }

    quad_order o(D);
    auto cl = class_group_structure(D);
    out.h = cl.h;

    std::vector<unit_component> comps;
    out.units_mod_m = 1;
    for (auto p64 : out.moduli) {
        auto p = static_cast<std::uint64_t>(p64);
        int chi = kronecker(Dz, mpz_class(static_cast<long>(p64)));
        mpz_class pz(static_cast<unsigned long>(p));
        auto dq = static_cast<std::uint64_t>(mod(o.delta, pz).get_ui());
        auto qq = static_cast<std::uint64_t>(mod(o.q, pz).get_ui());
        if (chi == 1) {
            out.units_mod_m *= (p - 1) * (p - 1);
            /* roots of T^2 - delta T - q */
            std::vector<std::uint64_t> roots;
            if (p == 2) {
                for (std::uint64_t t = 0; t < 2; ++t) {
                    if ((t * t + dq * t + qq) % 2 == 0)
                        roots.push_back(t);
                }
            } else {
                std::uint64_t s = sqrt_mod(static_cast<std::uint64_t>(mod(Dz, pz).get_ui()), p);
                std::uint64_t inv2 = invmod(2, p);
                roots.push_back(mulmod((dq + s) % p, inv2, p));
                roots.push_back(mulmod((dq + p - s) % p, inv2, p));
            }
            for (auto r : roots) {
                unit_component c;
                c.p = p;
                c.root = r;
                c.order = p - 1;
                find_generator(c);
                comps.push_back(c);
            }
        } else {
            out.units_mod_m *= p * p - 1;
            unit_component c;
            c.p = p;
            c.inert = true;
            c.dq = dq;
            c.qq = qq;
            c.order = p * p - 1;
            find_generator(c);
            comps.push_back(c);
        }
    }

    auto dlogs = [&](mpz_class const & x, mpz_class const & y) {
        std::vector<mpz_class> v;
        for (auto const & c : comps)
            v.emplace_back(static_cast<unsigned long>(c.dlog(c.image(x, y))));
        return v;
    };

    mpz_class P = 1;
    for (auto p : out.moduli)
        P *= p;
    std::size_t k = cl.generators.size(), r = comps.size();
    std::vector<std::vector<mpz_class>> rel;
    for (std::size_t i = 0; i < k; ++i) {
        /* a_i^{n_i} = (alpha_i), so n_i [a_i] equals the class of alpha_i */
        qform f = coprime_representative(cl.generators[i], P);
        ideal I = ideal_pow(o, ideal_of_form(o, f), cl.structure[i]);
        auto alpha = principal_generator(o, I);
        std::vector<mpz_class> row(k + r, 0);
        row[i] = cl.structure[i];
        auto lg = dlogs(alpha.first, alpha.second);
        for (std::size_t j = 0; j < r; ++j)
            row[k + j] = -lg[j];
        rel.push_back(row);
    }
    for (std::size_t j = 0; j < r; ++j) {
        std::vector<mpz_class> row(k + r, 0);
        row[k + j] = static_cast<unsigned long>(comps[j].order);
        rel.push_back(row);
    }
    {
        std::vector<mpz_class> row(k + r, 0);
        auto lg = dlogs(-1, 0);
        bool trivial = true;
        for (std::size_t j = 0; j < r; ++j) {
            row[k + j] = lg[j];
            trivial &= lg[j] == 0;
        }
        out.unit_image = trivial ? 1 : 2;
        rel.push_back(row);
    }

    out.order = 1;
    if (k + r > 0) {
        for (auto const & e : smith_diagonal(rel)) {
            if (e == 0)
                throw std::logic_error("ray class group relations do not have full rank");
            if (e != 1)
                out.structure.push_back(e);
            out.order *= e;
        }
    }
    return out;
}

int ray_class_ell_rank(std::int64_t d, std::vector<std::int64_t> const & S, std::int64_t ell)
{
    if (ell < 3 || !is_prime(static_cast<std::uint64_t>(ell)))
        throw invalid_parameter("ell must be an odd prime, got " + std::to_string(ell));
    for (auto p : S) {
        if (p == ell)
            throw precondition_error("modulus contains ell = " + std::to_string(ell) +
                                     " (wild ramification is not handled)");
    }
    auto rc = ray_class_group(d, S);
    mpz_class l(static_cast<long>(ell));
    return static_cast<int>(std::count_if(rc.structure.begin(), rc.structure.end(),
                                          [&](mpz_class const & n) { return n % l == 0; }));
}

} // namespace twistsel
