#include <algorithm>
#include <random>

#include "twistsel/errors.hpp"
#include "twistsel/factor.hpp"
#include "twistsel/integer.hpp"

namespace twistsel::fp {

namespace {

void trim(fp_poly & f)
{
    while (!f.empty() && f.back() == 0)
        f.pop_back();
}

fp_poly x_poly()
{
    return {0, 1};
}

} // namespace

int degree(fp_poly const & f)
{
    return static_cast<int>(f.size()) - 1;
}

fp_poly reduce(zpoly const & f, std::uint64_t p)
{
    fp_poly r;
    mpz_class pm(static_cast<unsigned long>(p));
    for (auto const & c : f.coeffs())
        r.push_back(mod(c, pm).get_ui());
    trim(r);
    return r;
}

fp_poly add(fp_poly const & a, fp_poly const & b, std::uint64_t p)
{
    fp_poly r(std::max(a.size(), b.size()), 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        r[i] = a[i];
    for (std::size_t i = 0; i < b.size(); ++i)
        r[i] = (r[i] + b[i]) % p;
    trim(r);
    return r;
}

fp_poly sub(fp_poly const & a, fp_poly const & b, std::uint64_t p)
{
    fp_poly r(std::max(a.size(), b.size()), 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        r[i] = a[i];
    for (std::size_t i = 0; i < b.size(); ++i)
        r[i] = (r[i] + p - b[i]) % p;
    trim(r);
    return r;
}

fp_poly mul(fp_poly const & a, fp_poly const & b, std::uint64_t p)
{
    if (a.empty() || b.empty())
        return {};
    std::vector<unsigned __int128> acc(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0)
            continue;
        for (std::size_t j = 0; j < b.size(); ++j)
            acc[i + j] = (acc[i + j] + static_cast<unsigned __int128>(a[i]) * b[j]) % p;
    }
    fp_poly r(acc.size());
    for (std::size_t i = 0; i < acc.size(); ++i)
        r[i] = static_cast<std::uint64_t>(acc[i]);
    trim(r);
    return r;
}

std::pair<fp_poly, fp_poly> divmod(fp_poly const & a, fp_poly const & b, std::uint64_t p)
{
    if (b.empty())
        throw invalid_parameter("division by zero polynomial mod p");
    if (a.size() < b.size())
        return {{}, a};
    fp_poly r = a;
    fp_poly q(a.size() - b.size() + 1, 0);
    std::uint64_t inv = invmod(b.back(), p);
    std::size_t db = b.size() - 1;
    for (std::size_t i = a.size(); i-- > db;) {
        std::uint64_t c = mulmod(r[i], inv, p);
        q[i - db] = c;
        if (c == 0)
            continue;
        for (std::size_t j = 0; j <= db; ++j)
            r[i - db + j] = (r[i - db + j] + p - mulmod(c, b[j], p)) % p;
    }
    r.resize(db);
    trim(r);
    trim(q);
    return {q, r};
}

fp_poly rem(fp_poly const & a, fp_poly const & b, std::uint64_t p)
{
    return divmod(a, b, p).second;
}

fp_poly make_monic(fp_poly const & f, std::uint64_t p)
{
    if (f.empty())
        return f;
    std::uint64_t inv = invmod(f.back(), p);
    fp_poly r(f.size());
    for (std::size_t i = 0; i < f.size(); ++i)
        r[i] = mulmod(f[i], inv, p);
    return r;
}

fp_poly gcd(fp_poly a, fp_poly b, std::uint64_t p)
{
    while (!b.empty()) {
        fp_poly r = rem(a, b, p);
        a = std::move(b);
        b = std::move(r);
    }
    return make_monic(a, p);
}

fp_poly derivative(fp_poly const & f, std::uint64_t p)
{
    fp_poly r;
    for (std::size_t i = 1; i < f.size(); ++i)
        r.push_back(mulmod(f[i], i % p, p));
    trim(r);
    return r;
}

fp_poly powmod(fp_poly const & base, mpz_class const & e, fp_poly const & modulus,
               std::uint64_t p)
{
    fp_poly result{1};
    result = rem(result, modulus, p);
    fp_poly b = rem(base, modulus, p);
    std::size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
    for (std::size_t i = bits; i-- > 0;) {
        result = rem(mul(result, result, p), modulus, p);
        if (mpz_tstbit(e.get_mpz_t(), i))
            result = rem(mul(result, b, p), modulus, p);
    }
    return result;
}

bool is_squarefree(fp_poly const & f, std::uint64_t p)
{
    if (degree(f) < 1)
        return true;
    fp_poly d = derivative(f, p);
    if (d.empty())
        return false;
    return degree(gcd(f, d, p)) == 0;
}

namespace {

/* Distinct-degree factorization of a monic squarefree polynomial:
 * (product of all irreducible factors of degree i, i). */
std::vector<std::pair<fp_poly, int>> ddf(fp_poly f, std::uint64_t p)
{
    std::vector<std::pair<fp_poly, int>> out;
    fp_poly h = x_poly();
    mpz_class pz(static_cast<unsigned long>(p));
    int i = 0;
    while (degree(f) >= 2 * (i + 1)) {
        ++i;
        h = powmod(h, pz, f, p);
        fp_poly g = gcd(sub(h, x_poly(), p), f, p);
        if (degree(g) > 0) {
            out.emplace_back(g, i);
            f = divmod(f, g, p).first;
            h = rem(h, f, p);
        }
    }
    if (degree(f) > 0)
        out.emplace_back(make_monic(f, p), degree(f));
    return out;
}

/* Equal-degree splitting (Cantor-Zassenhaus; trace map in characteristic 2). */
void edf(fp_poly const & g, int d, std::uint64_t p, std::mt19937_64 & rng,
         std::vector<fp_poly> & out)
{
    if (degree(g) == d) {
        out.push_back(make_monic(g, p));
        return;
    }
    mpz_class pd;
    mpz_ui_pow_ui(pd.get_mpz_t(), p, static_cast<unsigned long>(d));
    mpz_class e = (pd - 1) / 2;
    std::uniform_int_distribution<std::uint64_t> coef(0, p - 1);
    for (;;) {
        fp_poly a;
        for (int i = 0; i < degree(g); ++i)
            a.push_back(coef(rng));
        trim(a);
        if (degree(a) < 1)
            continue;
        fp_poly b;
        if (p == 2) {
            fp_poly t = a, acc = a;
            for (int j = 1; j < d; ++j) {
                t = rem(mul(t, t, p), g, p);
                acc = add(acc, t, p);
            }
            b = acc;
        } else {
            b = sub(powmod(a, e, g, p), fp_poly{1}, p);
        }
        fp_poly h = gcd(b, g, p);
        if (degree(h) > 0 && degree(h) < degree(g)) {
            edf(h, d, p, rng, out);
            edf(divmod(g, h, p).first, d, p, rng, out);
            return;
        }
    }
}

bool fp_less(fp_poly const & a, fp_poly const & b)
{
    if (a.size() != b.size())
        return a.size() < b.size();
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

std::vector<fp_poly> factor_squarefree_monic(fp_poly const & f, std::uint64_t p)
{
    std::mt19937_64 rng(0x5eed'2024ULL ^ p);
    std::vector<fp_poly> out;
    for (auto const & [g, d] : ddf(f, p))
        edf(g, d, p, rng, out);
    std::sort(out.begin(), out.end(), fp_less);
    return out;
}

/* p-th root of a polynomial whose derivative vanishes. */
fp_poly pth_root(fp_poly const & f, std::uint64_t p)
{
    fp_poly r;
    for (std::size_t i = 0; i < f.size(); i += p)
        r.push_back(f[i]); /* a^p = a on F_p */
    trim(r);
    return r;
}

void squarefree_decompose(fp_poly f, std::uint64_t p, int mult,
                          std::vector<std::pair<fp_poly, int>> & out)
{
    /* Musser / Yun in characteristic p */
    int i = 1;
    fp_poly fd = derivative(f, p);
    if (fd.empty()) {
        if (degree(f) > 0)
            squarefree_decompose(pth_root(f, p), p, mult * static_cast<int>(p), out);
        return;
    }
    fp_poly c = gcd(f, fd, p);
    fp_poly w = divmod(f, c, p).first;
    while (degree(w) > 0) {
        fp_poly y = gcd(w, c, p);
        fp_poly z = divmod(w, y, p).first;
        if (degree(z) > 0)
            out.emplace_back(make_monic(z, p), i * mult);
        ++i;
        w = y;
        c = divmod(c, y, p).first;
    }
    if (degree(c) > 0)
        squarefree_decompose(pth_root(c, p), p, mult * static_cast<int>(p), out);
}

} // namespace

std::vector<std::pair<fp_poly, int>> factor(fp_poly const & f0, std::uint64_t p)
{
    if (f0.empty())
        throw invalid_parameter("factoring the zero polynomial mod p");
    fp_poly f = make_monic(f0, p);
    std::vector<std::pair<fp_poly, int>> parts;
    squarefree_decompose(f, p, 1, parts);
    std::vector<std::pair<fp_poly, int>> out;
    for (auto const & [g, m] : parts) {
        for (auto & h : factor_squarefree_monic(g, p))
            out.emplace_back(std::move(h), m);
    }
    std::sort(out.begin(), out.end(),
              [](auto const & a, auto const & b) { return fp_less(a.first, b.first); });
    /* merge equal factors coming from different squarefree layers */
    std::vector<std::pair<fp_poly, int>> merged;
    for (auto & e : out) {
        if (!merged.empty() && merged.back().first == e.first)
            merged.back().second += e.second;
        else
            merged.push_back(std::move(e));
    }
    return merged;
}

std::vector<int> factor_degrees(fp_poly const & f, std::uint64_t p)
{
    std::vector<int> degs;
    for (auto const & [g, d] : ddf(make_monic(f, p), p)) {
        for (int k = 0; k < degree(g) / d; ++k)
            degs.push_back(d);
    }
    std::sort(degs.begin(), degs.end());
    return degs;
}

} // namespace twistsel::fp
