#include "twistsel/integer.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <tuple>
#include <utility>

#include "twistsel/errors.hpp"

namespace twistsel {

int valuation(mpz_class const & n, mpz_class const & p)
{
    if (n == 0)
        throw invalid_parameter("valuation of zero");
    if (p < 2)
        throw invalid_parameter("valuation at p < 2");
    mpz_class r;
    return static_cast<int>(mpz_remove(r.get_mpz_t(), n.get_mpz_t(), p.get_mpz_t()));
}

int valuation(mpq_class const & q, mpz_class const & p)
{
    return valuation(mpz_class(q.get_num()), p) - valuation(mpz_class(q.get_den()), p);
}

bool is_prime(mpz_class const & n)
{
    return n >= 2 && mpz_probab_prime_p(n.get_mpz_t(), 30) > 0;
}

bool is_prime(std::uint64_t n)
{
    if (n < 2)
        return false;
    for (std::uint64_t q : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        if (n % q == 0)
            return n == q;
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    /* deterministic witness set for 64-bit integers */
    for (std::uint64_t a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        std::uint64_t x = powmod(a, d, n);
        if (x == 1 || x == n - 1)
            continue;
        bool composite = true;
        for (int r = 1; r < s; ++r) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite)
            return false;
    }
    return true;
}

namespace {

mpz_class pollard_brent(mpz_class const & n)
{
    if (mpz_even_p(n.get_mpz_t()))
        return 2;
    for (unsigned long c = 1;; ++c) {
        mpz_class y = 2, x, g = 1, q = 1, ys;
        unsigned long r = 1;
        auto f = [&](mpz_class const & v) {
            mpz_class w = v * v + c;
            return mpz_class(w % n);
        };
        do {
            x = y;
            for (unsigned long i = 0; i < r; ++i)
                y = f(y);
            unsigned long k = 0;
            do {
                ys = y;
                unsigned long m = std::min<unsigned long>(128, r - k);
                for (unsigned long i = 0; i < m; ++i) {
                    y = f(y);
                    mpz_class diff = abs(x - y);
                    q = (q * diff) % n;
                }
                g = gcd(q, n);
                k += m;
            } while (k < r && g == 1);
            r *= 2;
        } while (g == 1);
        if (g == n) {
            do {
                ys = f(ys);
                g = gcd(mpz_class(abs(x - ys)), n);
            } while (g == 1);
        }
        if (g != n)
            return g;
    }
}

void factor_rec(mpz_class n, std::vector<mpz_class> & out)
{
    if (n == 1)
        return;
    if (is_prime(n)) {
        out.push_back(n);
        return;
    }
    mpz_class s;
    if (mpz_perfect_square_p(n.get_mpz_t())) {
        mpz_sqrt(s.get_mpz_t(), n.get_mpz_t());
        factor_rec(s, out);
        factor_rec(s, out);
        return;
    }
    mpz_class d = pollard_brent(n);
    factor_rec(d, out);
    factor_rec(mpz_class(n / d), out);
}

} // namespace

std::vector<prime_power> factorize(mpz_class n)
{
    if (n == 0)
        throw invalid_parameter("factorization of zero");
    n = abs(n);
    std::vector<mpz_class> ps;
    for (unsigned long q = 2; q < 20000 && q * q <= n; q += (q == 2 ? 1 : 2)) {
        while (mpz_divisible_ui_p(n.get_mpz_t(), q)) {
            ps.emplace_back(q);
            n /= q;
        }
    }
    factor_rec(n, ps);
    std::sort(ps.begin(), ps.end());
    std::vector<prime_power> out;
    for (auto const & p : ps) {
        if (!out.empty() && out.back().p == p)
            ++out.back().e;
        else
            out.push_back({p, 1});
    }
    return out;
}

int kronecker(mpz_class const & a, mpz_class const & n)
{
    return mpz_kronecker(a.get_mpz_t(), n.get_mpz_t());
}

bool is_squarefree(mpz_class const & n)
{
    if (n == 0)
        return false;
    for (auto const & pp : factorize(n)) {
        if (pp.e > 1)
            return false;
    }
    return true;
}

std::optional<mpz_class> exact_sqrt(mpz_class const & n)
{
    if (n < 0 || !mpz_perfect_square_p(n.get_mpz_t()))
        return std::nullopt;
    mpz_class s;
    mpz_sqrt(s.get_mpz_t(), n.get_mpz_t());
    return s;
}

std::optional<mpq_class> exact_sqrt(mpq_class const & q)
{
    auto a = exact_sqrt(mpz_class(q.get_num()));
    auto b = exact_sqrt(mpz_class(q.get_den()));
    if (!a || !b)
        return std::nullopt;
    mpq_class r(*a, *b);
    r.canonicalize();
    return r;
}

mpz_class mod(mpz_class const & n, mpz_class const & m)
{
    mpz_class r;
    mpz_mod(r.get_mpz_t(), n.get_mpz_t(), m.get_mpz_t());
    return r;
}

std::int64_t mod(std::int64_t n, std::int64_t m)
{
    std::int64_t r = n % m;
    return r < 0 ? r + m : r;
}

std::vector<std::uint64_t> primes_up_to(std::uint64_t n)
{
    std::vector<std::uint64_t> out;
    if (n < 2)
        return out;
    std::vector<bool> composite(n + 1, false);
    for (std::uint64_t i = 2; i <= n; ++i) {
        if (composite[i])
            continue;
        out.push_back(i);
        for (std::uint64_t j = i * i; j <= n; j += i)
            composite[j] = true;
    }
    return out;
}

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t p)
{
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % p);
}

std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t p)
{
    std::uint64_t r = 1 % p;
    a %= p;
    while (e) {
        if (e & 1)
            r = mulmod(r, a, p);
        a = mulmod(a, a, p);
        e >>= 1;
    }
    return r;
}

std::uint64_t invmod(std::uint64_t a, std::uint64_t p)
{
    std::int64_t t = 0, nt = 1;
    std::int64_t r = static_cast<std::int64_t>(p), nr = static_cast<std::int64_t>(a % p);
    while (nr != 0) {
        std::int64_t q = r / nr;
        std::tie(t, nt) = std::make_pair(nt, t - q * nt);
        std::tie(r, nr) = std::make_pair(nr, r - q * nr);
    }
    if (r != 1)
        throw invalid_parameter("element not invertible modulo " + std::to_string(p));
    return static_cast<std::uint64_t>(mod(t, static_cast<std::int64_t>(p)));
}

std::string to_string(mpz_class const & n)
{
    return n.get_str();
}

std::string to_string(mpq_class const & q)
{
    mpq_class c(q);
    c.canonicalize();
    if (c.get_den() == 1)
        return c.get_num().get_str();
    return c.get_num().get_str() + "/" + c.get_den().get_str();
}

mpz_class parse_integer(std::string_view text)
{
    std::string s(text);
    s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char ch) { return std::isspace(ch); }),
            s.end());
    if (!s.empty() && s.front() == '+')
        s.erase(s.begin());
    std::size_t start = (!s.empty() && s.front() == '-') ? 1 : 0;
    if (s.size() == start ||
        !std::all_of(s.begin() + static_cast<std::ptrdiff_t>(start), s.end(),
                     [](unsigned char ch) { return std::isdigit(ch); }))
        throw invalid_parameter("not an integer: '" + std::string(text) + "'");
    return mpz_class(s, 10);
}

mpq_class parse_rational(std::string_view text)
{
    auto slash = text.find('/');
    if (slash == std::string_view::npos)
        return mpq_class(parse_integer(text));
    mpz_class num = parse_integer(text.substr(0, slash));
    mpz_class den = parse_integer(text.substr(slash + 1));
    if (den == 0)
        throw invalid_parameter("zero denominator in '" + std::string(text) + "'");
    mpq_class q(num, den);
    q.canonicalize();
    return q;
}

std::int64_t to_int64(mpz_class const & n)
{
    if (n > std::numeric_limits<std::int64_t>::max() ||
        n < std::numeric_limits<std::int64_t>::min())
        throw invalid_parameter("integer out of 64-bit range: " + n.get_str());
    return static_cast<std::int64_t>(mpz_get_si(n.get_mpz_t()));
}

} // namespace twistsel
