#ifndef TWISTSEL_TEST_ORACLES_HPP
#define TWISTSEL_TEST_ORACLES_HPP

/* Brute-force reference computations used by the tests. They share no code
 * with the library beyond the curve/poly value types. */

#include <array>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <set>
#include <tuple>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "twistsel/curve.hpp"
#include "twistsel/poly.hpp"

namespace twistsel {

/* readable gtest failure messages */
inline void PrintTo(zpoly const & f, std::ostream * os)
{
    *os << to_string(f);
}
inline void PrintTo(qpoly const & f, std::ostream * os)
{
    *os << to_string(f);
}

} // namespace twistsel

namespace oracle {

inline long md(long a, long p)
{
    long r = a % p;
    return r < 0 ? r + p : r;
}

inline long rat_mod(mpq_class const & q, long p)
{
    mpz_class pm(p), num = q.get_num(), den = q.get_den(), inv;
    if (!mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), pm.get_mpz_t()))
        return -1;
    mpz_class r = num * inv;
    mpz_mod(r.get_mpz_t(), r.get_mpz_t(), pm.get_mpz_t());
    return r.get_si();
}

inline bool is_small_prime(long n)
{
    if (n < 2)
        return false;
    for (long d = 2; d * d <= n; ++d) {
        if (n % d == 0)
            return false;
    }
    return true;
}

/* coefficients of e reduced mod p; false if some denominator vanishes */
inline bool reduce_curve(twistsel::curve const & e, long p, std::array<long, 5> & out)
{
    for (std::size_t i = 0; i < 5; ++i) {
        out[i] = rat_mod(e.coeffs()[i], p);
        if (out[i] < 0)
            return false;
    }
    return true;
}

inline bool on_curve_mod(std::array<long, 5> const & a, long p, long x, long y)
{
    long lhs = md(y * y + a[0] * x * y + a[2] * y, p);
    long rhs = md(x * x % p * x + a[1] * x % p * x + a[3] * x + a[4], p);
    return lhs == rhs;
}

/* affine points of the reduction, by double loop */
inline std::vector<std::pair<long, long>> affine_points(std::array<long, 5> const & a, long p)
{
    std::vector<std::pair<long, long>> pts;
    for (long x = 0; x < p; ++x) {
        for (long y = 0; y < p; ++y) {
            if (on_curve_mod(a, p, x, y))
                pts.emplace_back(x, y);
        }
    }
    return pts;
}

inline long count_points(std::array<long, 5> const & a, long p)
{
    return static_cast<long>(affine_points(a, p).size()) + 1;
}

/* singular point of the reduction, if any */
inline bool singular_point(std::array<long, 5> const & a, long p, long & sx, long & sy)
{
    for (long x = 0; x < p; ++x) {
        for (long y = 0; y < p; ++y) {
            long f = md(y * y + a[0] * x * y + a[2] * y - x * x * x - a[1] * x * x - a[3] * x - a[4], p);
            long fx = md(a[0] * y - 3 * x * x - 2 * a[1] * x - a[3], p);
            long fy = md(2 * y + a[0] * x + a[2], p);
            if (f == 0 && fx == 0 && fy == 0) {
                sx = x;
                sy = y;
                return true;
            }
        }
    }
    return false;
}

/* Split multiplicative test by tangent slopes: after moving the node to the
 * origin the tangents are T^2 + a1 T - a2 = 0, split iff rational. */
inline bool node_tangents_rational(std::array<long, 5> const & a, long p)
{
    long r, t;
    if (!singular_point(a, p, r, t))
        return false;
    /* x -> x + r, y -> y + t */
    long a1 = a[0];
    long a2 = md(a[1] + 3 * r, p);
    for (long T = 0; T < p; ++T) {
        if (md(T * T + a1 * T - a2, p) == 0)
            return true;
    }
    return false;
}

/* group law on the reduction (affine points as pairs, infinity as (-1,-1)) */
struct fp_group {
    std::array<long, 5> a;
    long p;

    long inv(long v) const
    {
        long r = 1, b = md(v, p), e = p - 2;
        while (e) {
            if (e & 1)
                r = r * b % p;
            b = b * b % p;
            e >>= 1;
        }
        return r;
    }

    std::pair<long, long> add(std::pair<long, long> P, std::pair<long, long> Q) const
    {
        if (P.first < 0)
            return Q;
        if (Q.first < 0)
            return P;
        auto [x1, y1] = P;
        auto [x2, y2] = Q;
        long lam;
        if (x1 == x2) {
            if (md(y1 + y2 + a[0] * x2 + a[2], p) == 0)
                return {-1, -1};
            long den = md(2 * y1 + a[0] * x1 + a[2], p);
            lam = md(3 * x1 * x1 + 2 * a[1] * x1 + a[3] - a[0] * y1, p) * inv(den) % p;
        } else {
            lam = md(y2 - y1, p) * inv(md(x2 - x1, p)) % p;
        }
        long x3 = md(lam * lam + a[0] * lam - a[1] - x1 - x2, p);
        long y3 = md(-(lam + a[0]) * x3 - (y1 - lam * x1) - a[2], p);
        return {x3, y3};
    }

    std::pair<long, long> mul(std::pair<long, long> P, long n) const
    {
        std::pair<long, long> acc{-1, -1};
        for (long i = 0; i < n; ++i)
            acc = add(acc, P);
        return acc;
    }
};

/* reduced primitive forms of discriminant D < 0 by direct search over
 * |b| <= a <= c */
inline std::vector<std::array<long, 3>> reduced_forms(long D)
{
    std::vector<std::array<long, 3>> out;
    for (long a = 1; 3 * a * a <= -D; ++a) {
        for (long b = -a + 1; b <= a; ++b) {
            long num = b * b - D;
            if (num % (4 * a) != 0)
                continue;
            long c = num / (4 * a);
            if (c < a)
                continue;
            if (a == c && b < 0)
                continue;
            if (std::gcd(std::gcd(a, std::labs(b)), c) != 1)
                continue;
            out.push_back({a, b, c});
        }
    }
    return out;
}

inline bool is_fundamental(long D)
{
    auto squarefree = [](long n) {
        n = std::labs(n);
        for (long q = 2; q * q <= n; ++q) {
            if (n % (q * q) == 0)
                return false;
        }
        return true;
    };
    if (md(D, 4) == 1)
        return squarefree(D);
    if (md(D, 4) != 0)
        return false;
    long m = D / 4;
    return (md(m, 4) == 2 || md(m, 4) == 3) && squarefree(m);
}

} // namespace oracle

#endif /* TWISTSEL_TEST_ORACLES_HPP */
