#ifndef TWISTSEL_POLY_HPP
#define TWISTSEL_POLY_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace twistsel {

/* Dense univariate polynomial, coefficients stored lowest degree first and
 * kept trimmed (no zero leading coefficient; the zero polynomial is empty).
 * R is mpz_class or mpq_class. */
template <class R>
class poly {
    std::vector<R> c_;

    void trim()
    {
        while (!c_.empty() && c_.back() == 0)
            c_.pop_back();
    }

  public:
    poly() = default;
    explicit poly(std::vector<R> coeffs) : c_(std::move(coeffs)) { trim(); }
    poly(std::initializer_list<R> coeffs) : c_(coeffs) { trim(); }

    static poly constant(R const & c) { return poly(std::vector<R>{c}); }
    static poly monomial(R const & c, int degree)
    {
        std::vector<R> v(static_cast<std::size_t>(degree) + 1, R(0));
        v.back() = c;
        return poly(std::move(v));
    }
    static poly x() { return monomial(R(1), 1); }

    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    std::vector<R> const & coeffs() const { return c_; }
    R const & lc() const { return c_.back(); }

    R coeff(int i) const
    {
        if (i < 0 || i > degree())
            return R(0);
        return c_[static_cast<std::size_t>(i)];
    }

    R eval(R const & at) const
    {
        R acc(0);
        for (auto it = c_.rbegin(); it != c_.rend(); ++it)
            acc = acc * at + *it;
        return acc;
    }

    poly derivative() const
    {
        std::vector<R> v;
        for (std::size_t i = 1; i < c_.size(); ++i)
            v.push_back(c_[i] * static_cast<unsigned long>(i));
        return poly(std::move(v));
    }

    poly & operator+=(poly const & o)
    {
        if (o.c_.size() > c_.size())
            c_.resize(o.c_.size(), R(0));
        for (std::size_t i = 0; i < o.c_.size(); ++i)
            c_[i] += o.c_[i];
        trim();
        return *this;
    }
    poly & operator-=(poly const & o)
    {
        if (o.c_.size() > c_.size())
            c_.resize(o.c_.size(), R(0));
        for (std::size_t i = 0; i < o.c_.size(); ++i)
            c_[i] -= o.c_[i];
        trim();
        return *this;
    }
    poly & operator*=(R const & s)
    {
        for (auto & v : c_)
            v *= s;
        trim();
        return *this;
    }

    friend poly operator+(poly a, poly const & b) { return a += b; }
    friend poly operator-(poly a, poly const & b) { return a -= b; }
    friend poly operator-(poly a)
    {
        for (auto & v : a.c_)
            v = -v;
        return a;
    }
    friend poly operator*(poly a, R const & s) { return a *= s; }
    friend poly operator*(R const & s, poly a) { return a *= s; }
    friend poly operator*(poly const & a, poly const & b)
    {
        if (a.is_zero() || b.is_zero())
            return poly();
        std::vector<R> v(a.c_.size() + b.c_.size() - 1, R(0));
        for (std::size_t i = 0; i < a.c_.size(); ++i) {
            if (a.c_[i] == 0)
                continue;
            for (std::size_t j = 0; j < b.c_.size(); ++j)
                v[i + j] += a.c_[i] * b.c_[j];
        }
        return poly(std::move(v));
    }
    poly & operator*=(poly const & o) { return *this = *this * o; }

    bool operator==(poly const & o) const { return c_ == o.c_; }
};

using zpoly = poly<mpz_class>;
using qpoly = poly<mpq_class>;

qpoly to_qpoly(zpoly const & f);

/* Content with the sign of the leading coefficient, so that f / content(f)
 * has positive leading coefficient. */
mpz_class content(zpoly const & f);
zpoly primitive_part(zpoly const & f);

/* Scales a rational polynomial to a primitive integer polynomial with
 * positive leading coefficient: f = scale * result. */
std::pair<mpq_class, zpoly> to_primitive_zpoly(qpoly const & f);

/* Division with remainder over Q. */
std::pair<qpoly, qpoly> divmod(qpoly const & a, qpoly const & b);
qpoly rem(qpoly const & a, qpoly const & b);
qpoly monic(qpoly const & f);
qpoly gcd(qpoly a, qpoly b);

/* Exact quotient a / b over Z when it exists. */
std::optional<zpoly> exact_quotient(zpoly const & a, zpoly const & b);

/* Primitive gcd over Z, positive leading coefficient. */
zpoly gcd(zpoly const & a, zpoly const & b);

/* f(x + shift) */
qpoly taylor_shift(qpoly const & f, mpq_class const & shift);
/* f(g(x)) */
qpoly compose(qpoly const & f, qpoly const & g);
/* scale^deg(f) * f(x / scale) for a monic f: the polynomial whose roots are
 * scale times the roots of f. */
qpoly scale_roots(qpoly const & f, mpq_class const & scale);

/* Monic integer polynomial whose roots are s times the roots of the monic
 * rational polynomial f, with s > 0 the smallest such integer. */
zpoly integral_monic(qpoly const & f);

/* Resultant and discriminant over Z (Bareiss elimination on the Sylvester
 * matrix). */
mpz_class resultant(zpoly const & f, zpoly const & g);

/* Characteristic polynomial of a square rational matrix (row-major). */
qpoly charpoly(std::vector<std::vector<mpq_class>> const & m);

std::string to_string(zpoly const & f, char var = 'x');
std::string to_string(qpoly const & f, char var = 'x');

/* "[c0,c1,...]" coefficient lists, lowest degree first, rationals "p/q". */
std::string to_coeff_list(qpoly const & f);
std::string to_coeff_list(zpoly const & f);
qpoly parse_coeff_list(std::string const & text);

} // namespace twistsel

#endif /* TWISTSEL_POLY_HPP */
