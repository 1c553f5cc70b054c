#include "twistsel/poly.hpp"

#include <map>
#include <sstream>

#include "twistsel/errors.hpp"
#include "twistsel/integer.hpp"

namespace twistsel {

qpoly to_qpoly(zpoly const & f)
{
    std::vector<mpq_class> v;
    v.reserve(f.coeffs().size());
    for (auto const & c : f.coeffs())
        v.emplace_back(c);
    return qpoly(std::move(v));
}

mpz_class content(zpoly const & f)
{
    if (f.is_zero())
        return 0;
    mpz_class g = 0;
    for (auto const & c : f.coeffs())
        g = gcd(g, c);
    return f.lc() < 0 ? mpz_class(-g) : g;
}

zpoly primitive_part(zpoly const & f)
{
    if (f.is_zero())
        return f;
    mpz_class g = content(f);
    std::vector<mpz_class> v;
    for (auto const & c : f.coeffs())
        v.emplace_back(c / g);
    return zpoly(std::move(v));
}

std::pair<mpq_class, zpoly> to_primitive_zpoly(qpoly const & f)
{
    if (f.is_zero())
        return {mpq_class(0), zpoly()};
    mpz_class den = 1;
    for (auto const & c : f.coeffs())
        den = lcm(den, mpz_class(c.get_den()));
    std::vector<mpz_class> v;
    for (auto const & c : f.coeffs())
        v.emplace_back(mpz_class(c * den));
    zpoly z(std::move(v));
    mpz_class g = content(z);
    mpq_class scale(g, den);
    scale.canonicalize();
    return {scale, primitive_part(z)};
}

std::pair<qpoly, qpoly> divmod(qpoly const & a, qpoly const & b)
{
    if (b.is_zero())
        throw invalid_parameter("polynomial division by zero");
    if (a.degree() < b.degree())
        return {qpoly(), a};
    std::vector<mpq_class> r = a.coeffs();
    std::vector<mpq_class> q(static_cast<std::size_t>(a.degree() - b.degree() + 1));
    mpq_class inv = 1 / b.lc();
    int db = b.degree();
    for (int i = a.degree(); i >= db; --i) {
        mpq_class c = r[static_cast<std::size_t>(i)] * inv;
        q[static_cast<std::size_t>(i - db)] = c;
        if (c == 0)
            continue;
        for (int j = 0; j <= db; ++j)
            r[static_cast<std::size_t>(i - db + j)] -= c * b.coeffs()[static_cast<std::size_t>(j)];
    }
    r.resize(static_cast<std::size_t>(db));
    return {qpoly(std::move(q)), qpoly(std::move(r))};
}

qpoly rem(qpoly const & a, qpoly const & b)
{
    return divmod(a, b).second;
}

qpoly monic(qpoly const & f)
{
    if (f.is_zero())
        return f;
    return f * mpq_class(1 / f.lc());
}

qpoly gcd(qpoly a, qpoly b)
{
    while (!b.is_zero()) {
        qpoly r = rem(a, b);
        a = std::move(b);
        b = std::move(r);
    }
    return monic(a);
}

std::optional<zpoly> exact_quotient(zpoly const & a, zpoly const & b)
{
    if (b.is_zero())
        throw invalid_parameter("polynomial division by zero");
    if (a.is_zero())
        return zpoly();
    if (a.degree() < b.degree())
        return std::nullopt;
    std::vector<mpz_class> r = a.coeffs();
    std::vector<mpz_class> q(static_cast<std::size_t>(a.degree() - b.degree() + 1));
    int db = b.degree();
    mpz_class const & lb = b.lc();
    for (int i = a.degree(); i >= db; --i) {
        mpz_class & top = r[static_cast<std::size_t>(i)];
        if (top == 0)
            continue;
        if (!mpz_divisible_p(top.get_mpz_t(), lb.get_mpz_t()))
            return std::nullopt;
        mpz_class c = top / lb;
        q[static_cast<std::size_t>(i - db)] = c;
        for (int j = 0; j <= db; ++j)
            r[static_cast<std::size_t>(i - db + j)] -= c * b.coeffs()[static_cast<std::size_t>(j)];
    }
    for (int i = 0; i < db; ++i) {
        if (r[static_cast<std::size_t>(i)] != 0)
            return std::nullopt;
    }
    return zpoly(std::move(q));
}

namespace {

/* pseudo-remainder: lc(b)^(deg a - deg b + 1) * a mod b */
zpoly pseudo_rem(zpoly const & a, zpoly const & b)
{
    std::vector<mpz_class> r = a.coeffs();
    int db = b.degree();
    mpz_class const & lb = b.lc();
    for (int i = a.degree(); i >= db; --i) {
        mpz_class top = r[static_cast<std::size_t>(i)];
        for (auto & c : r)
            c *= lb;
        for (int j = 0; j <= db; ++j)
            r[static_cast<std::size_t>(i - db + j)] -= top * b.coeffs()[static_cast<std::size_t>(j)];
        r.resize(static_cast<std::size_t>(i));
    }
    return zpoly(std::move(r));
}

} // namespace

zpoly gcd(zpoly const & a0, zpoly const & b0)
{
    zpoly a = primitive_part(a0), b = primitive_part(b0);
    if (a.degree() < b.degree())
        std::swap(a, b);
    mpz_class cg = gcd(content(a0), content(b0));
    while (!b.is_zero()) {
        zpoly r = pseudo_rem(a, b);
        a = std::move(b);
        b = primitive_part(r);
    }
    if (a.is_zero())
        return a;
    return primitive_part(a) * abs(cg);
}

qpoly taylor_shift(qpoly const & f, mpq_class const & shift)
{
    if (shift == 0 || f.degree() < 1)
        return f;
    std::vector<mpq_class> c = f.coeffs();
    int n = f.degree();
    /* synthetic division, repeated */
    for (int i = 0; i < n; ++i) {
        for (int j = n - 1; j >= i; --j)
            c[static_cast<std::size_t>(j)] += shift * c[static_cast<std::size_t>(j + 1)];
    }
    return qpoly(std::move(c));
}

qpoly compose(qpoly const & f, qpoly const & g)
{
    qpoly acc;
    for (int i = f.degree(); i >= 0; --i)
        acc = acc * g + qpoly::constant(f.coeff(i));
    return acc;
}

qpoly scale_roots(qpoly const & f, mpq_class const & scale)
{
    std::vector<mpq_class> c = f.coeffs();
    int n = f.degree();
    mpq_class pw = 1;
    for (int i = n; i >= 0; --i) {
        c[static_cast<std::size_t>(i)] *= pw;
        pw *= scale;
    }
    return qpoly(std::move(c));
}

zpoly integral_monic(qpoly const & f0)
{
    qpoly f = monic(f0);
    int n = f.degree();
    std::map<mpz_class, int> exps;
    for (int i = 1; i <= n; ++i) {
        mpq_class const & c = f.coeffs()[static_cast<std::size_t>(n - i)];
        if (c == 0 || c.get_den() == 1)
            continue;
        for (auto const & pp : factorize(mpz_class(c.get_den()))) {
            int need = (pp.e + i - 1) / i;
            int & e = exps[pp.p];
            e = std::max(e, need);
        }
    }
    mpz_class s = 1;
    for (auto const & [p, e] : exps) {
        mpz_class pe;
        mpz_pow_ui(pe.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(e));
        s *= pe;
    }
    qpoly g = scale_roots(f, mpq_class(s));
    std::vector<mpz_class> v;
    for (auto const & c : g.coeffs()) {
        if (c.get_den() != 1)
            throw std::logic_error("integral_monic: scaling failed");
        v.emplace_back(c.get_num());
    }
    return zpoly(std::move(v));
}

namespace {

mpz_class bareiss_det(std::vector<std::vector<mpz_class>> m)
{
    std::size_t n = m.size();
    if (n == 0)
        return 1;
    mpz_class prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m[k][k] == 0) {
            std::size_t piv = k + 1;
            while (piv < n && m[piv][k] == 0)
                ++piv;
            if (piv == n)
                return 0;
            std::swap(m[k], m[piv]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                mpz_class t = m[i][j] * m[k][k] - m[i][k] * m[k][j];
                mpz_divexact(m[i][j].get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
            }
        }
        prev = m[k][k];
    }
    return sign * m[n - 1][n - 1];
}

} // namespace

mpz_class resultant(zpoly const & f, zpoly const & g)
{
    int m = f.degree(), n = g.degree();
    if (m < 0 || n < 0)
        return 0;
    if (m == 0 && n == 0)
        return 1;
    if (m == 0) {
        mpz_class r;
        mpz_pow_ui(r.get_mpz_t(), f.lc().get_mpz_t(), static_cast<unsigned long>(n));
        return r;
    }
    if (n == 0) {
        mpz_class r;
        mpz_pow_ui(r.get_mpz_t(), g.lc().get_mpz_t(), static_cast<unsigned long>(m));
        return r;
    }
    std::size_t size = static_cast<std::size_t>(m + n);
    std::vector<std::vector<mpz_class>> s(size, std::vector<mpz_class>(size, 0));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j <= m; ++j)
            s[static_cast<std::size_t>(i)][static_cast<std::size_t>(i + j)] = f.coeff(m - j);
    }
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j <= n; ++j)
            s[static_cast<std::size_t>(n + i)][static_cast<std::size_t>(i + j)] = g.coeff(n - j);
    }
    return bareiss_det(std::move(s));
}

qpoly charpoly(std::vector<std::vector<mpq_class>> const & a)
{
    std::size_t n = a.size();
    using matrix = std::vector<std::vector<mpq_class>>;
    auto mul = [n](matrix const & x, matrix const & y) {
        matrix z(n, std::vector<mpq_class>(n, 0));
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t k = 0; k < n; ++k) {
                if (x[i][k] == 0)
                    continue;
                for (std::size_t j = 0; j < n; ++j)
                    z[i][j] += x[i][k] * y[k][j];
            }
        }
        return z;
    };
    std::vector<mpq_class> c(n + 1, 0);
    c[n] = 1;
    matrix mk(n, std::vector<mpq_class>(n, 0));
    for (std::size_t k = 1; k <= n; ++k) {
        mk = mul(a, mk);
        for (std::size_t i = 0; i < n; ++i)
            mk[i][i] += c[n - k + 1];
        matrix am = mul(a, mk);
        mpq_class tr = 0;
        for (std::size_t i = 0; i < n; ++i)
            tr += am[i][i];
        c[n - k] = -tr / static_cast<unsigned long>(k);
    }
    return qpoly(std::move(c));
}

namespace {

template <class R>
std::string poly_text(poly<R> const & f, char var)
{
    if (f.is_zero())
        return "0";
    std::ostringstream os;
    bool first = true;
    for (int i = f.degree(); i >= 0; --i) {
        R c = f.coeff(i);
        if (c == 0)
            continue;
        bool neg = c < 0;
        R a = neg ? R(-c) : c;
        if (first)
            os << (neg ? "-" : "");
        else
            os << (neg ? " - " : " + ");
        first = false;
        bool unit = (a == 1);
        if (!unit || i == 0)
            os << to_string(a);
        if (i >= 1) {
            if (!unit)
                os << "*";
            os << var;
            if (i > 1)
                os << "^" << i;
        }
    }
    return os.str();
}

template <class R>
std::string list_text(poly<R> const & f)
{
    std::string s = "[";
    for (std::size_t i = 0; i < f.coeffs().size(); ++i) {
        if (i)
            s += ",";
        s += to_string(f.coeffs()[i]);
    }
    return s + "]";
}

} // namespace

std::string to_string(zpoly const & f, char var)
{
    return poly_text(f, var);
}

std::string to_string(qpoly const & f, char var)
{
    return poly_text(f, var);
}

std::string to_coeff_list(qpoly const & f)
{
    return list_text(f);
}

std::string to_coeff_list(zpoly const & f)
{
    return list_text(f);
}

qpoly parse_coeff_list(std::string const & text)
{
    auto b = text.find('[');
    auto e = text.rfind(']');
    if (b == std::string::npos || e == std::string::npos || e < b)
        throw invalid_parameter("coefficient list must look like [c0,c1,...]: " + text);
    std::string body = text.substr(b + 1, e - b - 1);
    std::vector<mpq_class> v;
    std::stringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ','))
        v.push_back(parse_rational(item));
    return qpoly(std::move(v));
}

} // namespace twistsel
