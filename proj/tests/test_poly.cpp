#include <gtest/gtest.h>

#include "twistsel/errors.hpp"
#include "twistsel/poly.hpp"

using namespace twistsel;

namespace {

zpoly zp(std::initializer_list<long> c)
{
    std::vector<mpz_class> v;
    for (long x : c)
        v.emplace_back(x);
    return zpoly(std::move(v));
}

} // namespace

TEST(Poly, Arithmetic)
{
    zpoly a = zp({-1, 0, 1}), b = zp({1, 1});
    EXPECT_EQ(a * b, zp({-1, -1, 1, 1}));
    EXPECT_EQ(a - a, zpoly());
    EXPECT_EQ(zpoly().degree(), -1);
    EXPECT_EQ(a.eval(3), 8);
    EXPECT_EQ(a.derivative(), zp({0, 2}));
}

TEST(Poly, ExactQuotient)
{
    zpoly f = zp({-1, 0, 0, 0, 1});
    auto q = exact_quotient(f, zp({-1, 1}));
    ASSERT_TRUE(q.has_value());
    EXPECT_EQ(*q, zp({1, 1, 1, 1}));
    EXPECT_FALSE(exact_quotient(f, zp({-2, 1})).has_value());
}

TEST(Poly, GcdOverZ)
{
    zpoly f = zp({-1, 0, 0, 0, 1}) * zp({3, 2});
    zpoly g = zp({-1, 0, 1}) * zp({5, 0, 1});
    EXPECT_EQ(gcd(f, g), zp({-1, 0, 1}));
}

TEST(Poly, Resultant)
{
    /* Res(x^2 + 1, x - 2) = 5, Res(x^2 - 2, x^2 - 3) = 1 */
    EXPECT_EQ(resultant(zp({1, 0, 1}), zp({-2, 1})), 5);
    EXPECT_EQ(resultant(zp({-2, 0, 1}), zp({-3, 0, 1})), 1);
}

TEST(Poly, TaylorShiftAndCompose)
{
    qpoly f = to_qpoly(zp({1, 2, 3}));
    qpoly shifted = taylor_shift(f, mpq_class(1, 2));
    qpoly direct = compose(f, qpoly({mpq_class(1, 2), mpq_class(1)}));
    EXPECT_EQ(shifted, direct);
}

TEST(Poly, IntegralMonic)
{
    /* x^2 - 1/4 has roots +-1/2; doubling gives x^2 - 1 */
    qpoly f({mpq_class(-1, 4), mpq_class(0), mpq_class(1)});
    EXPECT_EQ(integral_monic(f), zp({-1, 0, 1}));
    /* x^3 + x/9 + 1/27 scaled by 3 */
    qpoly g({mpq_class(1, 27), mpq_class(1, 9), mpq_class(0), mpq_class(1)});
    EXPECT_EQ(integral_monic(g), zp({1, 1, 0, 1}));
}

TEST(Poly, Charpoly)
{
    std::vector<std::vector<mpq_class>> m{{0, 1}, {3, 0}};
    EXPECT_EQ(charpoly(m), to_qpoly(zp({-3, 0, 1})));
}

TEST(Poly, TextRoundTrip)
{
    qpoly f({mpq_class(-1, 2), mpq_class(0), mpq_class(3)});
    EXPECT_EQ(to_coeff_list(f), "[-1/2,0,3]");
    EXPECT_EQ(parse_coeff_list("[-1/2, 0, 3]"), f);
    EXPECT_EQ(to_string(zp({-1, 0, 3})), "3*x^2 - 1");
    EXPECT_THROW(parse_coeff_list("1,2"), invalid_parameter);
}
