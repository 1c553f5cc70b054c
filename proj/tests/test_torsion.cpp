#include <gtest/gtest.h>

#include <random>
#include <set>

#include "oracles.hpp"
#include "twistsel/errors.hpp"
#include "twistsel/factor.hpp"
#include "twistsel/integer.hpp"
#include "twistsel/torsion.hpp"

using namespace twistsel;

namespace {

curve C(char const * s)
{
    return curve::parse(s);
}

std::vector<curve> random_curves(int n, unsigned seed)
{
    std::mt19937 rng(seed);
    std::uniform_int_distribution<long> c(-9, 9);
    std::vector<curve> out;
    while (static_cast<int>(out.size()) < n) {
        try {
            out.push_back(curve(c(rng) % 2, c(rng) % 2, c(rng) % 2, c(rng), c(rng)));
        } catch (invalid_parameter const &) {
        }
    }
    return out;
}

/* curves with a rational point of order ell */
struct with_torsion {
    char const * coeffs;
    int ell;
};

with_torsion const torsion_curves[] = {
    {"[0,-1,1,0,0]", 5}, {"[0,0,0,0,1]", 3}, {"[1,0,1,4,-6]", 3},
    {"[1,-1,1,-3,3]", 7}, {"[0,0,1,0,0]", 3},
};

long psi_mod(qpoly const & psi, long x, long p)
{
    long acc = 0;
    for (int i = psi.degree(); i >= 0; --i) {
        long c = oracle::rat_mod(psi.coeff(i), p);
        acc = oracle::md(acc * x + c, p);
    }
    return acc;
}

} // namespace

TEST(DivisionPolynomial, Psi3OnShortModel)
{
    for (long a : {-7L, 0L, 2L, 13674069L}) {
        for (long b : {-5L, 1L, 11L}) {
            auto d = division_polynomial(curve(0, 0, 0, a, b), 3);
            EXPECT_FALSE(d.y_factor);
            EXPECT_EQ(d.psi, (qpoly{mpq_class(-a * a), 12 * b, 6 * a, 0, 3}));
        }
    }
}

TEST(DivisionPolynomial, SmallIndicesOnShortModel)
{
    curve e(0, 0, 0, 3, -2);
    EXPECT_EQ(division_polynomial(e, 1).psi, qpoly::constant(1));
    auto d2 = division_polynomial(e, 2);
    EXPECT_TRUE(d2.y_factor);
    EXPECT_EQ(d2.psi, qpoly::constant(1));
    /* psi_4 = 4y (x^6 + 5a x^4 + 20b x^3 - 5a^2 x^2 - 4ab x - 8b^2 - a^3) */
    long a = 3, b = -2;
    auto d4 = division_polynomial(e, 4);
    EXPECT_TRUE(d4.y_factor);
    qpoly inner{mpq_class(-8 * b * b - a * a * a), -4 * a * b, -5 * a * a, 20 * b, 5 * a, 0, 1};
    EXPECT_EQ(d4.psi, inner * mpq_class(2));
}

TEST(DivisionPolynomial, DegreeAndLeadingCoefficient)
{
    auto curves = random_curves(20, 11);
    for (auto const & e : curves) {
        for (int ell : {3, 5, 7, 11, 13}) {
            auto d = division_polynomial(e, ell);
            EXPECT_EQ(d.psi.degree(), (ell * ell - 1) / 2);
            EXPECT_EQ(d.psi.lc(), ell);
        }
    }
}

TEST(DivisionPolynomial, RationalCoefficientModels)
{
    /* psi_n depends on the model only through x; a model with fractional
     * coefficients must agree with its integral rescaling */
    curve e = C("[1/2,0,1/3,-1/4,5/7]");
    transform t;
    t.u = mpq_class(1, 42);
    curve big = apply_transform(e, t);
    ASSERT_TRUE(big.is_integral());
    for (int n : {3, 5, 6}) {
        /* x on the big model is 42^2 x on the small one */
        qpoly expect = scale_roots(division_polynomial(e, n).psi, 42 * 42);
        auto scaled = division_polynomial(big, n).psi;
        EXPECT_EQ(to_primitive_zpoly(expect).second, to_primitive_zpoly(scaled).second) << n;
    }
}

TEST(DivisionPolynomial, IndexBounds)
{
    curve e = C("[0,-1,1,0,0]");
    EXPECT_THROW(division_polynomial(e, 0), unsupported);
    EXPECT_THROW(division_polynomial(e, max_division_index + 1), unsupported);
    EXPECT_NO_THROW(division_polynomial(e, max_division_index));
}

TEST(DivisionPolynomial, FiniteFieldTorsionOracle)
{
    std::vector<curve> curves;
    for (auto const & t : torsion_curves)
        curves.push_back(C(t.coeffs));
    for (auto const & e : curves) {
        for (int ell : {3, 5, 7}) {
            qpoly psi = division_polynomial(e, ell).psi;
            for (long p = 2; p <= 50; ++p) {
                if (!oracle::is_small_prime(p) || mpz_class(e.invariants().disc) % p == 0)
                    continue;
                std::array<long, 5> a{};
                ASSERT_TRUE(oracle::reduce_curve(e, p, a));
                oracle::fp_group g{a, p};
                for (auto const & P : oracle::affine_points(a, p)) {
                    if (g.mul(P, ell).first >= 0)
                        continue;
                    EXPECT_EQ(psi_mod(psi, P.first, p), 0)
                        << e.to_string() << " ell " << ell << " p " << p;
                }
            }
        }
    }
}

TEST(DivisionPolynomial, RationalTorsionDividesGroupOrders)
{
    for (auto const & t : torsion_curves) {
        curve e = C(t.coeffs);
        for (long p = 2; p <= 50; ++p) {
            if (!oracle::is_small_prime(p) || p == t.ell || mpz_class(e.invariants().disc) % p == 0)
                continue;
            std::array<long, 5> a{};
            ASSERT_TRUE(oracle::reduce_curve(e, p, a));
            EXPECT_EQ(oracle::count_points(a, p) % t.ell, 0) << t.coeffs << " p " << p;
        }
    }
}

TEST(RationalTorsion, Examples)
{
    auto p = rational_ell_torsion_point(C("[0,-1,1,0,0]"), 5);
    ASSERT_TRUE(p);
    EXPECT_EQ(*p, point::affine(0, 0));
    EXPECT_FALSE(rational_ell_torsion_point(C("[0,0,0,0,1]"), 5));
    auto q = rational_ell_torsion_point(C("[0,0,0,0,1]"), 3);
    ASSERT_TRUE(q);
    EXPECT_EQ(q->x, 0);
    EXPECT_EQ(abs(q->y), 1);
}

TEST(RationalTorsion, ReturnedPointsHaveExactOrder)
{
    for (auto const & t : torsion_curves) {
        curve e = C(t.coeffs);
        for (int ell : {3, 5, 7}) {
            auto p = rational_ell_torsion_point(e, ell);
            if (ell == t.ell)
                EXPECT_TRUE(p) << t.coeffs;
            if (p) {
                EXPECT_TRUE(on_curve(e, *p));
                EXPECT_EQ(point_order(e, *p, ell), ell);
            }
        }
    }
    for (auto const & e : random_curves(10, 5)) {
        for (int ell : {3, 5, 7}) {
            auto p = rational_ell_torsion_point(e, ell);
            if (p)
                EXPECT_EQ(point_order(e, *p, ell), ell);
        }
    }
}

TEST(RationalTorsion, RejectsBadEll)
{
    curve e = C("[0,-1,1,0,0]");
    EXPECT_THROW(rational_ell_torsion_point(e, 4), invalid_parameter);
    EXPECT_THROW(rational_ell_torsion_point(e, 2), invalid_parameter);
    EXPECT_THROW(rational_ell_torsion_point(e, 41), unsupported);
}

TEST(FactorShape, Examples)
{
    auto s = psi_factor_shape(C("[0,-1,1,0,0]"), 5, 2);
    ASSERT_EQ(s.factors.size(), 2u);
    EXPECT_EQ(s.factors[0] * s.factors[1], (zpoly{0, -1, 1}));
    EXPECT_EQ(s.residual_degree, 10);

    auto t = psi_factor_shape(C("[0,0,0,0,1]"), 3, 4);
    ASSERT_EQ(t.factors.size(), 2u);
    EXPECT_EQ(t.factors[0] * t.factors[1], (zpoly{0, 4, 0, 0, 1}));
    EXPECT_EQ(t.factors[0].degree() + t.factors[1].degree(), 4);
    EXPECT_EQ(t.residual_degree, 0);
}

TEST(FactorShape, LargeCubicExample)
{
    auto s = psi_factor_shape(C("[0,0,0,13674069,324405221670]"), 13, 6);
    int cubics = 0;
    for (auto const & f : s.factors) {
        EXPECT_TRUE(is_irreducible(f));
        cubics += f.degree() == 3;
    }
    EXPECT_GE(cubics, 1);
}

TEST(FactorShape, ProductReproducesPsi)
{
    std::vector<curve> curves;
    for (auto const & t : torsion_curves)
        curves.push_back(C(t.coeffs));
    for (auto const & e : random_curves(4, 3))
        curves.push_back(e);
    for (auto const & e : curves) {
        for (int ell : {3, 5, 7}) {
            auto s = psi_factor_shape(e, ell, 3);
            zpoly prod = s.residual;
            for (auto const & f : s.factors) {
                EXPECT_LE(f.degree(), 3);
                prod = prod * f;
            }
            EXPECT_EQ(primitive_part(prod), division_polynomial_z(e, ell));
        }
    }
}

TEST(Isogeny, Examples)
{
    auto w = has_rational_isogeny(C("[0,-1,1,0,0]"), 5);
    ASSERT_TRUE(w.exists);
    EXPECT_EQ(*w.kernel, (zpoly{0, -1, 1}));
    EXPECT_FALSE(has_rational_isogeny(C("[0,-1,1,0,0]"), 7).exists);
    /* y^2 = x^3 + 1 has CM by Z[zeta_3]; 5 is inert there, so no 5-isogeny */
    EXPECT_FALSE(has_rational_isogeny(C("[0,0,0,0,1]"), 5).exists);
    EXPECT_TRUE(has_rational_isogeny(C("[0,0,0,0,1]"), 3).exists);
}

TEST(Isogeny, KernelsAreClosedUnderDoubling)
{
    curve e = C("[0,0,0,0,1]");
    /* 2P = -P for 3-torsion, so every factor of psi_3 passes */
    EXPECT_TRUE(closed_under_doubling(e, zpoly{0, 1}));
    EXPECT_TRUE(closed_under_doubling(e, zpoly{4, 0, 0, 1}));
    curve f = C("[0,-1,1,0,0]");
    EXPECT_TRUE(closed_under_doubling(f, zpoly{0, -1, 1}));
    EXPECT_FALSE(closed_under_doubling(f, zpoly{0, 1}));
}

TEST(Isogeny, InvariantUnderQuadraticTwist)
{
    char const * curves[] = {"[0,-1,1,0,0]", "[0,0,0,0,1]", "[1,-1,1,-3,3]", "[0,0,1,-1,0]",
                             "[1,0,1,4,-6]"};
    for (auto const * s : curves) {
        curve e = C(s);
        for (int ell : {3, 5, 7}) {
            bool base = has_rational_isogeny(e, ell).exists;
            for (long d : {-7L, -11L}) {
                EXPECT_EQ(has_rational_isogeny(quadratic_twist(e, d), ell).exists, base)
                    << s << " ell " << ell << " d " << d;
            }
        }
    }
}

TEST(CurveRhs, SquareScaling)
{
    EXPECT_EQ(curve_rhs_z(C("[0,0,0,-1,0]")), (zpoly{0, -1, 0, 1}));
    /* y^2 = x^3 + x/4: multiplied by 4 = 2^2 */
    EXPECT_EQ(curve_rhs_z(C("[0,0,0,1/4,0]")), (zpoly{0, 1, 0, 4}));
    /* denominator 2 needs the square 4 */
    EXPECT_EQ(curve_rhs_z(C("[0,0,0,1/2,0]")), (zpoly{0, 2, 0, 4}));
    /* 11a3: 4x^3 + b2 x^2 + 2 b4 x + b6 with b2 = -4, b4 = 0, b6 = 1 */
    EXPECT_EQ(curve_rhs_z(C("[0,-1,1,0,0]")), (zpoly{1, 0, -4, 4}));
}

TEST(TorsionField, Examples)
{
    curve e(0, -1, 1, 0, 0);
    // (0,0) and (1,0) are rational, so sqrt f(alpha) is rational and the field stays Q
    EXPECT_EQ(torsion_field_polynomial(e, 5, zpoly{0, 1}).degree(), 1);
    EXPECT_EQ(torsion_field_polynomial(e, 5, zpoly{-1, 1}).degree(), 1);

    // psi_3 of y^2 = x^3 + 1 is 3x(x^3 + 4); f(alpha) = -3 is not a square in a cubic field
    curve c(0, 0, 0, 0, 1);
    zpoly k = torsion_field_polynomial(c, 3, zpoly{4, 0, 0, 1});
    EXPECT_EQ(k.degree(), 6);
    EXPECT_TRUE(is_irreducible(k));
    EXPECT_EQ(torsion_field_polynomial(c, 3, zpoly{0, 1}), (zpoly{-1, 1}));

    EXPECT_THROW(torsion_field_polynomial(e, 5, zpoly{1, 1}), invalid_parameter);
    EXPECT_THROW(torsion_field_polynomial(c, 3, zpoly{0, 0, 1}), invalid_parameter);
    EXPECT_THROW(torsion_field_polynomial(c, 4, zpoly{0, 1}), invalid_parameter);
}
