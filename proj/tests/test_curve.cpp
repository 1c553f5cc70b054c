#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "twistsel/curve.hpp"
#include "twistsel/errors.hpp"
#include "twistsel/integer.hpp"

using namespace twistsel;

namespace {

curve C(char const * s)
{
    return curve::parse(s);
}

/* small curves with known conductors */
struct labelled {
    char const * coeffs;
    long conductor;
};

labelled const known[] = {
    {"[0,-1,1,0,0]", 11},     {"[0,-1,1,-10,-20]", 11}, {"[0,0,1,-1,0]", 37},
    {"[1,0,1,4,-6]", 14},     {"[1,1,1,-10,-10]", 15},  {"[0,0,1,0,-7]", 27},
    {"[0,-1,0,-4,4]", 24},    {"[0,1,0,4,4]", 20},      {"[0,1,1,-9,-15]", 19},
    {"[1,-1,1,-3,3]", 26},    {"[1,-1,0,-2,-1]", 49},   {"[0,0,0,-4,0]", 64},
    {"[0,0,0,1,0]", 64},      {"[0,0,0,-1,0]", 32},     {"[0,0,0,0,1]", 36},
};

std::vector<curve> sample_curves(int n, unsigned seed)
{
    std::mt19937 rng(seed);
    std::uniform_int_distribution<long> c(-12, 12);
    std::vector<curve> out;
    while (static_cast<int>(out.size()) < n) {
        try {
            out.push_back(curve(c(rng) % 2, c(rng) % 2, c(rng) % 2, c(rng), c(rng)));
        } catch (invalid_parameter const &) {
        }
    }
    return out;
}

} // namespace

TEST(CurveCore, InvariantsOf11a3)
{
    curve e = C("[0,-1,1,0,0]");
    auto const & v = e.invariants();
    EXPECT_EQ(v.disc, -11);
    EXPECT_EQ(v.c4, 16);
    EXPECT_EQ(v.c6, -152);
    EXPECT_EQ(v.j, mpq_class(-4096, 11));
}

TEST(CurveCore, SpecialJInvariants)
{
    EXPECT_EQ(C("[0,0,0,1,0]").invariants().j, 1728);
    EXPECT_EQ(C("[0,0,0,0,1]").invariants().j, 0);
}

TEST(CurveCore, RejectsSingularAndMalformed)
{
    EXPECT_THROW(C("[0,0,0,0,0]"), invalid_parameter);
    EXPECT_THROW(C("[0,0,0,-3,2]"), invalid_parameter); /* (x-1)^2 (x+2) */
    EXPECT_THROW(C("[0,0,0,1]"), invalid_parameter);
    EXPECT_THROW(C("0,0,0,1,0"), invalid_parameter);
}

TEST(CurveCore, DiscriminantIdentityOnRandomCurves)
{
    for (auto const & e : sample_curves(60, 1)) {
        auto const & v = e.invariants();
        EXPECT_EQ(v.c4 * v.c4 * v.c4 - v.c6 * v.c6, 1728 * v.disc);
    }
    curve e = C("[1/2,-1/3,1,5/7,-2]");
    auto const & v = e.invariants();
    EXPECT_EQ(v.c4 * v.c4 * v.c4 - v.c6 * v.c6, 1728 * v.disc);
}

TEST(CurveCore, MinimalModelUnscales)
{
    auto a = minimal_model(C("[0,0,0,-432,8208]"));
    EXPECT_EQ(a.model, C("[0,-1,1,0,0]"));
    EXPECT_EQ(a.w.u, 6);
    EXPECT_EQ(C("[0,0,0,-432,8208]").invariants().disc / a.model.invariants().disc,
              mpq_class(mpz_class("2176782336"))); /* 6^12 */

    auto b = minimal_model(C("[0,0,0,-270000,128250000]"));
    EXPECT_EQ(b.model, C("[0,-1,1,0,0]"));
    EXPECT_EQ(b.w.u, 30);

    auto c = minimal_model(C("[0,-1,1,0,0]"));
    EXPECT_EQ(c.model, C("[0,-1,1,0,0]"));
    EXPECT_TRUE(c.w.is_identity());
}

TEST(CurveCore, MinimalModelOfRationalInput)
{
    /* 11a3 with u = 2, so a2 = -1/4 */
    curve e = apply_transform(C("[0,-1,1,0,0]"), transform{2, 0, 0, 0});
    EXPECT_FALSE(e.is_integral());
    auto m = minimal_model(e);
    EXPECT_EQ(m.model, C("[0,-1,1,0,0]"));
    EXPECT_EQ(apply_transform(e, m.w), m.model);
}

TEST(CurveCore, MinimalModelIsReducedAndIdempotent)
{
    for (auto const & e : sample_curves(40, 2)) {
        auto m = minimal_model(e);
        EXPECT_TRUE(m.model.is_integral());
        EXPECT_TRUE(m.model.a1() == 0 || m.model.a1() == 1);
        EXPECT_TRUE(m.model.a3() == 0 || m.model.a3() == 1);
        EXPECT_TRUE(abs(m.model.a2()) <= 1);
        EXPECT_EQ(m.model.invariants().j, e.invariants().j);
        EXPECT_EQ(minimal_model(m.model).model, m.model);
        EXPECT_TRUE(minimal_model(m.model).w.is_identity());
        /* the minimal discriminant divides the integral one */
        mpq_class ratio = e.invariants().disc / m.model.invariants().disc;
        EXPECT_EQ(ratio.get_den(), 1);
    }
}

TEST(CurveCore, QuadraticTwistFormulas)
{
    EXPECT_EQ(quadratic_twist(C("[0,0,0,1,0]"), -1), C("[0,0,0,1,0]"));
    EXPECT_EQ(quadratic_twist(C("[0,0,0,0,1]"), 2), C("[0,0,0,0,8]"));
    EXPECT_EQ(quadratic_twist(C("[0,-1,1,0,0]"), -37).invariants().j, mpq_class(-4096, 11));
    EXPECT_THROW(quadratic_twist(C("[0,0,0,1,0]"), 0), invalid_parameter);
    EXPECT_THROW(quadratic_twist(C("[0,0,0,1,0]"), 12), invalid_parameter);
}

TEST(CurveCore, TwistInvolution)
{
    for (auto const & e : sample_curves(10, 3)) {
        for (long d : {-1L, -3L, 5L, -37L}) {
            curve t = quadratic_twist(e, d);
            EXPECT_EQ(t.invariants().j, e.invariants().j);
            EXPECT_EQ(minimal_model(quadratic_twist(t, d)).model, minimal_model(e).model);
        }
    }
}

TEST(CurveCore, LocalReductionOf11a3)
{
    curve e = C("[0,-1,1,0,0]");
    local_data ld = local_reduction(e, 11);
    EXPECT_EQ(ld.kind, reduction_kind::split_multiplicative);
    EXPECT_EQ(ld.kodaira, "I1");
    EXPECT_EQ(ld.conductor_exponent, 1);
    EXPECT_EQ(ld.ord_delta_min, 1);
    EXPECT_EQ(ld.ord_j, -1);

    local_data g = local_reduction(e, 7);
    EXPECT_EQ(g.kind, reduction_kind::good);
    EXPECT_EQ(g.conductor_exponent, 0);

    local_data t = local_reduction(quadratic_twist(e, -5), 11);
    EXPECT_EQ(t.kind, reduction_kind::nonsplit_multiplicative);
    EXPECT_THROW(local_reduction(e, 12), invalid_parameter);
}

TEST(CurveCore, KnownConductors)
{
    for (auto const & k : known) {
        curve e = C(k.coeffs);
        conductor_data cd = conductor(e);
        EXPECT_EQ(cd.n, k.conductor) << k.coeffs;
        EXPECT_GT(cd.n, 1);
        /* the same after an arbitrary change of coordinates */
        curve moved = apply_transform(e, transform{mpq_class(1, 3), 2, -1, 5});
        EXPECT_EQ(conductor(moved).n, k.conductor) << k.coeffs;
    }
}

TEST(CurveCore, ConductorAtTwoByHand)
{
    /* y^2 = x^3 + x: singular point (1,0) mod 2; after the shift a6 = 2
     * so type II with f = ord_2(Delta) = 6 */
    local_data a = local_reduction(C("[0,0,0,1,0]"), 2);
    EXPECT_EQ(a.kodaira, "II");
    EXPECT_EQ(a.conductor_exponent, 6);
    /* y^2 = x^3 - x: after the shift b8 = -4, type III with f = 6 - 1 */
    local_data b = local_reduction(C("[0,0,0,-1,0]"), 2);
    EXPECT_EQ(b.kodaira, "III");
    EXPECT_EQ(b.conductor_exponent, 5);
}

TEST(CurveCore, LocalDataInvariants)
{
    auto curves = sample_curves(40, 4);
    for (auto const & k : known)
        curves.push_back(C(k.coeffs));
    for (auto const & e : curves) {
        conductor_data cd = conductor(e);
        curve m = minimal_model(e).model;
        for (auto const & ld : cd.bad) {
            EXPECT_EQ(ld.ord_delta_min, valuation(m.invariants().disc, ld.p));
            EXPECT_LE(ld.conductor_exponent, ld.ord_delta_min);
            switch (ld.kind) {
            case reduction_kind::good:
                ADD_FAILURE() << "good prime listed as bad";
                break;
            case reduction_kind::split_multiplicative:
            case reduction_kind::nonsplit_multiplicative:
                EXPECT_EQ(ld.conductor_exponent, 1);
                EXPECT_EQ(ld.ord_j, -ld.ord_delta_min);
                EXPECT_EQ(ld.kodaira, "I" + std::to_string(ld.ord_delta_min));
                break;
            case reduction_kind::additive:
                EXPECT_GE(ld.conductor_exponent, 2);
                if (ld.p >= 5)
                    EXPECT_EQ(ld.conductor_exponent, 2);
                break;
            }
        }
    }
}

TEST(CurveCore, SplitTestAgreesWithNodeTangents)
{
    auto curves = sample_curves(80, 5);
    for (auto const & k : known)
        curves.push_back(C(k.coeffs));
    int checked = 0;
    for (auto const & e : curves) {
        curve m = minimal_model(e).model;
        for (auto const & ld : conductor(e).bad) {
            if (ld.kind == reduction_kind::additive || ld.p > 1000)
                continue;
            std::array<long, 5> a;
            ASSERT_TRUE(oracle::reduce_curve(m, ld.p.get_si(), a));
            EXPECT_EQ(ld.kind == reduction_kind::split_multiplicative,
                      oracle::node_tangents_rational(a, ld.p.get_si()))
                << m.to_string() << " p=" << ld.p;
            ++checked;
        }
    }
    EXPECT_GT(checked, 20);
}

TEST(CurveCore, TwistFlipsSplitAtNonsquares)
{
    for (auto const & e : sample_curves(40, 6)) {
        for (auto const & ld : conductor(e).bad) {
            if (ld.kind == reduction_kind::additive || ld.p == 2)
                continue;
            for (long d : {-1L, -3L, -7L, 5L, -11L, 13L}) {
                if (mpz_divisible_p(ld.p.get_mpz_t(), mpz_class(d).get_mpz_t()))
                    continue;
                local_data t = local_reduction(quadratic_twist(e, d), ld.p);
                ASSERT_NE(t.kind, reduction_kind::additive);
                bool flipped = t.kind != ld.kind;
                EXPECT_EQ(flipped, kronecker(d, ld.p) == -1);
            }
        }
    }
}

TEST(CurveCore, PointCountsMatchBruteForce)
{
    EXPECT_EQ(ap(C("[0,-1,1,0,0]"), 2), -2);
    EXPECT_EQ(ap(C("[0,0,0,0,1]"), 5), 0);
    EXPECT_EQ(ap(C("[0,0,0,1,0]"), 3), 0);
    EXPECT_THROW(ap(C("[0,-1,1,0,0]"), 11), precondition_error);
    EXPECT_THROW(ap(C("[0,-1,1,0,0]"), 9), invalid_parameter);

    for (auto const & e : sample_curves(15, 7)) {
        curve m = minimal_model(e).model;
        for (long p = 2; p < 100; ++p) {
            if (!oracle::is_small_prime(p) ||
                mpz_divisible_p(mpz_class(m.invariants().disc.get_num()).get_mpz_t(),
                                mpz_class(p).get_mpz_t()))
                continue;
            std::array<long, 5> a;
            ASSERT_TRUE(oracle::reduce_curve(m, p, a));
            long expect = p + 1 - oracle::count_points(a, p);
            long got = ap(e, static_cast<std::uint64_t>(p));
            EXPECT_EQ(got, expect) << m.to_string() << " p=" << p;
            EXPECT_LE(static_cast<double>(got * got), 4.0 * static_cast<double>(p));
        }
    }
}

TEST(CurveCore, Supersingularity)
{
    EXPECT_EQ(is_supersingular(C("[0,0,0,0,1]"), 5).verdict, supersingular_verdict::yes);
    EXPECT_EQ(is_supersingular(C("[0,-1,1,0,0]"), 5).verdict, supersingular_verdict::no);
    EXPECT_EQ(is_supersingular(C("[0,-1,1,0,0]"), 11).verdict,
              supersingular_verdict::not_applicable);
    EXPECT_THROW(is_supersingular(C("[0,-1,1,0,0]"), 3), unsupported);
    /* additive, potentially good at 5: y^2 = x^3 + 125 has j = 0, and j = 0
     * is supersingular exactly when p = 2 mod 3 */
    EXPECT_EQ(local_reduction(C("[0,0,0,0,125]"), 5).kind, reduction_kind::additive);
    EXPECT_EQ(is_supersingular(C("[0,0,0,0,125]"), 5).verdict, supersingular_verdict::yes);
    EXPECT_EQ(is_supersingular(C("[0,0,0,0,343]"), 7).verdict, supersingular_verdict::no);
    /* j = 1728 is supersingular exactly when p = 3 mod 4 */
    EXPECT_EQ(is_supersingular(C("[0,0,0,49,0]"), 7).verdict, supersingular_verdict::yes);
    EXPECT_EQ(is_supersingular(C("[0,0,0,25,0]"), 5).verdict, supersingular_verdict::no);
}

TEST(CurveCore, PointOrders)
{
    curve e = C("[0,-1,1,0,0]");
    EXPECT_EQ(point_order(e, point::parse("(0,0)"), 12), 5);
    EXPECT_EQ(multiply(e, point::parse("(0,0)"), 2), point::parse("(1,-1)"));
    EXPECT_EQ(multiply(e, point::parse("(0,0)"), 3), point::parse("(1,0)"));
    EXPECT_EQ(multiply(e, point::parse("(0,0)"), 4), point::parse("(0,-1)"));
    EXPECT_EQ(point_order(C("[0,0,0,0,1]"), point::parse("(0,1)"), 12), 3);
    EXPECT_EQ(point_order(e, point::at_infinity(), 12), 1);
    EXPECT_THROW(point_order(e, point::parse("(2,2)"), 12), invalid_parameter);
    /* 37a1 has rank one; (0,0) has infinite order */
    EXPECT_FALSE(point_order(C("[0,0,1,-1,0]"), point::parse("(0,0)"), 20).has_value());
}

TEST(CurveCore, GroupLawAssociativeOnRank1)
{
    curve e = C("[0,0,1,-1,0]");
    point p = point::parse("(0,0)");
    point a = multiply(e, p, 2), b = multiply(e, p, 3), c = multiply(e, p, -4);
    EXPECT_EQ(add(e, add(e, a, b), c), add(e, a, add(e, b, c)));
    EXPECT_EQ(add(e, a, b), multiply(e, p, 5));
    EXPECT_TRUE(on_curve(e, multiply(e, p, 7)));
}

TEST(CurveCore, KernelOfReduction)
{
    curve e = C("[0,-1,1,0,0]");
    EXPECT_FALSE(in_kernel_of_reduction(e, point::parse("(0,0)"), 5));
    EXPECT_FALSE(in_kernel_of_reduction(e, point::parse("(1,0)"), 5));
    EXPECT_THROW(in_kernel_of_reduction(e, point::parse("(0,0)"), 11), precondition_error);
    /* (1/25, 15624/125) lies on y^2 = x^3 + 15623, which is good at 5 */
    curve f = C("[0,0,0,0,15623]");
    point far = point::parse("(1/25,15624/125)");
    ASSERT_TRUE(on_curve(f, far));
    EXPECT_TRUE(in_kernel_of_reduction(f, far, 5));
    /* multiples of a point in the kernel of reduction stay in it */
    curve g = C("[0,0,1,-1,0]");
    point p = point::parse("(0,0)");
    for (long k = 1; k <= 12; ++k) {
        point q = multiply(g, p, k);
        if (q.infinity)
            continue;
        bool in = in_kernel_of_reduction(g, q, 5);
        std::array<long, 5> a{0, 0, 1, 4, 0};
        oracle::fp_group grp{a, 5};
        long order = 1;
        auto base = std::make_pair(0L, 0L);
        while (grp.mul(base, order).first >= 0)
            ++order;
        EXPECT_EQ(in, k % order == 0) << k;
    }
}

TEST(CurveCore, TorsionDividesGroupOrder)
{
    /* curves with a rational point of order 3, 5, 7 */
    struct item {
        char const * curve;
        long ell;
    } const items[] = {{"[0,-1,1,0,0]", 5},
                       {"[0,0,0,0,1]", 3},
                       {"[1,-1,1,-3,3]", 7},
                       {"[0,0,1,0,-7]", 3},
                       {"[0,0,1,0,0]", 3}};
    for (auto const & it : items) {
        curve e = C(it.curve);
        curve m = minimal_model(e).model;
        for (long p = 2; p <= 97; ++p) {
            if (!oracle::is_small_prime(p) || p == it.ell)
                continue;
            if (mpz_divisible_p(mpz_class(m.invariants().disc.get_num()).get_mpz_t(),
                                mpz_class(p).get_mpz_t()))
                continue;
            long n = p + 1 - ap(e, static_cast<std::uint64_t>(p));
            EXPECT_EQ(n % it.ell, 0) << it.curve << " p=" << p;
        }
    }
}
