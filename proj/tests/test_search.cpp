#include <algorithm>
#include <numeric>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "twistsel/errors.hpp"
#include "twistsel/search.hpp"

using namespace twistsel;

namespace {

curve e11a3() { return curve(0, -1, 1, 0, 0); }

bool squarefree_by_trial(long n)
{
    n = n < 0 ? -n : n;
    for (long k = 2; k * k <= n; ++k)
        if (n % (k * k) == 0)
            return false;
    return n != 0;
}

void expect_same_rows(std::vector<twist_candidate> const & a, std::vector<twist_candidate> const & b)
{
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a[i].d, b[i].d);
        EXPECT_EQ(a[i].overall, b[i].overall);
        EXPECT_EQ(a[i].h, b[i].h);
        EXPECT_EQ(a[i].ell_rank, b[i].ell_rank);
        EXPECT_EQ(a[i].selmer_lb, b[i].selmer_lb);
        EXPECT_EQ(a[i].verdict, b[i].verdict);
        EXPECT_EQ(a[i].failed_clauses, b[i].failed_clauses);
    }
}

} // namespace

TEST(TwistSearch, EnumerateExamples)
{
    EXPECT_EQ(enumerate_d(-20, -3, 5, 11), (std::vector<std::int64_t>{-13, -17}));
    EXPECT_EQ(enumerate_d(-20, -3, 5, 11, scan_order::by_value), (std::vector<std::int64_t>{-17, -13}));
    EXPECT_TRUE(enumerate_d(-3, -3, 7, 26).empty());
    EXPECT_THROW(enumerate_d(-3, -20, 5, 11), invalid_parameter);
    EXPECT_THROW(enumerate_d(-20, 0, 5, 11), invalid_parameter);
    EXPECT_THROW(enumerate_d(-100'000'000, -3, 5, 11), resource_error);
}

TEST(TwistSearch, EnumerateMatchesBruteForce)
{
    struct c {
        long lo, hi;
        int ell;
        long n;
    };
    for (auto [lo, hi, ell, n] : {c{-500, -1, 5, 11}, c{-1000, -400, 7, 26}, c{-777, -3, 5, 38},
                                  c{-5000, -4900, 3, 1}, c{-1, -1, 5, 11}, c{-300, -250, 13, 30}}) {
        std::vector<std::int64_t> want;
        for (long d = hi; d >= lo; --d)
            if (squarefree_by_trial(d) && oracle::md(d, 4) == 3 && std::gcd(-d, n * ell) == 1)
                want.push_back(d);
        EXPECT_EQ(enumerate_d(lo, hi, ell, n), want) << lo << " " << hi;
        for (auto d : enumerate_d(lo, hi, ell, n))
            EXPECT_EQ(oracle::md(d, 4), 3);
    }
}

TEST(TwistSearch, SmallScanOf11a3)
{
    search_options opt;
    opt.lo = -100;
    auto rows = search_twists(e11a3(), 5, opt);
    auto it = std::find_if(rows.begin(), rows.end(), [](auto const & r) { return r.d == -37; });
    ASSERT_NE(it, rows.end());
    EXPECT_EQ(it->D, -148);
    EXPECT_EQ(it->h, 2);
    EXPECT_EQ(it->ell_rank, 0);
    EXPECT_EQ(it->selmer_lb, mpz_class(1));
    EXPECT_EQ(it->verdict, selmer_verdict::trivial);
    EXPECT_TRUE(std::none_of(rows.begin(), rows.end(), [](auto const & r) { return r.d == -13; }));
}

TEST(TwistSearch, RowsAreExactlyTheAdmissibleD)
{
    search_options opt;
    opt.lo = -2000;
    auto rows = search_twists(e11a3(), 5, opt);
    std::vector<std::int64_t> want;
    for (std::int64_t d = -3; d >= -2000; --d)
        if (admissibility_check(e11a3(), 5, d).overall == admissibility::admissible)
            want.push_back(d);
    std::vector<std::int64_t> got;
    for (auto const & r : rows) {
        got.push_back(r.d);
        EXPECT_EQ(r.overall, admissibility::admissible);
        EXPECT_TRUE(r.failed_clauses.empty());
        // verdict agrees with 5 | h, h from the form enumeration oracle
        long h = static_cast<long>(oracle::reduced_forms(r.D).size());
        EXPECT_EQ(r.h, h);
        ASSERT_TRUE(r.verdict);
        EXPECT_EQ(*r.verdict == selmer_verdict::nontrivial, h % 5 == 0) << r.d;
        ASSERT_TRUE(r.ell_rank && r.selmer_lb);
        mpz_class pow5;
        mpz_ui_pow_ui(pow5.get_mpz_t(), 5, static_cast<unsigned long>(*r.ell_rank));
        EXPECT_EQ(*r.selmer_lb, pow5);
    }
    EXPECT_EQ(got, want);
    EXPECT_TRUE(std::any_of(rows.begin(), rows.end(),
                            [](auto const & r) { return r.verdict == selmer_verdict::nontrivial; }));
}

TEST(TwistSearch, IndependentOfThreadCount)
{
    search_options opt;
    opt.lo = -1500;
    opt.threads = 1;
    auto serial = search_twists(e11a3(), 5, opt);
    opt.threads = 7;
    auto parallel = search_twists(e11a3(), 5, opt);
    expect_same_rows(serial, parallel);
}

TEST(TwistSearch, ExplainKeepsEveryD)
{
    search_options opt;
    opt.lo = -200;
    auto plain = search_twists(e11a3(), 5, opt);
    opt.explain = true;
    auto all = search_twists(e11a3(), 5, opt);
    EXPECT_EQ(all.size(), 198u);
    std::vector<twist_candidate> admissible;
    for (auto const & r : all) {
        if (r.overall == admissibility::admissible)
            admissible.push_back(r);
        else
            EXPECT_FALSE(r.failed_clauses.empty()) << r.d;
    }
    expect_same_rows(plain, admissible);
    auto m13 = std::find_if(all.begin(), all.end(), [](auto const & r) { return r.d == -13; });
    ASSERT_NE(m13, all.end());
    EXPECT_EQ(m13->failed_clauses, std::vector<std::string>{"local_symbol_11"});
}

TEST(TwistSearch, LowerBoundOnlyOmitsVerdicts)
{
    search_options opt;
    opt.lo = -300;
    opt.mode = search_mode::lower_bound_only;
    for (auto const & r : search_twists(e11a3(), 5, opt)) {
        EXPECT_FALSE(r.verdict);
        EXPECT_TRUE(r.selmer_lb);
    }
}

TEST(TwistSearch, NotApplicableWhenSTildeIsNonEmpty)
{
    // Tate normal form b = 2: 19 lies in S_tilde
    curve e(-1, -2, -2, 0, 0);
    search_options opt;
    opt.lo = -400;
    auto rows = search_twists(e, 5, opt);
    ASSERT_FALSE(rows.empty());
    for (auto const & r : rows)
        EXPECT_EQ(r.verdict, selmer_verdict::not_applicable);
}

TEST(TwistSearch, HypothesisFailureStopsTheScan)
{
    search_options opt;
    EXPECT_THROW(search_twists(curve(0, 0, 0, 0, 1), 5, opt), hypothesis_error);
    EXPECT_THROW(search_twists(e11a3(), 7, opt), hypothesis_error);
    EXPECT_THROW(search_twists(e11a3(), 3, opt), precondition_error);
    opt.hi = 5;
    EXPECT_THROW(search_twists(e11a3(), 5, opt), invalid_parameter);
}
