#include "twistsel/search.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <thread>

#include "twistsel/errors.hpp"
#include "twistsel/integer.hpp"
#include "twistsel/quadclass.hpp"

namespace twistsel {

namespace {

void check_range(std::int64_t lo, std::int64_t hi)
{
    if (hi >= 0)
        throw invalid_parameter("range must be negative, got hi = " + std::to_string(hi));
    if (lo > hi)
        throw invalid_parameter("empty range [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    if (hi - lo >= max_scan_width)
        throw resource_error("range wider than " + std::to_string(max_scan_width));
}

void sort_by_abs(std::vector<std::int64_t> & ds)
{
    std::sort(ds.begin(), ds.end(), [](std::int64_t a, std::int64_t b) { return a > b; });
}

twist_candidate evaluate(curve const & e, int ell, std::int64_t d, search_options const & opt)
{
    twist_candidate row;
    row.d = d;
    row.D = mod(d, 4) == 1 ? d : 4 * d;
    condition_report rep = admissibility_check(e, ell, d, opt.chi);
    row.overall = rep.overall;
    row.failed_clauses = rep.failed_clauses();
    if (rep.overall != admissibility::admissible)
        return row;
    row.h = class_group_structure(field_discriminant(d)).h;
    selmer_bound sb = selmer_lower_bound(e, ell, d, opt.chi);
    if (sb.determined) {
        row.ell_rank = sb.r;
        row.selmer_lb = sb.bound;
    } else {
        row.note = sb.reason;
    }
    if (opt.mode == search_mode::corollary_e)
        row.verdict = corollary_e_verdict(e, ell, d, opt.chi).verdict;
    return row;
}

} // namespace

std::vector<std::int64_t> enumerate_d(std::int64_t lo, std::int64_t hi, int ell, mpz_class const & n,
                                      scan_order order)
{
    check_range(lo, hi);
    std::size_t width = static_cast<std::size_t>(hi - lo + 1);
    // squarefree sieve over |d| in [-hi, -lo]
    std::int64_t a = -hi, b = -lo;
    std::vector<char> square_free(width, 1);
    auto root = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(b))) + 1;
    for (auto p : primes_up_to(root)) {
        auto q = static_cast<std::int64_t>(p * p);
        if (q > b)
            break;
        for (std::int64_t m = (a + q - 1) / q * q; m <= b; m += q)
            square_free[static_cast<std::size_t>(m - a)] = 0;
    }
    mpz_class ellN = n * ell;
    std::vector<std::int64_t> out;
    for (std::int64_t m = a; m <= b; ++m) {
        std::int64_t d = -m;
        if (!square_free[static_cast<std::size_t>(m - a)] || mod(d, 4) != 3)
            continue;
        if (gcd(ellN, mpz_class(static_cast<long>(m))) != 1)
            continue;
        out.push_back(d);
    }
    if (order == scan_order::by_value)
        std::sort(out.begin(), out.end());
    else
        sort_by_abs(out);
    return out;
}

std::vector<twist_candidate> search_twists(curve const & e, int ell, search_options const & opt)
{
    check_range(opt.lo, opt.hi);
    hypothesis_report hyp = hypothesis_check(e, ell);
    if (!hyp.passed) {
        std::string why;
        for (auto const & c : hyp.clauses)
            if (c.status != clause_status::pass)
                why += (why.empty() ? "" : "; ") + c.id + ": " + c.detail;
        throw hypothesis_error("hypotheses fail for " + e.to_string() + " at ell = " + std::to_string(ell)
                               + " (" + why + ")");
    }

    std::vector<std::int64_t> ds;
    if (opt.explain) {
        for (std::int64_t d = opt.hi; d >= opt.lo; --d)
            ds.push_back(d);
    } else {
        ds = enumerate_d(opt.lo, opt.hi, ell, conductor(e).n);
    }

    std::vector<std::optional<twist_candidate>> slots(ds.size());
    unsigned threads = opt.threads ? opt.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(1, ds.size())));
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(threads);
    auto work = [&](unsigned id) {
        try {
            for (std::size_t i; (i = next.fetch_add(1)) < ds.size();) {
                twist_candidate row = evaluate(e, ell, ds[i], opt);
                if (opt.explain || row.overall == admissibility::admissible)
                    slots[i] = std::move(row);
            }
        } catch (...) {
            errors[id] = std::current_exception();
            next = ds.size();
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t)
        pool.emplace_back(work, t);
    work(0);
    for (auto & t : pool)
        t.join();
    for (auto const & ex : errors)
        if (ex)
            std::rethrow_exception(ex);

    std::vector<twist_candidate> rows;
    for (auto & s : slots)
        if (s)
            rows.push_back(std::move(*s));
    std::sort(rows.begin(), rows.end(),
              [](twist_candidate const & x, twist_candidate const & y) { return x.d > y.d; });
    return rows;
}

} // namespace twistsel
