#ifndef TWISTSEL_SEARCH_HPP
#define TWISTSEL_SEARCH_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "twistsel/checker.hpp"
#include "twistsel/curve.hpp"

namespace twistsel {

/* Widest range enumerate_d accepts. */
inline constexpr std::int64_t max_scan_width = 20'000'000;

enum class scan_order {
    by_abs,  /* increasing |d| */
    by_value /* increasing d */
};

/* Negative squarefree d = 3 mod 4 in [lo, hi] coprime to ell N. */
std::vector<std::int64_t> enumerate_d(std::int64_t lo, std::int64_t hi, int ell, mpz_class const & n,
                                      scan_order order = scan_order::by_abs);

enum class search_mode { corollary_e, lower_bound_only };

struct search_options {
    std::int64_t lo = -1000, hi = -3;
    search_mode mode = search_mode::corollary_e;
    /* also return rows for every d in range that is not admissible */
    bool explain = false;
    unsigned threads = 0; /* 0: hardware concurrency */
    std::optional<dirichlet_predicate> chi;
};

struct twist_candidate {
    std::int64_t d = 0;
    std::int64_t D = 0;
    admissibility overall = admissibility::undetermined;
    std::optional<std::int64_t> h;
    std::optional<int> ell_rank;        /* ell-rank over S_E */
    std::optional<mpz_class> selmer_lb; /* ell^ell_rank */
    std::optional<selmer_verdict> verdict;
    std::vector<std::string> failed_clauses;
    std::string note;
};

/* Rows sorted by |d|. Throws hypothesis_error when the curve fails the
 * hypotheses at ell. */
std::vector<twist_candidate> search_twists(curve const & e, int ell, search_options const & opt);

} // namespace twistsel

#endif /* TWISTSEL_SEARCH_HPP */
