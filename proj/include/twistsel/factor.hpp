#ifndef TWISTSEL_FACTOR_HPP
#define TWISTSEL_FACTOR_HPP

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "twistsel/poly.hpp"

namespace twistsel {

/* Polynomial over F_p, lowest degree first, trimmed. */
using fp_poly = std::vector<std::uint64_t>;

namespace fp {

int degree(fp_poly const & f);
fp_poly reduce(zpoly const & f, std::uint64_t p);
fp_poly add(fp_poly const & a, fp_poly const & b, std::uint64_t p);
fp_poly sub(fp_poly const & a, fp_poly const & b, std::uint64_t p);
fp_poly mul(fp_poly const & a, fp_poly const & b, std::uint64_t p);
std::pair<fp_poly, fp_poly> divmod(fp_poly const & a, fp_poly const & b, std::uint64_t p);
fp_poly rem(fp_poly const & a, fp_poly const & b, std::uint64_t p);
fp_poly make_monic(fp_poly const & f, std::uint64_t p);
fp_poly gcd(fp_poly a, fp_poly b, std::uint64_t p);
fp_poly derivative(fp_poly const & f, std::uint64_t p);
fp_poly powmod(fp_poly const & base, mpz_class const & e, fp_poly const & modulus,
               std::uint64_t p);
bool is_squarefree(fp_poly const & f, std::uint64_t p);

/* Monic irreducible factors with multiplicity, sorted by (degree, coeffs). */
std::vector<std::pair<fp_poly, int>> factor(fp_poly const & f, std::uint64_t p);

/* Degrees of the irreducible factors of a squarefree f, from distinct-degree
 * factorization only (no splitting). */
std::vector<int> factor_degrees(fp_poly const & f, std::uint64_t p);

} // namespace fp

struct factor_entry {
    zpoly factor; /* primitive, positive leading coefficient, irreducible over Q */
    int multiplicity = 1;
};

/* f = unit * prod(factor^multiplicity) * residual. Residual is 1 when the
 * factorization is complete; otherwise it collects every irreducible factor
 * of degree above the bound. */
struct factorization {
    mpz_class unit;
    std::vector<factor_entry> factors;
    zpoly residual;
    bool complete = true;
};

struct factor_options {
    /* Factors of degree <= bound are extracted; nullopt = complete when
     * deg f <= 30, else bound 12. */
    std::optional<int> degree_bound;
    /* Number of auxiliary primes whose degree patterns are intersected. */
    int pattern_primes = 3;
    /* Recombination candidates tested before giving up. */
    std::uint64_t max_candidates = 2'000'000;
};

factorization factor_poly_q(zpoly const & f, factor_options const & opt = {});

/* Factors of degree <= bound of a squarefree primitive polynomial; the
 * second member is the cofactor. */
std::pair<std::vector<zpoly>, zpoly> small_factors_squarefree(zpoly const & f, int bound,
                                                             factor_options const & opt = {});

bool is_irreducible(zpoly const & f);

} // namespace twistsel

#endif /* TWISTSEL_FACTOR_HPP */
