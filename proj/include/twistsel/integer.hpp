#ifndef TWISTSEL_INTEGER_HPP
#define TWISTSEL_INTEGER_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

namespace twistsel {

struct prime_power {
    mpz_class p;
    int e = 0;
    bool operator==(prime_power const &) const = default;
};

/* p-adic valuation; the argument must be nonzero. */
int valuation(mpz_class const & n, mpz_class const & p);
int valuation(mpq_class const & q, mpz_class const & p);

bool is_prime(mpz_class const & n);
bool is_prime(std::uint64_t n);

/* Factorization of |n| (n != 0), primes in increasing order. Trial
 * division followed by Brent's variant of Pollard rho. */
std::vector<prime_power> factorize(mpz_class n);

int kronecker(mpz_class const & a, mpz_class const & n);
bool is_squarefree(mpz_class const & n);

/* Exact square roots; nullopt when the argument is not a square. */
std::optional<mpz_class> exact_sqrt(mpz_class const & n);
std::optional<mpq_class> exact_sqrt(mpq_class const & q);

/* Nonnegative residue of n modulo m (m > 0). */
mpz_class mod(mpz_class const & n, mpz_class const & m);
std::int64_t mod(std::int64_t n, std::int64_t m);

std::vector<std::uint64_t> primes_up_to(std::uint64_t n);

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t p);
std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t p);
std::uint64_t invmod(std::uint64_t a, std::uint64_t p);

/* Canonical text for rationals: "p/q" with q > 0, gcd(p,q) = 1, and just
 * "p" when q = 1. */
std::string to_string(mpq_class const & q);
std::string to_string(mpz_class const & n);
mpq_class parse_rational(std::string_view text);
mpz_class parse_integer(std::string_view text);

/* int64 conversion; throws invalid_parameter when out of range. */
std::int64_t to_int64(mpz_class const & n);

} // namespace twistsel

#endif /* TWISTSEL_INTEGER_HPP */
