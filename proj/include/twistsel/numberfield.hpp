#ifndef TWISTSEL_NUMBERFIELD_HPP
#define TWISTSEL_NUMBERFIELD_HPP

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "twistsel/poly.hpp"

namespace twistsel {

/* Q(alpha) with alpha a root of a monic irreducible integer polynomial. */
struct number_field {
    zpoly minpoly;
    int degree = 0;
    mpz_class disc; /* discriminant of minpoly */
};

/* Validates monic, irreducible, nonzero discriminant. */
number_field make_number_field(zpoly const & minpoly);

/* (-1)^(n(n-1)/2) Res(f, f') / lc(f); invalid_parameter when f is not
 * squarefree. */
mpz_class poly_discriminant(zpoly const & f);

struct prime_split {
    bool determined = false;
    /* (e_i, f_i) sorted; empty when undetermined */
    std::vector<std::pair<int, int>> shape;
};

/* Dedekind's criterion at p for the order Z[alpha]; undetermined when p
 * divides the index. */
prime_split dedekind_split(number_field const & k, std::uint64_t p);

/* Roots of the minimal polynomial in Z_p, found by Hensel lifting of residue
 * classes; nullopt if the lifting depth cap is reached. */
std::optional<int> padic_root_count(number_field const & k, std::uint64_t p);

/* Determined only when p splits completely, i.e. every root lies in Z_p.
 * Works when p is a common index divisor, where no Dedekind test can. */
prime_split split_by_padic_roots(number_field const & k, std::uint64_t p);

enum class zeta_verdict { no, undetermined };

/* One-sided test for zeta_ell in K: No when (ell - 1) does not divide
 * [K:Q], or when the splitting of ell is determined and no ramification
 * index is divisible by ell - 1. */
zeta_verdict zeta_in_field(number_field const & k, std::uint64_t ell);

/* Q(alpha, sqrt(f(alpha))) for g(alpha) = 0 with g irreducible. When
 * f(alpha) is a square the result has degree deg g. */
number_field adjoin_sqrt(zpoly const & g, zpoly const & f);

} // namespace twistsel

#endif /* TWISTSEL_NUMBERFIELD_HPP */
