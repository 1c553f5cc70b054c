#ifndef TWISTSEL_CHECKER_HPP
#define TWISTSEL_CHECKER_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "twistsel/curve.hpp"

namespace twistsel {

enum class artin_symbol { split, inert, ramified };

std::string to_string(artin_symbol s);

/* Behaviour of the prime p in Q(sqrt d), d squarefree. */
artin_symbol artin_symbol_quadratic(std::int64_t d, std::int64_t p);

/* Primitive Dirichlet character of order ell, written as a product of
 * local components. A component (q, k) with q != ell is the character of
 * conductor q (q prime, q = 1 mod ell) sending the least primitive root of
 * q to zeta^k; the component (ell, k) lives on (Z/ell^2)^*. */
class dirichlet_predicate {
  public:
    struct component {
        std::int64_t q = 0;
        int k = 0;
        std::int64_t modulus = 0; /* q, or ell^2 when q == ell */
        std::uint64_t generator = 0;
    };

    static dirichlet_predicate make(int ell, std::vector<std::pair<std::int64_t, int>> const & parts);
    /* "q1:k1,q2:k2,..." */
    static dirichlet_predicate parse(int ell, std::string const & text);

    int ell() const { return ell_; }
    mpz_class const & conductor() const { return conductor_; }
    std::vector<component> const & components() const { return parts_; }

    /* chi(n) = zeta^e; nullopt when gcd(n, conductor) > 1 */
    std::optional<int> exponent(mpz_class const & n) const;
    bool nonzero_at(mpz_class const & p) const { return exponent(p).has_value(); }

    std::string to_string() const;

  private:
    int ell_ = 0;
    mpz_class conductor_ = 1;
    std::vector<component> parts_;
};

struct s_sets {
    std::vector<mpz_class> s_tilde; /* increasing */
    std::vector<mpz_class> s;
    std::string predicate_used;
};

s_sets compute_s_sets(curve const & e, int ell,
                      std::optional<dirichlet_predicate> const & chi = std::nullopt);

enum class clause_status { pass, fail, undetermined };

std::string to_string(clause_status s);

struct clause_record {
    std::string id;
    std::string cite;
    clause_status status = clause_status::pass;
    std::string detail;
};

struct hypothesis_report {
    int ell = 0;
    std::optional<point> torsion_point;
    std::vector<clause_record> clauses;
    bool passed = false;
};

/* ell must be an odd prime >= 5 (precondition_error otherwise). A missing
 * torsion point is a failed clause, not an exception. */
hypothesis_report hypothesis_check(curve const & e, int ell);

enum class admissibility { admissible, inadmissible, undetermined };

std::string to_string(admissibility a);

struct condition_report {
    std::string curve;
    int ell = 0;
    std::int64_t d = 0;
    std::vector<clause_record> clauses;
    admissibility overall = admissibility::undetermined;

    std::vector<std::string> failed_clauses() const;
};

condition_report admissibility_check(curve const & e, int ell, std::int64_t d,
                                     std::optional<dirichlet_predicate> const & chi = std::nullopt);

struct selmer_bound {
    bool determined = false;
    int r = 0;
    mpz_class bound = 1; /* ell^r, divides #Sel_ell(E^d) */
    std::vector<std::int64_t> s_used;
    std::string reason; /* why undetermined */
};

/* Requires an admissible d (precondition_error otherwise). */
selmer_bound selmer_lower_bound(curve const & e, int ell, std::int64_t d,
                                std::optional<dirichlet_predicate> const & chi = std::nullopt);

enum class selmer_verdict { nontrivial, trivial, not_applicable };

std::string to_string(selmer_verdict v);

struct corollary_result {
    selmer_verdict verdict = selmer_verdict::not_applicable;
    int r = 0;
    mpz_class lower = 1, upper = 1; /* ell^r and ell^(2r) when applicable */
};

/* Requires an admissible d. Applies only when S_tilde is empty. */
corollary_result corollary_e_verdict(curve const & e, int ell, std::int64_t d,
                                     std::optional<dirichlet_predicate> const & chi = std::nullopt);

} // namespace twistsel

#endif /* TWISTSEL_CHECKER_HPP */
