#ifndef TWISTSEL_QUADCLASS_HPP
#define TWISTSEL_QUADCLASS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace twistsel {

/* Imaginary quadratic discriminants handled here satisfy |D| <= this. */
inline constexpr std::int64_t max_abs_discriminant = 100'000'000;

/* Field discriminant of Q(sqrt d): d if d = 1 mod 4, else 4d. */
std::int64_t field_discriminant(std::int64_t d);

/* Positive definite form a x^2 + b xy + c y^2. */
struct qform {
    std::int64_t a = 1, b = 0, c = 1;

    std::int64_t disc() const { return b * b - 4 * a * c; }
    bool is_reduced() const;
    std::string to_string() const;
    static qform parse(std::string const & text);

    bool operator==(qform const &) const = default;
    auto operator<=>(qform const &) const = default;
};

qform reduce(qform f);
qform principal_form(std::int64_t D);
qform inverse(qform const & f);
qform compose(qform const & f, qform const & g);
qform power(qform const & f, std::int64_t n);

/* All reduced primitive forms of discriminant D < 0, sorted. */
std::vector<qform> reduced_forms(std::int64_t D);

struct class_group_data {
    std::int64_t D = 0;
    std::vector<qform> forms;
    std::int64_t h = 0;
    /* invariant factors d_1 | d_2 | ... (trivial group: empty) */
    std::vector<std::int64_t> structure;
    /* generators[i] has order structure[i]; together a basis */
    std::vector<qform> generators;
};

class_group_data class_group_structure(std::int64_t D);

struct ell_rank_result {
    int rank = 0;
    mpz_class torsion_order; /* ell^rank */
};

ell_rank_result ell_rank(std::int64_t D, std::int64_t ell);
int ell_rank(std::vector<std::int64_t> const & structure, std::int64_t ell);

/* Diagonal of the Smith normal form of an integer matrix (rows of equal
 * length), of length min(rows, cols), each entry dividing the next. */
std::vector<mpz_class> smith_diagonal(std::vector<std::vector<mpz_class>> m);

struct ray_class_data {
    std::int64_t d = 0;
    std::int64_t D = 0;
    std::vector<std::int64_t> moduli; /* primes p with p O_K dividing the modulus */
    std::int64_t h = 0;
    mpz_class units_mod_m;    /* |(O/m)*| */
    int unit_image = 1;       /* |image of {+-1} in (O/m)*| */
    std::vector<mpz_class> structure; /* invariant factors of Cl_m */
    mpz_class order;
};

/* Ray class group of Q(sqrt d) for the modulus prod_{p in S} p O_K.
 * Requires d < -4 squarefree and every p in S prime and unramified. */
ray_class_data ray_class_group(std::int64_t d, std::vector<std::int64_t> const & S);

/* ell-rank of Cl_m; every p in S must also differ from ell. */
int ray_class_ell_rank(std::int64_t d, std::vector<std::int64_t> const & S, std::int64_t ell);

} // namespace twistsel

#endif /* TWISTSEL_QUADCLASS_HPP */
