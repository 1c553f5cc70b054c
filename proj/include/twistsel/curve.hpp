#ifndef TWISTSEL_CURVE_HPP
#define TWISTSEL_CURVE_HPP

#include <array>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

namespace twistsel {

struct curve_invariants {
    mpq_class b2, b4, b6, b8, c4, c6, disc, j;
};

/* Long Weierstrass model y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 over
 * Q. Construction rejects singular models. */
class curve {
    std::array<mpq_class, 5> a_;
    curve_invariants inv_;

  public:
    curve(mpq_class a1, mpq_class a2, mpq_class a3, mpq_class a4, mpq_class a6);
    explicit curve(std::array<mpq_class, 5> const & a);

    /* "[a1,a2,a3,a4,a6]", each entry an integer or "p/q" */
    static curve parse(std::string_view text);
    std::string to_string() const;

    mpq_class const & a1() const { return a_[0]; }
    mpq_class const & a2() const { return a_[1]; }
    mpq_class const & a3() const { return a_[2]; }
    mpq_class const & a4() const { return a_[3]; }
    mpq_class const & a6() const { return a_[4]; }
    std::array<mpq_class, 5> const & coeffs() const { return a_; }
    curve_invariants const & invariants() const { return inv_; }

    bool is_integral() const;
    bool operator==(curve const & o) const { return a_ == o.a_; }
};

curve_invariants compute_invariants(std::array<mpq_class, 5> const & a);

/* x = u^2 x' + r, y = u^3 y' + s u^2 x' + t */
struct transform {
    mpq_class u = 1, r = 0, s = 0, t = 0;
    bool is_identity() const { return u == 1 && r == 0 && s == 0 && t == 0; }
};

curve apply_transform(curve const & e, transform const & w);

struct minimal_result {
    curve model;
    transform w; /* original -> model */
};

/* Global minimal model in reduced form (a1, a3 in {0,1}, a2 in {-1,0,1}). */
minimal_result minimal_model(curve const & e);

/* Short model y^2 = x^3 + a x + b isomorphic over Q (u = 1). */
curve short_model(curve const & e);

/* d squarefree and nonzero; returns y^2 = x^3 + a d^2 x + b d^3 built on the
 * short model of e. */
curve quadratic_twist(curve const & e, mpz_class const & d);

enum class reduction_kind { good, split_multiplicative, nonsplit_multiplicative, additive };

std::string to_string(reduction_kind k);

/* ord_p(j) when j = 0 */
inline constexpr int ord_infinity = std::numeric_limits<int>::max();

struct local_data {
    mpz_class p;
    int ord_delta_min = 0;
    int ord_j = 0;
    reduction_kind kind = reduction_kind::good;
    std::string kodaira; /* "I0", "I5", "I2*", "II", "IV*", ... */
    int conductor_exponent = 0;
};

/* Tate's algorithm at p, on a p-minimal model. */
local_data local_reduction(curve const & e, mpz_class const & p);

struct conductor_data {
    mpz_class n;
    std::vector<local_data> bad; /* increasing p */
};

conductor_data conductor(curve const & e);

/* Largest prime accepted by ap(). */
inline constexpr std::uint64_t ap_limit = 1'000'000;

/* p + 1 - #E(F_p) by exhaustive count on the minimal model. */
long ap(curve const & e, std::uint64_t p);

enum class supersingular_verdict { yes, no, not_applicable };

struct supersingular_result {
    supersingular_verdict verdict;
    std::string reason;
};

std::string to_string(supersingular_verdict v);

/* Supersingular reduction at ell >= 5. Good reduction: a_ell = 0. Bad but
 * potentially good: decided on the curve over F_ell with j-invariant
 * j mod ell. ord_ell(j) < 0: not applicable. */
supersingular_result is_supersingular(curve const & e, std::uint64_t ell);

/* A rational point or the point at infinity. */
struct point {
    bool infinity = true;
    mpq_class x, y;

    static point at_infinity() { return {}; }
    static point affine(mpq_class x, mpq_class y) { return {false, std::move(x), std::move(y)}; }
    /* "(x,y)" or "inf" */
    static point parse(std::string_view text);
    std::string to_string() const;
    bool operator==(point const & o) const
    {
        return infinity == o.infinity && (infinity || (x == o.x && y == o.y));
    }
};

bool on_curve(curve const & e, point const & p);
point negate(curve const & e, point const & p);
point add(curve const & e, point const & p, point const & q);
point multiply(curve const & e, point const & p, long n);

/* Smallest n <= bound with nP = 0; nullopt if none. Throws
 * invalid_parameter when P is not on E. */
std::optional<int> point_order(curve const & e, point const & p, int bound);

/* P mapped to the global minimal model. */
point to_model(point const & p, transform const & w);

/* ord_ell x(P) < 0 on the minimal model; requires good reduction at ell and
 * P affine. */
bool in_kernel_of_reduction(curve const & e, point const & p, mpz_class const & ell);

} // namespace twistsel

#endif /* TWISTSEL_CURVE_HPP */
