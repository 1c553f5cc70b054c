#ifndef TWISTSEL_TORSION_HPP
#define TWISTSEL_TORSION_HPP

#include <optional>
#include <vector>

#include "twistsel/curve.hpp"
#include "twistsel/poly.hpp"

namespace twistsel {

inline constexpr int max_division_index = 40;

/* psi_n as a polynomial in the x-coordinate of the given model. For even n
 * the true division polynomial is (2y + a1 x + a3) * psi. */
struct division_poly {
    int n = 1;
    qpoly psi;
    bool y_factor = false;
};

division_poly division_polynomial(curve const & e, int n);

/* psi_n scaled to a primitive integer polynomial with positive leading
 * coefficient. */
zpoly division_polynomial_z(curve const & e, int n);

/* A rational point of exact order ell found among the rational roots of
 * psi_ell, smallest x first. */
std::optional<point> rational_ell_torsion_point(curve const & e, int ell);

struct factor_shape {
    int ell = 0;
    int degree_bound = 0;
    std::vector<zpoly> factors; /* irreducible, degree <= bound, sorted */
    zpoly residual;             /* psi_ell / (content * prod factors) */
    int residual_degree = 0;
};

/* Irreducible factors of psi_ell over Q of degree <= bound. */
factor_shape psi_factor_shape(curve const & e, int ell, int bound);

struct isogeny_witness {
    bool exists = false;
    std::optional<zpoly> kernel; /* degree (ell-1)/2 factor of psi_ell */
};

/* Rational ell-isogeny (Borel mod-ell image) via kernel polynomials: a
 * factor of psi_ell of degree (ell-1)/2 whose roots are closed under the
 * x-coordinate doubling map. ell odd, ell <= 13. */
isogeny_witness has_rational_isogeny(curve const & e, int ell);

/* True when the roots of g are permuted by x -> x(2P) on e. */
bool closed_under_doubling(curve const & e, zpoly const & g);

/* y^2 = rhs(x) for a model with a1 = a3 = 0; otherwise the rhs of
 * (2y + a1 x + a3)^2 = 4x^3 + b2 x^2 + 2 b4 x + b6. Multiplied by a square
 * to clear denominators, so square classes of values are unchanged. */
zpoly curve_rhs_z(curve const & e);

/* Defining polynomial of Q(alpha, sqrt f(alpha)) with g(alpha) = 0, f the
 * curve rhs: degree 2 deg g, or deg g when f(alpha) is already a square.
 * g must be an irreducible factor of psi_ell. */
zpoly torsion_field_polynomial(curve const & e, int ell, zpoly const & g);

} // namespace twistsel

#endif /* TWISTSEL_TORSION_HPP */
