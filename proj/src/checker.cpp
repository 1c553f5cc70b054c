#include "twistsel/checker.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "twistsel/errors.hpp"
#include "twistsel/integer.hpp"
#include "twistsel/quadclass.hpp"
#include "twistsel/torsion.hpp"

namespace twistsel {

namespace {

void require_twist_ell(int ell)
{
    if (ell < 5 || !is_prime(static_cast<std::uint64_t>(ell)))
        throw precondition_error("the twist conditions need an odd prime ell >= 5, got "
                                 + std::to_string(ell));
}

std::uint64_t least_primitive_root(std::uint64_t m, std::uint64_t phi)
{
    std::vector<std::uint64_t> qs;
    for (auto const & f : factorize(mpz_class(static_cast<unsigned long>(phi))))
        qs.push_back(f.p.get_ui());
    for (std::uint64_t g = 2; g < m; ++g) {
        if (std::gcd(g, m) != 1)
            continue;
        bool ok = std::all_of(qs.begin(), qs.end(),
                              [&](std::uint64_t q) { return powmod(g, phi / q, m) != 1; });
        if (ok)
            return g;
    }
    throw invalid_parameter("no primitive root mod " + std::to_string(m));
}

std::string symbol_word(int s)
{
    return s == 1 ? "+1" : s == -1 ? "-1" : "0";
}

clause_record make_clause(std::string id, std::string cite, bool ok, std::string detail)
{
    return {std::move(id), std::move(cite), ok ? clause_status::pass : clause_status::fail,
            std::move(detail)};
}

} // namespace

std::string to_string(artin_symbol s)
{
    switch (s) {
    case artin_symbol::split: return "Split";
    case artin_symbol::inert: return "Inert";
    case artin_symbol::ramified: return "Ramified";
    }
    return "?";
}

artin_symbol artin_symbol_quadratic(std::int64_t d, std::int64_t p)
{
    if (p < 2 || !is_prime(static_cast<std::uint64_t>(p)))
        throw invalid_parameter("artin symbol needs a prime, got " + std::to_string(p));
    if (d == 0 || d == 1 || !is_squarefree(mpz_class(static_cast<long>(d))))
        throw invalid_parameter("d must be squarefree and not 0 or 1, got " + std::to_string(d));
    // the Kronecker symbol of the field discriminant covers p = 2 as well
    mpz_class D = mod(d, 4) == 1 ? mpz_class(static_cast<long>(d)) : mpz_class(static_cast<long>(d)) * 4;
    int k = kronecker(D, mpz_class(static_cast<long>(p)));
    return k == 0 ? artin_symbol::ramified : k == 1 ? artin_symbol::split : artin_symbol::inert;
}

dirichlet_predicate dirichlet_predicate::make(int ell,
                                              std::vector<std::pair<std::int64_t, int>> const & parts)
{
    if (ell < 3 || !is_prime(static_cast<std::uint64_t>(ell)))
        throw invalid_parameter("character order must be an odd prime, got " + std::to_string(ell));
    if (parts.empty())
        throw invalid_parameter("character needs at least one component");
    dirichlet_predicate chi;
    chi.ell_ = ell;
    for (auto const & [q, k] : parts) {
        if (q < 2 || !is_prime(static_cast<std::uint64_t>(q)))
            throw invalid_parameter("component modulus " + std::to_string(q) + " is not prime");
        if (q > 1'000'000'000)
            throw resource_error("component modulus " + std::to_string(q) + " too large");
        if (mod(static_cast<std::int64_t>(k), ell) == 0)
            throw invalid_parameter("component at " + std::to_string(q)
                                    + " is trivial; the character would not be primitive");
        component c;
        c.q = q;
        c.k = static_cast<int>(mod(static_cast<std::int64_t>(k), ell));
        if (q == ell) {
            c.modulus = static_cast<std::int64_t>(ell) * ell;
            c.generator = least_primitive_root(c.modulus, c.modulus - ell);
        } else {
            if (q % ell != 1)
                throw invalid_parameter("no character of order " + std::to_string(ell)
                                        + " has conductor " + std::to_string(q));
            c.modulus = q;
            c.generator = least_primitive_root(q, q - 1);
        }
        chi.parts_.push_back(c);
    }
    std::sort(chi.parts_.begin(), chi.parts_.end(),
              [](component const & a, component const & b) { return a.q < b.q; });
    for (std::size_t i = 1; i < chi.parts_.size(); ++i)
        if (chi.parts_[i].q == chi.parts_[i - 1].q)
            throw invalid_parameter("repeated component " + std::to_string(chi.parts_[i].q));
    for (auto const & c : chi.parts_)
        chi.conductor_ *= static_cast<long>(c.modulus);
    return chi;
}

dirichlet_predicate dirichlet_predicate::parse(int ell, std::string const & text)
{
    std::vector<std::pair<std::int64_t, int>> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto colon = item.find(':');
        if (colon == std::string::npos)
            throw invalid_parameter("character component '" + item + "' is not q:k");
        mpz_class q = parse_integer(item.substr(0, colon));
        mpz_class k = parse_integer(item.substr(colon + 1));
        parts.emplace_back(to_int64(q), static_cast<int>(to_int64(mod(k, mpz_class(ell)))));
    }
    return make(ell, parts);
}

std::optional<int> dirichlet_predicate::exponent(mpz_class const & n) const
{
    std::int64_t e = 0;
    for (auto const & c : parts_) {
        mpz_class r = mod(n, mpz_class(static_cast<long>(c.modulus)));
        if (r % c.q == 0)
            return std::nullopt;
        // chi_c(n) = zeta^(k * log_g n); only log_g n mod ell matters
        std::uint64_t m = static_cast<std::uint64_t>(c.modulus);
        std::uint64_t phi = c.q == ell_ ? m - static_cast<std::uint64_t>(ell_) : m - 1;
        std::uint64_t t = phi / static_cast<std::uint64_t>(ell_);
        std::uint64_t target = powmod(r.get_ui(), t, m);
        std::uint64_t step = powmod(c.generator, t, m), acc = 1;
        int log = 0;
        while (acc != target) {
            acc = mulmod(acc, step, m);
            ++log;
        }
        e += static_cast<std::int64_t>(c.k) * log;
    }
    return static_cast<int>(mod(e, ell_));
}

std::string dirichlet_predicate::to_string() const
{
    std::string out = "chi of order " + std::to_string(ell_) + ", conductor " + conductor_.get_str() + " [";
    for (std::size_t i = 0; i < parts_.size(); ++i)
        out += (i ? "," : "") + std::to_string(parts_[i].q) + ":" + std::to_string(parts_[i].k);
    return out + "]";
}

s_sets compute_s_sets(curve const & e, int ell, std::optional<dirichlet_predicate> const & chi)
{
    if (ell < 3 || !is_prime(static_cast<std::uint64_t>(ell)))
        throw invalid_parameter("ell must be an odd prime, got " + std::to_string(ell));
    if (chi && chi->ell() != ell)
        throw invalid_parameter("character has order " + std::to_string(chi->ell()) + ", expected "
                                + std::to_string(ell));
    s_sets out;
    out.predicate_used = chi ? chi->to_string() : "p = -1 mod " + std::to_string(ell);
    for (auto const & ld : conductor(e).bad) {
        if (ld.p == 2)
            continue;
        bool pred = chi ? chi->nonzero_at(ld.p) : mod(ld.p + 1, mpz_class(ell)) == 0;
        if (!pred || ld.ord_delta_min % ell == 0)
            continue;
        out.s_tilde.push_back(ld.p);
        if (ld.ord_j != ord_infinity && ld.ord_j < 0)
            out.s.push_back(ld.p);
    }
    return out;
}

std::string to_string(clause_status s)
{
    switch (s) {
    case clause_status::pass: return "pass";
    case clause_status::fail: return "fail";
    case clause_status::undetermined: return "undetermined";
    }
    return "?";
}

hypothesis_report hypothesis_check(curve const & e, int ell)
{
    require_twist_ell(ell);
    hypothesis_report rep;
    rep.ell = ell;
    mpz_class L(ell);

    rep.torsion_point = rational_ell_torsion_point(e, ell);
    if (!rep.torsion_point) {
        rep.clauses.push_back(make_clause("torsion_point", "rational point P of order ell", false,
                                          "no rational point of order " + std::to_string(ell)));
        return rep;
    }
    point const & P = *rep.torsion_point;
    rep.clauses.push_back(make_clause("torsion_point", "rational point P of order ell", true,
                                      "P = " + P.to_string()));

    local_data ld = local_reduction(e, L);
    bool in_kernel = false;
    std::string how;
    if (ld.kind == reduction_kind::good) {
        in_kernel = in_kernel_of_reduction(e, P, L);
        how = "good reduction at " + L.get_str();
    } else {
        // bad reduction: P reduces to the identity iff ord_ell x(P) < 0 on
        // the minimal model
        point q = to_model(P, minimal_model(e).w);
        in_kernel = q.x != 0 && valuation(q.x, L) < 0;
        how = to_string(ld.kind) + " reduction at " + L.get_str() + ", ord_ell(j) = "
              + (ld.ord_j == ord_infinity ? std::string("inf") : std::to_string(ld.ord_j));
    }
    rep.clauses.push_back(make_clause("kernel_of_reduction", "P not in the kernel of reduction mod ell",
                                      !in_kernel,
                                      how + (in_kernel ? "; P reduces to O" : "; P reduces to a point of order ell")));

    supersingular_result ss = is_supersingular(e, static_cast<std::uint64_t>(ell));
    rep.clauses.push_back(make_clause("not_supersingular",
                                      "not supersingular mod ell when ord_ell(j) >= 0",
                                      ss.verdict != supersingular_verdict::yes,
                                      to_string(ss.verdict) + ": " + ss.reason));

    rep.passed = std::all_of(rep.clauses.begin(), rep.clauses.end(),
                             [](clause_record const & c) { return c.status == clause_status::pass; });
    return rep;
}

std::string to_string(admissibility a)
{
    switch (a) {
    case admissibility::admissible: return "Admissible";
    case admissibility::inadmissible: return "Inadmissible";
    case admissibility::undetermined: return "Undetermined";
    }
    return "?";
}

std::vector<std::string> condition_report::failed_clauses() const
{
    std::vector<std::string> out;
    for (auto const & c : clauses)
        if (c.status == clause_status::fail)
            out.push_back(c.id);
    return out;
}

condition_report admissibility_check(curve const & e, int ell, std::int64_t d,
                                     std::optional<dirichlet_predicate> const & chi)
{
    require_twist_ell(ell);
    condition_report rep;
    rep.curve = e.to_string();
    rep.ell = ell;
    rep.d = d;
    mpz_class dz(static_cast<long>(d)), L(ell);

    conductor_data cond = conductor(e);
    s_sets s = compute_s_sets(e, ell, chi);

    bool squarefree = d != 0 && is_squarefree(dz);
    rep.clauses.push_back(make_clause("d_negative", "d negative", d < 0, "d = " + dz.get_str()));
    rep.clauses.push_back(make_clause("d_squarefree", "d square-free", squarefree,
                                      squarefree ? "mu(d)^2 = 1" : "d has a square factor"));
    rep.clauses.push_back(make_clause("d_3_mod_4", "d = 3 mod 4", mod(d, 4) == 3,
                                      "d mod 4 = " + std::to_string(mod(d, 4))));
    mpz_class g = gcd(dz, L * cond.n);
    rep.clauses.push_back(make_clause("d_coprime", "d coprime to ell N(E)", g == 1,
                                      "gcd(d, " + mpz_class(L * cond.n).get_str() + ") = " + g.get_str()));

    // symbols below need d to define a quadratic field
    bool field_ok = squarefree && d != 1;

    bool two_bad = cond.n % 2 == 0;
    {
        std::string detail;
        bool ok = true;
        if (!two_bad) {
            detail = "N(E) odd; vacuous";
        } else if (!field_ok) {
            ok = false;
            detail = "d does not define a quadratic field";
        } else {
            artin_symbol a = artin_symbol_quadratic(d, 2);
            ok = a == artin_symbol::ramified;
            detail = "2 | N(E); 2 is " + to_string(a) + " in Q(sqrt d)";
        }
        rep.clauses.push_back(make_clause("two_ramified", "primes above 2 dividing N(E) ramify in Q(sqrt d)",
                                          ok, detail));
    }

    local_data at_ell = local_reduction(e, L);
    {
        std::string detail;
        bool ok = true;
        if (at_ell.ord_j == ord_infinity || at_ell.ord_j >= 0) {
            detail = "ord_ell(j) >= 0; vacuous";
        } else if (!field_ok) {
            ok = false;
            detail = "d does not define a quadratic field";
        } else {
            int k = kronecker(dz, L);
            ok = k == -1;
            detail = "ord_ell(j) = " + std::to_string(at_ell.ord_j) + "; (d/ell) = " + symbol_word(k)
                     + ", need -1";
        }
        rep.clauses.push_back(make_clause("symbol_at_ell", "if ord_ell(j) < 0 then (d/ell) = -1", ok, detail));
    }

    for (auto const & ld : cond.bad) {
        if (ld.p == 2)
            continue;
        std::string id = "local_symbol_" + ld.p.get_str();
        std::string cite = "split type of p | N(E) outside S_E";
        if (std::find(s.s.begin(), s.s.end(), ld.p) != s.s.end()) {
            rep.clauses.push_back(make_clause(id, cite, true, "p in S_E; exempt"));
            continue;
        }
        bool potentially_good = ld.ord_j == ord_infinity || ld.ord_j >= 0;
        bool tate = !potentially_good && ld.kind == reduction_kind::split_multiplicative;
        artin_symbol need = potentially_good || tate ? artin_symbol::inert : artin_symbol::split;
        std::string branch = potentially_good ? "ord_p(j) >= 0"
                             : tate           ? "ord_p(j) < 0, Tate curve"
                                              : "ord_p(j) < 0, not a Tate curve";
        if (!field_ok) {
            rep.clauses.push_back(make_clause(id, cite, false, branch + "; d does not define a quadratic field"));
            continue;
        }
        artin_symbol got = artin_symbol_quadratic(d, ld.p.get_si());
        rep.clauses.push_back(make_clause(id, cite, got == need,
                                          branch + "; need " + to_string(need) + ", got " + to_string(got)));
    }

    bool any_undetermined = false, all_pass = true;
    for (auto const & c : rep.clauses) {
        any_undetermined |= c.status == clause_status::undetermined;
        all_pass &= c.status == clause_status::pass;
    }
    rep.overall = all_pass            ? admissibility::admissible
                  : any_undetermined ? admissibility::undetermined
                                     : admissibility::inadmissible;
    return rep;
}

selmer_bound selmer_lower_bound(curve const & e, int ell, std::int64_t d,
                                std::optional<dirichlet_predicate> const & chi)
{
    condition_report rep = admissibility_check(e, ell, d, chi);
    if (rep.overall != admissibility::admissible)
        throw precondition_error("d = " + std::to_string(d) + " is " + to_string(rep.overall) + " for "
                                 + e.to_string() + " at ell = " + std::to_string(ell));
    s_sets s = compute_s_sets(e, ell, chi);
    selmer_bound out;
    for (auto const & p : s.s)
        out.s_used.push_back(to_int64(p));
    try {
        out.r = out.s_used.empty() ? ell_rank(field_discriminant(d), ell).rank
                                   : ray_class_ell_rank(d, out.s_used, ell);
    } catch (precondition_error const & ex) {
        out.reason = ex.what();
        return out;
    } catch (unsupported const & ex) {
        out.reason = ex.what();
        return out;
    } catch (resource_error const & ex) {
        out.reason = ex.what();
        return out;
    }
    out.determined = true;
    mpz_ui_pow_ui(out.bound.get_mpz_t(), static_cast<unsigned long>(ell), static_cast<unsigned long>(out.r));
    return out;
}

std::string to_string(selmer_verdict v)
{
    switch (v) {
    case selmer_verdict::nontrivial: return "SelmerNontrivial";
    case selmer_verdict::trivial: return "SelmerTrivial";
    case selmer_verdict::not_applicable: return "NotApplicable";
    }
    return "?";
}

corollary_result corollary_e_verdict(curve const & e, int ell, std::int64_t d,
                                     std::optional<dirichlet_predicate> const & chi)
{
    condition_report rep = admissibility_check(e, ell, d, chi);
    if (rep.overall != admissibility::admissible)
        throw precondition_error("d = " + std::to_string(d) + " is " + to_string(rep.overall) + " for "
                                 + e.to_string() + " at ell = " + std::to_string(ell));
    corollary_result out;
    if (!compute_s_sets(e, ell, chi).s_tilde.empty())
        return out;
    out.r = ell_rank(field_discriminant(d), ell).rank;
    out.verdict = out.r > 0 ? selmer_verdict::nontrivial : selmer_verdict::trivial;
    mpz_ui_pow_ui(out.lower.get_mpz_t(), static_cast<unsigned long>(ell), static_cast<unsigned long>(out.r));
    out.upper = out.lower * out.lower;
    return out;
}

} // namespace twistsel
