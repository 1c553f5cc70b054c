#include "twistsel/cli.hpp"

#include <algorithm>
#include <functional>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"

#include "twistsel/curve.hpp"
#include "twistsel/errors.hpp"
#include "twistsel/integer.hpp"
#include "twistsel/numberfield.hpp"
#include "twistsel/poly.hpp"
#include "twistsel/torsion.hpp"

namespace twistsel::cli {

using nlohmann::json;

namespace {

json coeffs(qpoly const & f)
{
    json a = json::array();
    for (auto const & c : f.coeffs())
        a.push_back(to_string(c));
    return a;
}

json coeffs(zpoly const & f)
{
    json a = json::array();
    for (auto const & c : f.coeffs())
        a.push_back(to_string(c));
    return a;
}

json ord_json(int v)
{
    return v == ord_infinity ? json(nullptr) : json(v);
}

json to_json(local_data const & ld)
{
    return {{"p", to_string(ld.p)},
            {"kodaira", ld.kodaira},
            {"reduction", to_string(ld.kind)},
            {"ord_delta_min", ld.ord_delta_min},
            {"ord_j", ord_json(ld.ord_j)},
            {"conductor_exponent", ld.conductor_exponent}};
}

json to_json(clause_record const & c)
{
    json pass = c.status == clause_status::undetermined ? json(nullptr) : json(c.status == clause_status::pass);
    return {{"id", c.id}, {"cite", c.cite}, {"pass", pass}, {"detail", c.detail}};
}

json to_json(point const & p)
{
    if (p.infinity)
        return nullptr;
    return json::array({to_string(p.x), to_string(p.y)});
}

std::string shape_text(prime_split const & s)
{
    if (!s.determined)
        return "Undetermined";
    std::string out;
    for (auto const & [e, f] : s.shape)
        out += (out.empty() ? "" : " ") + std::string("(e=") + std::to_string(e) + ",f=" + std::to_string(f) + ")";
    return out;
}

json split_json(prime_split const & s)
{
    if (!s.determined)
        return "Undetermined";
    json a = json::array();
    for (auto const & [e, f] : s.shape)
        a.push_back({{"e", e}, {"f", f}});
    return a;
}

bool splits_completely(prime_split const & s, int degree)
{
    return s.determined && static_cast<int>(s.shape.size()) == degree &&
           std::all_of(s.shape.begin(), s.shape.end(), [](auto const & ef) { return ef == std::pair{1, 1}; });
}

std::pair<std::int64_t, std::int64_t> parse_range(std::string const & text)
{
    // the separator is the first ':' after a leading sign
    auto colon = text.find(':', 1);
    if (colon == std::string::npos)
        throw invalid_parameter("range must be LO:HI, got '" + text + "'");
    return {to_int64(parse_integer(text.substr(0, colon))), to_int64(parse_integer(text.substr(colon + 1)))};
}

std::vector<std::int64_t> parse_prime_list(std::string const & text)
{
    std::vector<std::int64_t> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty())
            out.push_back(to_int64(parse_integer(item)));
    return out;
}

zpoly parse_zpoly(std::string const & text)
{
    qpoly q = parse_coeff_list(text);
    std::vector<mpz_class> c;
    for (auto const & a : q.coeffs()) {
        if (a.get_den() != 1)
            throw invalid_parameter("polynomial must have integer coefficients: " + text);
        c.push_back(a.get_num());
    }
    return zpoly(c);
}

std::string join(std::vector<std::string> const & xs, char sep)
{
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i)
        out += (i ? std::string(1, sep) : "") + xs[i];
    return out;
}

std::string csv_field(std::string const & s)
{
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char c : s)
        out += c == '"' ? std::string("\"\"") : std::string(1, c);
    return out + "\"";
}

void print_clauses(std::ostream & out, std::vector<clause_record> const & clauses)
{
    std::size_t w = 0;
    for (auto const & c : clauses)
        w = std::max(w, c.id.size());
    for (auto const & c : clauses)
        out << "  " << std::left << std::setw(13) << to_string(c.status) << std::setw(static_cast<int>(w) + 2)
            << c.id << c.detail << "\n";
}

constexpr char const * example_curve = "[0,0,0,13674069,324405221670]";
constexpr char const * scan_curve = "[0,-1,1,0,0]";

} // namespace

json to_json(class_group_data const & g)
{
    return {{"D", g.D}, {"h", g.h}, {"structure", g.structure}};
}

json to_json(condition_report const & r)
{
    json clauses = json::array();
    for (auto const & c : r.clauses)
        clauses.push_back(to_json(c));
    return {{"curve", r.curve}, {"ell", r.ell}, {"d", r.d}, {"clauses", clauses}, {"overall", to_string(r.overall)}};
}

json to_json(hypothesis_report const & r)
{
    json clauses = json::array();
    for (auto const & c : r.clauses)
        clauses.push_back(to_json(c));
    return {{"ell", r.ell},
            {"point", r.torsion_point ? to_json(*r.torsion_point) : json(nullptr)},
            {"clauses", clauses},
            {"passed", r.passed}};
}

json to_json(twist_candidate const & row)
{
    return {{"d", row.d},
            {"D", row.D},
            {"overall", to_string(row.overall)},
            {"h", row.h ? json(*row.h) : json(nullptr)},
            {"ell_rank", row.ell_rank ? json(*row.ell_rank) : json(nullptr)},
            {"selmer_lb", row.selmer_lb ? json(to_string(*row.selmer_lb)) : json(nullptr)},
            {"verdict", row.verdict ? json(to_string(*row.verdict)) : json(nullptr)},
            {"failed_clauses", row.failed_clauses},
            {"note", row.note}};
}

json to_json(ray_class_data const & r)
{
    json structure = json::array();
    for (auto const & s : r.structure)
        structure.push_back(to_string(s));
    return {{"d", r.d},
            {"D", r.D},
            {"S", r.moduli},
            {"h", r.h},
            {"units_mod_m", to_string(r.units_mod_m)},
            {"unit_image", r.unit_image},
            {"structure", structure},
            {"order", to_string(r.order)}};
}

std::string to_csv(std::vector<twist_candidate> const & rows)
{
    std::string out = "d,D,h,ell_rank,selmer_lb,verdict,failed_clauses\n";
    for (auto const & r : rows) {
        out += std::to_string(r.d) + "," + std::to_string(r.D) + ",";
        out += (r.h ? std::to_string(*r.h) : "") + ",";
        out += (r.ell_rank ? std::to_string(*r.ell_rank) : "") + ",";
        out += (r.selmer_lb ? to_string(*r.selmer_lb) : "") + ",";
        out += (r.verdict ? to_string(*r.verdict) : "") + ",";
        out += csv_field(join(r.failed_clauses, ';')) + "\n";
    }
    return out;
}

std::vector<example_check> golden_examples()
{
    std::vector<example_check> rows;
    auto add = [&](std::string name, std::string status, std::string detail) {
        rows.push_back({std::move(name), std::move(status), std::move(detail)});
    };

    {
        mpz_class a = -7, b = 11;
        curve e(0, 0, 0, a, b);
        qpoly want{mpq_class(-a * a), mpq_class(12 * b), mpq_class(6 * a), 0, 3};
        qpoly got = division_polynomial(e, 3).psi;
        add("psi_3 = 3x^4 + 6ax^2 + 12bx - a^2", got == want ? "PASS" : "FAIL",
            "y^2 = x^3 - 7x + 11: " + to_string(got));
    }

    curve big = curve::parse(example_curve);
    factor_shape fs = psi_factor_shape(big, 13, 6);
    std::vector<zpoly> cubics;
    for (auto const & f : fs.factors)
        if (f.degree() == 3)
            cubics.push_back(f);
    {
        std::vector<std::string> names;
        for (auto const & c : cubics)
            names.push_back(to_string(c));
        add("psi_13 of " + std::string(example_curve) + " has a cubic factor", cubics.empty() ? "FAIL" : "PASS",
            cubics.empty() ? "no cubic factor" : join(names, ';'));
    }

    std::string dk, padic, zeta;
    std::string dk_status = "PASS", padic_status = "PASS", zeta_status = "PASS";
    for (auto const & c : cubics) {
        number_field k = make_number_field(c);
        prime_split s = dedekind_split(k, 2);
        if (!s.determined)
            dk_status = dk_status == "FAIL" ? "FAIL" : "UNDETERMINED";
        else if (!splits_completely(s, 3))
            dk_status = "FAIL";
        dk += (dk.empty() ? "" : "; ") + shape_text(s);
        prime_split r = split_by_padic_roots(k, 2);
        if (!splits_completely(r, 3))
            padic_status = "FAIL";
        padic += (padic.empty() ? "" : "; ") + shape_text(r);
        bool no = zeta_in_field(k, 13) == zeta_verdict::no;
        if (!no)
            zeta_status = "FAIL";
        zeta += std::string(zeta.empty() ? "" : "; ") + (no ? "No" : "Undetermined");
    }
    if (cubics.empty())
        dk_status = padic_status = zeta_status = "FAIL";
    add("2 splits in the cubic field (Dedekind)", dk_status, dk);
    add("2 splits in the cubic field (2-adic roots)", padic_status, padic);
    add("zeta_13 not in the cubic field", zeta_status, zeta);
    {
        supersingular_result ss = is_supersingular(big, 13);
        add("not supersingular at 13", ss.verdict == supersingular_verdict::no ? "PASS" : "FAIL",
            to_string(ss.verdict) + ": " + ss.reason);
    }

    curve e = curve::parse(scan_curve);
    {
        s_sets s = compute_s_sets(e, 5);
        add("S_tilde empty for " + std::string(scan_curve) + " at ell = 5", s.s_tilde.empty() ? "PASS" : "FAIL",
            "S_tilde = " + std::to_string(s.s_tilde.size()) + " primes");
    }
    search_options opt;
    opt.lo = -3000;
    opt.hi = -3;
    auto scan = search_twists(e, 5, opt);
    {
        auto it = std::find_if(scan.begin(), scan.end(), [](auto const & r) { return r.d == -37; });
        bool ok = it != scan.end() && it->verdict == selmer_verdict::trivial && it->selmer_lb == mpz_class(1);
        corollary_result c = corollary_e_verdict(e, 5, -37);
        ok = ok && c.lower == 1 && c.upper == 1;
        add("d = -37 admissible, SelmerTrivial, bounds [1,1]", ok ? "PASS" : "FAIL",
            it == scan.end() ? "d = -37 not in scan" : "h = " + std::to_string(it->h.value_or(0)));
    }
    {
        condition_report r = admissibility_check(e, 5, -13);
        bool ok = r.overall == admissibility::inadmissible &&
                  r.failed_clauses() == std::vector<std::string>{"local_symbol_11"};
        add("d = -13 rejected by the symbol at 11", ok ? "PASS" : "FAIL", join(r.failed_clauses(), ';'));
    }
    {
        auto it = std::find_if(scan.begin(), scan.end(),
                               [](auto const & r) { return r.verdict == selmer_verdict::nontrivial; });
        if (it == scan.end()) {
            add("admissible d with 5 | h is SelmerNontrivial", "FAIL", "none in [-3000,-3]");
        } else {
            corollary_result c = corollary_e_verdict(e, 5, it->d);
            add("admissible d with 5 | h is SelmerNontrivial", "PASS",
                "d = " + std::to_string(it->d) + ", h = " + std::to_string(*it->h) + ", bounds [" +
                    to_string(c.lower) + "," + to_string(c.upper) + "]");
        }
    }
    return rows;
}

int run(std::vector<std::string> const & args, std::ostream & out, std::ostream & err)
{
    CLI::App app{"Quadratic twist Selmer bounds for elliptic curves over Q", "twistsel"};
    app.require_subcommand(1);

    std::string curve_text, format = "json", range_text = "-1000:-3", mode_text = "corollary-e", character;
    std::string factor_text, s_text;
    int ell = 0, n = 0, bound = 6;
    long long d = 0, D = 0, p = 0;
    bool explain = false;
    unsigned threads = 0;

    auto curve_opt = [&](CLI::App * sub) { sub->add_option("--curve", curve_text, "[a1,a2,a3,a4,a6]")->required(); };
    auto format_opt = [&](CLI::App * sub, std::vector<std::string> allowed) {
        sub->add_option("--format", format, "output format")->check(CLI::IsMember(allowed));
    };

    auto * c_inv = app.add_subcommand("invariants", "b-, c-invariants, discriminant and j");
    curve_opt(c_inv);
    auto * c_local = app.add_subcommand("local", "Tate's algorithm at one prime");
    curve_opt(c_local);
    c_local->add_option("--p", p, "prime")->required();
    auto * c_cond = app.add_subcommand("conductor", "conductor and minimal model");
    curve_opt(c_cond);
    auto * c_tors = app.add_subcommand("torsion", "rational ell-torsion point and ell-isogeny");
    curve_opt(c_tors);
    c_tors->add_option("--ell", ell, "odd prime")->required();
    auto * c_div = app.add_subcommand("divpoly", "division polynomial psi_n");
    curve_opt(c_div);
    c_div->add_option("--n", n, "index, 1..40")->required();
    auto * c_shape = app.add_subcommand("factor-shape", "factors of psi_ell of bounded degree");
    curve_opt(c_shape);
    c_shape->add_option("--ell", ell, "odd prime <= 13")->required();
    c_shape->add_option("--degree-bound", bound, "largest factor degree (1..12)");
    auto * c_field = app.add_subcommand("torsion-field", "Q(alpha, sqrt f(alpha)) for a factor of psi_ell");
    curve_opt(c_field);
    c_field->add_option("--ell", ell, "odd prime")->required();
    c_field->add_option("--factor", factor_text, "irreducible factor of psi_ell, [c0,c1,...]")->required();
    c_field->add_option("--p", p, "also report the splitting of this prime");
    auto * c_class = app.add_subcommand("classgroup", "class group of discriminant D < 0");
    c_class->add_option("--D", D, "discriminant")->required();
    c_class->add_option("--ell", ell, "also report the ell-rank");
    auto * c_ray = app.add_subcommand("rayclass", "ray class group of Q(sqrt d) modulo the primes in S");
    c_ray->add_option("--d", d, "negative squarefree d")->required();
    c_ray->add_option("--S", s_text, "comma separated primes");
    c_ray->add_option("--ell", ell, "also report the ell-rank");
    auto * c_check = app.add_subcommand("check", "hypotheses and admissibility of one twist");
    curve_opt(c_check);
    c_check->add_option("--ell", ell, "odd prime >= 5")->required();
    c_check->add_option("--d", d, "twist parameter")->required();
    c_check->add_option("--character", character, "order-ell character q1:k1,q2:k2,... instead of p = -1 mod ell");
    format_opt(c_check, {"json", "text"});
    auto * c_search = app.add_subcommand("search", "scan twist parameters");
    curve_opt(c_search);
    c_search->add_option("--ell", ell, "odd prime >= 5")->required();
    c_search->add_option("--range", range_text, "LO:HI with HI < 0");
    c_search->add_option("--mode", mode_text, "corollary-e or lower-bound")
        ->check(CLI::IsMember({"corollary-e", "lower-bound"}));
    c_search->add_flag("--explain", explain, "also list rejected d with their failed clauses");
    c_search->add_option("--threads", threads, "worker threads (0: all cores)");
    c_search->add_option("--character", character, "order-ell character q1:k1,q2:k2,...");
    format_opt(c_search, {"json", "csv"});
    auto * c_verify = app.add_subcommand("verify-examples", "rerun the worked examples");
    format_opt(c_verify, {"json", "text"});

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (CLI::CallForHelp const &) {
        out << app.help();
        return exit_ok;
    } catch (CLI::CallForAllHelp const &) {
        out << app.help("", CLI::AppFormatMode::All);
        return exit_ok;
    } catch (CLI::ParseError const & e) {
        err << "error: " << e.what() << "\n" << app.help();
        return exit_error;
    }
    auto emit = [&](json const & j) { out << j.dump() << "\n"; };
    auto chi = [&]() -> std::optional<dirichlet_predicate> {
        if (character.empty())
            return std::nullopt;
        return dirichlet_predicate::parse(ell, character);
    };

    try {
        if (c_inv->parsed()) {
            curve e = curve::parse(curve_text);
            auto const & v = e.invariants();
            emit({{"curve", e.to_string()},
                  {"b2", to_string(v.b2)},
                  {"b4", to_string(v.b4)},
                  {"b6", to_string(v.b6)},
                  {"b8", to_string(v.b8)},
                  {"c4", to_string(v.c4)},
                  {"c6", to_string(v.c6)},
                  {"disc", to_string(v.disc)},
                  {"j", to_string(v.j)}});
        } else if (c_local->parsed()) {
            curve e = curve::parse(curve_text);
            if (p < 2 || !is_prime(mpz_class(std::to_string(p))))
                throw invalid_parameter("--p must be prime, got " + std::to_string(p));
            json j = to_json(local_reduction(e, mpz_class(std::to_string(p))));
            j["curve"] = e.to_string();
            emit(j);
        } else if (c_cond->parsed()) {
            curve e = curve::parse(curve_text);
            conductor_data c = conductor(e);
            json bad = json::array();
            for (auto const & ld : c.bad)
                bad.push_back(to_json(ld));
            minimal_result m = minimal_model(e);
            emit({{"curve", e.to_string()},
                  {"conductor", to_string(c.n)},
                  {"minimal_model", m.model.to_string()},
                  {"transform", json::array({to_string(m.w.u), to_string(m.w.r), to_string(m.w.s), to_string(m.w.t)})},
                  {"disc_minimal", to_string(m.model.invariants().disc)},
                  {"bad_primes", bad}});
        } else if (c_tors->parsed()) {
            curve e = curve::parse(curve_text);
            auto pt = rational_ell_torsion_point(e, ell);
            json j = {{"curve", e.to_string()}, {"ell", ell}, {"point", pt ? to_json(*pt) : json(nullptr)}};
            if (ell <= 13) {
                isogeny_witness w = has_rational_isogeny(e, ell);
                j["isogeny"] = w.exists;
                j["kernel"] = w.kernel ? coeffs(*w.kernel) : json(nullptr);
            }
            emit(j);
        } else if (c_div->parsed()) {
            curve e = curve::parse(curve_text);
            division_poly dp = division_polynomial(e, n);
            emit({{"curve", e.to_string()}, {"n", n}, {"psi", coeffs(dp.psi)}, {"y_factor", dp.y_factor}});
        } else if (c_shape->parsed()) {
            curve e = curve::parse(curve_text);
            factor_shape fs = psi_factor_shape(e, ell, bound);
            json facs = json::array();
            for (auto const & f : fs.factors)
                facs.push_back(coeffs(f));
            emit({{"curve", e.to_string()},
                  {"ell", ell},
                  {"degree_bound", bound},
                  {"factors", facs},
                  {"residual_degree", fs.residual_degree}});
        } else if (c_field->parsed()) {
            curve e = curve::parse(curve_text);
            zpoly g = parse_zpoly(factor_text);
            zpoly k = torsion_field_polynomial(e, ell, g);
            json j = {{"curve", e.to_string()}, {"ell", ell}, {"factor", coeffs(g)}, {"polynomial", coeffs(k)},
                      {"degree", k.degree()}};
            int code = exit_ok;
            if (p) {
                if (p < 2 || !is_prime(mpz_class(std::to_string(p))))
                    throw invalid_parameter("--p must be prime, got " + std::to_string(p));
                number_field f = make_number_field(k);
                prime_split s = dedekind_split(f, static_cast<std::uint64_t>(p));
                j["p"] = p;
                j["dedekind"] = split_json(s);
                j["padic_split"] = split_json(split_by_padic_roots(f, static_cast<std::uint64_t>(p)));
                if (!s.determined)
                    code = exit_undetermined;
            }
            emit(j);
            return code;
        } else if (c_class->parsed()) {
            class_group_data g = class_group_structure(D);
            json j = to_json(g);
            if (ell)
                j["ell_rank"] = ell_rank(g.structure, ell);
            emit(j);
        } else if (c_ray->parsed()) {
            auto S = parse_prime_list(s_text);
            json j = to_json(ray_class_group(d, S));
            if (ell)
                j["ell_rank"] = ray_class_ell_rank(d, S, ell);
            emit(j);
        } else if (c_check->parsed()) {
            curve e = curve::parse(curve_text);
            auto predicate = chi();
            hypothesis_report h = hypothesis_check(e, ell);
            if (!h.passed) {
                if (format == "text") {
                    out << "curve " << e.to_string() << "  ell " << ell << ": hypotheses fail\n";
                    print_clauses(out, h.clauses);
                } else {
                    emit({{"curve", e.to_string()}, {"ell", ell}, {"d", d}, {"hypotheses", to_json(h)},
                          {"overall", "HypothesisFailed"}});
                }
                err << "hypotheses fail for " << e.to_string() << " at ell = " << ell << "\n";
                return exit_precondition;
            }
            condition_report r = admissibility_check(e, ell, d, predicate);
            if (format == "text") {
                out << "curve " << r.curve << "  ell " << r.ell << "  d " << r.d << "\n";
                print_clauses(out, r.clauses);
                out << "overall " << to_string(r.overall) << "\n";
            } else {
                emit(to_json(r));
            }
            return r.overall == admissibility::undetermined ? exit_undetermined : exit_ok;
        } else if (c_search->parsed()) {
            curve e = curve::parse(curve_text);
            search_options opt;
            std::tie(opt.lo, opt.hi) = parse_range(range_text);
            opt.mode = mode_text == "lower-bound" ? search_mode::lower_bound_only : search_mode::corollary_e;
            opt.explain = explain;
            opt.threads = threads;
            opt.chi = chi();
            auto rows = search_twists(e, ell, opt);
            if (format == "csv") {
                out << to_csv(rows);
            } else {
                json a = json::array();
                for (auto const & r : rows)
                    a.push_back(to_json(r));
                emit(a);
            }
            bool any_determined = false, any_undetermined = false;
            for (auto const & r : rows) {
                if (r.overall != admissibility::admissible)
                    continue;
                (r.selmer_lb ? any_determined : any_undetermined) = true;
            }
            return any_undetermined && !any_determined ? exit_undetermined : exit_ok;
        } else if (c_verify->parsed()) {
            auto rows = golden_examples();
            bool fail = false, undetermined = false;
            for (auto const & r : rows) {
                fail |= r.status == "FAIL";
                undetermined |= r.status == "UNDETERMINED";
            }
            if (format == "text") {
                for (auto const & r : rows)
                    out << std::left << std::setw(14) << r.status << std::setw(64) << r.name << r.detail << "\n";
            } else {
                json a = json::array();
                for (auto const & r : rows)
                    a.push_back({{"name", r.name}, {"status", r.status}, {"detail", r.detail}});
                emit(a);
            }
            return fail ? exit_error : undetermined ? exit_undetermined : exit_ok;
        }
    } catch (invalid_parameter const & e) {
        err << "invalid input: " << e.what() << "\n";
        return exit_precondition;
    } catch (precondition_error const & e) {
        err << "precondition failed: " << e.what() << "\n";
        return exit_precondition;
    } catch (unsupported const & e) {
        err << "unsupported: " << e.what() << "\n";
        return exit_precondition;
    } catch (resource_error const & e) {
        err << "resource limit: " << e.what() << "\n";
        return exit_error;
    } catch (std::exception const & e) {
        err << "internal error: " << e.what() << "\n";
        return exit_error;
    }
    return exit_ok;
}

} // namespace twistsel::cli
