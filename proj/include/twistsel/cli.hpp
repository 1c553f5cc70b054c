#ifndef TWISTSEL_CLI_HPP
#define TWISTSEL_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "twistsel/checker.hpp"
#include "twistsel/quadclass.hpp"
#include "twistsel/search.hpp"

namespace twistsel::cli {

/* Process exit codes. */
inline constexpr int exit_ok = 0;
inline constexpr int exit_error = 1;        /* usage or internal error */
inline constexpr int exit_precondition = 2; /* hypothesis, precondition or bad input */
inline constexpr int exit_undetermined = 3;

/* args excludes the program name */
int run(std::vector<std::string> const & args, std::ostream & out, std::ostream & err);

/* Emitters shared by the commands; keys come out sorted. */
nlohmann::json to_json(class_group_data const & g);
nlohmann::json to_json(condition_report const & r);
nlohmann::json to_json(hypothesis_report const & r);
nlohmann::json to_json(twist_candidate const & row);
nlohmann::json to_json(ray_class_data const & r);
std::string to_csv(std::vector<twist_candidate> const & rows);

struct example_check {
    std::string name;
    std::string status; /* PASS, FAIL or UNDETERMINED */
    std::string detail;
};

/* The worked examples: the 13-division cubic and its field, psi_3, and the
 * twist scan of [0,-1,1,0,0] at ell = 5. */
std::vector<example_check> golden_examples();

} // namespace twistsel::cli

#endif /* TWISTSEL_CLI_HPP */
