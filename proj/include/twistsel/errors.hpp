#ifndef TWISTSEL_ERRORS_HPP
#define TWISTSEL_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace twistsel {

/* Malformed or out-of-domain argument (d not squarefree, singular curve,
 * unparsable encoding, ...). */
class invalid_parameter : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/* The inputs are well formed but an operation's precondition does not
 * hold (bad reduction where good is required, hypothesis failure, ...). */
class precondition_error : public std::logic_error {
  public:
    using std::logic_error::logic_error;
};

/* A hypothesis of the twist theorems fails for the given curve. */
class hypothesis_error : public precondition_error {
  public:
    using precondition_error::precondition_error;
};

/* Request outside what this library implements (positive discriminants,
 * primes below 5 for supersingularity, n > 40 for division polynomials). */
class unsupported : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

/* A computation exceeded one of the hard resource limits. */
class resource_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

} // namespace twistsel

#endif /* TWISTSEL_ERRORS_HPP */
