#ifndef MALAB_ERRORS_HPP
#define MALAB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace malab {

/// Error categories surfaced to the CLI exit-code mapping:
/// everything except Usage maps to exit code 1, Usage to 2.
enum class ErrorKind {
  Domain,       // input outside the mathematical domain of an operation
  Precondition, // a stated precondition fails (infeasible parameters, ...)
  Convergence,  // an iteration failed to reach its tolerance
  Io,           // file format / filesystem problems
  Config,       // config schema violations
  Usage         // malformed command line
};

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& code, const std::string& msg)
      : std::runtime_error(code + ": " + msg), kind_(kind), code_(code) {}

  ErrorKind kind() const { return kind_; }
  const std::string& code() const { return code_; }

private:
  ErrorKind kind_;
  std::string code_;
};

[[noreturn]] inline void throw_domain(const std::string& code, const std::string& msg) {
  throw Error(ErrorKind::Domain, code, msg);
}
[[noreturn]] inline void throw_precondition(const std::string& code, const std::string& msg) {
  throw Error(ErrorKind::Precondition, code, msg);
}
[[noreturn]] inline void throw_convergence(const std::string& code, const std::string& msg) {
  throw Error(ErrorKind::Convergence, code, msg);
}

}  // namespace malab

#endif
