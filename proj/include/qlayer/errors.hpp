#pragma once
#include <stdexcept>
#include <string>

namespace qlayer {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// config text is malformed; carries 1-based line number when known
struct ParseError : Error {
  int line = 0;
  ParseError(const std::string& msg, int line_ = 0)
      : Error(line_ > 0 ? "line " + std::to_string(line_) + ": " + msg : msg),
        line(line_) {}
};

// a parameter combination violates a hard precondition (a >= rho_m, bad grid, ...)
struct InvalidParams : Error {
  using Error::Error;
};

// a variational trial function fails its admissibility requirements
struct NonAdmissibleTrial : Error {
  using Error::Error;
};

// iterative kernels failed to meet their contract (CG stall, factorization breakdown)
struct SolverError : Error {
  using Error::Error;
};

}  // namespace qlayer
