#pragma once

#include <stdexcept>
#include <string>

namespace rydsim {

// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Bad user input: malformed config, out-of-range parameter, unknown level
// label, non-Hermitian diagonal coupling, ...  CLI exit code 1.
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what) : Error(what) {}
};

// Integration failure: step-size underflow, tolerance not reachable, norm
// drift beyond budget, optimizer non-convergence.  CLI exit code 2.
class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what) : Error(what) {}
};

// Filesystem trouble while reading configs or writing artifacts.  CLI exit
// code 3.
class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(what) {}
};

}  // namespace rydsim
