#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace toboggan {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Invalid arguments or violated preconditions.
class InvalidArgument : public Error {
public:
  using Error::Error;
};

/// Evaluation at the branch point, at a pole of the potential, or at a pole of Gamma.
class SingularityError : public Error {
public:
  using Error::Error;
};

/// A boundary condition was requested in a sector where it is not defined.
class WedgeError : public Error {
public:
  using Error::Error;
};

/// Step-count exhaustion or a node of psi too close to the contour.
class PropagationError : public Error {
public:
  PropagationError(const std::string& what, double parameter)
      : Error(what), parameter_(parameter) {}
  double parameter() const noexcept { return parameter_; }

private:
  double parameter_;
};

/// Series evaluation failed to reach the requested accuracy.
class PrecisionLossError : public Error {
public:
  PrecisionLossError(const std::string& what, std::complex<double> partial)
      : Error(what), partial_(partial) {}
  std::complex<double> partial_sum() const noexcept { return partial_; }

private:
  std::complex<double> partial_;
};

/// Configuration text could not be parsed.
class ParseError : public Error {
public:
  ParseError(const std::string& what, int line)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const noexcept { return line_; }

private:
  int line_;
};

}  // namespace toboggan
