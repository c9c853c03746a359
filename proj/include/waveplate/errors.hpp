#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace waveplate {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ArgumentError : public Error {
 public:
  using Error::Error;
};

// Malformed or inconsistent mesh input.
class MeshError : public Error {
 public:
  using Error::Error;
};

class SingularityError : public Error {
 public:
  SingularityError(const std::string& what, std::size_t pivot)
      : Error(what), pivot_(pivot) {}
  std::size_t pivot() const { return pivot_; }

 private:
  std::size_t pivot_;
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double residual)
      : Error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

// lambda sits (numerically) on the spectrum of the generator.
class SpectrumHitError : public Error {
 public:
  SpectrumHitError(const std::string& what, std::complex<double> lambda)
      : Error(what), lambda_(lambda) {}
  std::complex<double> lambda() const { return lambda_; }

 private:
  std::complex<double> lambda_;
};

class SimulationError : public Error {
 public:
  SimulationError(const std::string& what, double last_time)
      : Error(what), last_time_(last_time) {}
  double last_valid_time() const { return last_time_; }

 private:
  double last_time_;
};

}  // namespace waveplate
