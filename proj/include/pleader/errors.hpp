#pragma once

#include <stdexcept>
#include <string>

namespace pleader {

// Base of every error the library raises. `kind()` is a short stable tag used
// by the CLI for machine-parsable error lines.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* kind() const noexcept { return "error"; }
};

class ParameterError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "parameter"; }
};

// Not enough samples / octaves for the requested decomposition depth.
class DepthError : public Error {
 public:
  DepthError(const std::string& what, int max_feasible)
      : Error(what), max_feasible_(max_feasible) {}
  int max_feasible() const noexcept { return max_feasible_; }
  const char* kind() const noexcept override { return "depth"; }

 private:
  int max_feasible_;
};

// Zero (or subnormal) values where logs or negative powers are needed.
class DegenerateValueError : public Error {
 public:
  DegenerateValueError(const std::string& what, std::size_t count)
      : Error(what), count_(count) {}
  std::size_t count() const noexcept { return count_; }
  const char* kind() const noexcept override { return "degenerate"; }

 private:
  std::size_t count_;
};

class RegressionError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "regression"; }
};

// Malformed input files. `line` is 1-based, 0 when not tied to a line.
class IngestError : public Error {
 public:
  IngestError(const std::string& what, std::size_t line = 0)
      : Error(line ? what + " (line " + std::to_string(line) + ")" : what), line_(line) {}
  std::size_t line() const noexcept { return line_; }
  const char* kind() const noexcept override { return "ingest"; }

 private:
  std::size_t line_;
};

// Too many failed realizations in a Monte Carlo run.
class MonteCarloError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "montecarlo"; }
};

}  // namespace pleader
