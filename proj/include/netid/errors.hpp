#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace netid {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Frequency-response evaluation hit a pole on the unit circle.
class EvaluationError : public Error {
 public:
  EvaluationError(const std::string& what, double omega) : Error(what), omega_(omega) {}
  double omega() const noexcept { return omega_; }

 private:
  double omega_;
};

/// A complex linear system was singular at some grid frequency.
class SingularSystemError : public Error {
 public:
  SingularSystemError(const std::string& what, double omega) : Error(what), omega_(omega) {}
  double omega() const noexcept { return omega_; }

 private:
  double omega_;
};

/// Network construction invariant violated (bad indices, ill-posed feedthrough).
class ModelError : public Error {
 public:
  using Error::Error;
};

/// Node signals became non-finite during simulation.
class SimulationDiverged : public Error {
 public:
  SimulationDiverged(const std::string& what, std::size_t sample) : Error(what), sample_(sample) {}
  std::size_t sample() const noexcept { return sample_; }

 private:
  std::size_t sample_;
};

/// The data cannot support the requested estimate (unexcited input, rank deficiency).
class IdentificationError : public Error {
 public:
  using Error::Error;
};

/// Malformed network, scenario or result file.
class ParseError : public Error {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& msg)
      : Error(source + ":" + std::to_string(line) + ": " + msg), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Wraps an error raised inside one stage of a multi-stage pipeline.
class StageError : public Error {
 public:
  StageError(std::string stage, const std::string& what)
      : Error(stage + ": " + what), stage_(std::move(stage)) {}
  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

}  // namespace netid
