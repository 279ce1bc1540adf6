#pragma once

#include <stdexcept>
#include <string>

namespace leray {

/// Base of every error raised by the library. `exit_code()` is the process
/// status the CLI reports for it.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what, int exit_code = 1)
      : std::runtime_error(what), exit_code_(exit_code) {}
  int exit_code() const { return exit_code_; }

 private:
  int exit_code_;
};

class InvariantViolation : public Error {
 public:
  explicit InvariantViolation(const std::string& what) : Error(what, 10) {}
};

class SymmetryViolation : public Error {
 public:
  explicit SymmetryViolation(const std::string& what) : Error(what, 11) {}
};

class GridMismatch : public Error {
 public:
  explicit GridMismatch(const std::string& what) : Error(what, 12) {}
};

class CriticalityViolation : public Error {
 public:
  explicit CriticalityViolation(const std::string& what) : Error(what, 13) {}
};

class MissingMagneticField : public Error {
 public:
  explicit MissingMagneticField(const std::string& what) : Error(what, 14) {}
};

class NonFinite : public Error {
 public:
  explicit NonFinite(const std::string& what) : Error(what, 15) {}
};

/// Wraps a failure inside a time loop with the time at which it happened.
class StepError : public Error {
 public:
  StepError(const std::string& what, double t, int exit_code)
      : Error(what, exit_code), time_(t) {}
  double time() const { return time_; }

 private:
  double time_;
};

class TooFewSamples : public Error {
 public:
  explicit TooFewSamples(const std::string& what) : Error(what, 16) {}
};

class NonMonotone : public Error {
 public:
  explicit NonMonotone(const std::string& what) : Error(what, 17) {}
};

class SyntaxError : public Error {
 public:
  explicit SyntaxError(const std::string& what) : Error(what, 20) {}
};

class UnknownKey : public Error {
 public:
  explicit UnknownKey(const std::string& what) : Error(what, 21) {}
};

class CheckpointError : public Error {
 public:
  explicit CheckpointError(const std::string& what) : Error(what, 22) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(what, 23) {}
};

}  // namespace leray
