#pragma once

#include <stdexcept>
#include <string>

namespace susyinv {

// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A precondition on an argument was violated.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

class NotHermitian : public InvalidInput {
 public:
  NotHermitian(const std::string& what, double defect)
      : InvalidInput(what), defect_(defect) {}
  double defect() const noexcept { return defect_; }

 private:
  double defect_;
};

class StepTooLarge : public InvalidInput {
 public:
  StepTooLarge(const std::string& what, double suggested_dt)
      : InvalidInput(what), suggested_dt_(suggested_dt) {}
  double suggested_dt() const noexcept { return suggested_dt_; }

 private:
  double suggested_dt_;
};

// Zero/positive eigenvalue split of I± cannot be decided at the cut.
class PairingAmbiguity : public Error {
 public:
  PairingAmbiguity(const std::string& what, int kernel_dim_strict,
                   int kernel_dim_loose)
      : Error(what),
        kernel_dim_strict_(kernel_dim_strict),
        kernel_dim_loose_(kernel_dim_loose) {}
  int kernel_dim_strict() const noexcept { return kernel_dim_strict_; }
  int kernel_dim_loose() const noexcept { return kernel_dim_loose_; }

 private:
  int kernel_dim_strict_;
  int kernel_dim_loose_;
};

class EigenvalueCrossing : public Error {
 public:
  EigenvalueCrossing(const std::string& what, double t)
      : Error(what), t_(t) {}
  double time() const noexcept { return t_; }

 private:
  double t_;
};

}  // namespace susyinv
