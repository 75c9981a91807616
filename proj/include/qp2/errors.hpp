#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qp2/types.hpp"

namespace qp2 {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid problem data (zero parameters, |epsilon| >= 1, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Which denominator of the recurrence (or of E/L) vanished.
enum class PoleFactor { f_prev, f_n, f_n_plus_t, product };

class PoleError : public Error {
 public:
  PoleError(PoleFactor factor, std::optional<std::size_t> index, const std::string& what)
      : Error(what), factor_(factor), index_(index) {}

  PoleFactor factor() const { return factor_; }
  std::optional<std::size_t> index() const { return index_; }

 private:
  PoleFactor factor_;
  std::optional<std::size_t> index_;
};

// Quadratic for f1 lost its leading coefficient.
class DegenerateError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  using Error::Error;
};

// Straight integration path passes too close to a square-root branch point.
class BranchError : public Error {
 public:
  using Error::Error;
};

// Simple pole of the third-kind integrand sits on the [0,1] contour.
class ContourError : public Error {
 public:
  using Error::Error;
};

class PoleProximityError : public Error {
 public:
  using Error::Error;
};

// E0 hit one (or several coincident) critical values of the canonical transform.
class CriticalPointError : public Error {
 public:
  CriticalPointError(std::vector<DegenerateKind> kinds, const std::string& what)
      : Error(what), kinds_(std::move(kinds)) {}

  const std::vector<DegenerateKind>& kinds() const { return kinds_; }
  bool ambiguous() const { return kinds_.size() > 1; }

 private:
  std::vector<DegenerateKind> kinds_;
};

class DegenerateModulusError : public Error {
 public:
  using Error::Error;
};

class FitError : public Error {
 public:
  using Error::Error;
};

class NoNearPeriodError : public Error {
 public:
  NoNearPeriodError(double best_mismatch, const std::string& what)
      : Error(what), best_mismatch_(best_mismatch) {}
  double best_mismatch() const { return best_mismatch_; }

 private:
  double best_mismatch_;
};

}  // namespace qp2
