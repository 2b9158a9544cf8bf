#ifndef SIO_ERRORS_HPP_
#define SIO_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace sio {

// Argument outside the mathematical domain of an operation (non-finite
// values, non-monotone grids, size sets touching zero, ...).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A query reached outside the window on which a measure or a sampled
// field is defined.
class WindowError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// A quadrature grid cannot resolve the requested integral. Carries the
// fraction of the probe's spectral energy that falls outside the grid.
class AccuracyError : public std::runtime_error {
 public:
  AccuracyError(const std::string& what, double tail_mass)
      : std::runtime_error(what), tail_mass_(tail_mass) {}
  double tail_mass() const { return tail_mass_; }

 private:
  double tail_mass_;
};

class UnsupportedRepresentation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace sio

#endif  // SIO_ERRORS_HPP_
