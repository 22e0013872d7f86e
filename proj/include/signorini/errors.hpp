#pragma once

#include <stdexcept>
#include <string>

namespace signorini {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid input: a constant, grid, mask or radius outside its admissible set.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A symbol was requested at the zero frequency where it is undefined.
class SingularFrequencyError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// The zero Fourier mode of a field was required to vanish but did not.
class ZeroModeError : public DomainError {
 public:
  ZeroModeError(const std::string& what, double magnitude)
      : DomainError(what), magnitude_(magnitude) {}
  double magnitude() const { return magnitude_; }

 private:
  double magnitude_;
};

}  // namespace signorini
