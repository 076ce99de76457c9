#pragma once

#include <stdexcept>
#include <string>

namespace qcs {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class InvalidParameter : public Error {
public:
  using Error::Error;
};

/// A Coulomb term was evaluated exactly on its singular locus with no softening.
class SingularityError : public Error {
public:
  using Error::Error;
};

class NormalizationError : public Error {
public:
  using Error::Error;
};

class InvalidWeight : public Error {
public:
  using Error::Error;
};

} // namespace qcs
