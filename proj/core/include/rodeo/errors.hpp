#pragma once

#include <stdexcept>
#include <string>

namespace rodeo {

//! Base class for every error raised by the library.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

//! A configuration value or argument violates its documented range.
class ConfigError : public Error
{
public:
  using Error::Error;
};

//! The local fit at a point could not be formed.
class FitError : public Error
{
public:
  using Error::Error;
};

//! Fewer observations carry nonzero kernel weight than the local model has
//! parameters.
class InsufficientSupport : public FitError
{
public:
  using FitError::FitError;
};

//! The weighted normal matrix is rank deficient even after the ridge retry.
class Singular : public FitError
{
public:
  using FitError::FitError;
};

//! An iterative solver hit its sweep limit.
class ConvergenceError : public Error
{
public:
  using Error::Error;
};

} // namespace rodeo
