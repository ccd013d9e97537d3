#pragma once

#include <functional>
#include <stdexcept>
#include <string>

namespace bll {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Invalid arguments or violated preconditions of an operation.
class ValidationError : public Error {
  public:
    using Error::Error;
};

class CurlNotZero : public Error {
  public:
    using Error::Error;
};

class NonzeroMean : public Error {
  public:
    using Error::Error;
};

class NonPositiveConcentration : public Error {
  public:
    using Error::Error;
};

/// min(p + pbar) dropped to or below the admissible floor.
class PositivityViolation : public Error {
  public:
    using Error::Error;
};

/// Non-finite values appeared during time integration.
class SolverError : public Error {
  public:
    using Error::Error;
};

class DomainTooSmall : public Error {
  public:
    using Error::Error;
};

class OverflowGuard : public Error {
  public:
    using Error::Error;
};

class ParseError : public Error {
  public:
    using Error::Error;
};

class ChecksumMismatch : public Error {
  public:
    using Error::Error;
};

class VersionMismatch : public Error {
  public:
    using Error::Error;
};

using WarningSink = std::function<void(const std::string&)>;

/// Replaces the process-wide warning sink and returns the previous one.
/// The default sink writes to stderr.
WarningSink set_warning_sink(WarningSink sink);

void warn(const std::string& message);

}  // namespace bll
