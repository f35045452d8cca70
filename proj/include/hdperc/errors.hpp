#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hdperc {

//! Base class for every error raised by the library.
class Error : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

//! A ModelParams admissibility constraint does not hold.
class InvalidParams : public Error
{
  public:
    using Error::Error;
};

//! Two circles touch at a single point (or three meet at one point) within tolerance.
class DegenerateTangency : public Error
{
  public:
    using Error::Error;
};

//! A membership query landed on a contour within tolerance.
class OnBoundary : public Error
{
  public:
    using Error::Error;
};

//! Contour extraction was requested for a boundary-touching component.
class InfiniteComponent : public Error
{
  public:
    using Error::Error;
};

//! Fewer separated arc midpoints than ceil(cK) were found.
class PlanInfeasible : public Error
{
  public:
    using Error::Error;
};

//! Probability mass beyond the oracle's particle cap exceeds the allowed tail.
class TruncationError : public Error
{
  public:
    using Error::Error;
};

//! Small-contour enumeration grid exceeds the configured candidate cap.
class SearchTooLarge : public Error
{
  public:
    using Error::Error;
};

//! Config text is malformed. Carries a 1-based line and column.
class ParseError : public Error
{
  public:
    ParseError(const std::string& what, std::size_t line, std::size_t column);

    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

  private:
    std::size_t line_;
    std::size_t column_;
};

//! Config is well-formed but violates a model or run constraint.
class ValidationError : public Error
{
  public:
    using Error::Error;
};

class VersionMismatch : public Error
{
  public:
    using Error::Error;
};

class CorruptCheckpoint : public Error
{
  public:
    using Error::Error;
};

} // namespace hdperc
