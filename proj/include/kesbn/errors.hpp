#pragma once

#include <stdexcept>
#include <string>

namespace kesbn {

// Base class of every error thrown by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// graph
struct CycleError : Error { using Error::Error; };
struct AdjacentError : Error { using Error::Error; };
struct MissingArcError : Error { using Error::Error; };
struct NotCoveredError : Error { using Error::Error; };
struct OverlapError : Error { using Error::Error; };
struct SizeMismatchError : Error { using Error::Error; };

// data / io
struct ParseError : Error { using Error::Error; };
struct EmptyDataError : Error { using Error::Error; };
struct SingleStateError : Error { using Error::Error; };
struct IndexError : Error { using Error::Error; };
struct ConvergenceError : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };

// search / oracle
struct DomainError : Error { using Error::Error; };
struct NoMoveError : Error { using Error::Error; };
struct TooLargeError : Error { using Error::Error; };
struct UnknownClassError : Error { using Error::Error; };

}  // namespace kesbn
