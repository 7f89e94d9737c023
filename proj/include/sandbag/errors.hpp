#pragma once

#include <stdexcept>
#include <string>

namespace sandbag {

// Base class for all library errors. Every failure mode has its own type so
// callers can map them to exit codes or catch them selectively.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// -- model -------------------------------------------------------------------
struct InvalidInstance : Error { using Error::Error; };
struct NonstochasticPmf : Error { using Error::Error; };
struct NegativeScore : Error { using Error::Error; };
struct DuplicateMean : Error { using Error::Error; };
struct NonRepresentableGrid : Error { using Error::Error; };

// -- solver ------------------------------------------------------------------
struct OffGridScore : Error { using Error::Error; };
struct UnknownState : Error { using Error::Error; };

// -- theory ------------------------------------------------------------------
struct NoUniqueSafeArm : Error { using Error::Error; };
struct NoZeroScore : Error { using Error::Error; };
struct NoPositiveScore : Error { using Error::Error; };
struct MismatchedInstance : Error { using Error::Error; };

// -- sim ---------------------------------------------------------------------
struct IncompletePolicy : Error { using Error::Error; };
struct EmptyBatch : Error { using Error::Error; };

// -- detect ------------------------------------------------------------------
struct BothZero : Error { using Error::Error; };
struct EmptySample : Error { using Error::Error; };

// -- io ----------------------------------------------------------------------
struct IoError : Error { using Error::Error; };

}  // namespace sandbag
