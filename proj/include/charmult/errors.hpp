#pragma once

#include <stdexcept>
#include <string>

namespace charmult {

/// Base class for everything this library throws on purpose.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// parsing / serialization
struct ParseError : Error { using Error::Error; };

// group construction and bookkeeping
struct ClosureCapExceeded : Error { using Error::Error; };
struct GroupMismatch : Error { using Error::Error; };
struct NotASubgroup : Error { using Error::Error; };
struct NotNormal : Error { using Error::Error; };
struct NotAHomomorphism : Error { using Error::Error; };

// character theory
struct NotACharacter : Error { using Error::Error; };
struct NotRational : Error { using Error::Error; };
struct DivisionByZero : Error { using Error::Error; };

// unitary matrix groups
struct RequiresHyperbolicForm : Error { using Error::Error; };
struct NoQuadraticCharacter : Error { using Error::Error; };
struct NoSuitableRho : Error { using Error::Error; };

// truncated local-field arithmetic
struct PrecisionExhausted : Error { using Error::Error; };
struct ChainViolation : Error { using Error::Error; };
struct NotInStabilizer : Error { using Error::Error; };
struct NotNormOne : Error { using Error::Error; };

// multiplicity checks
struct PreconditionFailed : Error { using Error::Error; };
struct HypothesisFailed : Error { using Error::Error; };
struct StructureFailed : Error { using Error::Error; };

struct UnsupportedCase : Error { using Error::Error; };

/// An internal invariant broke; indicates a bug, not bad input.
struct InternalError : Error { using Error::Error; };

} // namespace charmult
