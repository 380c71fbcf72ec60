#pragma once

#include <stdexcept>
#include <string>

namespace canlift {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// precision/ring shape disagreement between operands
struct PrecisionMismatch : Error { using Error::Error; };
// requested precision exceeds what a backend can represent
struct PrecisionBound : Error { using Error::Error; };
// exact division by a power of p failed
struct NotDivisible : Error { using Error::Error; };
// ghost vector is not in the image of the ghost map
struct NonIntegral : Error { using Error::Error; };
// inversion or factor-splitting met a common divisor
struct NotCoprime : Error { using Error::Error; };
// localized element cannot be freed of its auxiliary denominator
struct NotClearable : Error { using Error::Error; };
struct NormalizationFailed : Error { using Error::Error; };
// evaluation point lies over a supersingular residue
struct SupersingularPoint : Error { using Error::Error; };
// curve input is not ordinary
struct NotOrdinary : Error { using Error::Error; };
struct UnsupportedResidue : Error { using Error::Error; };
struct UnsupportedCharacteristic : Error { using Error::Error; };
// independent computation paths disagree
struct PathMismatch : Error { using Error::Error; };
struct Mismatch : Error { using Error::Error; };
// bundled data file absent or unreadable
struct MissingData : Error { using Error::Error; };
// bundled data or a computed certificate failed its check
struct ValidationFailed : Error { using Error::Error; };
struct NoConvergence : Error { using Error::Error; };

}
