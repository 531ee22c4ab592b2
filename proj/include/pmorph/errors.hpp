#pragma once

// Error taxonomy for the whole library. Every failure mode callers are meant
// to handle gets its own type; anything else surfaces as std::runtime_error.

#include <stdexcept>
#include <string>

namespace pmorph {

struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// ----- geometry / sampling -----
struct AntipodalPairError : Error { using Error::Error; };   // geodesic undefined
struct NearPoleError : Error { using Error::Error; };        // projection input too close to pole
struct SamplingExhaustedError : Error { using Error::Error; };

// ----- flows / quadrature -----
struct StepSizeInvalidError : Error { using Error::Error; };
struct QuadratureTooCoarseError : Error { using Error::Error; };
struct LayoutInfeasibleError : Error { using Error::Error; };
struct CollarTooWideError : Error { using Error::Error; };

// ----- braid extraction -----
struct PoleCollisionError : Error { using Error::Error; };
struct TangentialCrossingError : Error { using Error::Error; };
struct StrandMismatchError : Error { using Error::Error; };

// ----- braid words / diagrams -----
struct ParseError : Error { using Error::Error; };
struct DiagramDegenerateError : Error { using Error::Error; };

// ----- experiments / configuration -----
struct EquatorNotPreservedError : Error { using Error::Error; };
struct IncompleteCoefficientsError : Error { using Error::Error; };
struct ConfigInvalidError : Error { using Error::Error; };
struct NumericalFailureError : Error { using Error::Error; };

}  // namespace pmorph
