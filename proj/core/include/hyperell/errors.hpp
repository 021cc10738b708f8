#pragma once

#include <stdexcept>
#include <string>

namespace hyperell {

struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// input / precondition violations
struct NotSquarefree : Error { using Error::Error; };
struct DegreeTooSmall : Error { using Error::Error; };
struct EvenDegreeUnsupported : Error { using Error::Error; };
struct RadiusTooLarge : Error { using Error::Error; };
struct LengthMismatch : Error { using Error::Error; };
struct InputError : Error { using Error::Error; };

// numerical failures
struct DegenerateConfiguration : Error { using Error::Error; };
struct PoleOnPath : Error { using Error::Error; };
struct NoConvergence : Error { using Error::Error; };
struct ContinuationAmbiguous : Error { using Error::Error; };
struct SingularABlock : Error { using Error::Error; };
struct NotSymmetric : Error { using Error::Error; };
struct NotPositiveDefinite : Error { using Error::Error; };
struct FormSingularAtInfinity : Error { using Error::Error; };

}  // namespace hyperell
