#pragma once

#include <stdexcept>

namespace wsim {

/// Base class for every error thrown by the library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct OverlappingModes : Error { using Error::Error; };
struct ZeroState : Error { using Error::Error; };
struct NotNormalized : Error { using Error::Error; };
struct InvalidPermutation : Error { using Error::Error; };
struct InvalidReflectivity : Error { using Error::Error; };
struct NonUnitary : Error { using Error::Error; };
struct PhotonNumberMismatch : Error { using Error::Error; };
struct NotSingleOccupied : Error { using Error::Error; };
struct InvalidN : Error { using Error::Error; };
struct InvalidSpec : Error { using Error::Error; };
struct DuplicateMode : Error { using Error::Error; };
struct NoFeasiblePoint : Error { using Error::Error; };

}  // namespace wsim
