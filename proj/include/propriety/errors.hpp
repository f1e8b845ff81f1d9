#pragma once
#include <stdexcept>

namespace propriety {

// Base class for every error the library throws; the CLI catches this
// at its boundary and maps it to an exit status.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimensionMismatch : Error { using Error::Error; };
struct ResponseOutOfRange : Error { using Error::Error; };
struct EmptyBlock : Error { using Error::Error; };
struct WrongFamily : Error { using Error::Error; };
struct WrongLink : Error { using Error::Error; };
struct WrongPriorKind : Error { using Error::Error; };
struct DegenerateAllZero : Error { using Error::Error; };
struct RankDeficient : Error { using Error::Error; };
struct NotConverged : Error { using Error::Error; };
struct SeparationError : Error { using Error::Error; };
struct NonpositiveTau : Error { using Error::Error; };
struct OutOfScope : Error { using Error::Error; };
struct ScaleLimit : Error { using Error::Error; };
struct ModeSearchFailed : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };
struct FileNotFound : Error { using Error::Error; };

} // namespace propriety
