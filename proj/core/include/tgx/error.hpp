#pragma once

#include <stdexcept>
#include <string>

namespace tgx {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ShapeError : Error {
    using Error::Error;
};

// Numerical rank deficiency detected while orthogonalizing; `column` is the
// 0-based index of the offending slice.
struct RankDeficientError : Error {
    int column;
    RankDeficientError(const std::string& msg, int col) : Error(msg), column(col) {}
};

struct SingularError : Error {
    using Error::Error;
};

// The coefficient sum in the theta -> delta normalization vanished; the
// extrapolated tensor is undefined for this window.
struct VanishingSumError : Error {
    using Error::Error;
};

}  // namespace tgx
