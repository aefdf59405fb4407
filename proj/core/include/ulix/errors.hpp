#pragma once

#include <stdexcept>
#include <string>

namespace ulix {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DegenerateLambda : Error { using Error::Error; };
struct PrecisionExhausted : Error { using Error::Error; };
struct PoleAtLatticePoint : Error { using Error::Error; };
struct NotOnCurve : Error { using Error::Error; };
struct ParentMismatch : Error { using Error::Error; };
struct InvalidDiscriminant : Error { using Error::Error; };
struct InsufficientImaginaryPart : Error { using Error::Error; };
struct CoordinateBlowup : Error { using Error::Error; };
struct ConstantMapDegenerate : Error { using Error::Error; };
struct ValidationError : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };

struct ParseError : Error {
    std::size_t position;
    ParseError(std::size_t pos, const std::string& reason)
        : Error("parse error at position " + std::to_string(pos) + ": " + reason),
          position(pos) {}
};

} // namespace ulix
