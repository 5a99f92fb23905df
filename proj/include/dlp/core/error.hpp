#pragma once

#include <stdexcept>
#include <string>

namespace dlp {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DomainError : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

struct DimMismatch : Error {
    using Error::Error;
};

struct ShapeMismatch : Error {
    using Error::Error;
};

struct LengthMismatch : Error {
    using Error::Error;
};

struct MalformedRotation : Error {
    using Error::Error;
};

}  // namespace dlp
