#pragma once

#include <stdexcept>
#include <string>

namespace zrp {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidIndex : Error {
    using Error::Error;
};
struct OddIndex : Error {
    using Error::Error;
};
struct NotInSobolevSpace : Error {
    using Error::Error;
};
struct NotInScale : Error {
    using Error::Error;
};
struct NotInDomain : Error {
    using Error::Error;
};
struct CayleySingular : Error {
    using Error::Error;
};
struct DimensionMismatch : Error {
    using Error::Error;
};
struct DegenerateDenominator : Error {
    using Error::Error;
};
struct WindowInvalid : Error {
    using Error::Error;
};
struct UnsupportedFamily : Error {
    using Error::Error;
};
struct DegenerateBasis : Error {
    using Error::Error;
};
struct NonHermitian : Error {
    using Error::Error;
};

} // namespace zrp
