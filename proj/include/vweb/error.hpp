#pragma once

#include <stdexcept>
#include <string>

namespace vweb {

// Base class for every error thrown by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed textual input: rationals, projective points, JSON documents.
struct ParseError : Error {
    using Error::Error;
};

// Objects that cannot be combined: mismatched charts, wrong form degrees,
// shape violations in constructors.
struct StructuralError : Error {
    using Error::Error;
};

// An operation was called with arguments outside its contract
// (duplicate sample points, too few points, anchor at infinity, ...).
struct PreconditionError : Error {
    using Error::Error;
};

// A curve that fails its defining conditions, e.g. the coframe
// requirement at the basepoint.
struct InvalidCurveError : Error {
    using Error::Error;
};

} // namespace vweb
