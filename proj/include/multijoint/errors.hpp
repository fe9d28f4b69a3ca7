#pragma once

#include <stdexcept>
#include <string>

namespace multijoint {

/// Base class for all errors raised by this library.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Arithmetic misuse: mixed fields, zero divisor, bad modulus.
struct field_error : error {
    using error::error;
};

/// Malformed text in an instance, colouring or certificate document.
struct parse_error : error {
    using error::error;
};

/// A structural invariant of an instance or document does not hold.
struct validation_error : error {
    using error::error;
};

/// The line families are not generic; the message carries the witness tuple.
struct non_generic_error : error {
    using error::error;
};

/// A configured search budget was exhausted before the answer was found.
struct limit_error : error {
    using error::error;
};

/// An internal consistency check failed. Always a bug, never bad input.
struct internal_error : error {
    using error::error;
};

} // namespace multijoint
