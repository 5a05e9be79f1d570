#pragma once

#include <stdexcept>
#include <string>

namespace afkit {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// |word| does not match a walk's codomain, tuple lengths disagree, etc.
struct DimensionError : Error {
    using Error::Error;
};

// A configured cap (closure size, ground-formula size, search budget) was hit.
struct CapacityError : Error {
    using Error::Error;
};

struct ParseError : Error {
    ParseError(const std::string& msg, std::size_t pos)
        : Error(msg + " (at offset " + std::to_string(pos) + ")"), position(pos) {}
    std::size_t position;
};

// Formula is outside the fragment an operation requires.
struct FragmentError : Error {
    using Error::Error;
};

// Formula does not have the syntactic shape an operation requires.
struct ShapeError : Error {
    using Error::Error;
};

// A structure violates a precondition (e.g. it does not model the input formula).
struct ModelError : Error {
    using Error::Error;
};

// A model-building step found no admissible continuation; signals a bug or a
// violated precondition upstream.
struct ConstructionError : Error {
    using Error::Error;
};

// Malformed external input: JSON files, machine descriptions, CLI arguments.
struct InputError : Error {
    using Error::Error;
};

}  // namespace afkit
