#pragma once

#include <stdexcept>
#include <string>

namespace synthforge {

// Error taxonomy shared by all modules. The CLI maps each type to a
// distinct exit code (see tools/synthforge_main.cpp and --help).
struct FormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SchemaError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PlacementError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InsufficientImagesError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace synthforge
