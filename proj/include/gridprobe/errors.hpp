#pragma once

#include <stdexcept>

namespace gridprobe {

// malformed or out-of-domain configuration; the CLI maps it to exit code 1
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// a required input file or directory does not exist; exit code 2
struct MissingInputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace gridprobe
