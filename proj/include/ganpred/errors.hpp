#pragma once

#include <stdexcept>
#include <string>

namespace ganpred {

// Error taxonomy mirrored by the CLI exit codes:
//   ConfigError -> 1 (bad flags, malformed config, incompatible options)
//   DataError   -> 2 (missing/malformed files, model-dataset mismatch)
//   NumericError-> 3 (training divergence, non-finite values)
// Shape/precondition violations inside the library throw std::invalid_argument.

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace ganpred
