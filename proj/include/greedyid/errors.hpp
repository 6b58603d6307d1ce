#pragma once

#include <stdexcept>

namespace greedyid {

/// Unusable configuration or malformed input. The CLI maps these to exit 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A computation that cannot proceed numerically. The CLI maps these to exit 3.
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimensionMismatch : ConfigError { using ConfigError::ConfigError; };
struct ParseError : ConfigError { using ConfigError::ConfigError; };
struct GridTooSmall : ConfigError { using ConfigError::ConfigError; };
struct EmptyData : ConfigError { using ConfigError::ConfigError; };
struct OddCount : ConfigError { using ConfigError::ConfigError; };
struct CoincidentPoints : ConfigError { using ConfigError::ConfigError; };
struct AboveNyquist : ConfigError { using ConfigError::ConfigError; };
struct TraceTooShort : ConfigError { using ConfigError::ConfigError; };

struct SingularPencil : NumericError { using NumericError::NumericError; };
struct SingularE : NumericError { using NumericError::NumericError; };
struct SingularLoewner : NumericError { using NumericError::NumericError; };
struct NotConjugateClosed : NumericError { using NumericError::NumericError; };
struct DegenerateObjective : NumericError { using NumericError::NumericError; };
struct GridExhausted : NumericError { using NumericError::NumericError; };
struct IllConditioned : NumericError { using NumericError::NumericError; };
struct ZeroInputComponent : NumericError { using NumericError::NumericError; };

}  // namespace greedyid
