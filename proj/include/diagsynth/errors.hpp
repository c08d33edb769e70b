#pragma once

#include <stdexcept>
#include <string>

namespace diagsynth {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad bank, profile, template or recipe content.
struct ConfigError : Error {
    using Error::Error;
};

// A request exceeds what a keyword bank can supply.
struct CapacityError : Error {
    using Error::Error;
};

// Mermaid source without a recognised header directive.
struct FamilyDetectionError : Error {
    using Error::Error;
};

// Description text outside the image of the template set.
struct InversionError : Error {
    using Error::Error;
};

// A task instance is missing a payload its kind requires.
struct ConstructionError : Error {
    using Error::Error;
};

// Unknown augmentation transform or out-of-range parameter.
struct ParameterError : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

}  // namespace diagsynth
