// SPDX-License-Identifier: Apache-2.0
//
// pixelant — antenna coding optimization for pixel-antenna SISO-OFDM systems

#ifndef PIXELANT_ERRORS_HPP
#define PIXELANT_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace pixelant {

class Error : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

// Configuration or argument values violate a documented precondition.
class InvalidConfig : public Error {
   public:
    using Error::Error;
};

class DimensionMismatch : public Error {
   public:
    using Error::Error;
};

// The restricted pixel-port impedance block is numerically singular
// (condition estimate above 1e12); the model is unphysical.
class SingularNetwork : public Error {
   public:
    using Error::Error;
};

// A coded radiation pattern has vanishing norm and cannot be normalized.
class DegeneratePattern : public Error {
   public:
    using Error::Error;
};

// Every subcarrier gain is zero; capacity is zero and no water level exists.
class AllGainsZero : public Error {
   public:
    using Error::Error;
};

// Exhaustive enumeration refused (search space above the 2^24 guard).
class TooLarge : public Error {
   public:
    using Error::Error;
};

class MissingFile : public Error {
   public:
    using Error::Error;
};

class MissingCodebook : public Error {
   public:
    using Error::Error;
};

class IoFailure : public Error {
   public:
    using Error::Error;
};

// Carries the list of violated invariants of an artifact file.
class ValidationFailed : public Error {
   public:
    explicit ValidationFailed(std::vector<std::string> violations)
        : Error(join(violations)), violations_(std::move(violations)) {}

    const std::vector<std::string>& violations() const { return violations_; }

   private:
    static std::string join(const std::vector<std::string>& v) {
        std::string out = "validation failed:";
        for (const auto& s : v) {
            out += "\n  - ";
            out += s;
        }
        return out;
    }

    std::vector<std::string> violations_;
};

}  // namespace pixelant

#endif
