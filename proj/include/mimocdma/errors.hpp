#pragma once

#include <stdexcept>
#include <string>

namespace mimocdma {

/// Length or block-size mismatch at a chain stage (odd coded length, partial
/// spreading block, wrong OFDM symbol length, ...).
class FramingError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class InvalidSeedError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Matrix dimensions disagree (antenna counts, subcarrier counts).
class ShapeError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Channel matrix rank deficient or condition number above the configured cap.
class SingularChannelError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& path)
        : std::runtime_error("cannot write " + path), path_(path) {}
    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

}  // namespace mimocdma
