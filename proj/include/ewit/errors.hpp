#pragma once

#include <stdexcept>
#include <string>

namespace ewit {

/// Invalid input: bad parameters, malformed specs, domain violations.
class ConfigError : public std::invalid_argument {
public:
    explicit ConfigError(const std::string &what) : std::invalid_argument(what) {}
};

/// A Hilbert-space dimension or site count exceeded the dense-storage cap.
class ResourceError : public std::length_error {
public:
    explicit ResourceError(const std::string &what) : std::length_error(what) {}
};

/// A numerical routine failed to converge or produced an inconsistent result.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string &what) : std::runtime_error(what) {}
};

} // namespace ewit
