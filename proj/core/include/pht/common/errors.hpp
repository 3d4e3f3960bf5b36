#pragma once

#include <stdexcept>
#include <string>

namespace pht {

// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid configuration or precondition violation caused by caller input.
class ConfigError : public Error {
public:
    using Error::Error;
};

// Bad or missing data: dangling references, missing blobs, undecodable
// payloads, malformed files.
class DataError : public Error {
public:
    using Error::Error;
};

// Digest mismatch or other tamper evidence.
class IntegrityError : public Error {
public:
    using Error::Error;
};

// Lookup of an id that does not exist.
class NotFoundError : public Error {
public:
    using Error::Error;
};

} // namespace pht
