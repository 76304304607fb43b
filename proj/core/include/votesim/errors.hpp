#pragma once

#include <stdexcept>
#include <string>

namespace votesim {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input: presets, facet keys, scenario files, scripts.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// A response type name that is not present in the registry.
class UnknownResponseType : public Error {
public:
    explicit UnknownResponseType(const std::string& name)
        : Error("unknown response type '" + name + "'") {}
};

/// An operation invoked at the wrong point of a session (out of order, or after completion).
class StateError : public Error {
public:
    using Error::Error;
};

/// An option id that is not on the current menu.
class InvalidChoice : public Error {
public:
    using Error::Error;
};

/// An output sink that could not be opened or written.
class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace votesim
