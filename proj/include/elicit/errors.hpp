#pragma once

#include <stdexcept>
#include <string>

namespace elicit {

// Base class for all pipeline errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// -- gateway ---------------------------------------------------------------

class AuthError : public Error {
public:
    using Error::Error;
};

class TransportError : public Error {
public:
    explicit TransportError(const std::string& msg, bool transient = false)
        : Error(msg), transient_(transient) {}
    // True for failures worth retrying (HTTP 429, 5xx, timeouts).
    bool transient() const { return transient_; }

private:
    bool transient_;
};

class EmptyResponse : public Error {
public:
    using Error::Error;
};

class DimMismatch : public Error {
public:
    using Error::Error;
};

// -- corpus ----------------------------------------------------------------

class CorruptCorpus : public Error {
public:
    CorruptCorpus(const std::string& msg, int line)
        : Error(msg + " (line " + std::to_string(line) + ")"), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

// -- canonicalize ----------------------------------------------------------

class NoEvents : public Error {
public:
    using Error::Error;
};

class BadK : public Error {
public:
    using Error::Error;
};

class EmptyCluster : public Error {
public:
    using Error::Error;
};

// -- incidence -------------------------------------------------------------

class UnknownMention : public Error {
public:
    using Error::Error;
};

class UnmappedColumn : public Error {
public:
    using Error::Error;
};

class DegenerateMatrix : public Error {
public:
    using Error::Error;
};

// -- discovery -------------------------------------------------------------

class BadVars : public Error {
public:
    using Error::Error;
};

class ConstantColumn : public Error {
public:
    using Error::Error;
};

// -- pipeline --------------------------------------------------------------

class StageError : public Error {
public:
    StageError(const std::string& stage, const std::string& msg)
        : Error("stage '" + stage + "': " + msg), stage_(stage) {}
    const std::string& stage() const { return stage_; }

private:
    std::string stage_;
};

}  // namespace elicit
