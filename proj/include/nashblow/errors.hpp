/**
 * @file errors.hpp
 * @brief Exception hierarchy shared by all nashblow modules.
 */
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace nashblow {

/// Base class of every error raised by the engine.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SyntaxError : public Error {
public:
    SyntaxError(const std::string& what, std::size_t offset)
        : Error("syntax error at byte " + std::to_string(offset) + ": " + what), offset_(offset) {}
    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

/// Malformed document: missing field, wrong JSON type, bad key.
class InputError : public Error {
public:
    using Error::Error;
};

class UnknownVariable : public Error {
public:
    explicit UnknownVariable(const std::string& name)
        : Error("unknown variable '" + name + "'"), name_(name) {}
    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

class ArityMismatch : public Error {
public:
    using Error::Error;
};

class SizeError : public Error {
public:
    using Error::Error;
};

class IndexError : public Error {
public:
    using Error::Error;
};

class NotSkew : public Error {
public:
    using Error::Error;
};

class NotInKernelModule : public Error {
public:
    NotInKernelModule(std::size_t index)
        : Error("kernel generator " + std::to_string(index) + " is not annihilated by the anchor"),
          index_(index) {}
    std::size_t index() const noexcept { return index_; }

private:
    std::size_t index_;
};

class NotInKernel : public Error {
public:
    using Error::Error;
};

class WellDefinednessFailure : public Error {
public:
    using Error::Error;
};

class ZeroDim : public Error {
public:
    using Error::Error;
};

class NotDecomposable : public Error {
public:
    using Error::Error;
};

class CurveInSingularLocus : public Error {
public:
    using Error::Error;
};

class AllCurvesSingular : public Error {
public:
    using Error::Error;
};

class NotResolvedByChart : public Error {
public:
    using Error::Error;
};

class FrameReductionFailed : public Error {
public:
    using Error::Error;
};

class ScenarioError : public Error {
public:
    using Error::Error;
};

/// Engine failure re-thrown with the scenario step that triggered it.
class EngineError : public Error {
public:
    using Error::Error;
};

/// Broken internal invariant (an exact identity that must hold did not).
class InternalError : public Error {
public:
    using Error::Error;
};

}  // namespace nashblow
