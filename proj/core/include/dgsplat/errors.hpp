#pragma once

#include <stdexcept>
#include <string>

namespace dgs {

struct ZeroNormError : std::invalid_argument {
    explicit ZeroNormError(const std::string& what) : std::invalid_argument(what) {}
};

struct NonPositiveScaleError : std::invalid_argument {
    explicit NonPositiveScaleError(const std::string& what) : std::invalid_argument(what) {}
};

struct NonUnitDirectionError : std::invalid_argument {
    explicit NonUnitDirectionError(const std::string& what) : std::invalid_argument(what) {}
};

struct WidthMismatchError : std::invalid_argument {
    explicit WidthMismatchError(const std::string& what) : std::invalid_argument(what) {}
};

struct CacheMismatchError : std::invalid_argument {
    explicit CacheMismatchError(const std::string& what) : std::invalid_argument(what) {}
};

struct ShapeMismatchError : std::invalid_argument {
    explicit ShapeMismatchError(const std::string& what) : std::invalid_argument(what) {}
};

struct BadDoppelgangerCountError : std::invalid_argument {
    explicit BadDoppelgangerCountError(const std::string& what) : std::invalid_argument(what) {}
};

struct DegenerateBoxError : std::invalid_argument {
    explicit DegenerateBoxError(const std::string& what) : std::invalid_argument(what) {}
};

struct BadChannelRangeError : std::invalid_argument {
    explicit BadChannelRangeError(const std::string& what) : std::invalid_argument(what) {}
};

struct ForwardMismatchError : std::invalid_argument {
    explicit ForwardMismatchError(const std::string& what) : std::invalid_argument(what) {}
};

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct IoError : std::runtime_error {
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace dgs
