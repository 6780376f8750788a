#pragma once

#include <stdexcept>
#include <string>

namespace coplan {

/// Query pair lies outside the backend's trusted locality radius.
struct LocalityError : std::runtime_error {
    explicit LocalityError(const std::string& what) : std::runtime_error(what) {}
};

/// No collision-free route exists between the queried pair.
struct UnreachableError : std::runtime_error {
    explicit UnreachableError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace coplan
