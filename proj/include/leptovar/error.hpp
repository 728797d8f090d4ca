#pragma once

#include <stdexcept>
#include <string>

namespace leptovar {

// Raised for problems with input data: unreadable files, malformed cells,
// unknown column names, degenerate targets.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Raised when an oracle or property check is asked to run outside the
// bounds it can enumerate.
class BoundsError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

} // namespace leptovar
