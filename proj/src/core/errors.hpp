#ifndef DUNEDRIFT_CORE_ERRORS_HPP
#define DUNEDRIFT_CORE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace dunedrift {

// Error categories map 1:1 onto the library's status codes and the CLI's
// exit codes: argument/config -> 2, IO -> 3, numeric/stage -> 4.

class ArgumentError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace dunedrift

#endif
