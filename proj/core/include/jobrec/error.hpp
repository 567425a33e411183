#pragma once

#include <stdexcept>
#include <string>

namespace jobrec {

// Error categories map 1:1 onto CLI exit codes.
enum class ErrorKind {
    Config = 1,  // bad config file, unknown key, invalid value
    Data = 2,    // unreadable or malformed input data
    Cell = 3,    // one or more experiment cells failed
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& msg)
        : std::runtime_error(msg), kind_(kind) {}

    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void config_error(const std::string& msg) {
    throw Error(ErrorKind::Config, msg);
}

[[noreturn]] inline void data_error(const std::string& msg) {
    throw Error(ErrorKind::Data, msg);
}

}  // namespace jobrec
