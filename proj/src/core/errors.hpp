#pragma once

#include <stdexcept>
#include <string>

namespace bass {

// Error categories map 1:1 onto CLI exit codes and C API status values:
// spec = 2 (bad configuration/schema), data = 3 (bad files or shapes),
// numeric = 4 (solver failure).
enum class ErrorKind { spec = 2, data = 3, numeric = 4 };

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void throw_spec_error(const std::string& msg) {
    throw Error(ErrorKind::spec, msg);
}

[[noreturn]] inline void throw_data_error(const std::string& msg) {
    throw Error(ErrorKind::data, msg);
}

[[noreturn]] inline void throw_numeric_error(const std::string& msg) {
    throw Error(ErrorKind::numeric, msg);
}

}  // namespace bass
