#pragma once

#include <stdexcept>
#include <string>

namespace marl {

enum class ErrorKind {
    invalid_argument,
    validation,
    numeric,
    not_found,
    io,
    unsupported,
    contract,
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

} // namespace marl
