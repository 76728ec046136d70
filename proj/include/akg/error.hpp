#pragma once

#include <stdexcept>
#include <string>

namespace akg {

enum class ErrorCode {
    invalid_argument,
    not_found,
    duplicate,
    parse_error,
    io_error,
    corrupt,
};

// Single exception type for the library; the code drives HTTP status and CLI exit mapping.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace akg
