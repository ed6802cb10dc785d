#pragma once

#include <stdexcept>
#include <string>

namespace hotspot {

enum class ErrorCode {
    InvalidArgument = 1,
    Io = 2,
    Parse = 3,
    Infeasible = 4,
    Overflow = 5,
};

// All library failures surface as hotspot::Error; the C API maps the code
// onto its status enum.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
    throw Error(code, what);
}

inline void require(bool cond, const std::string& what) {
    if (!cond)
        fail(ErrorCode::InvalidArgument, what);
}

} // namespace hotspot
