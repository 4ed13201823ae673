#ifndef AIRTRACE_CORE_ERROR_HPP
#define AIRTRACE_CORE_ERROR_HPP

#include <stdexcept>
#include <string>

namespace airtrace {

// Error categories; kept in sync with the at_status codes of the C API.
enum class Errc {
    invalid_argument,
    io,
    parse,
    unsupported_format,
    empty_trace,
    insufficient_data,
    config,
    dimension_mismatch,
    class_too_small,
    degenerate_separation,
    internal,
};

class Error : public std::runtime_error {
public:
    Error(Errc code, std::string message)
        : std::runtime_error(std::move(message)), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& message) {
    throw Error(code, message);
}

} // namespace airtrace

#endif
