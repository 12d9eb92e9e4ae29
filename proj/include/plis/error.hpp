#ifndef PLIS_ERROR_HPP
#define PLIS_ERROR_HPP

#include <stdexcept>
#include <string>

namespace plis {

enum class ErrorKind {
    length_mismatch,
    out_of_range,
    invalid_argument,
    non_finite_input,
    insufficient_nulls,
    parse_error,
    config_error,
    io_error,
};

const char* to_string(ErrorKind kind);

/// Thrown for every contract violation detected by the library.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

} // namespace plis

#endif // PLIS_ERROR_HPP
