#pragma once

#include <stdexcept>
#include <string>

namespace ballpdf {

enum class ErrorKind {
    domain,
    invalid_representation,
    divergent_moment,
    unsupported,
    precision,
    invalid_input,
    wrong_variant,
    invalid_shells,
    empty_support,
    insufficient_data,
    efficiency,
};

inline const char* to_string(ErrorKind k)
{
    switch (k) {
    case ErrorKind::domain: return "domain";
    case ErrorKind::invalid_representation: return "invalid-representation";
    case ErrorKind::divergent_moment: return "divergent-moment";
    case ErrorKind::unsupported: return "unsupported";
    case ErrorKind::precision: return "precision";
    case ErrorKind::invalid_input: return "invalid-input";
    case ErrorKind::wrong_variant: return "wrong-variant";
    case ErrorKind::invalid_shells: return "invalid-shells";
    case ErrorKind::empty_support: return "empty-support";
    case ErrorKind::insufficient_data: return "insufficient-data";
    case ErrorKind::efficiency: return "efficiency";
    }
    return "unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what)
{
    throw Error(kind, what);
}

} // namespace ballpdf
