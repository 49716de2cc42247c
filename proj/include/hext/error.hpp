#pragma once

#include <stdexcept>
#include <string>

namespace hext {

// Failure categories surfaced by the toolkit. The CLI maps these to a
// machine-readable error record; library callers can switch on code().
enum class errc {
    invalid_parameter,
    invalid_input,
    degenerate_input,
    invalid_boundary,
    ill_posed_extension,
    all_constrained,
    degenerate_bandwidth,
    degenerate_document,
    out_of_support,
    solver_failure,
    parse_error,
    io_error,
};

const char* errc_name(errc code);

class Error : public std::runtime_error {
public:
    Error(errc code, const std::string& message)
        : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

    errc code() const { return code_; }

private:
    errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& message) {
    throw Error(code, message);
}

inline const char* errc_name(errc code) {
    switch (code) {
    case errc::invalid_parameter: return "invalid-parameter";
    case errc::invalid_input: return "invalid-input";
    case errc::degenerate_input: return "degenerate-input";
    case errc::invalid_boundary: return "invalid-boundary";
    case errc::ill_posed_extension: return "ill-posed-extension";
    case errc::all_constrained: return "all-constrained";
    case errc::degenerate_bandwidth: return "degenerate-bandwidth";
    case errc::degenerate_document: return "degenerate-document";
    case errc::out_of_support: return "out-of-support";
    case errc::solver_failure: return "solver-failure";
    case errc::parse_error: return "parse-error";
    case errc::io_error: return "io-error";
    }
    return "unknown";
}

} // namespace hext
