#pragma once

#include <stdexcept>
#include <string>

namespace parhodge {

enum class errc {
    division_by_zero,
    ctx_mismatch,
    precision_exhausted,
    support_violation,
    singular_gauge,
    pole_escape,
    non_diagonal_input,
    zero_input,
    depth_violation,
    non_trivial_rational_part,
    non_rational_input,
    membership_violation,
    equivariance_violation,
    wild_ramification,
    rational_residue_in_higgs,
    extension_cap_exceeded,
    not_irreducible,
    parse_error,
    invalid_argument,
    internal,
};

const char* errc_name(errc c);

// All engine failures are reported through this one type; `code` keeps the
// contract-level identity so callers (and the CLI) can dispatch on it.
class Error : public std::runtime_error {
public:
    Error(errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    errc code() const { return code_; }

private:
    errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw Error(code, what); }

} // namespace parhodge
