#pragma once

#include <stdexcept>
#include <string>

namespace compsize {

// Machine-checkable failure kinds. The CLI maps these to exit codes and
// emits the enum name in its error JSON, so names are part of the interface.
enum class errc {
    negative_mass,
    not_normalized,
    empty_distribution,
    invalid_parameter,
    normalization_impossible,
    all_mass_removed,
    zero_mean_degree,
    too_large,
    degenerate_variance,
    missing_parameter,
    invalid_alpha,
    out_of_domain,
    unclassifiable,
    not_converged,
    odd_stubs,
};

const char* to_string(errc code) noexcept;

class Error : public std::runtime_error {
public:
    Error(errc code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    errc code() const noexcept { return code_; }

private:
    errc code_;
};

[[noreturn]] inline void raise(errc code, const std::string& message) {
    throw Error(code, message);
}

} // namespace compsize
