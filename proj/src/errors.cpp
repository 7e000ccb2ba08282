#include "compsize/errors.hpp"

namespace compsize {

const char* to_string(errc code) noexcept {
    switch (code) {
        case errc::negative_mass: return "negative_mass";
        case errc::not_normalized: return "not_normalized";
        case errc::empty_distribution: return "empty_distribution";
        case errc::invalid_parameter: return "invalid_parameter";
        case errc::normalization_impossible: return "normalization_impossible";
        case errc::all_mass_removed: return "all_mass_removed";
        case errc::zero_mean_degree: return "zero_mean_degree";
        case errc::too_large: return "too_large";
        case errc::degenerate_variance: return "degenerate_variance";
        case errc::missing_parameter: return "missing_parameter";
        case errc::invalid_alpha: return "invalid_alpha";
        case errc::out_of_domain: return "out_of_domain";
        case errc::unclassifiable: return "unclassifiable";
        case errc::not_converged: return "not_converged";
        case errc::odd_stubs: return "odd_stubs";
    }
    return "unknown";
}

} // namespace compsize
