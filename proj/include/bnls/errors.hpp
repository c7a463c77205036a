#pragma once

#include <stdexcept>
#include <string>

namespace bnls {

struct grid_mismatch_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct regime_error : std::domain_error {
    using std::domain_error::domain_error;
};

struct convergence_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct fit_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct window_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct cap_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct table_coverage_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct blowup_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct config_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

} // namespace bnls
