#pragma once

#include <stdexcept>
#include <string>

namespace mvc {

// Error taxonomy mirrored by the CLI exit codes:
//   InvalidInput -> 2, BudgetExceeded -> 3, InvariantViolation -> 4.
struct InvalidInput : std::runtime_error {
    explicit InvalidInput(const std::string& what) : std::runtime_error(what) {}
};

struct BudgetExceeded : std::runtime_error {
    explicit BudgetExceeded(const std::string& what) : std::runtime_error(what) {}
};

// Raised when an internal cross-check (e.g. the two dispersion routes)
// disagrees beyond its documented tolerance.
struct InvariantViolation : std::runtime_error {
    explicit InvariantViolation(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace mvc
