#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qpt {

enum class GridScale { Small, Full };

struct CheckResult {
    std::string name;
    std::size_t evaluated = 0;
    std::size_t skipped = 0;  // singular points
    std::size_t failures = 0;
    double worst = 0.0;  // largest scaled deviation seen
    std::string first_failure;

    bool passed() const { return failures == 0 && evaluated > 0; }
};

struct VerifyReport {
    std::vector<CheckResult> checks;
    bool passed() const;
};

/// b in {0, 0.1, ..., 2} without the EP band, kappa = 0.5, alpha = 10,
/// 2 kappa l on (0, 12] with 60 (small) or 600 (full) points.
VerifyReport run_verify(GridScale scale);

void print_report(std::ostream& os, const VerifyReport& r);

}  // namespace qpt
