#pragma once

#include "json.hpp"

#include <optional>
#include <string>
#include <vector>

namespace critlen {

/// Outcome of scanning one Wronskian minor w_{j,2n+1} on (eps, cap).
struct MinorScan {
    int j = 0;
    /// Least zero found; empty when the minor keeps its sign up to the cap.
    std::optional<double> first_zero;
    double search_cap = 0.0;
    /// The minor came within the noise floor of zero without a clean sign
    /// change, or its sign could not be certified. Never counted as a zero.
    bool indeterminate = false;
    std::string note;
};

struct CritLenReport {
    int n = 0;
    std::vector<MinorScan> per_j;
    /// Minimum of the first zeros; +inf when no minor has a zero.
    double estimate = 0.0;
    /// j_{n+1/2,1}.
    double reference = 0.0;
    double gap = 0.0;
    bool conjecture_consistent = false;
    double cap = 0.0;
    double tol = 0.0;
};

inline constexpr double kCritLenEpsilon = 1e-3;
inline constexpr double kNoiseFloor = 1e-12;
inline constexpr double kConsistencyGap = 1e-6;

/// Scans every admissible minor j in ((2n+1)/2, 2n+1] with base step
/// reference/512, refines the first sign change by three rounds of halving
/// and then bisects to tol. cap defaults to 1.5 * reference.
CritLenReport estimate_critical_length(int n, std::optional<double> cap = std::nullopt, double tol = 1e-12,
                                       int threads = 1);

/// One scan of a single minor.
MinorScan scan_minor(int n, int j, double cap, double step, double tol);

/// Reports for n = 0..n_max, n_max <= 6.
std::vector<CritLenReport> conjecture_scan(int n_max, int threads = 1);

nlohmann::json to_json(const CritLenReport& r);

} // namespace critlen
