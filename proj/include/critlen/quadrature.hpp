#pragma once

#include <functional>
#include <vector>

namespace critlen {

struct QuadratureResult {
    double value;
    double error_estimate;
    long evaluations;
};

/// Adaptive Simpson quadrature on [a, b] with the Richardson-corrected
/// panel value (S2 + (S2 - S1)/15). The target accuracy is
/// max(abs_tol, rel_tol * |integral of |f||). Throws NumericalFailure when
/// the recursion depth or evaluation budget is exhausted.
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b, double rel_tol,
                           double abs_tol = 0.0);

/// Integrals of f from a to each of the increasing points xs (all >= a),
/// accumulated piece by piece.
std::vector<double> cumulative_integrals(const std::function<double(double)>& f, double a,
                                         const std::vector<double>& xs, double rel_tol);

} // namespace critlen
