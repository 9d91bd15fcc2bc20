#pragma once

#include "critlen/trigpoly.hpp"

#include <functional>
#include <vector>

namespace critlen {

/// Real order nu >= 0 of J_nu.
class BesselOrder {
public:
    explicit BesselOrder(double nu);
    double value() const { return nu_; }

private:
    double nu_;
};

inline constexpr double kSeriesTolerance = 1e-14;
inline constexpr double kRootTolerance = 1e-12;
inline constexpr int kSeriesTermCap = 500;

/// J_nu(x) from its power series. The partial sums are accumulated in MPFR
/// with enough bits to absorb the cancellation between the alternating
/// terms; truncation happens once terms are decreasing and below
/// tol * |partial sum|.
double bessel_j(BesselOrder nu, double x, double tol = kSeriesTolerance);

/// d^order/dx^order J_nu(x) by the termwise differentiated series,
/// order in 1..4, x > 0.
double bessel_j_deriv(BesselOrder nu, double x, int order, double tol = kSeriesTolerance);

/// (J, J', ..., J^(m)) at x in one pass over the series; m in 0..4 and x > 0
/// when m > 0.
std::vector<double> bessel_j_stack(BesselOrder nu, double x, int m, double tol = kSeriesTolerance);

enum class ZeroKind { function, derivative };

struct ZeroBracket {
    double lo;
    double hi;
    ZeroKind kind;
    int index;
};

struct ZeroResult {
    double value;
    double residual;
    int iterations;
};

/// The k-th positive zero j_{nu,k} of J_nu.
ZeroResult bessel_zero(BesselOrder nu, int k, double tol = kRootTolerance);
/// The k-th positive zero j'_{nu,k} of J_nu'; nu > 0.
ZeroResult bessel_deriv_zero(BesselOrder nu, int k, double tol = kRootTolerance);

/// The k-th positive zero of a ring element, located on the normalized
/// function a(x) / x^normalize_power so that the residual is on an O(1)
/// scale. Scanning starts at `start`.
ZeroResult trig_zero(const TrigPoly& a, int k, double normalize_power, double start = 1e-3,
                     double cap = 60.0, double tol = kRootTolerance);

/// j_k(f_n): k-th positive zero of f_n.
ZeroResult spherical_zero(int n, int k, double tol = kRootTolerance);
/// j_k(f_n'): k-th positive zero of f_n', n >= 1.
ZeroResult spherical_deriv_zero(int n, int k, double tol = kRootTolerance);

/// Brackets the k-th sign change of g on [start, cap] scanning with `step`.
/// Throws NumericalFailure if fewer than k sign changes are found.
ZeroBracket bracket_kth_zero(const std::function<double(double)>& g, int k, double start, double step,
                             double cap, ZeroKind kind = ZeroKind::function);

/// Refines a bracketed root by bisection followed by safeguarded secant
/// steps. Throws NumericalFailure when the final residual exceeds tol.
ZeroResult refine_zero(const std::function<double(double)>& g, const ZeroBracket& bracket, double tol);

} // namespace critlen
