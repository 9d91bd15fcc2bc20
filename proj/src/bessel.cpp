#include "critlen/bessel.hpp"

#include "critlen/errors.hpp"
#include "critlen/mpfloat.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace critlen {

BesselOrder::BesselOrder(double nu) : nu_(nu)
{
    if (!std::isfinite(nu) || nu < 0.0)
        throw UsageError("Bessel order must be finite and >= 0");
}

namespace {

constexpr int kMaxStackOrder = 4;
constexpr mpfr_prec_t kSeriesMaxPrecision = 1 << 13;

// Inner sums S_d = sum_k (-1)^k (2k+nu)_(d) (x/2)^{2k} / (k! (nu+1)_k), where
// (e)_(d) is the falling factorial, so that
//   J^(d)(x) = (x/2)^{nu-d} / (2^d Gamma(nu+1)) * S_d.
std::vector<double> inner_sums(double nu, double x, int m, double tol)
{
    for (mpfr_prec_t prec = 128;; prec *= 2) {
        const MpFloat half_x(x / 2.0, prec);
        const MpFloat y = half_x * half_x;
        const MpFloat nu_mp(nu, prec);

        std::vector<MpFloat> sums(static_cast<std::size_t>(m) + 1, MpFloat(prec));
        std::vector<MpFloat> prev(static_cast<std::size_t>(m) + 1, MpFloat(prec));
        std::vector<long> max_exp(static_cast<std::size_t>(m) + 1, std::numeric_limits<long>::min() / 2);
        MpFloat t(1L, prec);
        const MpFloat tol_mp(tol, prec);

        bool converged = false;
        for (long k = 0; k < kSeriesTermCap; ++k) {
            bool all_done = k > 0;
            MpFloat e = nu_mp + MpFloat(2 * k, prec);
            MpFloat weight(1L, prec);
            for (int d = 0; d <= m; ++d) {
                if (d > 0) {
                    weight *= e;
                    e -= MpFloat(1L, prec);
                }
                const MpFloat term = t * weight;
                auto& sum = sums[static_cast<std::size_t>(d)];
                sum += term;
                max_exp[static_cast<std::size_t>(d)] = std::max(max_exp[static_cast<std::size_t>(d)], term.exponent());
                const MpFloat mag = abs(term);
                const bool decreasing = mag <= abs(prev[static_cast<std::size_t>(d)]);
                if (!(decreasing && mag < tol_mp * abs(sum)) && !(term.is_zero() && sum.is_zero() && k > d))
                    all_done = false;
                prev[static_cast<std::size_t>(d)] = term;
            }
            if (all_done) {
                converged = true;
                break;
            }
            t *= -y;
            t /= MpFloat(k + 1, prec);
            t /= nu_mp + MpFloat(k + 1, prec);
        }
        if (!converged)
            throw NumericalFailure("Bessel series did not converge within the term cap");

        bool enough_bits = true;
        for (int d = 0; d <= m; ++d) {
            const auto& s = sums[static_cast<std::size_t>(d)];
            if (s.is_zero())
                continue;
            const long lost = max_exp[static_cast<std::size_t>(d)] - s.exponent();
            if (lost + 64 > prec)
                enough_bits = false;
        }
        if (enough_bits || prec >= kSeriesMaxPrecision) {
            std::vector<double> out;
            out.reserve(sums.size());
            for (const auto& s : sums)
                out.push_back(s.to_double());
            return out;
        }
    }
}

} // namespace

std::vector<double> bessel_j_stack(BesselOrder order, double x, int m, double tol)
{
    const double nu = order.value();
    if (!(tol > 0.0))
        throw UsageError("series tolerance must be positive");
    if (!std::isfinite(x) || x < 0.0)
        throw UsageError("Bessel argument must be finite and >= 0");
    if (m < 0 || m > kMaxStackOrder)
        throw UsageError("Bessel derivative order must be in 0..4");
    if (x == 0.0) {
        if (m > 0)
            throw UsageError("Bessel derivatives require x > 0");
        return {nu == 0.0 ? 1.0 : 0.0};
    }
    const auto sums = inner_sums(nu, x, m, tol);
    const double gamma = std::tgamma(nu + 1.0);
    std::vector<double> out(sums.size());
    for (int d = 0; d <= m; ++d) {
        const double prefactor = std::pow(x / 2.0, nu - d) / (std::ldexp(1.0, d) * gamma);
        out[static_cast<std::size_t>(d)] = prefactor * sums[static_cast<std::size_t>(d)];
    }
    return out;
}

double bessel_j(BesselOrder nu, double x, double tol) { return bessel_j_stack(nu, x, 0, tol)[0]; }

double bessel_j_deriv(BesselOrder nu, double x, int order, double tol)
{
    if (order < 1 || order > kMaxStackOrder)
        throw UsageError("bessel_j_deriv: order must be in 1..4");
    if (!(x > 0.0))
        throw UsageError("bessel_j_deriv: x must be > 0");
    return bessel_j_stack(nu, x, order, tol)[static_cast<std::size_t>(order)];
}

// ---------------------------------------------------------------------------
// zeros

ZeroBracket bracket_kth_zero(const std::function<double(double)>& g, int k, double start, double step,
                             double cap, ZeroKind kind)
{
    if (k < 1)
        throw UsageError("zero index must be >= 1");
    if (!(step > 0.0) || !(cap > start))
        throw UsageError("bad scan parameters");
    int count = 0;
    double x0 = start;
    double g0 = g(x0);
    while (x0 < cap) {
        const double x1 = std::min(x0 + step, cap);
        const double g1 = g(x1);
        if (g0 != 0.0 && (g1 == 0.0 || std::signbit(g0) != std::signbit(g1))) {
            if (++count == k)
                return {x0, x1, kind, k};
        }
        x0 = x1;
        g0 = g1;
    }
    throw NumericalFailure("no bracket for zero #" + std::to_string(k) + " below x = " + std::to_string(cap));
}

ZeroResult refine_zero(const std::function<double(double)>& g, const ZeroBracket& bracket, double tol)
{
    double lo = bracket.lo;
    double hi = bracket.hi;
    double flo = g(lo);
    double fhi = g(hi);
    int iterations = 0;
    if (fhi == 0.0)
        return {hi, 0.0, 0};
    if (flo == 0.0)
        return {lo, 0.0, 0};
    if (std::signbit(flo) == std::signbit(fhi))
        throw NumericalFailure("refine_zero: bracket without sign change");

    // Bisection until the bracket is small enough for secant steps to be
    // reliable.
    while (hi - lo > 1e-3 * std::max(1.0, std::fabs(hi))) {
        const double mid = 0.5 * (lo + hi);
        const double fm = g(mid);
        ++iterations;
        if (fm == 0.0)
            return {mid, 0.0, iterations};
        if (std::signbit(fm) == std::signbit(flo)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
            fhi = fm;
        }
    }

    double x0 = lo, f0 = flo;
    double x1 = hi, f1 = fhi;
    double best = std::fabs(flo) < std::fabs(fhi) ? lo : hi;
    double best_f = std::min(std::fabs(flo), std::fabs(fhi));
    constexpr double eps = std::numeric_limits<double>::epsilon();
    for (int it = 0; it < 200; ++it) {
        double s = f1 != f0 ? x1 - f1 * (x1 - x0) / (f1 - f0) : 0.5 * (lo + hi);
        if (!(s > lo && s < hi))
            s = 0.5 * (lo + hi);
        const double fs = g(s);
        ++iterations;
        if (std::fabs(fs) < best_f) {
            best = s;
            best_f = std::fabs(fs);
        }
        if (fs == 0.0)
            break;
        if (std::signbit(fs) == std::signbit(flo)) {
            lo = s;
            flo = fs;
        } else {
            hi = s;
            fhi = fs;
        }
        const double moved = std::fabs(s - x1);
        x0 = x1;
        f0 = f1;
        x1 = s;
        f1 = fs;
        if (moved <= 4 * eps * std::fabs(s) || hi - lo <= 4 * eps * std::fabs(s))
            break;
    }
    if (best_f > tol)
        throw NumericalFailure("refine_zero: residual " + std::to_string(best_f) + " above tolerance");
    return {best, best_f, iterations};
}

ZeroResult bessel_zero(BesselOrder nu, int k, double tol)
{
    const double n = nu.value();
    auto g = [&](double x) { return bessel_j(nu, x); };
    const double start = std::max(n, tol);
    const auto bracket = bracket_kth_zero(g, k, start, std::numbers::pi / 8, n + 40.0, ZeroKind::function);
    return refine_zero(g, bracket, tol);
}

ZeroResult bessel_deriv_zero(BesselOrder nu, int k, double tol)
{
    const double n = nu.value();
    if (!(n > 0.0))
        throw UsageError("bessel_deriv_zero requires nu > 0");
    auto g = [&](double x) { return bessel_j_deriv(nu, x, 1); };
    // Scanning starts near the origin rather than at nu so that the bound
    // j'_{nu,1} > nu is an actual check on the result.
    const auto bracket = bracket_kth_zero(g, k, 1e-6, std::numbers::pi / 8, n + 40.0, ZeroKind::derivative);
    const auto result = refine_zero(g, bracket, tol);
    if (!(result.value > n))
        throw NumericalFailure("bessel_deriv_zero: result does not exceed nu");
    return result;
}

ZeroResult trig_zero(const TrigPoly& a, int k, double normalize_power, double start, double cap, double tol)
{
    auto g = [&](double x) { return evaluate(a, x) / std::pow(x, normalize_power); };
    const auto bracket = bracket_kth_zero(g, k, start, std::numbers::pi / 8, cap, ZeroKind::function);
    return refine_zero(g, bracket, tol);
}

ZeroResult spherical_zero(int n, int k, double tol)
{
    return trig_zero(spherical_fn(n), k, n, 1e-3, n + 10.0 + 4.0 * k, tol);
}

ZeroResult spherical_deriv_zero(int n, int k, double tol)
{
    if (n < 1)
        throw UsageError("spherical_deriv_zero requires n >= 1");
    return trig_zero(derivative(spherical_fn(n)), k, n, 1e-3, n + 10.0 + 4.0 * k, tol);
}

} // namespace critlen
