#include "critlen/quadrature.hpp"

#include "critlen/errors.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace critlen {

namespace {

constexpr int kMaxDepth = 48;
constexpr long kMaxEvaluations = 4'000'000;

struct Simpson {
    const std::function<double(double)>& f;
    long evaluations = 0;

    double eval(double x)
    {
        if (++evaluations > kMaxEvaluations)
            throw NumericalFailure("quadrature evaluation budget exhausted");
        const double y = f(x);
        if (!std::isfinite(y))
            throw NumericalFailure("quadrature integrand is not finite at x=" + std::to_string(x));
        return y;
    }

    double panel(double a, double b, double fa, double fm, double fb, double tol, double whole, int depth,
                 double& error)
    {
        const double m = 0.5 * (a + b);
        const double lm = 0.5 * (a + m);
        const double rm = 0.5 * (m + b);
        const double flm = eval(lm);
        const double frm = eval(rm);
        const double left = (m - a) / 6 * (fa + 4 * flm + fm);
        const double right = (b - m) / 6 * (fm + 4 * frm + fb);
        const double refined = left + right;
        const double delta = refined - whole;
        if (std::fabs(delta) <= 15 * tol || b - a <= 4 * std::numeric_limits<double>::epsilon() * std::fabs(m)) {
            error += std::fabs(delta) / 15;
            return refined + delta / 15;
        }
        if (depth >= kMaxDepth)
            throw NumericalFailure("quadrature did not converge on [" + std::to_string(a) + ", " +
                                   std::to_string(b) + "]");
        return panel(a, m, fa, flm, fm, tol / 2, left, depth + 1, error) +
               panel(m, b, fm, frm, fb, tol / 2, right, depth + 1, error);
    }
};

} // namespace

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b, double rel_tol,
                           double abs_tol)
{
    if (!(rel_tol > 0.0) && !(abs_tol > 0.0))
        throw UsageError("quadrature needs a positive tolerance");
    if (a == b)
        return {0.0, 0.0, 0};
    if (b < a) {
        auto r = integrate(f, b, a, rel_tol, abs_tol);
        r.value = -r.value;
        return r;
    }
    Simpson s{f};
    // A coarse 8-panel pass fixes the accuracy target and seeds the
    // recursion with panels that all get refined at least once.
    constexpr int kPanels = 8;
    std::vector<double> xs(2 * kPanels + 1), ys(2 * kPanels + 1);
    for (int i = 0; i <= 2 * kPanels; ++i) {
        xs[static_cast<std::size_t>(i)] = a + (b - a) * i / (2 * kPanels);
        ys[static_cast<std::size_t>(i)] = s.eval(xs[static_cast<std::size_t>(i)]);
    }
    double magnitude = 0.0;
    std::vector<double> coarse(kPanels);
    for (int k = 0; k < kPanels; ++k) {
        const auto i = static_cast<std::size_t>(2 * k);
        const double h = xs[i + 2] - xs[i];
        coarse[static_cast<std::size_t>(k)] = h / 6 * (ys[i] + 4 * ys[i + 1] + ys[i + 2]);
        magnitude += h / 6 * (std::fabs(ys[i]) + 4 * std::fabs(ys[i + 1]) + std::fabs(ys[i + 2]));
    }
    const double target = std::max(abs_tol, rel_tol * magnitude);
    double total = 0.0;
    double error = 0.0;
    if (target == 0.0)
        return {0.0, 0.0, s.evaluations};
    for (int k = 0; k < kPanels; ++k) {
        const auto i = static_cast<std::size_t>(2 * k);
        total += s.panel(xs[i], xs[i + 2], ys[i], ys[i + 1], ys[i + 2], target / kPanels,
                         coarse[static_cast<std::size_t>(k)], 0, error);
    }
    return {total, error, s.evaluations};
}

std::vector<double> cumulative_integrals(const std::function<double(double)>& f, double a,
                                         const std::vector<double>& xs, double rel_tol)
{
    std::vector<double> out;
    out.reserve(xs.size());
    double left = a;
    double acc = 0.0;
    for (double x : xs) {
        if (x < left)
            throw UsageError("cumulative_integrals needs increasing points >= a");
        acc += integrate(f, left, x, rel_tol).value;
        out.push_back(acc);
        left = x;
    }
    return out;
}

} // namespace critlen
