#include "critlen/model.hpp"

#include "critlen/bessel.hpp"
#include "critlen/errors.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace critlen {

ModelAt model_at(const CoeffModel& m, double x)
{
    ModelAt at{x, {}, {}};
    for (std::size_t k = 0; k < at.p.size(); ++k)
        at.p[k] = m.p[k](x);
    for (std::size_t k = 0; k < at.q.size(); ++k)
        at.q[k] = m.q[k](x);
    return at;
}

namespace {

std::string shortest(double v)
{
    char buf[40];
    for (int digits = 1; digits <= 17; ++digits) {
        std::snprintf(buf, sizeof buf, "%.*g", digits, v);
        if (std::strtod(buf, nullptr) == v)
            break;
    }
    return buf;
}

} // namespace

CoeffModel spherical_model(int n)
{
    if (n < 0 || n > kMaxSphericalOrder)
        throw UsageError("spherical model order must be in 0.." + std::to_string(kMaxSphericalOrder));
    const double c = 2.0 * n;
    CoeffModel m;
    m.p = {[c](double x) { return -c / x; }, [c](double x) { return c / (x * x); },
           [c](double x) { return -2 * c / (x * x * x); }, [c](double x) { return 6 * c / std::pow(x, 4); },
           [c](double x) { return -24 * c / std::pow(x, 5); }};
    m.q = {[](double) { return 1.0; }, [](double) { return 0.0; }, [](double) { return 0.0; },
           [](double) { return 0.0; }};
    m.P = [c](double x) { return -c * std::log(x); };
    m.lo = 0.0;
    m.qprime_is_zero = true;
    m.kind = ModelKind::spherical;
    m.n = n;
    m.descriptor = "spherical:" + std::to_string(n);
    return m;
}

CoeffModel bessel_model(double nu)
{
    const double order = BesselOrder(nu).value();
    const double s = order * order;
    CoeffModel m;
    m.p = {[](double x) { return 1.0 / x; }, [](double x) { return -1.0 / (x * x); },
           [](double x) { return 2.0 / (x * x * x); }, [](double x) { return -6.0 / std::pow(x, 4); },
           [](double x) { return 24.0 / std::pow(x, 5); }};
    m.q = {[s](double x) { return 1.0 - s / (x * x); }, [s](double x) { return 2 * s / (x * x * x); },
           [s](double x) { return -6 * s / std::pow(x, 4); }, [s](double x) { return 24 * s / std::pow(x, 5); }};
    m.P = [](double x) { return std::log(x); };
    m.lo = 0.0;
    m.qprime_is_zero = s == 0.0;
    m.kind = ModelKind::bessel;
    m.nu = order;
    m.descriptor = "bessel:" + shortest(order);
    return m;
}

CoeffModel parse_model(std::string_view text)
{
    const auto colon = text.find(':');
    if (colon == std::string_view::npos)
        throw UsageError("model must be spherical:<n> or bessel:<nu>");
    const std::string family(text.substr(0, colon));
    const std::string arg(text.substr(colon + 1));
    if (arg.empty())
        throw UsageError("missing model parameter");
    char* end = nullptr;
    if (family == "spherical") {
        const long n = std::strtol(arg.c_str(), &end, 10);
        if (*end != '\0')
            throw UsageError("spherical model needs an integer order");
        return spherical_model(static_cast<int>(n));
    }
    if (family == "bessel") {
        const double nu = std::strtod(arg.c_str(), &end);
        if (*end != '\0' || arg.find_first_of("xXpPnN") != std::string::npos)
            throw UsageError("bessel model needs a decimal order");
        return bessel_model(nu);
    }
    throw UsageError("unknown model family '" + family + "'");
}

namespace {

double five_point(const std::function<double(double)>& g, double x, double h)
{
    return (g(x - 2 * h) - 8 * g(x - h) + 8 * g(x + h) - g(x + 2 * h)) / (12 * h);
}

bool close(double exact, double approx, double rel_tol)
{
    const double scale = std::max({std::fabs(exact), std::fabs(approx), 1e-8});
    return std::fabs(exact - approx) <= rel_tol * scale;
}

} // namespace

std::optional<std::string> check_model_derivatives(const CoeffModel& m, std::span<const double> points,
                                                   double rel_tol)
{
    for (double x : points) {
        const double h = 1e-3 * std::max(std::fabs(x), 1e-3);
        auto report = [&](const std::string& what, double exact, double approx) {
            return what + " at x=" + shortest(x) + ": analytic " + shortest(exact) + ", difference quotient " +
                   shortest(approx);
        };
        for (std::size_t k = 0; k + 1 < m.p.size(); ++k) {
            const double exact = m.p[k + 1](x);
            const double approx = five_point(m.p[k], x, h);
            if (!close(exact, approx, rel_tol))
                return report("p^(" + std::to_string(k + 1) + ")", exact, approx);
        }
        for (std::size_t k = 0; k + 1 < m.q.size(); ++k) {
            const double exact = m.q[k + 1](x);
            const double approx = five_point(m.q[k], x, h);
            if (!close(exact, approx, rel_tol))
                return report("q^(" + std::to_string(k + 1) + ")", exact, approx);
        }
        if (m.P) {
            const double exact = m.p[0](x);
            const double approx = five_point(m.P, x, h);
            if (!close(exact, approx, rel_tol))
                return report("P'", exact, approx);
        }
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------

Subject Subject::trig(TrigPoly f, std::string descriptor)
{
    Subject s;
    std::array<TrigPoly, 6> chain;
    chain[0] = std::move(f);
    for (std::size_t k = 1; k < chain.size(); ++k)
        chain[k] = derivative(chain[k - 1]);
    s.chain_ = std::move(chain);
    s.descriptor_ = std::move(descriptor);
    return s;
}

Subject Subject::bessel(double nu)
{
    Subject s;
    s.nu_ = BesselOrder(nu).value();
    s.descriptor_ = "J_" + shortest(s.nu_);
    return s;
}

double Subject::value(double x) const
{
    if (chain_)
        return evaluate((*chain_)[0], x);
    return bessel_j(BesselOrder(nu_), x);
}

DerivStack Subject::stack(double x, int m) const
{
    if (m < 0 || m > 5)
        throw UsageError("stack depth must be in 0..5");
    DerivStack s{x, {}};
    if (chain_) {
        for (int k = 0; k <= m; ++k)
            s.values.push_back(evaluate((*chain_)[static_cast<std::size_t>(k)], x));
        return s;
    }
    const BesselOrder order(nu_);
    s.values = bessel_j_stack(order, x, std::min(m, 4));
    if (m == 5) {
        auto fourth = [&](double t) { return bessel_j_deriv(order, t, 4); };
        s.values.push_back(richardson_derivative(fourth, x, 1e-2 * x));
    }
    return s;
}

Subject default_subject(const CoeffModel& m)
{
    switch (m.kind) {
    case ModelKind::spherical:
        return Subject::trig(spherical_fn(m.n), "f_" + std::to_string(m.n));
    case ModelKind::bessel:
        return Subject::bessel(m.nu);
    case ModelKind::custom:
        break;
    }
    throw UsageError("custom models have no default subject");
}

double richardson_derivative(const std::function<double(double)>& g, double x, double h0, int levels)
{
    if (!(h0 > 0.0) || levels < 0)
        throw UsageError("bad Richardson parameters");
    std::vector<std::vector<double>> t(static_cast<std::size_t>(levels) + 1);
    double h = h0;
    for (int i = 0; i <= levels; ++i, h /= 2) {
        auto& row = t[static_cast<std::size_t>(i)];
        row.push_back((g(x + h) - g(x - h)) / (2 * h));
        double factor = 4.0;
        for (int k = 1; k <= i; ++k, factor *= 4) {
            const double prev_same = row[static_cast<std::size_t>(k) - 1];
            const double prev_coarse = t[static_cast<std::size_t>(i) - 1][static_cast<std::size_t>(k) - 1];
            row.push_back(prev_same + (prev_same - prev_coarse) / (factor - 1));
        }
    }
    return t.back().back();
}

} // namespace critlen
