#include "critlen/bessel.hpp"
#include "critlen/critical_length.hpp"
#include "critlen/determinants.hpp"
#include "critlen/identities.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

using namespace critlen;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

std::vector<double> linspace_open(double lo, double hi, int points)
{
    // (lo, hi] with `points` nodes.
    std::vector<double> xs;
    for (int i = 1; i <= points; ++i)
        xs.push_back(lo + (hi - lo) * i / points);
    return xs;
}

std::string sci(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

double rel_gap(double a, double b)
{
    const double scale = std::max(std::fabs(a), std::fabs(b));
    return scale == 0.0 ? 0.0 : std::fabs(a - b) / scale;
}

Outcome closed_form()
{
    double worst = 0.0;
    for (int n = 0; n <= 8; ++n) {
        const TrigPoly f = spherical_fn(n);
        const BesselOrder order(n + 0.5);
        for (double x : linspace_open(0.1, 30.0, 25)) {
            const double series = std::sqrt(std::numbers::pi / 2) * std::pow(x, n + 0.5) * bessel_j(order, x);
            worst = std::max(worst, rel_gap(evaluate(f, x), series));
        }
    }
    return {worst <= 1e-11, "max relative gap " + sci(worst) + " (tol 1e-11)"};
}

Outcome structural()
{
    const TrigPoly X = TrigPoly::x();
    int bad = 0;
    for (int n = 1; n <= 10; ++n) {
        const TrigPoly f = spherical_fn(n);
        const TrigPoly f1 = derivative(f);
        if (!(X * derivative(f1) - BigRational(2 * n) * f1 + X * f).is_zero())
            ++bad;
        if (!(f1 - X * spherical_fn(n - 1)).is_zero())
            ++bad;
    }
    return {bad == 0, std::to_string(bad) + " nonzero residual elements for n = 1..10"};
}

/// min over the grid of g / scale, scale = max(1, max |g|).
double scaled_min(const std::vector<double>& values)
{
    double scale = 1.0, lowest = INFINITY;
    for (double v : values) {
        scale = std::max(scale, std::fabs(v));
        lowest = std::min(lowest, v);
    }
    return lowest / scale;
}

std::vector<double> sample(const TrigPoly& a, const std::vector<double>& xs)
{
    std::vector<double> out;
    out.reserve(xs.size());
    for (double x : xs)
        out.push_back(evaluate(a, x));
    return out;
}

Outcome v_positivity()
{
    bool pass = true;
    double min_v = INFINITY, min_d1 = INFINITY, min_d2 = INFINITY;
    const auto xs = linspace_open(1e-3, 30.0, 2000);
    for (int n = 1; n <= 8; ++n) {
        const TrigPoly v = symbolic_v(spherical_fn(n));
        const TrigPoly v1 = derivative(v);
        for (double value : sample(v, xs)) {
            pass = pass && value > 0.0;
            min_v = std::min(min_v, value);
        }
        const double d1 = scaled_min(sample(v1, xs));
        const double d2 = scaled_min(sample(derivative(v1), xs));
        min_d1 = std::min(min_d1, d1);
        min_d2 = std::min(min_d2, d2);
        pass = pass && d1 >= -1e-12 && d2 >= -1e-12;
    }
    return {pass, "min v " + sci(min_v) + ", min v'/scale " + sci(min_d1) + ", min v''/scale " + sci(min_d2)};
}

Outcome w_positivity()
{
    bool pass = true;
    double min_w = INFINITY, min_mono = INFINITY;
    for (int n = 1; n <= 8; ++n) {
        const TrigPoly f = spherical_fn(n);
        const TrigPoly w = symbolic_w(f);
        const double z = spherical_zero(n, 1).value;
        for (double value : sample(w, linspace_open(1e-3, z - 1e-3, 2000))) {
            pass = pass && value > 0.0;
            min_w = std::min(min_w, value);
        }
        // x w' - 3(n-1) w, divided by x afterwards.
        const TrigPoly g = TrigPoly::x() * derivative(w) - BigRational(3 * (n - 1)) * w;
        const auto xs = linspace_open(1e-3, spherical_deriv_zero(n, 1).value, 2000);
        auto values = sample(g, xs);
        for (std::size_t i = 0; i < xs.size(); ++i)
            values[i] /= xs[i];
        const double m = scaled_min(values);
        min_mono = std::min(min_mono, m);
        pass = pass && m >= -1e-10;
    }
    return {pass, "min w " + sci(min_w) + ", min (w' - 3(n-1)w/x)/scale " + sci(min_mono)};
}

Outcome V_positivity()
{
    bool pass = true;
    double min_V = INFINITY, min_step = INFINITY;
    for (int n = 2; n <= 8; ++n) {
        const CoeffModel model = spherical_model(n);
        const TrigPoly f = spherical_fn(n);
        for (double x : linspace_open(1e-3, 30.0, 2000)) {
            const Tracked V = v_function(model_at(model, x), trig_stack(f, x, 2));
            const double m = V.value / std::max(1.0, V.magnitude);
            min_V = std::min(min_V, m);
            pass = pass && m >= -1e-12;
        }
        // x^{-2n} V = U / x^{2n+3} with U = x^3 V exact in the ring.
        const TrigPoly X = TrigPoly::x();
        const TrigPoly f1 = derivative(f);
        const BigRational k1(2 * n), k2(2 * n * (n - 1));
        const TrigPoly U = k1 * (X * f1 * f1) - k2 * (f1 * f) - (k2 * X - BigRational(2) * (X * X * X)) * symbolic_v(f);
        const DividedEvaluator scaled(U, 2 * n + 3);
        const double jp = bessel_deriv_zero(BesselOrder(n + 0.5), 1).value;
        std::vector<double> values;
        for (double x : linspace_open(1e-3, jp, 2000))
            values.push_back(scaled(x));
        double scale = 1.0;
        for (double v : values)
            scale = std::max(scale, std::fabs(v));
        for (std::size_t i = 1; i < values.size(); ++i) {
            const double step = (values[i] - values[i - 1]) / scale;
            min_step = std::min(min_step, step);
            pass = pass && step >= -1e-12;
        }
    }
    return {pass, "min V/scale " + sci(min_V) + ", min step of x^-2n V " + sci(min_step)};
}

Outcome registry()
{
    int checked = 0, skipped = 0, failed = 0;
    std::string failures;
    std::vector<CoeffModel> models;
    for (int n : {1, 2, 3, 4, 6})
        models.push_back(spherical_model(n));
    for (double nu : {1.5, 2.0, 3.4})
        models.push_back(bessel_model(nu));
    const GridSpec grid{0.01, 30.0, 500, true};
    for (const auto& model : models) {
        const Subject subject = default_subject(model);
        for (IdentityId id : all_identities()) {
            const auto r = verify_identity(id, model, subject, grid, std::nullopt, 4);
            if (!r.applicable) {
                ++skipped;
                continue;
            }
            ++checked;
            if (!r.pass) {
                ++failed;
                failures += " " + model.descriptor + "/" + std::string(tag(id)) + "=" + sci(r.max_rel_residual);
            }
        }
    }
    return {failed == 0, std::to_string(checked) + " checked, " + std::to_string(skipped) + " not applicable, " +
                             std::to_string(failed) + " failed" + failures};
}

Outcome critical_length()
{
    bool pass = true;
    std::string detail;
    for (int n = 0; n <= 6; ++n) {
        const auto t0 = std::chrono::steady_clock::now();
        const auto r = estimate_critical_length(n, std::nullopt, 1e-12, 4);
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool ok = n <= 2 ? std::fabs(r.estimate - r.reference) <= 1e-8 : r.estimate <= r.reference + 1e-8;
        pass = pass && ok;
        detail += "gap(" + std::to_string(n) + ")=" + sci(r.gap) + " ";
        if (n == 6) {
            pass = pass && seconds <= 60.0;
            detail += "n=6 took " + sci(seconds) + " s";
        }
    }
    return {pass, detail};
}

Outcome bessel_v()
{
    bool pass = true;
    double min_v = INFINITY;
    bool turns = false;
    const auto xs = linspace_open(1e-3, 20.0, 4000);
    for (double nu : {0.0, 1.0, 2.5, 3.4}) {
        const BesselOrder order(nu);
        std::vector<double> v;
        for (double x : xs) {
            const auto s = bessel_j_stack(order, x, 2);
            v.push_back(s[1] * s[1] - s[0] * s[2]);
        }
        for (double value : v) {
            min_v = std::min(min_v, value);
            pass = pass && value >= -1e-10;
        }
        if (nu == 3.4) {
            int previous = 0;
            for (std::size_t i = 1; i < v.size(); ++i) {
                const double d = (v[i] - v[i - 1]) / (xs[i] - xs[i - 1]);
                const int sign = d > 0 ? 1 : (d < 0 ? -1 : 0);
                if (sign != 0 && previous != 0 && sign != previous)
                    turns = true;
                if (sign != 0)
                    previous = sign;
            }
        }
    }
    pass = pass && turns;
    return {pass, "min v(J_nu) " + sci(min_v) + ", v(J_3.4)' changes sign: " + (turns ? "yes" : "no")};
}

Outcome zero_structure()
{
    bool pass = true;
    double margin = INFINITY;
    for (double nu : {0.5, 1.5, 2.5, 3.5}) {
        const double a = bessel_zero(BesselOrder(nu), 1).value;
        const double b = bessel_zero(BesselOrder(nu + 1), 1).value;
        const double c = bessel_zero(BesselOrder(nu), 2).value;
        margin = std::min({margin, a, b - a, c - b});
        pass = pass && a > 1e-9 && b - a > 1e-9 && c - b > 1e-9;
    }
    double dmargin = INFINITY;
    for (int n = 1; n <= 8; ++n) {
        const double jd = spherical_deriv_zero(n, 1).value;
        const double jb = bessel_deriv_zero(BesselOrder(n + 0.5), 1).value;
        dmargin = std::min({dmargin, jd - (n + 0.5), jb - (n + 0.5)});
        pass = pass && jd > n + 0.5 && jb > n + 0.5;
    }
    return {pass, "smallest interlacing margin " + sci(margin) + ", smallest j' - (n + 1/2) " + sci(dmargin)};
}

Outcome dual_path()
{
    double worst = 0.0;
    int pairs = 0;
    const auto xs = linspace_open(0.0, 15.0, 200);
    for (int n = 0; n <= 4; ++n)
        for (int j = n + 1; j <= 2 * n + 1; ++j) {
            const TrigPoly s = symbolic_minor(n, j);
            const MinorEvaluator numeric(n, j);
            for (double x : xs)
                worst = std::max(worst, rel_gap(evaluate(s, x), numeric(x)));
            ++pairs;
        }
    return {worst <= 1e-10, std::to_string(pairs) + " minors, max relative gap " + sci(worst) + " (tol 1e-10)"};
}

} // namespace

int main()
{
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
        {"closed form of f_n vs Bessel series", closed_form},
        {"exact structural recurrences", structural},
        {"v(f_n) positive, increasing, convex", v_positivity},
        {"w(f_n) positive before the first zero", w_positivity},
        {"V(f_n) nonnegative, x^-2n V nondecreasing", V_positivity},
        {"identity registry on both model families", registry},
        {"critical length for n = 0..6", critical_length},
        {"v(J_nu) nonnegative, v(J_3.4) not monotone", bessel_v},
        {"zero interlacing and derivative zero bound", zero_structure},
        {"symbolic and numeric minors agree", dual_path},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("%s criterion %2zu: %s [%s; %.1f s]\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                    o.detail.c_str(), seconds);
        std::fflush(stdout);
        if (!o.pass)
            ++failures;
    }
    return failures == 0 ? 0 : 1;
}
