#pragma once

#include "critlen/determinants.hpp"

#include <array>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace critlen {

enum class ModelKind { spherical, bessel, custom };

/// Coefficients of f'' + p f' + q f = 0 with their derivatives.
/// p[k] is p^(k) for k = 0..4, q[k] is q^(k) for k = 0..3, P' = p.
struct CoeffModel {
    std::array<std::function<double(double)>, 5> p;
    std::array<std::function<double(double)>, 4> q;
    std::function<double(double)> P;
    double lo = 0.0;
    double hi = std::numeric_limits<double>::infinity();
    bool qprime_is_zero = false;

    ModelKind kind = ModelKind::custom;
    int n = 0;
    double nu = 0.0;
    std::string descriptor = "custom";

    bool in_domain(double x) const { return x > lo && x < hi; }
};

/// Point values of a model.
struct ModelAt {
    double x;
    std::array<double, 5> p;
    std::array<double, 4> q;
};

ModelAt model_at(const CoeffModel& m, double x);

/// p = -2n/x, q = 1, P = -2n ln x on (0, inf); solved by f_n.
CoeffModel spherical_model(int n);
/// p = 1/x, q = 1 - nu^2/x^2, P = ln x on (0, inf); solved by J_nu.
CoeffModel bessel_model(double nu);
/// "spherical:<n>" or "bessel:<nu>".
CoeffModel parse_model(std::string_view text);

/// Compares every derivative field (and P' = p) against five-point central
/// differences at the given points. Returns a description of the first
/// mismatch beyond rel_tol, or nothing.
std::optional<std::string> check_model_derivatives(const CoeffModel& m, std::span<const double> points,
                                                   double rel_tol = 1e-6);

/// The function f whose determinants are checked against a model.
class Subject {
public:
    static Subject trig(TrigPoly f, std::string descriptor);
    static Subject bessel(double nu);

    /// Stack of depth m <= 5. For a ring element all entries are exact
    /// derivatives; for J_nu the fifth derivative is a Richardson-extrapolated
    /// central difference of the fourth.
    DerivStack stack(double x, int m) const;
    double value(double x) const;

    bool exact() const { return chain_.has_value(); }
    /// The ring element; only valid when exact().
    const TrigPoly& poly() const { return (*chain_)[0]; }
    double nu() const { return nu_; }
    const std::string& descriptor() const { return descriptor_; }

private:
    std::optional<std::array<TrigPoly, 6>> chain_;
    double nu_ = 0.0;
    std::string descriptor_;
};

/// f_n for spherical models, J_nu for Bessel models.
Subject default_subject(const CoeffModel& m);

/// Richardson extrapolation of the central difference quotient of g at x,
/// initial step h0, `levels` halvings.
double richardson_derivative(const std::function<double(double)>& g, double x, double h0, int levels = 4);

} // namespace critlen
