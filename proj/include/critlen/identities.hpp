#pragma once

#include "critlen/model.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace critlen {

enum class IdentityId {
    prop1,
    integral_v,
    integral_vfn,
    integral_vJnu,
    thm_main1_criterion,
    prop2,
    cor2_ode,
    vfprime,
    thm_main2,
    remark_zero,
    cubic_coeffs,
    cor5,
    thm_main3,
    thm_main4,
    thm_main6,
    a23_coeffs,
    eq_newAA,
    integral_V,
    eq_Vpositive,
};

const std::vector<IdentityId>& all_identities();
std::string_view tag(IdentityId id);
/// Inverse of tag(); UsageError for unknown tags.
IdentityId parse_identity(std::string_view text);

/// Pointwise identities are residuals of a single derivative stack; the
/// others need integrals, zeros or grids.
bool is_pointwise(IdentityId id);
/// Stack depth a pointwise identity reads.
int required_depth(IdentityId id);

/// A value together with the sum of magnitudes of the terms that produced
/// it, so that residuals can be judged relative to their cancellation.
struct Tracked {
    double value = 0.0;
    double magnitude = 0.0;

    Tracked() = default;
    Tracked(double v) : value(v), magnitude(std::abs(v)) {}
    Tracked(double v, double m) : value(v), magnitude(m) {}

    friend Tracked operator+(Tracked a, Tracked b) { return {a.value + b.value, a.magnitude + b.magnitude}; }
    friend Tracked operator-(Tracked a, Tracked b) { return {a.value - b.value, a.magnitude + b.magnitude}; }
    friend Tracked operator*(Tracked a, Tracked b) { return {a.value * b.value, a.magnitude * b.magnitude}; }
    /// The divisor is treated as exact.
    friend Tracked operator/(Tracked a, Tracked b)
    {
        return {a.value / b.value, a.magnitude / std::abs(b.value)};
    }
    Tracked operator-() const { return {-value, magnitude}; }
};

/// |r| / max(1, scale): relative where the terms are large, absolute where
/// they are below 1.
inline double relative_residual(double abs_residual, double scale)
{
    return abs_residual / std::max(1.0, scale);
}

/// LHS - RHS of a pointwise identity with its term magnitude.
/// Throws UsageError for a shallow stack, a non-pointwise id, an id that
/// needs q' = 0 on a model without it, or a model-specific identity on the
/// wrong model family; SingularPoint where p'(x) = 0 is divided by.
Tracked residual_terms(IdentityId id, const CoeffModel& model, const DerivStack& stack);

/// |LHS - RHS| at stack.x.
double residual(IdentityId id, const CoeffModel& model, const DerivStack& stack);

struct CubicCoeffs {
    double a0, a1, a2, a3;
};
/// w = a0 f^3 + a1 f' f^2 + a2 f'^2 f + a3 f'^3 for solutions of the model.
CubicCoeffs cubic_coeffs(const CoeffModel& model, double x);

struct A23 {
    double A2, A3;
};
/// Requires q' = 0 and p'(x) != 0.
A23 a23_coeffs(const CoeffModel& model, double x);

/// V = p' f'^2 + (p' p - p'')/2 f' f - B v. Requires p'(x) != 0.
Tracked v_function(const ModelAt& m, const DerivStack& s);

struct GridSpec {
    double lo = 0.0;
    double hi = 0.0;
    int points = 0;
    bool log_spaced = true;

    /// Increasing nodes including both endpoints.
    std::vector<double> nodes() const;
};

struct VerificationReport {
    IdentityId identity = IdentityId::prop1;
    std::string model;
    std::string subject;
    GridSpec grid;
    int samples = 0;
    double max_abs_residual = 0.0;
    double max_rel_residual = 0.0;
    double tolerance = 0.0;
    bool pass = true;
    double worst_x = 0.0;
    bool applicable = true;
    std::string note;
};

nlohmann::json to_json(const VerificationReport& r);

/// Reason why an identity does not apply to a model, or nothing.
std::optional<std::string> not_applicable(IdentityId id, const CoeffModel& model);

/// 1e-8 for integral identities, 1e-7 when a fifth derivative of a
/// non-ring subject is needed, 1e-9 otherwise.
double default_tolerance(IdentityId id, const Subject& subject);

/// Checks an identity on a grid (for remark-zero: at the zeros of the
/// subject inside the grid range). An inapplicable identity yields a report
/// with applicable = false and pass = true.
VerificationReport verify_identity(IdentityId id, const CoeffModel& model, const Subject& subject,
                                   const GridSpec& grid, std::optional<double> tolerance = std::nullopt,
                                   int threads = 1);

/// An integral identity at a single point.
VerificationReport integral_check(IdentityId id, const CoeffModel& model, const Subject& subject, double x,
                                  double tolerance);

/// q - (p/p') q' on a grid over [lo, hi]; passes iff it is >= 0 everywhere.
VerificationReport positivity_criterion(const CoeffModel& model, double lo, double hi, int points);

} // namespace critlen
