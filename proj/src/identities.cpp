#include "critlen/identities.hpp"

#include "critlen/bessel.hpp"
#include "critlen/errors.hpp"
#include "critlen/parallel.hpp"
#include "critlen/quadrature.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>

namespace critlen {

namespace {

struct Entry {
    IdentityId id;
    std::string_view tag;
    int depth; // -1: not pointwise
};

constexpr std::array kRegistry = {
    Entry{IdentityId::prop1, "prop1", 3},
    Entry{IdentityId::integral_v, "integral-v", -1},
    Entry{IdentityId::integral_vfn, "integral-vfn", -1},
    Entry{IdentityId::integral_vJnu, "integral-vJnu", -1},
    Entry{IdentityId::thm_main1_criterion, "thm-main1-criterion", -1},
    Entry{IdentityId::prop2, "prop2", 4},
    Entry{IdentityId::cor2_ode, "cor2-ode", 4},
    Entry{IdentityId::vfprime, "vfprime", 3},
    Entry{IdentityId::thm_main2, "thm-main2", 4},
    Entry{IdentityId::remark_zero, "remark-zero", 4},
    Entry{IdentityId::cubic_coeffs, "cubic-coeffs", 4},
    Entry{IdentityId::cor5, "cor5", 4},
    Entry{IdentityId::thm_main3, "thm-main3", 5},
    Entry{IdentityId::thm_main4, "thm-main4", 5},
    Entry{IdentityId::thm_main6, "thm-main6", 3},
    Entry{IdentityId::a23_coeffs, "a23-coeffs", 0},
    Entry{IdentityId::eq_newAA, "eq-newAA", 3},
    Entry{IdentityId::integral_V, "integral-V", -1},
    Entry{IdentityId::eq_Vpositive, "eq-Vpositive", -1},
};

const Entry& entry(IdentityId id)
{
    for (const auto& e : kRegistry)
        if (e.id == id)
            return e;
    throw UsageError("unknown identity");
}

bool needs_qprime_zero(IdentityId id)
{
    switch (id) {
    case IdentityId::thm_main4:
    case IdentityId::thm_main6:
    case IdentityId::eq_newAA:
    case IdentityId::integral_V:
    case IdentityId::eq_Vpositive:
        return true;
    default:
        return false;
    }
}

bool spherical_only(IdentityId id)
{
    switch (id) {
    case IdentityId::cor5:
    case IdentityId::cor2_ode:
    case IdentityId::integral_vfn:
    case IdentityId::integral_V:
    case IdentityId::eq_Vpositive:
        return true;
    default:
        return false;
    }
}

bool divides_by_pprime(IdentityId id)
{
    switch (id) {
    case IdentityId::prop2:
    case IdentityId::thm_main4:
    case IdentityId::eq_newAA:
    case IdentityId::a23_coeffs:
    case IdentityId::integral_V:
    case IdentityId::eq_Vpositive:
    case IdentityId::thm_main1_criterion:
        return true;
    default:
        return false;
    }
}

bool is_integral(IdentityId id)
{
    switch (id) {
    case IdentityId::integral_v:
    case IdentityId::integral_vfn:
    case IdentityId::integral_vJnu:
    case IdentityId::integral_V:
    case IdentityId::eq_Vpositive:
        return true;
    default:
        return false;
    }
}

/// Restrictions a single residual evaluation enforces.
void check_pointwise_model(IdentityId id, const CoeffModel& model)
{
    if (needs_qprime_zero(id) && !model.qprime_is_zero)
        throw UsageError(std::string(tag(id)) + " requires q' = 0, model " + model.descriptor + " has q' != 0");
    if (spherical_only(id) && model.kind != ModelKind::spherical)
        throw UsageError(std::string(tag(id)) + " applies to spherical models only");
}

void require_pprime(const ModelAt& m)
{
    if (m.p[1] == 0.0)
        throw SingularPoint(m.x, "p'(x) = 0");
}

struct Fs {
    Tracked f0, f1, f2, f3, f4, f5;
};

Fs unpack(const DerivStack& s)
{
    auto at = [&](int i) { return i <= s.depth() ? Tracked(s[i]) : Tracked(); };
    return {at(0), at(1), at(2), at(3), at(4), at(5)};
}

Tracked det3(Tracked a, Tracked b, Tracked c, Tracked d, Tracked e, Tracked f, Tracked g, Tracked h, Tracked i)
{
    return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g);
}

Tracked w_of(const Fs& F) { return det3(F.f2, F.f1, F.f0, F.f3, F.f2, F.f1, F.f4, F.f3, F.f2); }

Tracked wprime_of(const Fs& F) { return det3(F.f2, F.f1, F.f0, F.f3, F.f2, F.f1, F.f5, F.f4, F.f3); }

Tracked v_of(const Fs& F) { return F.f1 * F.f1 - F.f2 * F.f0; }

Tracked vprime_of(const Fs& F) { return F.f1 * F.f2 - F.f3 * F.f0; }

Tracked vsecond_of(const Fs& F) { return F.f2 * F.f2 - F.f4 * F.f0; }

struct Coeffs {
    Tracked p, p1, p2, p3, p4, q, q1, q2, q3, x;
};

Coeffs coeffs(const ModelAt& m)
{
    return {m.p[0], m.p[1], m.p[2], m.p[3], m.p[4], m.q[0], m.q[1], m.q[2], m.q[3], m.x};
}

// alpha and beta in A = alpha f' + beta f.
Tracked alpha_of(const Coeffs& c) { return c.p2 - c.p1 * c.p + Tracked(2) * c.q1; }
Tracked beta_of(const Coeffs& c) { return Tracked(-2) * c.p1 * c.q + c.q2 + c.p * c.q1; }

Tracked b_of(const Coeffs& c)
{
    return Tracked(0.5) * c.p * c.p - c.p1 - Tracked(2) * c.q + c.p3 / c.p1 -
           Tracked(1.5) * c.p2 * c.p2 / (c.p1 * c.p1);
}

Tracked bprime_of(const Coeffs& c)
{
    const Tracked p1sq = c.p1 * c.p1;
    return c.p * c.p1 - c.p2 - Tracked(2) * c.q1 + (c.p4 * c.p1 - c.p3 * c.p2) / p1sq -
           Tracked(3) * c.p2 * c.p3 / p1sq + Tracked(3) * c.p2 * c.p2 * c.p2 / (p1sq * c.p1);
}

Tracked a2_closed(const Coeffs& c)
{
    return Tracked(1.5) * (c.p1 * c.p1 - c.p3 + c.p2 * c.p2 / c.p1);
}

Tracked a3_closed(const Coeffs& c)
{
    const Tracked p1sq = c.p1 * c.p1;
    return Tracked(1.5) * (c.p2 - c.p1 * c.p) - c.p4 / c.p1 + Tracked(4) * c.p2 * c.p3 / p1sq -
           Tracked(3) * c.p2 * c.p2 * c.p2 / (p1sq * c.p1);
}

Tracked a2_closed_prime(const Coeffs& c)
{
    const Tracked p1sq = c.p1 * c.p1;
    return Tracked(1.5) * (Tracked(2) * c.p1 * c.p2 - c.p4 +
                           (Tracked(2) * c.p2 * c.p3 * c.p1 - c.p2 * c.p2 * c.p2) / p1sq);
}

Tracked v_function_tracked(const Coeffs& c, const Fs& F)
{
    return c.p1 * F.f1 * F.f1 + Tracked(0.5) * (c.p1 * c.p - c.p2) * F.f1 * F.f0 - b_of(c) * v_of(F);
}

/// The value, or 0 when it is indistinguishable from rounding of its terms.
double resolved(Tracked t)
{
    return std::abs(t.value) <= 64 * std::numeric_limits<double>::epsilon() * t.magnitude ? 0.0 : t.value;
}

Tracked worse(Tracked a, Tracked b)
{
    return relative_residual(std::abs(a.value), a.magnitude) >= relative_residual(std::abs(b.value), b.magnitude)
               ? a
               : b;
}

Tracked a23_residual(const CoeffModel& model, const Coeffs& c)
{
    // A1 for the V specialization a1 = p', a2 = (p'p - p'')/2.
    const Tracked a2 = Tracked(0.5) * (c.p1 * c.p - c.p2);
    Tracked r = c.p2 - c.p1 * c.p + Tracked(2) * a2;
    if (!model.qprime_is_zero)
        return r;
    if (c.p1.value == 0.0)
        throw SingularPoint(c.x.value, "p'(x) = 0");
    const Tracked a2p = Tracked(0.5) * (c.p2 * c.p + c.p1 * c.p1 - c.p3);
    const Tracked a3 = -b_of(c);
    const Tracked a3p = -bprime_of(c);
    const Tracked A2_def = a2p - Tracked(2) * c.p1 * c.q + c.p * a2 + a3 * c.p1;
    const Tracked A3_def = a3p - a2;
    const Tracked A2 = a2_closed(c);
    const Tracked A3 = a3_closed(c);
    r = worse(r, A2 - A2_def);
    r = worse(r, A3 - A3_def);
    if (model.kind == ModelKind::spherical) {
        const double k = 6.0 * model.n * (model.n - 1);
        const double x = c.x.value;
        r = worse(r, A2 - Tracked(k / std::pow(x, 4)));
        r = worse(r, A3 - Tracked(k / std::pow(x, 3)));
    }
    return r;
}

} // namespace

const std::vector<IdentityId>& all_identities()
{
    static const std::vector<IdentityId> ids = [] {
        std::vector<IdentityId> out;
        for (const auto& e : kRegistry)
            out.push_back(e.id);
        return out;
    }();
    return ids;
}

std::string_view tag(IdentityId id) { return entry(id).tag; }

IdentityId parse_identity(std::string_view text)
{
    for (const auto& e : kRegistry)
        if (e.tag == text)
            return e.id;
    throw UsageError("unknown identity '" + std::string(text) + "'");
}

bool is_pointwise(IdentityId id) { return entry(id).depth >= 0; }

int required_depth(IdentityId id)
{
    const int d = entry(id).depth;
    if (d < 0)
        throw UsageError(std::string(tag(id)) + " is not a pointwise identity");
    return d;
}

Tracked v_function(const ModelAt& m, const DerivStack& s)
{
    require_pprime(m);
    if (s.depth() < 2)
        throw UsageError("V needs a stack of depth >= 2");
    return v_function_tracked(coeffs(m), unpack(s));
}

Tracked residual_terms(IdentityId id, const CoeffModel& model, const DerivStack& stack)
{
    const int depth = required_depth(id);
    if (stack.depth() < depth)
        throw UsageError(std::string(tag(id)) + " needs a stack of depth >= " + std::to_string(depth));
    check_pointwise_model(id, model);
    if (!model.in_domain(stack.x))
        throw UsageError("x outside the model domain");
    const ModelAt m = model_at(model, stack.x);
    const Coeffs c = coeffs(m);
    const Fs F = unpack(stack);
    if (divides_by_pprime(id) && id != IdentityId::a23_coeffs)
        require_pprime(m);

    switch (id) {
    case IdentityId::prop1:
        return vprime_of(F) + c.p * v_of(F) - (c.p1 * F.f1 * F.f0 + c.q1 * F.f0 * F.f0);

    case IdentityId::prop2: {
        const Tracked lhs = vsecond_of(F) + (c.p - c.p2 / c.p1) * vprime_of(F) +
                            (Tracked(2) * c.p1 - c.p2 * c.p / c.p1) * v_of(F);
        const Tracked rhs = Tracked(2) * c.p1 * F.f1 * F.f1 + F.f0 * F.f0 * (c.q2 * c.p1 - c.q1 * c.p2) / c.p1 +
                            Tracked(2) * c.q1 * F.f1 * F.f0;
        return lhs - rhs;
    }

    case IdentityId::cor2_ode: {
        const double n = model.n;
        return vsecond_of(F) - Tracked(2 * (n - 1)) / c.x * vprime_of(F) - Tracked(4 * n) / (c.x * c.x) * F.f1 * F.f1;
    }

    case IdentityId::vfprime:
        return F.f2 * F.f2 - F.f1 * F.f3 - (c.p1 * F.f1 * F.f1 + c.q1 * F.f1 * F.f0 + c.q * v_of(F));

    case IdentityId::thm_main2: {
        const Tracked w = w_of(F);
        const Tracked lead = (c.p1 * F.f1 + c.q1 * F.f0) * (c.p1 * F.f1 + c.q1 * F.f0) * F.f0;
        const Tracked A_first = Tracked(2) * c.p1 * F.f2 + (c.p2 + c.p1 * c.p + Tracked(2) * c.q1) * F.f1 +
                                (c.q2 + c.p * c.q1) * F.f0;
        const Tracked A_second = alpha_of(c) * F.f1 + beta_of(c) * F.f0;
        return worse(w - (lead - A_first * v_of(F)), w - (lead - A_second * v_of(F)));
    }

    case IdentityId::remark_zero:
        return w_of(F) + alpha_of(c) * F.f1 * F.f1 * F.f1;

    case IdentityId::cubic_coeffs: {
        const Tracked alpha = alpha_of(c);
        const Tracked beta = beta_of(c);
        const Tracked a0 = c.q1 * c.q1 - beta * c.q;
        const Tracked a1 = Tracked(2) * c.p1 * c.q1 - alpha * c.q - beta * c.p;
        const Tracked a2 = c.p1 * c.p1 - alpha * c.p - beta;
        const Tracked a3 = -alpha;
        return w_of(F) - (a0 * F.f0 * F.f0 * F.f0 + a1 * F.f1 * F.f0 * F.f0 + a2 * F.f1 * F.f1 * F.f0 +
                          a3 * F.f1 * F.f1 * F.f1);
    }

    case IdentityId::cor5: {
        const double n = model.n;
        const Tracked x = c.x;
        const Tracked inner = F.f0 * F.f0 * F.f0 - Tracked(3 * n - 1) / x * F.f1 * F.f0 * F.f0 +
                              (Tracked(2 * n * n - n) + x * x) / (x * x) * F.f1 * F.f1 * F.f0 -
                              Tracked(n - 1) / x * F.f1 * F.f1 * F.f1;
        return w_of(F) - Tracked(4 * n) / (x * x) * inner;
    }

    case IdentityId::thm_main3: {
        const Tracked alpha = alpha_of(c);
        const Tracked beta = beta_of(c);
        const Tracked alpha_p = c.p3 - c.p2 * c.p - c.p1 * c.p1 + Tracked(2) * c.q2;
        const Tracked beta_p = Tracked(-2) * c.p2 * c.q - c.p1 * c.q1 + c.q3 + c.p * c.q2;
        const Tracked A_prime = alpha_p * F.f1 + alpha * F.f2 + beta_p * F.f0 + beta * F.f1;
        const Tracked lhs = wprime_of(F) + c.p * w_of(F);
        const Tracked rhs = (c.p1 * F.f1 + c.q1 * F.f0) *
                                ((c.p2 + c.q1) * F.f1 * F.f0 + c.q2 * F.f0 * F.f0 + c.p1 * F.f1 * F.f1) -
                            A_prime * v_of(F);
        return lhs - rhs;
    }

    case IdentityId::thm_main4: {
        const Tracked lhs = wprime_of(F) + Tracked(1.5) * (c.p - c.p2 / c.p1) * w_of(F);
        return lhs - c.p1 * F.f1 * v_function_tracked(c, F);
    }

    case IdentityId::thm_main6: {
        // Fixed test coefficients a1 = x, a2 = 1, a3 = x^2.
        const Tracked a1 = c.x, a1p = Tracked(1);
        const Tracked a2 = Tracked(1), a2p = Tracked(0);
        const Tracked a3 = c.x * c.x, a3p = Tracked(2) * c.x;
        const Tracked v = v_of(F);
        const Tracked Fv = a1 * F.f1 * F.f1 + a2 * F.f1 * F.f0 + a3 * v;
        const Tracked Fp = a1p * F.f1 * F.f1 + Tracked(2) * a1 * F.f1 * F.f2 + a2p * F.f1 * F.f0 +
                           a2 * (F.f2 * F.f0 + F.f1 * F.f1) + a3p * v + a3 * vprime_of(F);
        const Tracked A1 = a1p - a1 * c.p + Tracked(2) * a2;
        const Tracked A2 = a2p - Tracked(2) * a1 * c.q + c.p * a2 + a3 * c.p1;
        const Tracked A3 = a3p - a2;
        return Fp + c.p * Fv - (A1 * F.f1 * F.f1 + A2 * F.f1 * F.f0 + A3 * v);
    }

    case IdentityId::a23_coeffs:
        return a23_residual(model, c);

    case IdentityId::eq_newAA: {
        const Tracked half_k = Tracked(0.5) * (c.p1 * c.p - c.p2);
        const Tracked half_k_prime = Tracked(0.5) * (c.p2 * c.p + c.p1 * c.p1 - c.p3);
        const Tracked B = b_of(c);
        const Tracked Vp = c.p2 * F.f1 * F.f1 + Tracked(2) * c.p1 * F.f1 * F.f2 + half_k_prime * F.f1 * F.f0 +
                           half_k * (F.f2 * F.f0 + F.f1 * F.f1) - bprime_of(c) * v_of(F) - B * vprime_of(F);
        const Tracked V = v_function_tracked(c, F);
        return Vp + c.p * V - (a2_closed(c) * F.f1 * F.f0 + a3_closed(c) * v_of(F));
    }

    default:
        break;
    }
    throw UsageError(std::string(tag(id)) + " is not a pointwise identity");
}

double residual(IdentityId id, const CoeffModel& model, const DerivStack& stack)
{
    return std::abs(residual_terms(id, model, stack).value);
}

CubicCoeffs cubic_coeffs(const CoeffModel& model, double x)
{
    const Coeffs c = coeffs(model_at(model, x));
    const double alpha = alpha_of(c).value;
    const double beta = beta_of(c).value;
    const double p = c.p.value, p1 = c.p1.value, q = c.q.value, q1 = c.q1.value;
    return {q1 * q1 - beta * q, 2 * p1 * q1 - alpha * q - beta * p, p1 * p1 - alpha * p - beta, -alpha};
}

A23 a23_coeffs(const CoeffModel& model, double x)
{
    if (!model.qprime_is_zero)
        throw UsageError("A2/A3 require q' = 0");
    const ModelAt m = model_at(model, x);
    require_pprime(m);
    const Coeffs c = coeffs(m);
    return {a2_closed(c).value, a3_closed(c).value};
}

std::vector<double> GridSpec::nodes() const
{
    if (points < 1)
        throw UsageError("grid needs at least one point");
    if (!std::isfinite(lo) || !std::isfinite(hi) || hi < lo)
        throw UsageError("grid range must satisfy lo <= hi");
    std::vector<double> out(static_cast<std::size_t>(points));
    if (points == 1) {
        out[0] = lo;
        return out;
    }
    const bool geometric = log_spaced && lo > 0.0;
    const double ratio = geometric ? std::log(hi / lo) : 0.0;
    for (int i = 0; i < points; ++i) {
        const double t = static_cast<double>(i) / (points - 1);
        out[static_cast<std::size_t>(i)] = geometric ? lo * std::exp(ratio * t) : lo + (hi - lo) * t;
    }
    out.front() = lo;
    out.back() = hi;
    return out;
}

nlohmann::json to_json(const VerificationReport& r)
{
    nlohmann::json j;
    j["identity"] = std::string(tag(r.identity));
    j["model"] = r.model;
    j["subject"] = r.subject;
    j["grid"] = {{"lo", r.grid.lo},
                 {"hi", r.grid.hi},
                 {"points", r.grid.points},
                 {"spacing", r.grid.log_spaced ? "log" : "linear"}};
    j["samples"] = r.samples;
    j["max_abs_residual"] = r.max_abs_residual;
    j["max_rel_residual"] = r.max_rel_residual;
    j["tolerance"] = r.tolerance;
    j["pass"] = r.pass;
    j["worst_x"] = r.worst_x;
    j["applicable"] = r.applicable;
    j["note"] = r.note;
    return j;
}

std::optional<std::string> not_applicable(IdentityId id, const CoeffModel& model)
{
    const bool spherical = model.kind == ModelKind::spherical;
    const bool bessel = model.kind == ModelKind::bessel;
    if (needs_qprime_zero(id) && !model.qprime_is_zero)
        return "requires q' = 0";
    if (spherical_only(id) && !spherical)
        return "defined for spherical models only";
    if (spherical && model.n == 0 && divides_by_pprime(id))
        return "p' vanishes identically for n = 0";
    switch (id) {
    case IdentityId::integral_vfn:
    case IdentityId::integral_V:
    case IdentityId::eq_Vpositive:
        if (model.n < 1)
            return "requires n >= 1";
        break;
    case IdentityId::integral_vJnu:
        if (!bessel)
            return "defined for Bessel models only";
        if (!(model.nu > 1.0))
            return "requires nu > 1";
        break;
    case IdentityId::integral_v:
        if (spherical && model.n < 1)
            return "requires f(0) = f'(0) = 0, i.e. n >= 1";
        if (bessel && !(model.nu > 1.0))
            return "requires f(0) = f'(0) = 0 and an integrable weight, i.e. nu > 1";
        break;
    default:
        break;
    }
    return std::nullopt;
}

double default_tolerance(IdentityId id, const Subject& subject)
{
    if (is_integral(id))
        return 1e-8;
    if (is_pointwise(id) && required_depth(id) >= 5 && !subject.exact())
        return 1e-7;
    return 1e-9;
}

namespace {

struct Sample {
    double x = 0.0;
    Tracked r;
};

constexpr double kQuadratureTol = 1e-12;

/// sign(c) * exp(log|c| + P): keeps e^P f^2-type integrands finite where
/// e^P alone overflows.
double weighted(double c, double P)
{
    if (c == 0.0)
        return 0.0;
    return std::copysign(std::exp(std::log(std::abs(c)) + P), c);
}

std::vector<double> zeros_in_range(const CoeffModel& model, const Subject& subject, double lo, double hi)
{
    std::function<double(double)> g;
    if (subject.exact()) {
        const double power = model.kind == ModelKind::spherical ? model.n : 0;
        const TrigPoly& f = subject.poly();
        g = [&f, power](double x) { return evaluate(f, x) / std::pow(x, power); };
    } else {
        g = [&subject](double x) { return subject.value(x); };
    }
    std::vector<double> zeros;
    const double step = std::numbers::pi / 8;
    double x0 = lo;
    double g0 = g(x0);
    while (x0 < hi) {
        const double x1 = std::min(x0 + step, hi);
        const double g1 = g(x1);
        if (g0 != 0.0 && (g1 == 0.0 || std::signbit(g0) != std::signbit(g1))) {
            const ZeroBracket b{x0, x1, ZeroKind::function, static_cast<int>(zeros.size()) + 1};
            zeros.push_back(refine_zero(g, b, kRootTolerance).value);
        }
        x0 = x1;
        g0 = g1;
    }
    return zeros;
}

std::vector<Sample> pointwise_samples(IdentityId id, const CoeffModel& model, const Subject& subject,
                                      const std::vector<double>& xs, int threads)
{
    const int depth = required_depth(id);
    return parallel_map(xs.size(), threads, [&](std::size_t i) {
        const DerivStack s = subject.stack(xs[i], depth);
        return Sample{xs[i], residual_terms(id, model, s)};
    });
}

std::vector<Sample> integral_samples(IdentityId id, const CoeffModel& model, const Subject& subject,
                                     const std::vector<double>& xs, int threads)
{
    const double a = model.lo;

    switch (id) {
    case IdentityId::integral_v: {
        auto g = [&](double t) {
            if (t <= a)
                return 0.0;
            const ModelAt m = model_at(model, t);
            const double f = subject.value(t);
            return weighted(f * f * (m.p[2] + m.p[1] * m.p[0] - 2 * m.q[1]), model.P(t));
        };
        const auto I = cumulative_integrals(g, a, xs, kQuadratureTol);
        auto rows = parallel_map(xs.size(), threads, [&](std::size_t i) {
            const double x = xs[i];
            const Fs F = unpack(subject.stack(x, 2));
            const ModelAt m = model_at(model, x);
            const Tracked rhs = Tracked(0.5) * F.f0 * F.f0 * Tracked(m.p[1]) -
                                Tracked(0.5) * Tracked(weighted(I[i], -model.P(x)));
            return Sample{x, v_of(F) - rhs};
        });
        return rows;
    }

    case IdentityId::integral_vfn: {
        const int n = model.n;
        const TrigPoly f = spherical_fn(n);
        const DividedEvaluator quotient(f * f, 2 * n + 3);
        const auto I = cumulative_integrals([&](double t) { return quotient(t); }, 0.0, xs, kQuadratureTol);
        return parallel_map(xs.size(), threads, [&](std::size_t i) {
            const double x = xs[i];
            const Fs F = unpack(trig_stack(f, x, 2));
            const Tracked rhs = Tracked(n) / Tracked(x * x) * F.f0 * F.f0 +
                                Tracked(2.0 * n * (n + 1)) * Tracked(std::pow(x, 2 * n)) * Tracked(I[i]);
            return Sample{x, v_of(F) - rhs};
        });
    }

    case IdentityId::integral_vJnu: {
        const BesselOrder nu(model.nu);
        auto g = [&](double t) {
            if (t <= 0.0)
                return 0.0;
            const double j = bessel_j(nu, t);
            return j * j / (t * t);
        };
        const auto I = cumulative_integrals(g, 0.0, xs, kQuadratureTol);
        const double k = (4 * model.nu * model.nu - 1) / 2;
        return parallel_map(xs.size(), threads, [&](std::size_t i) {
            const double x = xs[i];
            const Fs F = unpack(Subject::bessel(model.nu).stack(x, 2));
            const Tracked rhs = Tracked(-0.5) / Tracked(x * x) * F.f0 * F.f0 + Tracked(k / x) * Tracked(I[i]);
            return Sample{x, v_of(F) - rhs};
        });
    }

    case IdentityId::integral_V: {
        const int n = model.n;
        const Subject fn = Subject::trig(spherical_fn(n), "f_" + std::to_string(n));
        auto g1 = [&](double t) {
            if (t <= a)
                return 0.0;
            const Coeffs c = coeffs(model_at(model, t));
            const double f = fn.value(t);
            const double k = resolved(a2_closed(c) * c.p + a2_closed_prime(c));
            return weighted(0.5 * f * f * k, model.P(t));
        };
        auto g2 = [&](double t) {
            if (t <= a)
                return 0.0;
            const Coeffs c = coeffs(model_at(model, t));
            const double v = v_det(fn.stack(t, 2));
            return weighted(resolved(a3_closed(c)) * v, model.P(t));
        };
        const auto I1 = cumulative_integrals(g1, a, xs, kQuadratureTol);
        const auto I2 = cumulative_integrals(g2, a, xs, kQuadratureTol);

        // lim_{t -> 0} e^P V = lim U / t^{2n+3} with U = x^3 V exactly in
        // the ring.
        const TrigPoly& f = fn.poly();
        const TrigPoly f1 = derivative(f);
        const TrigPoly X = TrigPoly::x();
        const BigRational k1(2 * n), k2(2 * n * (n - 1));
        const TrigPoly U = k1 * (X * f1 * f1) - k2 * (f1 * f) -
                           (k2 * X - BigRational(2) * (X * X * X)) * symbolic_v(f);
        const auto series = maclaurin(U, 2 * n + 3);
        for (int i = 0; i < 2 * n + 3; ++i)
            if (series[static_cast<std::size_t>(i)] != 0)
                throw NumericalFailure("x^3 V does not vanish to the expected order at 0");
        const double L = series.back().get_d();

        return parallel_map(xs.size(), threads, [&](std::size_t i) {
            const double x = xs[i];
            const ModelAt m = model_at(model, x);
            const Coeffs c = coeffs(m);
            const Fs F = unpack(fn.stack(x, 2));
            const double decay = -model.P(x);
            const Tracked rhs = Tracked(0.5) * F.f0 * F.f0 * a2_closed(c) - Tracked(weighted(I1[i], decay)) +
                                Tracked(weighted(I2[i], decay)) + Tracked(weighted(L, decay));
            return Sample{x, v_function_tracked(c, F) - rhs};
        });
    }

    case IdentityId::eq_Vpositive: {
        const int n = model.n;
        const TrigPoly f = spherical_fn(n);
        const DividedEvaluator q1(f * f, 2 * n + 5);
        const DividedEvaluator q2(symbolic_v(f), 2 * n + 3);
        const auto I1 = cumulative_integrals([&](double t) { return q1(t); }, 0.0, xs, kQuadratureTol);
        const auto I2 = cumulative_integrals([&](double t) { return q2(t); }, 0.0, xs, kQuadratureTol);
        const double k = 6.0 * n * (n - 1);
        return parallel_map(xs.size(), threads, [&](std::size_t i) {
            const double x = xs[i];
            const ModelAt m = model_at(model, x);
            const Fs F = unpack(trig_stack(f, x, 2));
            const Tracked lhs = v_function_tracked(coeffs(m), F) / Tracked(k);
            const Tracked x2n = Tracked(std::pow(x, 2 * n));
            const Tracked rhs = F.f0 * F.f0 / Tracked(2 * std::pow(x, 4)) +
                                Tracked(n + 2) * x2n * Tracked(I1[i]) + x2n * Tracked(I2[i]);
            return Sample{x, lhs - rhs};
        });
    }

    default:
        break;
    }
    throw UsageError(std::string(tag(id)) + " is not an integral identity");
}

VerificationReport summarize(VerificationReport r, const std::vector<Sample>& samples)
{
    r.samples = static_cast<int>(samples.size());
    double worst = -1.0;
    for (const auto& s : samples) {
        const double abs_r = std::abs(s.r.value);
        const double rel = relative_residual(abs_r, s.r.magnitude);
        if (!std::isfinite(abs_r))
            throw NumericalFailure(std::string(tag(r.identity)) + ": non-finite residual at x=" +
                                   std::to_string(s.x));
        r.max_abs_residual = std::max(r.max_abs_residual, abs_r);
        if (rel > worst) {
            worst = rel;
            r.max_rel_residual = rel;
            r.worst_x = s.x;
        }
    }
    r.pass = r.max_rel_residual <= r.tolerance;
    return r;
}

double criterion_value(const CoeffModel& model, double x)
{
    const ModelAt m = model_at(model, x);
    if (m.p[1] == 0.0)
        throw SingularPoint(x, "p' vanishes at x = " + std::to_string(x));
    return m.q[0] - m.p[0] / m.p[1] * m.q[1];
}

} // namespace

VerificationReport verify_identity(IdentityId id, const CoeffModel& model, const Subject& subject,
                                   const GridSpec& grid, std::optional<double> tolerance, int threads)
{
    VerificationReport r;
    r.identity = id;
    r.model = model.descriptor;
    r.subject = subject.descriptor();
    r.grid = grid;
    r.tolerance = tolerance.value_or(default_tolerance(id, subject));
    if (auto why = not_applicable(id, model)) {
        r.applicable = false;
        r.note = *why;
        return r;
    }
    const auto xs = grid.nodes();
    for (double x : {xs.front(), xs.back()})
        if (!model.in_domain(x))
            throw UsageError("grid point " + std::to_string(x) + " outside the model domain");

    switch (id) {
    case IdentityId::remark_zero: {
        const auto zeros = zeros_in_range(model, subject, grid.lo, grid.hi);
        if (zeros.empty())
            r.note = "no zeros of the subject in range";
        return summarize(r, pointwise_samples(id, model, subject, zeros, threads));
    }
    case IdentityId::thm_main1_criterion: {
        // Hypothesis on the grid, then the conclusion v >= 0 empirically.
        auto samples = parallel_map(xs.size(), threads, [&](std::size_t i) {
            const double x = xs[i];
            const double c = criterion_value(model, x);
            const Fs F = unpack(subject.stack(x, 2));
            const Tracked v = v_of(F);
            const double neg_c = std::max(0.0, -c);
            const double neg_v = v.value < 0.0 ? relative_residual(-v.value, v.magnitude) : 0.0;
            return Sample{x, Tracked(std::max(neg_c, neg_v))};
        });
        r = summarize(r, samples);
        r.note = "q - (p/p')q' >= 0 and v >= 0 on the grid";
        return r;
    }
    case IdentityId::eq_Vpositive:
        if (model.n == 1) {
            r.note = "degenerate for n = 1: the prefactor 6n(n-1) vanishes";
            r.samples = 0;
            r.pass = true;
            return r;
        }
        return summarize(r, integral_samples(id, model, subject, xs, threads));
    default:
        break;
    }
    if (is_integral(id))
        return summarize(r, integral_samples(id, model, subject, xs, threads));
    return summarize(r, pointwise_samples(id, model, subject, xs, threads));
}

VerificationReport integral_check(IdentityId id, const CoeffModel& model, const Subject& subject, double x,
                                  double tolerance)
{
    if (!is_integral(id))
        throw UsageError(std::string(tag(id)) + " is not an integral identity");
    if (auto why = not_applicable(id, model))
        throw UsageError(std::string(tag(id)) + ": " + *why);
    return verify_identity(id, model, subject, GridSpec{x, x, 1, false}, tolerance);
}

VerificationReport positivity_criterion(const CoeffModel& model, double lo, double hi, int points)
{
    VerificationReport r;
    r.identity = IdentityId::thm_main1_criterion;
    r.model = model.descriptor;
    r.grid = GridSpec{lo, hi, points, false};
    r.tolerance = 0.0;
    const auto xs = r.grid.nodes();
    double min_value = std::numeric_limits<double>::infinity();
    for (double x : xs) {
        const double c = criterion_value(model, x);
        if (c < min_value) {
            min_value = c;
            r.worst_x = x;
        }
    }
    r.samples = static_cast<int>(xs.size());
    r.max_abs_residual = std::max(0.0, -min_value);
    r.max_rel_residual = r.max_abs_residual;
    r.pass = min_value >= 0.0;
    r.note = "minimum of q - (p/p')q' is " + std::to_string(min_value);
    return r;
}

} // namespace critlen
