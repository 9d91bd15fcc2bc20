#include "critlen/critical_length.hpp"

#include "critlen/bessel.hpp"
#include "critlen/determinants.hpp"
#include "critlen/errors.hpp"
#include "critlen/parallel.hpp"

#include <cmath>
#include <limits>

namespace critlen {

namespace {

bool differ(double a, double b) { return a != 0.0 && (b == 0.0 || std::signbit(a) != std::signbit(b)); }

} // namespace

MinorScan scan_minor(int n, int j, double cap, double step, double tol)
{
    const MinorEvaluator minor(n, j);
    MinorScan scan;
    scan.j = j;
    scan.search_cap = cap;

    auto sample = [&](double x) {
        const auto e = minor.evaluate(x);
        if (!e.certified && !scan.indeterminate) {
            scan.indeterminate = true;
            scan.note = "sign not certified near x=" + std::to_string(x);
        }
        return e.value;
    };

    double x0 = kCritLenEpsilon;
    double g0 = sample(x0);
    double running_max = std::abs(g0);
    std::optional<double> tiny_at;
    while (x0 < cap) {
        const double x1 = std::min(x0 + step, cap);
        const double g1 = sample(x1);
        if (differ(g0, g1)) {
            // Three rounds of halving: the first sign change among eight
            // sub-intervals.
            double lo = x0, glo = g0, hi = x1;
            constexpr int kSub = 8;
            for (int k = 1; k <= kSub; ++k) {
                const double xs = k == kSub ? x1 : x0 + (x1 - x0) * k / kSub;
                const double gs = k == kSub ? g1 : sample(xs);
                if (differ(glo, gs)) {
                    hi = xs;
                    break;
                }
                lo = xs;
                glo = gs;
            }
            while (hi - lo > std::max(tol, 4 * std::numeric_limits<double>::epsilon() * hi)) {
                const double mid = 0.5 * (lo + hi);
                const double gm = sample(mid);
                if (gm == 0.0) {
                    lo = hi = mid;
                    break;
                }
                if (differ(glo, gm)) {
                    hi = mid;
                } else {
                    lo = mid;
                    glo = gm;
                }
            }
            scan.first_zero = 0.5 * (lo + hi);
            return scan;
        }
        running_max = std::max(running_max, std::abs(g1));
        if (std::abs(g1) < kNoiseFloor * running_max && !tiny_at)
            tiny_at = x1;
        else if (tiny_at && x1 - *tiny_at > 1.5 * step && !scan.indeterminate) {
            scan.indeterminate = true;
            scan.note = "minor below noise floor without sign change near x=" + std::to_string(*tiny_at);
        }
        x0 = x1;
        g0 = g1;
    }
    return scan;
}

CritLenReport estimate_critical_length(int n, std::optional<double> cap, double tol, int threads)
{
    if (n < 0 || n > kMaxSphericalOrder)
        throw UsageError("n must be in 0.." + std::to_string(kMaxSphericalOrder));
    if (!(tol > 0.0))
        throw UsageError("tolerance must be positive");
    CritLenReport r;
    r.n = n;
    r.tol = tol;
    r.reference = bessel_zero(BesselOrder(n + 0.5), 1).value;
    r.cap = cap.value_or(1.5 * r.reference);
    if (!(r.cap > kCritLenEpsilon))
        throw UsageError("cap must exceed " + std::to_string(kCritLenEpsilon));
    const double step = r.reference / 512;

    std::vector<int> js;
    for (int j = n + 1; j <= 2 * n + 1; ++j)
        js.push_back(j);
    r.per_j = parallel_map(js.size(), threads, [&](std::size_t i) { return scan_minor(n, js[i], r.cap, step, tol); });

    r.estimate = std::numeric_limits<double>::infinity();
    for (const auto& s : r.per_j)
        if (s.first_zero)
            r.estimate = std::min(r.estimate, *s.first_zero);
    r.gap = r.estimate - r.reference;
    r.conjecture_consistent = std::abs(r.gap) <= kConsistencyGap;
    return r;
}

std::vector<CritLenReport> conjecture_scan(int n_max, int threads)
{
    if (n_max < 0 || n_max > 6)
        throw UsageError("conjecture_scan supports 0 <= n_max <= 6");
    std::vector<CritLenReport> out;
    for (int n = 0; n <= n_max; ++n)
        out.push_back(estimate_critical_length(n, std::nullopt, 1e-12, threads));
    return out;
}

nlohmann::json to_json(const CritLenReport& r)
{
    nlohmann::json per_j = nlohmann::json::array();
    for (const auto& s : r.per_j) {
        per_j.push_back({{"j", s.j},
                         {"first_zero", s.first_zero ? nlohmann::json(*s.first_zero) : nlohmann::json(nullptr)},
                         {"search_cap", s.search_cap},
                         {"indeterminate", s.indeterminate},
                         {"note", s.note}});
    }
    nlohmann::json j;
    j["n"] = r.n;
    j["estimate"] = std::isfinite(r.estimate) ? nlohmann::json(r.estimate) : nlohmann::json(nullptr);
    j["reference"] = r.reference;
    j["gap"] = std::isfinite(r.gap) ? nlohmann::json(r.gap) : nlohmann::json(nullptr);
    j["conjecture_consistent"] = r.conjecture_consistent;
    j["exploratory"] = r.n >= 3;
    j["cap"] = r.cap;
    j["tol"] = r.tol;
    j["per_j"] = std::move(per_j);
    return j;
}

} // namespace critlen
