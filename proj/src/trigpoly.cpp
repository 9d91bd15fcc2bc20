#include "critlen/trigpoly.hpp"

#include "critlen/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace critlen {

// ---------------------------------------------------------------------------
// rationals

std::string to_fraction_string(const BigRational& q)
{
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

BigRational parse_rational(std::string_view text)
{
    const auto slash = text.find('/');
    const std::string num(text.substr(0, slash));
    const std::string den = slash == std::string_view::npos ? "1" : std::string(text.substr(slash + 1));
    auto valid_integer = [](const std::string& s, bool allow_sign) {
        std::size_t i = 0;
        if (allow_sign && !s.empty() && (s[0] == '-' || s[0] == '+'))
            i = 1;
        if (i >= s.size())
            return false;
        return std::all_of(s.begin() + static_cast<std::ptrdiff_t>(i), s.end(),
                           [](char c) { return c >= '0' && c <= '9'; });
    };
    if (!valid_integer(num, true) || !valid_integer(den, false))
        throw UsageError("malformed rational '" + std::string(text) + "'");
    mpz_class p(num[0] == '+' ? num.substr(1) : num, 10);
    mpz_class q(den, 10);
    if (q == 0)
        throw UsageError("zero denominator in '" + std::string(text) + "'");
    BigRational r(p, q);
    r.canonicalize();
    return r;
}

// ---------------------------------------------------------------------------
// Poly

Poly::Poly(std::vector<BigRational> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

Poly Poly::constant(const BigRational& c) { return Poly({c}); }

Poly Poly::monomial(const BigRational& c, int degree)
{
    if (degree < 0)
        throw UsageError("negative monomial degree");
    std::vector<BigRational> coeffs(static_cast<std::size_t>(degree) + 1);
    coeffs.back() = c;
    return Poly(std::move(coeffs));
}

BigRational Poly::coeff(int i) const
{
    if (i < 0 || i > degree())
        return 0;
    return coeffs_[static_cast<std::size_t>(i)];
}

void Poly::trim()
{
    while (!coeffs_.empty() && sgn(coeffs_.back()) == 0)
        coeffs_.pop_back();
}

Poly Poly::derivative() const
{
    if (coeffs_.size() <= 1)
        return {};
    std::vector<BigRational> out(coeffs_.size() - 1);
    for (std::size_t i = 1; i < coeffs_.size(); ++i)
        out[i - 1] = coeffs_[i] * static_cast<long>(i);
    return Poly(std::move(out));
}

Poly& Poly::operator+=(const Poly& rhs)
{
    if (rhs.coeffs_.size() > coeffs_.size())
        coeffs_.resize(rhs.coeffs_.size());
    for (std::size_t i = 0; i < rhs.coeffs_.size(); ++i)
        coeffs_[i] += rhs.coeffs_[i];
    trim();
    return *this;
}

Poly& Poly::operator-=(const Poly& rhs)
{
    if (rhs.coeffs_.size() > coeffs_.size())
        coeffs_.resize(rhs.coeffs_.size());
    for (std::size_t i = 0; i < rhs.coeffs_.size(); ++i)
        coeffs_[i] -= rhs.coeffs_[i];
    trim();
    return *this;
}

Poly& Poly::operator*=(const BigRational& c)
{
    if (sgn(c) == 0) {
        coeffs_.clear();
        return *this;
    }
    for (auto& a : coeffs_)
        a *= c;
    return *this;
}

Poly operator*(const Poly& a, const Poly& b)
{
    if (a.is_zero() || b.is_zero())
        return {};
    std::vector<BigRational> out(a.coeffs_.size() + b.coeffs_.size() - 1);
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
        if (sgn(a.coeffs_[i]) == 0)
            continue;
        for (std::size_t j = 0; j < b.coeffs_.size(); ++j)
            out[i + j] += a.coeffs_[i] * b.coeffs_[j];
    }
    return Poly(std::move(out));
}

Poly Poly::operator-() const
{
    Poly out(*this);
    for (auto& c : out.coeffs_)
        c = -c;
    return out;
}

// ---------------------------------------------------------------------------
// TrigPoly

TrigPoly TrigPoly::constant(const BigRational& c) { return polynomial(Poly::constant(c)); }

TrigPoly TrigPoly::polynomial(Poly p)
{
    TrigPoly out;
    out.accumulate(0, false, p);
    out.normalize();
    return out;
}

TrigPoly TrigPoly::x() { return polynomial(Poly::monomial(1, 1)); }

TrigPoly TrigPoly::cos(int k, Poly factor)
{
    TrigPoly out;
    out.accumulate(k, false, factor);
    out.normalize();
    return out;
}

TrigPoly TrigPoly::sin(int k, Poly factor)
{
    TrigPoly out;
    out.accumulate(k, true, factor);
    out.normalize();
    return out;
}

int TrigPoly::max_harmonic() const { return harmonics_.empty() ? -1 : harmonics_.rbegin()->first; }

int TrigPoly::max_degree() const
{
    int d = -1;
    for (const auto& [k, h] : harmonics_)
        d = std::max({d, h.cos_part.degree(), h.sin_part.degree()});
    return d;
}

void TrigPoly::accumulate(int k, bool is_sin, const Poly& factor)
{
    if (factor.is_zero())
        return;
    if (k < 0) {
        k = -k;
        if (is_sin) {
            accumulate(k, true, -factor);
            return;
        }
    }
    if (k == 0 && is_sin)
        return;
    Harmonic& h = harmonics_[k];
    (is_sin ? h.sin_part : h.cos_part) += factor;
}

void TrigPoly::normalize()
{
    std::erase_if(harmonics_, [](const auto& kv) {
        return kv.second.cos_part.is_zero() && kv.second.sin_part.is_zero();
    });
}

TrigPoly& TrigPoly::operator+=(const TrigPoly& rhs)
{
    for (const auto& [k, h] : rhs.harmonics_) {
        accumulate(k, false, h.cos_part);
        accumulate(k, true, h.sin_part);
    }
    normalize();
    return *this;
}

TrigPoly& TrigPoly::operator-=(const TrigPoly& rhs)
{
    for (const auto& [k, h] : rhs.harmonics_) {
        accumulate(k, false, -h.cos_part);
        accumulate(k, true, -h.sin_part);
    }
    normalize();
    return *this;
}

TrigPoly operator*(const TrigPoly& a, const TrigPoly& b)
{
    static const BigRational half(1, 2);
    TrigPoly out;
    for (const auto& [j, hj] : a.harmonics_) {
        for (const auto& [k, hk] : b.harmonics_) {
            // cos j cos k = (cos(j-k) + cos(j+k)) / 2
            // sin j sin k = (cos(j-k) - cos(j+k)) / 2
            // sin j cos k = (sin(j+k) + sin(j-k)) / 2
            // cos j sin k = (sin(j+k) - sin(j-k)) / 2
            if (!hj.cos_part.is_zero() && !hk.cos_part.is_zero()) {
                const Poly p = hj.cos_part * hk.cos_part * half;
                out.accumulate(j - k, false, p);
                out.accumulate(j + k, false, p);
            }
            if (!hj.sin_part.is_zero() && !hk.sin_part.is_zero()) {
                const Poly p = hj.sin_part * hk.sin_part * half;
                out.accumulate(j - k, false, p);
                out.accumulate(j + k, false, -p);
            }
            if (!hj.sin_part.is_zero() && !hk.cos_part.is_zero()) {
                const Poly p = hj.sin_part * hk.cos_part * half;
                out.accumulate(j + k, true, p);
                out.accumulate(j - k, true, p);
            }
            if (!hj.cos_part.is_zero() && !hk.sin_part.is_zero()) {
                const Poly p = hj.cos_part * hk.sin_part * half;
                out.accumulate(j + k, true, p);
                out.accumulate(j - k, true, -p);
            }
        }
    }
    out.normalize();
    return out;
}

TrigPoly operator*(TrigPoly a, const BigRational& c)
{
    for (auto& [k, h] : a.harmonics_) {
        h.cos_part *= c;
        h.sin_part *= c;
    }
    a.normalize();
    return a;
}

TrigPoly TrigPoly::operator-() const { return *this * BigRational(-1); }

TrigPoly derivative(const TrigPoly& a)
{
    // d/dx [A cos kx + B sin kx] = (A' + kB) cos kx + (B' - kA) sin kx
    TrigPoly out;
    for (const auto& [k, h] : a.harmonics()) {
        const BigRational kq(k);
        out += TrigPoly::cos(k, h.cos_part.derivative() + h.sin_part * kq);
        out += TrigPoly::sin(k, h.sin_part.derivative() - h.cos_part * kq);
    }
    return out;
}

TrigPoly times_x_power(const TrigPoly& a, int power)
{
    if (power < 0)
        throw UsageError("times_x_power: negative power");
    const Poly shift = Poly::monomial(1, power);
    TrigPoly out;
    for (const auto& [k, h] : a.harmonics()) {
        out += TrigPoly::cos(k, h.cos_part * shift);
        out += TrigPoly::sin(k, h.sin_part * shift);
    }
    return out;
}

// ---------------------------------------------------------------------------
// evaluation

namespace {

constexpr mpfr_prec_t kStartPrecision = 128;
constexpr mpfr_prec_t kMaxPrecision = 1 << 15;
constexpr mpfr_prec_t kGuardBits = 64;

MpFloat horner(const Poly& p, const MpFloat& x)
{
    const mpfr_prec_t prec = x.precision();
    MpFloat acc(prec);
    const auto& c = p.coeffs();
    for (auto it = c.rbegin(); it != c.rend(); ++it) {
        acc *= x;
        acc += MpFloat(*it, prec);
    }
    return acc;
}

// Sum over all terms of |c_i| |x|^i; an upper bound on every partial sum.
MpFloat magnitude_bound(const TrigPoly& a, double x, std::size_t& term_count)
{
    const mpfr_prec_t prec = 64;
    const MpFloat ax(std::fabs(x), prec);
    MpFloat total(prec);
    term_count = 0;
    for (const auto& [k, h] : a.harmonics()) {
        for (const Poly* p : {&h.cos_part, &h.sin_part}) {
            MpFloat acc(prec);
            const auto& c = p->coeffs();
            for (auto it = c.rbegin(); it != c.rend(); ++it) {
                acc *= ax;
                acc += abs(MpFloat(*it, prec));
            }
            total += acc;
            term_count += c.size();
        }
    }
    return total;
}

} // namespace

MpFloat evaluate_mp(const TrigPoly& a, double x, mpfr_prec_t precision)
{
    const MpFloat xm(x, precision);
    MpFloat total(precision);
    for (const auto& [k, h] : a.harmonics()) {
        if (k == 0) {
            total += horner(h.cos_part, xm);
            continue;
        }
        const MpFloat angle = xm * MpFloat(static_cast<long>(k), precision);
        if (!h.cos_part.is_zero())
            total += horner(h.cos_part, xm) * cos(angle);
        if (!h.sin_part.is_zero())
            total += horner(h.sin_part, xm) * sin(angle);
    }
    return total;
}

BigRational value_at_zero(const TrigPoly& a)
{
    BigRational v = 0;
    for (const auto& [k, h] : a.harmonics())
        v += h.cos_part.coeff(0);
    return v;
}

double evaluate(const TrigPoly& a, double x)
{
    if (!std::isfinite(x))
        throw UsageError("evaluate: non-finite argument");
    if (a.is_zero())
        return 0.0;
    double result = 0.0;
    if (x == 0.0) {
        result = value_at_zero(a).get_d();
    } else {
        std::size_t terms = 0;
        const long bound_exp = magnitude_bound(a, x, terms).exponent();
        const long count_bits = static_cast<long>(std::ceil(std::log2(static_cast<double>(terms) + 1.0)));
        mpfr_prec_t prec = kStartPrecision;
        for (;;) {
            const MpFloat r = evaluate_mp(a, x, prec);
            if (!r.is_finite())
                throw NumericalFailure("evaluate: non-finite intermediate");
            if (r.is_zero()) {
                // Either an exact zero or total cancellation; give up once the
                // absolute error bound is far below double resolution.
                if (prec >= 1024 || prec >= kMaxPrecision) {
                    result = 0.0;
                    break;
                }
                prec *= 2;
                continue;
            }
            const long needed = bound_exp - r.exponent() + kGuardBits + count_bits;
            if (needed <= prec || prec >= kMaxPrecision) {
                result = r.to_double();
                break;
            }
            prec = std::min<mpfr_prec_t>(kMaxPrecision, std::max<mpfr_prec_t>(needed + 32, 2 * prec));
        }
    }
    if (!std::isfinite(result))
        throw NumericalFailure("evaluate: result overflows double");
    return result;
}

// ---------------------------------------------------------------------------
// Maclaurin data

std::vector<BigRational> maclaurin(const TrigPoly& a, int order)
{
    if (order < 0)
        return {};
    const auto n = static_cast<std::size_t>(order) + 1;
    std::vector<mpz_class> factorial(n);
    factorial[0] = 1;
    for (std::size_t m = 1; m < n; ++m)
        factorial[m] = factorial[m - 1] * static_cast<unsigned long>(m);

    std::vector<BigRational> out(n);
    for (const auto& [k, h] : a.harmonics()) {
        // x^i cos kx = sum_l (-1)^l k^{2l} x^{i+2l} / (2l)!
        // x^i sin kx = sum_l (-1)^l k^{2l+1} x^{i+2l+1} / (2l+1)!
        std::vector<mpz_class> kpow(n);
        kpow[0] = 1;
        for (std::size_t m = 1; m < n; ++m)
            kpow[m] = kpow[m - 1] * k;
        for (int i = 0; i <= std::max(h.cos_part.degree(), h.sin_part.degree()); ++i) {
            const BigRational cc = h.cos_part.coeff(i);
            const BigRational sc = h.sin_part.coeff(i);
            for (int e = 0; i + e <= order; ++e) {
                const bool cos_term = e % 2 == 0;
                const BigRational& c = cos_term ? cc : sc;
                if (sgn(c) == 0)
                    continue;
                const int sign = (e / 2) % 2 == 0 ? 1 : -1;
                const auto ue = static_cast<std::size_t>(e);
                BigRational term{mpz_class(kpow[ue] * sign), factorial[ue]};
                term.canonicalize();
                out[static_cast<std::size_t>(i + e)] += c * term;
            }
        }
    }
    for (auto& c : out)
        c.canonicalize();
    return out;
}

BigRational derivative_at_zero(const TrigPoly& a, int m)
{
    if (m < 0)
        throw UsageError("derivative_at_zero: negative order");
    const auto series = maclaurin(a, m);
    mpz_class fact = 1;
    for (int i = 2; i <= m; ++i)
        fact *= i;
    return series[static_cast<std::size_t>(m)] * BigRational(fact);
}

int vanishing_order(const TrigPoly& a, int search_limit)
{
    if (a.is_zero())
        return -1;
    for (int limit = std::min(32, search_limit);; limit = std::min(2 * limit, search_limit)) {
        const auto series = maclaurin(a, limit);
        for (std::size_t m = 0; m < series.size(); ++m)
            if (sgn(series[m]) != 0)
                return static_cast<int>(m);
        if (limit >= search_limit)
            return -1;
    }
}

DividedEvaluator::DividedEvaluator(TrigPoly a, int power, double radius)
    : numerator_(std::move(a)), power_(power), radius_(radius)
{
    if (power_ < 0)
        throw UsageError("DividedEvaluator: negative power");
    constexpr int kSeriesTerms = 40;
    if (!numerator_.is_zero()) {
        const int order = vanishing_order(numerator_, power_ + kSeriesTerms);
        if (order >= 0 && order < power_)
            throw UsageError("DividedEvaluator: numerator vanishes only to order " + std::to_string(order)
                             + " < " + std::to_string(power_));
    }
    const auto series = maclaurin(numerator_, power_ + kSeriesTerms);
    for (std::size_t m = static_cast<std::size_t>(power_); m < series.size(); ++m)
        series_.push_back(series[m].get_d());
}

double DividedEvaluator::operator()(double x) const
{
    if (numerator_.is_zero())
        return 0.0;
    if (std::fabs(x) < radius_) {
        double acc = 0.0;
        for (auto it = series_.rbegin(); it != series_.rend(); ++it)
            acc = acc * x + *it;
        return acc;
    }
    return evaluate(numerator_, x) / std::pow(x, power_);
}

// ---------------------------------------------------------------------------
// spherical functions

TrigPoly spherical_fn(int n, int max_n)
{
    if (n < 0 || n > max_n)
        throw UsageError("spherical_fn: order " + std::to_string(n) + " outside [0, " + std::to_string(max_n) + "]");
    TrigPoly prev = TrigPoly::sin(1);
    if (n == 0)
        return prev;
    TrigPoly cur = TrigPoly::sin(1) - TrigPoly::cos(1, Poly::monomial(1, 1));
    const TrigPoly x2 = TrigPoly::polynomial(Poly::monomial(1, 2));
    for (int k = 1; k < n; ++k) {
        TrigPoly next = cur * BigRational(2 * k + 1) - x2 * prev;
        prev = std::move(cur);
        cur = std::move(next);
    }
    return cur;
}

// ---------------------------------------------------------------------------
// serialization

nlohmann::json to_json(const TrigPoly& a)
{
    auto strings = [](const Poly& p) {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& c : p.coeffs())
            arr.push_back(to_fraction_string(c));
        return arr;
    };
    nlohmann::json out = nlohmann::json::object();
    for (const auto& [k, h] : a.harmonics())
        out[std::to_string(k)] = {{"cos", strings(h.cos_part)}, {"sin", strings(h.sin_part)}};
    return out;
}

TrigPoly trigpoly_from_json(const nlohmann::json& j)
{
    if (!j.is_object())
        throw UsageError("trigpoly json: expected an object");
    auto poly = [](const nlohmann::json& arr) {
        if (!arr.is_array())
            throw UsageError("trigpoly json: coefficient list must be an array");
        std::vector<BigRational> coeffs;
        for (const auto& s : arr) {
            if (!s.is_string())
                throw UsageError("trigpoly json: coefficients must be strings");
            coeffs.push_back(parse_rational(s.get<std::string>()));
        }
        return Poly(std::move(coeffs));
    };
    TrigPoly out;
    for (const auto& [key, value] : j.items()) {
        int k = 0;
        try {
            std::size_t used = 0;
            k = std::stoi(key, &used);
            if (used != key.size() || k < 0)
                throw UsageError("");
        } catch (const std::exception&) {
            throw UsageError("trigpoly json: bad harmonic key '" + key + "'");
        }
        if (!value.is_object())
            throw UsageError("trigpoly json: harmonic entry must be an object");
        if (value.contains("cos"))
            out += TrigPoly::cos(k, poly(value.at("cos")));
        if (value.contains("sin")) {
            const Poly s = poly(value.at("sin"));
            if (k == 0 && !s.is_zero())
                throw UsageError("trigpoly json: harmonic 0 cannot carry a sine part");
            out += TrigPoly::sin(k, s);
        }
    }
    return out;
}

namespace {

std::string poly_to_string(const Poly& p)
{
    std::ostringstream os;
    bool first = true;
    for (int i = 0; i <= p.degree(); ++i) {
        const BigRational c = p.coeff(i);
        if (sgn(c) == 0)
            continue;
        if (!first)
            os << (sgn(c) < 0 ? " - " : " + ");
        else if (sgn(c) < 0)
            os << "-";
        first = false;
        const BigRational mag = abs(c);
        if (i == 0 || mag != 1)
            os << mag.get_str() << (i > 0 ? "*" : "");
        if (i == 1)
            os << "x";
        else if (i > 1)
            os << "x^" << i;
    }
    return os.str();
}

} // namespace

std::string to_string(const TrigPoly& a)
{
    if (a.is_zero())
        return "0";
    std::ostringstream os;
    bool first = true;
    auto emit = [&](const Poly& p, const std::string& fn) {
        if (p.is_zero())
            return;
        if (!first)
            os << " + ";
        first = false;
        os << "(" << poly_to_string(p) << ")" << fn;
    };
    for (const auto& [k, h] : a.harmonics()) {
        const std::string arg = k == 1 ? "x" : std::to_string(k) + "x";
        emit(h.cos_part, k == 0 ? "" : "*cos(" + arg + ")");
        emit(h.sin_part, "*sin(" + arg + ")");
    }
    return os.str();
}

} // namespace critlen
