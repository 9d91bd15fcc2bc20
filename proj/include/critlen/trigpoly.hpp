#pragma once

#include "critlen/mpfloat.hpp"

#include <gmpxx.h>
#include "json.hpp"

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace critlen {

/// Exact rational; GMP keeps every arithmetic result in lowest terms with a
/// positive denominator.
using BigRational = mpq_class;

/// Always "p/q", also for integers ("3/1").
std::string to_fraction_string(const BigRational& q);
/// Accepts "p/q" or "p"; throws UsageError on malformed input or q = 0.
BigRational parse_rational(std::string_view text);

/// Polynomial in x with exact rational coefficients, index = power.
/// Canonical: no trailing zero coefficient, the zero polynomial is empty.
class Poly {
public:
    Poly() = default;
    explicit Poly(std::vector<BigRational> coeffs);

    static Poly constant(const BigRational& c);
    static Poly monomial(const BigRational& c, int degree);

    const std::vector<BigRational>& coeffs() const { return coeffs_; }
    bool is_zero() const { return coeffs_.empty(); }
    /// -1 for the zero polynomial.
    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    /// Coefficient of x^i, zero beyond the degree.
    BigRational coeff(int i) const;

    Poly derivative() const;

    Poly& operator+=(const Poly& rhs);
    Poly& operator-=(const Poly& rhs);
    Poly& operator*=(const BigRational& c);
    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    friend Poly operator*(const Poly& a, const Poly& b);
    friend Poly operator*(Poly a, const BigRational& c) { return a *= c; }
    Poly operator-() const;
    friend bool operator==(const Poly& a, const Poly& b) { return a.coeffs_ == b.coeffs_; }

private:
    void trim();

    std::vector<BigRational> coeffs_;
};

/// cos_part(x)·cos(kx) + sin_part(x)·sin(kx) for one harmonic k >= 0.
struct Harmonic {
    Poly cos_part;
    Poly sin_part;

    friend bool operator==(const Harmonic&, const Harmonic&) = default;
};

/// Element of span{x^i cos(kx), x^i sin(kx)} with rational coefficients.
///
/// Canonical form: harmonic k = 0 never has a sine part and no stored
/// harmonic is entirely zero, so two functions are equal iff their
/// representations compare equal.
class TrigPoly {
public:
    TrigPoly() = default;

    static TrigPoly constant(const BigRational& c);
    static TrigPoly polynomial(Poly p);
    /// The identity function x.
    static TrigPoly x();
    static TrigPoly cos(int k, Poly factor = Poly::constant(1));
    static TrigPoly sin(int k, Poly factor = Poly::constant(1));

    const std::map<int, Harmonic>& harmonics() const { return harmonics_; }
    bool is_zero() const { return harmonics_.empty(); }
    int max_harmonic() const;
    int max_degree() const;

    TrigPoly& operator+=(const TrigPoly& rhs);
    TrigPoly& operator-=(const TrigPoly& rhs);
    friend TrigPoly operator+(TrigPoly a, const TrigPoly& b) { return a += b; }
    friend TrigPoly operator-(TrigPoly a, const TrigPoly& b) { return a -= b; }
    friend TrigPoly operator*(const TrigPoly& a, const TrigPoly& b);
    friend TrigPoly operator*(TrigPoly a, const BigRational& c);
    friend TrigPoly operator*(const BigRational& c, TrigPoly a) { return std::move(a) * c; }
    TrigPoly operator-() const;
    friend bool operator==(const TrigPoly&, const TrigPoly&) = default;

private:
    /// Adds factor·cos(kx) (is_sin = false) or factor·sin(kx); k may be negative.
    void accumulate(int k, bool is_sin, const Poly& factor);
    void normalize();

    std::map<int, Harmonic> harmonics_;
};

/// Exact derivative.
TrigPoly derivative(const TrigPoly& a);
/// Multiplies by x^power.
TrigPoly times_x_power(const TrigPoly& a, int power);

/// Value at x, correctly rounded to double in practice: the ring element is
/// evaluated in MPFR with the working precision raised until the
/// cancellation between terms is covered. Throws NumericalFailure when the
/// result does not fit in a double, UsageError for non-finite x.
double evaluate(const TrigPoly& a, double x);
/// Plain fixed-precision evaluation (no cancellation control).
MpFloat evaluate_mp(const TrigPoly& a, double x, mpfr_prec_t precision);
/// Exact value at x = 0.
BigRational value_at_zero(const TrigPoly& a);

/// Maclaurin coefficients c_0..c_order, exact.
std::vector<BigRational> maclaurin(const TrigPoly& a, int order);
/// a^(m)(0), exact.
BigRational derivative_at_zero(const TrigPoly& a, int m);
/// Order of the zero at x = 0 (0 if a(0) != 0); -1 when none is found up to
/// `search_limit` (e.g. for the zero function).
int vanishing_order(const TrigPoly& a, int search_limit = 256);

/// Evaluates a(x) / x^power for an `a` vanishing to order >= power at 0.
/// Below `radius` the Maclaurin series is summed, above it the quotient is
/// formed directly.
class DividedEvaluator {
public:
    DividedEvaluator(TrigPoly a, int power, double radius = 1e-2);

    double operator()(double x) const;
    const TrigPoly& numerator() const { return numerator_; }
    int power() const { return power_; }

private:
    TrigPoly numerator_;
    int power_;
    double radius_;
    std::vector<double> series_;
};

/// Default upper bound for spherical_fn.
inline constexpr int kMaxSphericalOrder = 16;

/// f_n(x) = sqrt(pi/2) x^{n+1/2} J_{n+1/2}(x) as a ring element, built by
/// f_0 = sin x, f_1 = sin x - x cos x, f_{k+1} = (2k+1) f_k - x^2 f_{k-1}.
TrigPoly spherical_fn(int n, int max_n = kMaxSphericalOrder);

/// JSON object {"k": {"cos": [...], "sin": [...]}} with "p/q" strings.
nlohmann::json to_json(const TrigPoly& a);
TrigPoly trigpoly_from_json(const nlohmann::json& j);

std::string to_string(const TrigPoly& a);

} // namespace critlen
