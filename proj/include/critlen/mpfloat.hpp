#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <compare>

namespace critlen {

/// Owning RAII handle around an MPFR number.
///
/// The precision is fixed at construction; binary operators produce a
/// result carrying the larger of the two operand precisions. All rounding is
/// to nearest.
class MpFloat {
public:
    explicit MpFloat(mpfr_prec_t precision);
    MpFloat(double value, mpfr_prec_t precision);
    MpFloat(long value, mpfr_prec_t precision);
    MpFloat(const mpq_class& value, mpfr_prec_t precision);

    MpFloat(const MpFloat& other);
    MpFloat(MpFloat&& other) noexcept;
    MpFloat& operator=(const MpFloat& other);
    MpFloat& operator=(MpFloat&& other) noexcept;
    ~MpFloat();

    mpfr_prec_t precision() const { return mpfr_get_prec(value_); }
    double to_double() const { return mpfr_get_d(value_, MPFR_RNDN); }
    bool is_zero() const { return mpfr_zero_p(value_) != 0; }
    bool is_finite() const { return mpfr_number_p(value_) != 0; }
    int sign() const { return mpfr_sgn(value_); }

    /// Binary exponent e with 0.5 <= |value| / 2^e < 1; very negative for zero.
    long exponent() const;

    MpFloat& operator+=(const MpFloat& rhs);
    MpFloat& operator-=(const MpFloat& rhs);
    MpFloat& operator*=(const MpFloat& rhs);
    MpFloat& operator/=(const MpFloat& rhs);

    friend MpFloat operator+(MpFloat lhs, const MpFloat& rhs) { return lhs += rhs; }
    friend MpFloat operator-(MpFloat lhs, const MpFloat& rhs) { return lhs -= rhs; }
    friend MpFloat operator*(MpFloat lhs, const MpFloat& rhs) { return lhs *= rhs; }
    friend MpFloat operator/(MpFloat lhs, const MpFloat& rhs) { return lhs /= rhs; }
    MpFloat operator-() const;

    friend bool operator==(const MpFloat& a, const MpFloat& b) { return mpfr_equal_p(a.value_, b.value_) != 0; }
    friend std::partial_ordering operator<=>(const MpFloat& a, const MpFloat& b);

    friend MpFloat abs(const MpFloat& a);
    friend MpFloat sin(const MpFloat& a);
    friend MpFloat cos(const MpFloat& a);

    mpfr_ptr raw() { return value_; }
    mpfr_srcptr raw() const { return value_; }

private:
    void grow_to(mpfr_prec_t precision);

    mpfr_t value_;
};

} // namespace critlen
