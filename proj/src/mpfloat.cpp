#include "critlen/mpfloat.hpp"

#include <algorithm>
#include <climits>

namespace critlen {

MpFloat::MpFloat(mpfr_prec_t precision)
{
    mpfr_init2(value_, precision);
    mpfr_set_zero(value_, 1);
}

MpFloat::MpFloat(double value, mpfr_prec_t precision)
{
    mpfr_init2(value_, precision);
    mpfr_set_d(value_, value, MPFR_RNDN);
}

MpFloat::MpFloat(long value, mpfr_prec_t precision)
{
    mpfr_init2(value_, precision);
    mpfr_set_si(value_, value, MPFR_RNDN);
}

MpFloat::MpFloat(const mpq_class& value, mpfr_prec_t precision)
{
    mpfr_init2(value_, precision);
    mpfr_set_q(value_, value.get_mpq_t(), MPFR_RNDN);
}

MpFloat::MpFloat(const MpFloat& other)
{
    mpfr_init2(value_, other.precision());
    mpfr_set(value_, other.value_, MPFR_RNDN);
}

MpFloat::MpFloat(MpFloat&& other) noexcept
{
    // Steal the limbs and leave `other` as a valid minimal-precision zero.
    *value_ = *other.value_;
    mpfr_init2(other.value_, MPFR_PREC_MIN);
    mpfr_set_zero(other.value_, 1);
}

MpFloat& MpFloat::operator=(const MpFloat& other)
{
    if (this != &other) {
        mpfr_set_prec(value_, other.precision());
        mpfr_set(value_, other.value_, MPFR_RNDN);
    }
    return *this;
}

MpFloat& MpFloat::operator=(MpFloat&& other) noexcept
{
    if (this != &other)
        mpfr_swap(value_, other.value_);
    return *this;
}

MpFloat::~MpFloat() { mpfr_clear(value_); }

long MpFloat::exponent() const
{
    if (!mpfr_regular_p(value_))
        return LONG_MIN / 2;
    return mpfr_get_exp(value_);
}

void MpFloat::grow_to(mpfr_prec_t precision)
{
    if (precision > this->precision())
        mpfr_prec_round(value_, precision, MPFR_RNDN);
}

MpFloat& MpFloat::operator+=(const MpFloat& rhs)
{
    grow_to(rhs.precision());
    mpfr_add(value_, value_, rhs.value_, MPFR_RNDN);
    return *this;
}

MpFloat& MpFloat::operator-=(const MpFloat& rhs)
{
    grow_to(rhs.precision());
    mpfr_sub(value_, value_, rhs.value_, MPFR_RNDN);
    return *this;
}

MpFloat& MpFloat::operator*=(const MpFloat& rhs)
{
    grow_to(rhs.precision());
    mpfr_mul(value_, value_, rhs.value_, MPFR_RNDN);
    return *this;
}

MpFloat& MpFloat::operator/=(const MpFloat& rhs)
{
    grow_to(rhs.precision());
    mpfr_div(value_, value_, rhs.value_, MPFR_RNDN);
    return *this;
}

MpFloat MpFloat::operator-() const
{
    MpFloat out(*this);
    mpfr_neg(out.value_, out.value_, MPFR_RNDN);
    return out;
}

std::partial_ordering operator<=>(const MpFloat& a, const MpFloat& b)
{
    if (mpfr_unordered_p(a.value_, b.value_))
        return std::partial_ordering::unordered;
    const int c = mpfr_cmp(a.value_, b.value_);
    if (c < 0)
        return std::partial_ordering::less;
    if (c > 0)
        return std::partial_ordering::greater;
    return std::partial_ordering::equivalent;
}

MpFloat abs(const MpFloat& a)
{
    MpFloat out(a);
    mpfr_abs(out.value_, out.value_, MPFR_RNDN);
    return out;
}

MpFloat sin(const MpFloat& a)
{
    MpFloat out(a.precision());
    mpfr_sin(out.value_, a.value_, MPFR_RNDN);
    return out;
}

MpFloat cos(const MpFloat& a)
{
    MpFloat out(a.precision());
    mpfr_cos(out.value_, a.value_, MPFR_RNDN);
    return out;
}

} // namespace critlen
