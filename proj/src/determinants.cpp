#include "critlen/determinants.hpp"

#include "critlen/errors.hpp"

#include <cmath>
#include <map>
#include <string>

namespace critlen {

DerivStack trig_stack(const TrigPoly& f, double x, int m)
{
    if (m < 0)
        throw UsageError("stack depth must be >= 0");
    DerivStack s{x, {}};
    s.values.reserve(static_cast<std::size_t>(m) + 1);
    TrigPoly d = f;
    for (int i = 0; i <= m; ++i) {
        s.values.push_back(evaluate(d, x));
        if (i < m)
            d = derivative(d);
    }
    return s;
}

double v_det(const DerivStack& s)
{
    if (s.depth() < 2)
        throw UsageError("v needs a stack of depth >= 2");
    return s[1] * s[1] - s[2] * s[0];
}

double w_det(const DerivStack& s)
{
    if (s.depth() < 4)
        throw UsageError("w needs a stack of depth >= 4");
    const double f0 = s[0], f1 = s[1], f2 = s[2], f3 = s[3], f4 = s[4];
    return f2 * (f2 * f2 - f1 * f3) - f1 * (f3 * f2 - f1 * f4) + f0 * (f3 * f3 - f2 * f4);
}

double hankel_det(const DerivStack& s) { return -w_det(s); }

CanonicalBasis canonical_basis(int n)
{
    CanonicalBasis out;
    out.n = n;
    const int top = 2 * n + 1;
    std::vector<TrigPoly> chain{spherical_fn(n)};
    for (int d = 1; d <= top; ++d)
        chain.push_back(derivative(chain.back()));
    for (int k = 0; k <= top; ++k)
        out.basis.push_back(chain[static_cast<std::size_t>(top - k)]);
    return out;
}

void check_minor_index(int n, int j)
{
    if (n < 0)
        throw UsageError("n must be >= 0");
    if (!(2 * j > 2 * n + 1 && j <= 2 * n + 1))
        throw UsageError("minor index j=" + std::to_string(j) + " outside ((2n+1)/2, 2n+1] for n=" +
                         std::to_string(n));
}

MpFloat lu_determinant(std::vector<std::vector<MpFloat>> a)
{
    const std::size_t size = a.size();
    if (size == 0)
        return MpFloat(1L, 64);
    const mpfr_prec_t prec = a[0][0].precision();

    MpFloat scale(prec);
    for (const auto& row : a)
        for (const auto& e : row)
            if (abs(e) > scale)
                scale = abs(e);
    if (scale.is_zero())
        return MpFloat(prec);
    const MpFloat threshold = scale * MpFloat(1e-300, prec);

    MpFloat det(1L, prec);
    for (std::size_t c = 0; c < size; ++c) {
        std::size_t pivot = c;
        for (std::size_t r = c + 1; r < size; ++r)
            if (abs(a[r][c]) > abs(a[pivot][c]))
                pivot = r;
        if (abs(a[pivot][c]) < threshold || a[pivot][c].is_zero())
            return MpFloat(prec);
        if (pivot != c) {
            std::swap(a[pivot], a[c]);
            det = -det;
        }
        det *= a[c][c];
        for (std::size_t r = c + 1; r < size; ++r) {
            if (a[r][c].is_zero())
                continue;
            const MpFloat factor = a[r][c] / a[c][c];
            for (std::size_t k = c + 1; k < size; ++k)
                a[r][k] -= factor * a[c][k];
        }
    }
    return det;
}

MinorEvaluator::MinorEvaluator(int n, int j) : n_(n), j_(j)
{
    check_minor_index(n, j);
    size_ = minor_size(n, j);
    offset_ = 2 * n + 1 - j;
    // Entry (i, c) = f^(offset - c + i), so orders run from offset - (size-1)
    // up to offset + (size-1); offset >= size - 1 always holds in range.
    const int top = offset_ + size_ - 1;
    chain_.push_back(spherical_fn(n));
    for (int d = 1; d <= top; ++d)
        chain_.push_back(derivative(chain_.back()));
}

MpFloat MinorEvaluator::determinant(double x, mpfr_prec_t precision) const
{
    std::vector<MpFloat> values;
    values.reserve(chain_.size());
    for (const auto& d : chain_)
        values.push_back(evaluate_mp(d, x, precision));
    std::vector<std::vector<MpFloat>> a(static_cast<std::size_t>(size_));
    for (int i = 0; i < size_; ++i) {
        auto& row = a[static_cast<std::size_t>(i)];
        row.reserve(static_cast<std::size_t>(size_));
        for (int c = 0; c < size_; ++c)
            row.push_back(values[static_cast<std::size_t>(offset_ - c + i)]);
    }
    return lu_determinant(std::move(a));
}

MinorEvaluator::Evaluation MinorEvaluator::evaluate(double x) const
{
    if (!std::isfinite(x) || !(x > 0.0))
        throw UsageError("wronskian_minor needs x > 0");
    constexpr mpfr_prec_t kStart = 192;
    constexpr mpfr_prec_t kMax = 8192;
    MpFloat previous = determinant(x, kStart);
    for (mpfr_prec_t prec = 2 * kStart; prec <= kMax; prec *= 2) {
        MpFloat current = determinant(x, prec);
        const MpFloat gap = abs(current - previous);
        const bool agree = current.is_zero() ? previous.is_zero()
                                             : gap.is_zero() || gap.exponent() <= abs(current).exponent() - 60;
        if (agree) {
            const double value = current.to_double();
            if (!std::isfinite(value))
                throw NumericalFailure("Wronskian minor overflows double");
            return {value, true, prec};
        }
        previous = std::move(current);
    }
    return {previous.to_double(), false, kMax};
}

double wronskian_minor(int n, int j, double x) { return MinorEvaluator(n, j)(x); }

TrigPoly symbolic_minor(int n, int j)
{
    check_minor_index(n, j);
    if (n > kMaxSymbolicOrder)
        throw UsageError("symbolic_minor supports n <= " + std::to_string(kMaxSymbolicOrder));
    const int size = minor_size(n, j);
    const int offset = 2 * n + 1 - j;
    std::vector<TrigPoly> chain{spherical_fn(n)};
    for (int d = 1; d <= offset + size - 1; ++d)
        chain.push_back(derivative(chain.back()));
    auto entry = [&](int i, int c) -> const TrigPoly& { return chain[static_cast<std::size_t>(offset - c + i)]; };

    // Expansion along successive columns; the minor formed by columns
    // c..size-1 and a set of rows depends only on that row mask.
    std::map<unsigned, TrigPoly> memo;
    auto expand = [&](auto&& self, int c, unsigned rows) -> TrigPoly {
        if (c == size)
            return TrigPoly::constant(1);
        if (auto it = memo.find(rows); it != memo.end())
            return it->second;
        TrigPoly sum;
        int position = 0;
        for (int r = 0; r < size; ++r) {
            if (!(rows & (1u << r)))
                continue;
            const TrigPoly& e = entry(r, c);
            if (!e.is_zero()) {
                TrigPoly term = e * self(self, c + 1, rows & ~(1u << r));
                if (position % 2 == 0)
                    sum += term;
                else
                    sum -= term;
            }
            ++position;
        }
        memo.emplace(rows, sum);
        return sum;
    };
    return expand(expand, 0, (1u << size) - 1);
}

TrigPoly symbolic_v(const TrigPoly& f)
{
    const TrigPoly f1 = derivative(f);
    const TrigPoly f2 = derivative(f1);
    return f1 * f1 - f2 * f;
}

TrigPoly symbolic_w(const TrigPoly& f)
{
    const TrigPoly f1 = derivative(f);
    const TrigPoly f2 = derivative(f1);
    const TrigPoly f3 = derivative(f2);
    const TrigPoly f4 = derivative(f3);
    return f2 * (f2 * f2 - f1 * f3) - f1 * (f3 * f2 - f1 * f4) + f * (f3 * f3 - f2 * f4);
}

} // namespace critlen
