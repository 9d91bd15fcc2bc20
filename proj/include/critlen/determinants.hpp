#pragma once

#include "critlen/trigpoly.hpp"

#include <vector>

namespace critlen {

/// Values (f, f', ..., f^(m)) at a point x.
struct DerivStack {
    double x = 0.0;
    std::vector<double> values;

    int depth() const { return static_cast<int>(values.size()) - 1; }
    double operator[](int i) const { return values[static_cast<std::size_t>(i)]; }
};

/// Stack of an exact ring element; every entry goes through the adaptive
/// evaluator.
DerivStack trig_stack(const TrigPoly& f, double x, int m);

/// f'^2 - f'' f. Needs depth >= 2.
double v_det(const DerivStack& s);

/// det [[f'', f', f], [f''', f'', f'], [f'''', f''', f'']]. Needs depth >= 4.
double w_det(const DerivStack& s);

/// Determinant of the Hankel matrix (f^(i+j))_{i,j=0..2}; equals -w_det.
double hankel_det(const DerivStack& s);

/// b_0..b_{2n+1} with b_k = f_n^(2n+1-k).
struct CanonicalBasis {
    int n = 0;
    std::vector<TrigPoly> basis;
};

CanonicalBasis canonical_basis(int n);

/// Throws UsageError unless n >= 0 and (2n+1)/2 < j <= 2n+1.
void check_minor_index(int n, int j);

/// Size of the matrix W(u_j, ..., u_{2n+1}).
inline int minor_size(int n, int j) { return 2 * n + 2 - j; }

/// Numeric w_{j,2n+1}(x) = det W(u_j, ..., u_{2n+1})(x).
///
/// Row i of the matrix holds the i-th derivatives, column c the function
/// u_{j+c}, so entry (i, c) is f_n^(2n+1-j-c+i). For j = 2n-1 this is exactly
/// the matrix of w(f_n). Entries come from the exact derivative chain and
/// are evaluated in MPFR; the LU factorization runs at the same precision,
/// which is doubled until two consecutive precisions agree.
class MinorEvaluator {
public:
    MinorEvaluator(int n, int j);

    struct Evaluation {
        double value;
        /// Two consecutive working precisions agreed to 2^-60 relative.
        bool certified;
        mpfr_prec_t precision;
    };

    Evaluation evaluate(double x) const;
    double operator()(double x) const { return evaluate(x).value; }

    int n() const { return n_; }
    int j() const { return j_; }

private:
    MpFloat determinant(double x, mpfr_prec_t precision) const;

    int n_;
    int j_;
    int size_;
    int offset_;
    std::vector<TrigPoly> chain_;
};

double wronskian_minor(int n, int j, double x);

/// Largest n accepted by symbolic_minor.
inline constexpr int kMaxSymbolicOrder = 6;

/// w_{j,2n+1} expanded exactly in the ring by cofactor expansion.
TrigPoly symbolic_minor(int n, int j);

/// v(f) and w(f) of a ring element, exactly.
TrigPoly symbolic_v(const TrigPoly& f);
TrigPoly symbolic_w(const TrigPoly& f);

/// Determinant of a small square matrix by LU with partial pivoting. The
/// matrix is taken by value and overwritten; a scaled pivot below 1e-300
/// yields 0.
MpFloat lu_determinant(std::vector<std::vector<MpFloat>> a);

} // namespace critlen
