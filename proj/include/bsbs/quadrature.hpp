#pragma once

#include "bsbs/errors.hpp"

#include <cmath>
#include <string>

namespace bsbs::detail {

// Adaptive Simpson for scalar- or matrix-valued integrands. `norm` maps a
// value to a non-negative magnitude (max-abs entry for matrices). The
// tolerance is relative to the magnitude of the whole integral, shared out in
// proportion to sub-interval width, so every entry carries absolute error
// below rel_tol * max|entry|.
template <class T, class F, class Norm>
class AdaptiveSimpson {
public:
    AdaptiveSimpson(F f, Norm norm, double rel_tol, int max_depth = 48)
        : f_(f), norm_(norm), rel_tol_(rel_tol), max_depth_(max_depth)
    {
    }

    T integrate(double a, double b)
    {
        if (b <= a)
            return f_(a) * 0.0;
        // Coarse composite estimate sets the scale for the relative tolerance.
        constexpr int n = 16;
        double h = (b - a) / n;
        T coarse = f_(a) + f_(b);
        for (int i = 1; i < n; ++i)
            coarse = coarse + f_(a + i * h) * ((i % 2) ? 4.0 : 2.0);
        coarse = coarse * (h / 3.0);
        scale_ = norm_(coarse);
        width_ = b - a;

        T fa = f_(a), fb = f_(b), fm = f_(0.5 * (a + b));
        T whole = (fa + fm * 4.0 + fb) * ((b - a) / 6.0);
        return recurse(a, b, fa, fm, fb, whole, 0);
    }

private:
    T recurse(double a, double b, const T& fa, const T& fm, const T& fb, const T& whole, int depth)
    {
        double m = 0.5 * (a + b);
        T flm = f_(0.5 * (a + m));
        T frm = f_(0.5 * (m + b));
        T left = (fa + flm * 4.0 + fm) * ((m - a) / 6.0);
        T right = (fm + frm * 4.0 + fb) * ((b - m) / 6.0);
        T both = left + right;
        double err = norm_(both - whole);
        double allowed = 15.0 * rel_tol_ * scale_ * (b - a) / width_;
        if (err <= allowed || (depth >= 6 && err <= 1e-300))
            return both + (both - whole) * (1.0 / 15.0);
        if (depth >= max_depth_)
            throw NumericalError("adaptive Simpson: tolerance not met at depth " + std::to_string(depth));
        return recurse(a, m, fa, flm, fm, left, depth + 1) + recurse(m, b, fm, frm, fb, right, depth + 1);
    }

    F f_;
    Norm norm_;
    double rel_tol_;
    int max_depth_;
    double scale_ = 0;
    double width_ = 1;
};

template <class T, class F, class Norm>
T adaptive_simpson(F f, Norm norm, double a, double b, double rel_tol)
{
    AdaptiveSimpson<T, F, Norm> q(f, norm, rel_tol);
    return q.integrate(a, b);
}

template <class F>
double adaptive_simpson_scalar(F f, double a, double b, double rel_tol)
{
    auto norm = [](double x) { return std::abs(x); };
    return adaptive_simpson<double>(f, norm, a, b, rel_tol);
}

} // namespace bsbs::detail
