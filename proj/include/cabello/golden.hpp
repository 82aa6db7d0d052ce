#pragma once

#include <cmath>
#include <utility>

namespace cabello {

struct LineMax {
    double x;
    double f;
};

/// Golden-section search for the maximum of a unimodal f on [lo, hi].
/// Stops when the bracket is narrower than tol. The returned point is the
/// best one evaluated, endpoints included.
template <typename F>
LineMax golden_section_max(F&& f, double lo, double hi, double tol) {
    static const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    if (hi < lo) std::swap(lo, hi);

    LineMax best{lo, f(lo)};
    const double f_hi = f(hi);
    if (f_hi > best.f) best = {hi, f_hi};

    double a = lo, b = hi;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = f(x1);
    double f2 = f(x2);
    while (b - a > tol) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        }
    }
    if (f1 > best.f) best = {x1, f1};
    if (f2 > best.f) best = {x2, f2};
    return best;
}

}  // namespace cabello
