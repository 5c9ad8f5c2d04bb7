#pragma once

#include <cmath>

namespace sphmesh {

// Wendland C2 kernel with support radius 2h.
//
//   W(r, h) = sigma_d / h^d * (1 - q/2)^4 (2q + 1),  q = r/h in [0, 2]
//
// Normalization constants give unit integral over the d-dimensional support.
inline constexpr double kWendlandSigma1 = 3.0 / 4.0;
inline constexpr double kWendlandSigma2 = 7.0 / (4.0 * M_PI);
inline constexpr double kWendlandSigma3 = 21.0 / (16.0 * M_PI);

inline double kernel_sigma(int dim) {
    return dim == 1 ? kWendlandSigma1 : dim == 2 ? kWendlandSigma2 : kWendlandSigma3;
}

inline double kernel_W(double r, double h, int dim) {
    double q = r / h;
    if (q >= 2.0) return 0.0;
    double t = 1.0 - 0.5 * q;
    double t2 = t * t;
    double f = t2 * t2 * (2.0 * q + 1.0);
    double hd = dim == 1 ? h : dim == 2 ? h * h : h * h * h;
    return kernel_sigma(dim) / hd * f;
}

// dW/dr; non-positive on [0, 2h], zero at r = 0 and r >= 2h.
inline double kernel_dWdr(double r, double h, int dim) {
    double q = r / h;
    if (q >= 2.0) return 0.0;
    double t = 1.0 - 0.5 * q;
    double fp = -5.0 * q * t * t * t;
    double hd = dim == 1 ? h : dim == 2 ? h * h : h * h * h;
    return kernel_sigma(dim) / (hd * h) * fp;
}

} // namespace sphmesh
