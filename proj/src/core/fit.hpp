#pragma once
// Least-squares log-log slope fits with a 95% confidence band.

#include <cmath>
#include <vector>

#include "types.hpp"

namespace fluxdiag {

struct SlopeFit {
    double slope = 0.0;
    double intercept = 0.0;
    double ci95 = 0.0;       // 1.96 * standard error of the slope
    double residual = 0.0;   // RMS residual in log space
};

inline SlopeFit fit_loglog(const std::vector<double>& xs, const std::vector<double>& ys,
                           double floor = 1e-300) {
    if (xs.size() != ys.size() || xs.size() < 2)
        throw ValidationError("fit_loglog: need >= 2 points");
    const std::size_t n = xs.size();
    std::vector<double> lx(n), ly(n);
    for (std::size_t i = 0; i < n; ++i) {
        lx[i] = std::log(xs[i]);
        ly[i] = std::log(std::max(std::abs(ys[i]), floor));
    }
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    SlopeFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double ss = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = ly[i] - (f.intercept + f.slope * lx[i]);
        ss += r * r;
    }
    f.residual = std::sqrt(ss / n);
    if (n > 2) f.ci95 = 1.96 * std::sqrt(ss / double(n - 2) / sxx);
    return f;
}

}  // namespace fluxdiag
