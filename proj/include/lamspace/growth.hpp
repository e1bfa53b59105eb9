#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace lamspace {

enum class Growth : std::uint8_t { Constant, Logarithmic, Linear, Linearithmic, Exponential, Inconclusive };

inline std::string_view growth_name(Growth g) {
    switch (g) {
    case Growth::Constant: return "constant";
    case Growth::Logarithmic: return "logarithmic";
    case Growth::Linear: return "linear";
    case Growth::Linearithmic: return "linearithmic";
    case Growth::Exponential: return "exponential";
    case Growth::Inconclusive: return "inconclusive";
    }
    return "?";
}

struct GrowthPoint {
    std::uint64_t n;
    double value;
};

struct GrowthThresholds {
    double exp_ratio = 1.5;          // per unit of n, on the tail of the series
    double log_per_doubling = 8.0;   // bits or closures added when n doubles
    double constant_spread = 2.0;    // max - min
    double fit_residual = 0.15;      // sqrt(1 - R^2) of the least-squares line
    std::size_t min_points = 4;
};

namespace detail {

// relative residual of the least-squares line value = a + b f(n); b must be positive
inline double fit_residual(const std::vector<GrowthPoint>& pts, double (*f)(double)) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    const double k = static_cast<double>(pts.size());
    for (const auto& p : pts) {
        double x = f(static_cast<double>(p.n));
        sx += x;
        sy += p.value;
        sxx += x * x;
        sxy += x * p.value;
        syy += p.value * p.value;
    }
    double vx = sxx - sx * sx / k, vy = syy - sy * sy / k, cxy = sxy - sx * sy / k;
    if (vx <= 0 || vy <= 0 || cxy <= 0) return INFINITY;
    double r2 = cxy * cxy / (vx * vy);
    return std::sqrt(std::max(0.0, 1.0 - r2));
}

}  // namespace detail

// Tried in order: exponential, logarithmic, constant, linear/linearithmic.
// Logarithmic comes before constant so that a slowly growing series is not
// mistaken for a flat one.
inline Growth growth_classify(std::vector<GrowthPoint> pts, const GrowthThresholds& th = {}) {
    if (pts.size() < th.min_points) return Growth::Inconclusive;
    for (std::size_t k = 1; k < pts.size(); ++k)
        if (pts[k].n <= pts[k - 1].n) return Growth::Inconclusive;

    const std::size_t pairs = pts.size() - 1;
    const std::size_t tail = std::min(pairs, std::max<std::size_t>(3, pairs / 2));
    bool exponential = true;
    for (std::size_t k = pts.size() - tail; k < pts.size(); ++k) {
        double dn = static_cast<double>(pts[k].n - pts[k - 1].n);
        if (pts[k - 1].value <= 0 || pts[k].value < pts[k - 1].value * std::pow(th.exp_ratio, dn)) {
            exponential = false;
            break;
        }
    }
    if (exponential) return Growth::Exponential;

    bool monotone = true;
    for (std::size_t k = 1; k < pts.size(); ++k)
        if (pts[k].value < pts[k - 1].value) monotone = false;
    if (monotone && pts.back().value > pts.front().value) {
        bool bounded = true;
        std::size_t checked = 0;
        for (std::size_t k = 0; k < pts.size(); ++k) {
            auto later = std::find_if(pts.begin() + static_cast<std::ptrdiff_t>(k) + 1, pts.end(),
                                      [&](const GrowthPoint& p) { return p.n >= 2 * pts[k].n; });
            if (later == pts.end()) break;
            ++checked;
            double doublings = std::log2(static_cast<double>(later->n) / static_cast<double>(pts[k].n));
            if (later->value - pts[k].value > th.log_per_doubling * doublings) bounded = false;
        }
        if (bounded && checked > 0) return Growth::Logarithmic;
    }

    auto [lo, hi] = std::minmax_element(pts.begin(), pts.end(),
                                        [](const GrowthPoint& a, const GrowthPoint& b) { return a.value < b.value; });
    if (hi->value - lo->value <= th.constant_spread) return Growth::Constant;

    double lin = detail::fit_residual(pts, [](double n) { return n; });
    double nlog = detail::fit_residual(pts, [](double n) { return n * std::log2(n); });
    if (std::min(lin, nlog) < th.fit_residual) return lin <= nlog ? Growth::Linear : Growth::Linearithmic;
    return Growth::Inconclusive;
}

}  // namespace lamspace
