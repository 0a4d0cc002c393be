#pragma once

#include <algorithm>
#include <cstdint>

#include <boost/math/tools/minima.hpp>

namespace nlchns {

template <typename Fn>
Extremum minimize_on_range(Fn&& fn, double lo, double hi, int samples) {
    if (hi <= lo) {
        return {lo, fn(lo)};
    }
    samples = std::max(samples, 3);
    const double step = (hi - lo) / (samples - 1);
    int best = 0;
    double best_value = fn(lo);
    for (int i = 1; i < samples; ++i) {
        const double s = i == samples - 1 ? hi : lo + i * step;
        const double v = fn(s);
        if (v < best_value) {
            best_value = v;
            best = i;
        }
    }
    const double a = lo + std::max(best - 1, 0) * step;
    const double b = std::min(lo + (best + 1) * step, hi);
    std::uintmax_t iterations = 200;
    const auto [arg, value] = boost::math::tools::brent_find_minima(fn, a, b, 52, iterations);
    if (value < best_value) {
        return {arg, value};
    }
    return {best == samples - 1 ? hi : lo + best * step, best_value};
}

}  // namespace nlchns
