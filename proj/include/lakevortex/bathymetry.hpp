#pragma once

#include <cmath>
#include <memory>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "lakevortex/geometry.hpp"

namespace lakevortex {

struct ConstantDepth {
    double b0 = 1.0;
};

/// b(x, y) = alpha * y; valid only on domains kept at y > 0.
struct LinearSlope {
    double alpha = 1.0;
};

/// b1*exp(s*(y-ell)) for y < y0, constant b1*exp(s*(y0-ell)) beyond.
/// Continuous at y0 by construction.
struct ExponentialProfile {
    double b1 = 1.0;
    double s = 1.0;
    double ell = 0.0;
    double y0 = 1.0;
};

struct PiecewiseRegion {
    Curve curve;
    double depth = 1.0;
};

struct PiecewiseConstantDepth {
    std::vector<PiecewiseRegion> regions;
    double background = 1.0;
};

/// Nodal samples on a uniform grid, bilinear interpolation in between.
/// Queries outside the sample box clamp to the nearest cell.
struct SampledDepth {
    int nx = 0, ny = 0;
    double h = 1.0, x0 = 0.0, y0 = 0.0;
    std::vector<double> values; // row-major, y increasing

    double eval(Vec2 p) const {
        double fx = (p.x - x0) / h;
        double fy = (p.y - y0) / h;
        int i = std::clamp(static_cast<int>(std::floor(fx)), 0, nx - 2);
        int j = std::clamp(static_cast<int>(std::floor(fy)), 0, ny - 2);
        double tx = std::clamp(fx - i, 0.0, 1.0);
        double ty = std::clamp(fy - j, 0.0, 1.0);
        auto at = [&](int ii, int jj) { return values[static_cast<std::size_t>(jj) * nx + ii]; };
        return (1 - tx) * (1 - ty) * at(i, j) + tx * (1 - ty) * at(i + 1, j) +
               (1 - tx) * ty * at(i, j + 1) + tx * ty * at(i + 1, j + 1);
    }
};

using Bathymetry =
    std::variant<ConstantDepth, LinearSlope, ExponentialProfile, PiecewiseConstantDepth, SampledDepth>;

inline double depth(const Bathymetry& b, Vec2 p) {
    return std::visit(
        [&](const auto& v) -> double {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, ConstantDepth>) {
                return v.b0;
            } else if constexpr (std::is_same_v<T, LinearSlope>) {
                return v.alpha * p.y;
            } else if constexpr (std::is_same_v<T, ExponentialProfile>) {
                double y = std::min(p.y, v.y0);
                return v.b1 * std::exp(v.s * (y - v.ell));
            } else if constexpr (std::is_same_v<T, PiecewiseConstantDepth>) {
                for (const PiecewiseRegion& r : v.regions) {
                    if (inside_or_on(p, r.curve)) return r.depth;
                }
                return v.background;
            } else {
                return v.eval(p);
            }
        },
        b);
}

/// Gradient of log b, analytic for the parametric profiles and a central
/// difference for sampled data. Piecewise-constant profiles are flat away
/// from their interfaces, so the gradient is zero there.
inline Vec2 grad_log_depth(const Bathymetry& b, Vec2 p, double fd_step = 1e-4) {
    return std::visit(
        [&](const auto& v) -> Vec2 {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, ConstantDepth>) {
                return {0.0, 0.0};
            } else if constexpr (std::is_same_v<T, LinearSlope>) {
                return {0.0, 1.0 / p.y};
            } else if constexpr (std::is_same_v<T, ExponentialProfile>) {
                return {0.0, p.y < v.y0 ? v.s : 0.0};
            } else if constexpr (std::is_same_v<T, PiecewiseConstantDepth>) {
                return {0.0, 0.0};
            } else {
                double gx = (std::log(v.eval({p.x + fd_step, p.y})) - std::log(v.eval({p.x - fd_step, p.y}))) /
                            (2.0 * fd_step);
                double gy = (std::log(v.eval({p.x, p.y + fd_step})) - std::log(v.eval({p.x, p.y - fd_step}))) /
                            (2.0 * fd_step);
                return {gx, gy};
            }
        },
        b);
}

} // namespace lakevortex
