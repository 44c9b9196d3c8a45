#pragma once

#include <string>
#include <vector>

#include "lakevortex/errors.hpp"
#include "lakevortex/geometry.hpp"

namespace lakevortex {

/// Bounded planar domain: one outer curve and g disjoint island curves
/// strictly inside it. Connectivity g equals islands.size().
struct Domain {
    Curve outer;
    std::vector<Curve> islands;

    int genus() const { return static_cast<int>(islands.size()); }
};

inline bool curves_overlap(const Curve& a, const Curve& b) {
    const Circle* ca = std::get_if<Circle>(&a);
    const Circle* cb = std::get_if<Circle>(&b);
    if (ca && cb) {
        return dist(ca->center, cb->center) <= ca->radius + cb->radius;
    }
    for (const Vec2& p : sample_curve(a, 256)) {
        if (inside_or_on(p, b)) return true;
    }
    for (const Vec2& p : sample_curve(b, 256)) {
        if (inside_or_on(p, a)) return true;
    }
    return false;
}

inline void validate_domain(const Domain& d) {
    for (std::size_t i = 0; i < d.islands.size(); ++i) {
        for (const Vec2& p : sample_curve(d.islands[i], 256)) {
            if (!strictly_inside(p, d.outer)) {
                throw ValidationError("island " + std::to_string(i) + " not strictly inside the outer curve");
            }
        }
        BBox bb = bounding_box(d.islands[i]);
        if (bb.xmax - bb.xmin <= 0.0 || bb.ymax - bb.ymin <= 0.0) {
            throw ValidationError("island " + std::to_string(i) + " encloses no area");
        }
        for (std::size_t j = i + 1; j < d.islands.size(); ++j) {
            if (curves_overlap(d.islands[i], d.islands[j])) {
                throw ValidationError("islands " + std::to_string(i) + " and " + std::to_string(j) +
                                      " overlap");
            }
        }
    }
}

/// Distance from a point to the nearest boundary component (outer or island).
inline double boundary_clearance(const Domain& d, Vec2 p) {
    double c = distance_to_curve(p, d.outer);
    for (const Curve& isl : d.islands) c = std::min(c, distance_to_curve(p, isl));
    return c;
}

inline bool point_in_fluid(const Domain& d, Vec2 p) {
    if (!strictly_inside(p, d.outer)) return false;
    for (const Curve& isl : d.islands) {
        if (inside_or_on(p, isl)) return false;
    }
    return true;
}

} // namespace lakevortex
