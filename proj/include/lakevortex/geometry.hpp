#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <variant>
#include <vector>

namespace lakevortex {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double norm(Vec2 a) { return std::sqrt(dot(a, a)); }
inline double dist(Vec2 a, Vec2 b) { return norm(a - b); }

/// Rotation by +90 degrees: the "perp" used for stream-function velocities
/// follows the (d/dy, -d/dx) convention, handled at call sites.
inline Vec2 rot90(Vec2 a) { return {-a.y, a.x}; }

struct BBox {
    double xmin, xmax, ymin, ymax;
};

struct Circle {
    Vec2 center;
    double radius = 0.0;
};

/// Simple polygon, vertices in order (either orientation), implicitly closed.
struct Polygon {
    std::vector<Vec2> vertices;
};

using Curve = std::variant<Circle, Polygon>;

inline Polygon make_rectangle(double xmin, double xmax, double ymin, double ymax) {
    return Polygon{{{xmin, ymin}, {xmax, ymin}, {xmax, ymax}, {xmin, ymax}}};
}

inline BBox bounding_box(const Curve& c) {
    if (const Circle* circ = std::get_if<Circle>(&c)) {
        return {circ->center.x - circ->radius, circ->center.x + circ->radius,
                circ->center.y - circ->radius, circ->center.y + circ->radius};
    }
    const Polygon& p = std::get<Polygon>(c);
    BBox b{std::numeric_limits<double>::max(), std::numeric_limits<double>::lowest(),
           std::numeric_limits<double>::max(), std::numeric_limits<double>::lowest()};
    for (const Vec2& v : p.vertices) {
        b.xmin = std::min(b.xmin, v.x);
        b.xmax = std::max(b.xmax, v.x);
        b.ymin = std::min(b.ymin, v.y);
        b.ymax = std::max(b.ymax, v.y);
    }
    return b;
}

inline double curve_scale(const Curve& c) {
    BBox b = bounding_box(c);
    return std::max(b.xmax - b.xmin, b.ymax - b.ymin);
}

inline double point_segment_distance(Vec2 p, Vec2 a, Vec2 b) {
    Vec2 ab = b - a;
    double len2 = dot(ab, ab);
    if (len2 == 0.0) return dist(p, a);
    double t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
    return dist(p, a + t * ab);
}

/// Unsigned distance from a point to the curve itself (not the enclosed region).
inline double distance_to_curve(Vec2 p, const Curve& c) {
    if (const Circle* circ = std::get_if<Circle>(&c)) {
        return std::abs(dist(p, circ->center) - circ->radius);
    }
    const Polygon& poly = std::get<Polygon>(c);
    double d = std::numeric_limits<double>::max();
    std::size_t n = poly.vertices.size();
    for (std::size_t i = 0; i < n; ++i) {
        d = std::min(d, point_segment_distance(p, poly.vertices[i], poly.vertices[(i + 1) % n]));
    }
    return d;
}

inline bool on_curve(Vec2 p, const Curve& c, double eps) {
    return distance_to_curve(p, c) <= eps;
}

/// Even-odd insideness, strict: points on the curve count as outside.
/// Nodes exactly on a curve are classified as boundary by the grid builder.
inline bool strictly_inside(Vec2 p, const Curve& c) {
    double eps = 1e-12 * std::max(1.0, curve_scale(c));
    if (const Circle* circ = std::get_if<Circle>(&c)) {
        return dist(p, circ->center) < circ->radius - eps;
    }
    const Polygon& poly = std::get<Polygon>(c);
    if (on_curve(p, c, eps)) return false;
    bool inside = false;
    std::size_t n = poly.vertices.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const Vec2& vi = poly.vertices[i];
        const Vec2& vj = poly.vertices[j];
        if ((vi.y > p.y) != (vj.y > p.y)) {
            double xc = vj.x + (p.y - vj.y) / (vi.y - vj.y) * (vi.x - vj.x);
            if (p.x < xc) inside = !inside;
        }
    }
    return inside;
}

inline bool inside_or_on(Vec2 p, const Curve& c) {
    double eps = 1e-12 * std::max(1.0, curve_scale(c));
    if (const Circle* circ = std::get_if<Circle>(&c)) {
        return dist(p, circ->center) <= circ->radius + eps;
    }
    return on_curve(p, c, eps) || strictly_inside(p, c);
}

namespace detail {

inline std::optional<double> segment_segment_param(Vec2 p, Vec2 q, Vec2 a, Vec2 b) {
    // Parameter t on p->q of the crossing with segment a->b, if any.
    Vec2 r = q - p;
    Vec2 s = b - a;
    double denom = r.x * s.y - r.y * s.x;
    if (std::abs(denom) < 1e-300) return std::nullopt;
    Vec2 ap = a - p;
    double t = (ap.x * s.y - ap.y * s.x) / denom;
    double u = (ap.x * r.y - ap.y * r.x) / denom;
    if (t >= -1e-12 && t <= 1.0 + 1e-12 && u >= -1e-9 && u <= 1.0 + 1e-9) {
        return std::clamp(t, 0.0, 1.0);
    }
    return std::nullopt;
}

} // namespace detail

/// First crossing parameter t in (0, 1] of the segment p->q with the curve.
inline std::optional<double> first_crossing(Vec2 p, Vec2 q, const Curve& c) {
    double best = std::numeric_limits<double>::max();
    if (const Circle* circ = std::get_if<Circle>(&c)) {
        Vec2 d = q - p;
        Vec2 m = p - circ->center;
        double a = dot(d, d);
        double b = 2.0 * dot(m, d);
        double cc = dot(m, m) - circ->radius * circ->radius;
        double disc = b * b - 4.0 * a * cc;
        if (disc < 0.0 || a == 0.0) return std::nullopt;
        double sq = std::sqrt(disc);
        for (double t : {(-b - sq) / (2.0 * a), (-b + sq) / (2.0 * a)}) {
            if (t > 1e-12 && t <= 1.0 + 1e-12) best = std::min(best, t);
        }
    } else {
        const Polygon& poly = std::get<Polygon>(c);
        std::size_t n = poly.vertices.size();
        for (std::size_t i = 0; i < n; ++i) {
            auto t = detail::segment_segment_param(p, q, poly.vertices[i], poly.vertices[(i + 1) % n]);
            if (t && *t > 1e-12) best = std::min(best, *t);
        }
    }
    if (best == std::numeric_limits<double>::max()) return std::nullopt;
    return std::min(best, 1.0);
}

/// Representative interior point of the region a curve encloses.
inline Vec2 curve_centroid(const Curve& c) {
    if (const Circle* circ = std::get_if<Circle>(&c)) return circ->center;
    const Polygon& poly = std::get<Polygon>(c);
    Vec2 s{0.0, 0.0};
    for (const Vec2& v : poly.vertices) s = s + v;
    return (1.0 / static_cast<double>(poly.vertices.size())) * s;
}

inline std::vector<Vec2> sample_curve(const Curve& c, int count) {
    std::vector<Vec2> pts;
    pts.reserve(static_cast<std::size_t>(count));
    if (const Circle* circ = std::get_if<Circle>(&c)) {
        for (int k = 0; k < count; ++k) {
            double th = 2.0 * M_PI * k / count;
            pts.push_back({circ->center.x + circ->radius * std::cos(th),
                           circ->center.y + circ->radius * std::sin(th)});
        }
        return pts;
    }
    const Polygon& poly = std::get<Polygon>(c);
    std::size_t n = poly.vertices.size();
    double perim = 0.0;
    for (std::size_t i = 0; i < n; ++i) perim += dist(poly.vertices[i], poly.vertices[(i + 1) % n]);
    int left = count;
    for (std::size_t i = 0; i < n && left > 0; ++i) {
        Vec2 a = poly.vertices[i];
        Vec2 b = poly.vertices[(i + 1) % n];
        int m = std::max(1, static_cast<int>(std::round(count * dist(a, b) / perim)));
        m = std::min(m, left);
        for (int k = 0; k < m; ++k) pts.push_back(a + (static_cast<double>(k) / m) * (b - a));
        left -= m;
    }
    return pts;
}

/// Winding number of a closed polyline about a point (vertices in order).
inline int winding_number(const std::vector<Vec2>& loop, Vec2 p) {
    double total = 0.0;
    std::size_t n = loop.size();
    for (std::size_t i = 0; i < n; ++i) {
        Vec2 a = loop[i] - p;
        Vec2 b = loop[(i + 1) % n] - p;
        total += std::atan2(a.x * b.y - a.y * b.x, dot(a, b));
    }
    return static_cast<int>(std::lround(total / (2.0 * M_PI)));
}

} // namespace lakevortex
