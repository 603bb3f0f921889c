#pragma once

#include <cmath>

namespace transit {

// Coordinates in km. x runs along the route axis, y across the region.
struct Point {
    double x = 0.0;
    double y = 0.0;
};

inline bool operator==(const Point& a, const Point& b) { return a.x == b.x && a.y == b.y; }
inline bool operator!=(const Point& a, const Point& b) { return !(a == b); }

enum class Metric { Rectilinear, Euclidean };

inline double rect_distance(const Point& p, const Point& q) {
    return std::abs(p.x - q.x) + std::abs(p.y - q.y);
}

inline double euclid_distance(const Point& p, const Point& q) {
    return std::hypot(p.x - q.x, p.y - q.y);
}

inline double distance(const Point& p, const Point& q, Metric m) {
    return m == Metric::Rectilinear ? rect_distance(p, q) : euclid_distance(p, q);
}

// Walk duration in seconds for a distance at walking speed v_w (km/h).
inline double walk_time_s(double dist_km, double v_w_kmh) {
    return dist_km / v_w_kmh * 3600.0;
}

inline double walk_time_s(const Point& p, const Point& q, double v_w_kmh, Metric m = Metric::Rectilinear) {
    return walk_time_s(distance(p, q, m), v_w_kmh);
}

// Position after traveling `dist` km from `a` toward `b` along the driven path.
// Rectilinear vehicles drive the x-leg first, then the y-leg; Euclidean ones
// drive the straight segment.
inline Point path_position(const Point& a, const Point& b, double dist, Metric m) {
    if (m == Metric::Euclidean) {
        double total = euclid_distance(a, b);
        if (total <= 0.0) return b;
        double f = dist / total;
        if (f >= 1.0) return b;
        return {a.x + (b.x - a.x) * f, a.y + (b.y - a.y) * f};
    }
    double dx = std::abs(b.x - a.x);
    if (dist <= dx) {
        double sx = b.x > a.x ? 1.0 : -1.0;
        return {a.x + sx * dist, a.y};
    }
    double rem = dist - dx;
    double dy = std::abs(b.y - a.y);
    if (rem >= dy) return b;
    double sy = b.y > a.y ? 1.0 : -1.0;
    return {b.x, a.y + sy * rem};
}

inline double mi_from_km(double km) { return km / 1.609344; }

}  // namespace transit
