#pragma once

#include <cmath>
#include <numbers>
#include <span>

namespace portopt {

struct LatLon {
    double lat = 0.0;
    double lon = 0.0;

    friend bool operator==(const LatLon&, const LatLon&) = default;
};

inline constexpr double earth_radius_nm = 3440.065;

// Great-circle distance in nautical miles.
inline double haversine_nm(LatLon a, LatLon b) {
    constexpr double rad = std::numbers::pi / 180.0;
    const double dlat = (b.lat - a.lat) * rad;
    const double dlon = (b.lon - a.lon) * rad;
    const double h = std::sin(dlat / 2) * std::sin(dlat / 2) +
                     std::cos(a.lat * rad) * std::cos(b.lat * rad) * std::sin(dlon / 2) * std::sin(dlon / 2);
    return 2.0 * earth_radius_nm * std::asin(std::sqrt(std::min(1.0, h)));
}

namespace detail {

inline bool on_segment(LatLon p, LatLon a, LatLon b) {
    constexpr double eps = 1e-12;
    const double cross = (b.lat - a.lat) * (p.lon - a.lon) - (b.lon - a.lon) * (p.lat - a.lat);
    if (std::abs(cross) > eps) return false;
    return p.lat >= std::min(a.lat, b.lat) - eps && p.lat <= std::max(a.lat, b.lat) + eps &&
           p.lon >= std::min(a.lon, b.lon) - eps && p.lon <= std::max(a.lon, b.lon) + eps;
}

}  // namespace detail

// Even-odd rule in the (lat, lon) plane; points on an edge or vertex count as
// inside. The ring may or may not repeat its first vertex.
inline bool point_in_polygon(LatLon p, std::span<const LatLon> ring) {
    const std::size_t n = ring.size();
    if (n < 3) return false;
    bool inside = false;
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const LatLon a = ring[i], b = ring[j];
        if (detail::on_segment(p, a, b)) return true;
        if ((a.lat > p.lat) != (b.lat > p.lat)) {
            const double x = a.lon + (p.lat - a.lat) * (b.lon - a.lon) / (b.lat - a.lat);
            if (p.lon < x) inside = !inside;
        }
    }
    return inside;
}

}  // namespace portopt
