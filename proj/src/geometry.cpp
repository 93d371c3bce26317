// Copyright 2026 The spatnet Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "spatnet/geometry.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <string>

#include "spatnet/error.h"

namespace spatnet {

namespace {

bool Near(const Point& a, const Point& b, double eps) { return Distance(a, b) <= eps; }

bool SameSequence(std::span<const Point> a, std::span<const Point> b, double eps) {
  if (a.size() != b.size()) return false;
  bool forward = true;
  bool backward = true;
  for (std::size_t i = 0; i < a.size(); ++i) {
    forward = forward && Near(a[i], b[i], eps);
    backward = backward && Near(a[i], b[b.size() - 1 - i], eps);
  }
  return forward || backward;
}

double Cross(const Point& o, const Point& a, const Point& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

bool SegmentsIntersect(const Point& a, const Point& b, const Point& c, const Point& d) {
  const double d1 = Cross(c, d, a);
  const double d2 = Cross(c, d, b);
  const double d3 = Cross(a, b, c);
  const double d4 = Cross(a, b, d);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) &&
      ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) {
    return true;
  }
  // Collinear and touching cases are covered by the endpoint distances.
  return false;
}

double SegmentDistance(const Point& a, const Point& b, const Point& c, const Point& d) {
  if (SegmentsIntersect(a, b, c, d)) return 0.0;
  return std::min({DistanceToSegment(a, c, d), DistanceToSegment(b, c, d),
                   DistanceToSegment(c, a, b), DistanceToSegment(d, a, b)});
}

// Vertex chain of the geometry as a sequence of segments (a point is a
// degenerate one-vertex chain).
std::span<const Point> Vertices(const Geometry& g) {
  return std::visit(
      [](const auto& v) -> std::span<const Point> {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Point>) {
          return {&v, 1};
        } else if constexpr (std::is_same_v<T, Polyline>) {
          return v.points;
        } else {
          return v.ring;
        }
      },
      g);
}

double ChainDistance(std::span<const Point> a, std::span<const Point> b) {
  double best = std::numeric_limits<double>::infinity();
  if (a.size() == 1 && b.size() == 1) return Distance(a[0], b[0]);
  if (a.size() == 1) {
    for (std::size_t j = 0; j + 1 < b.size(); ++j) {
      best = std::min(best, DistanceToSegment(a[0], b[j], b[j + 1]));
    }
    return best;
  }
  if (b.size() == 1) return ChainDistance(b, a);
  for (std::size_t i = 0; i + 1 < a.size(); ++i) {
    for (std::size_t j = 0; j + 1 < b.size(); ++j) {
      best = std::min(best, SegmentDistance(a[i], a[i + 1], b[j], b[j + 1]));
    }
  }
  return best;
}

}  // namespace

std::string_view TopologyKindName(TopologyKind kind) {
  switch (kind) {
    case TopologyKind::kPoint: return "point";
    case TopologyKind::kPolyline: return "polyline";
    case TopologyKind::kPolygon: return "polygon";
  }
  return "point";
}

TopologyKind ParseTopologyKind(std::string_view name) {
  if (name == "point") return TopologyKind::kPoint;
  if (name == "polyline") return TopologyKind::kPolyline;
  if (name == "polygon") return TopologyKind::kPolygon;
  throw Error(ErrorCode::kParseError, "unknown topology '" + std::string(name) + "'");
}

TopologyKind KindOf(const Geometry& geometry) {
  switch (geometry.index()) {
    case 0: return TopologyKind::kPoint;
    case 1: return TopologyKind::kPolyline;
    default: return TopologyKind::kPolygon;
  }
}

Polyline MakePolyline(std::vector<Point> points) {
  if (points.size() < 2) {
    throw Error(ErrorCode::kInvalidGeometry, "polyline needs at least 2 points");
  }
  double length = 0.0;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    length += Distance(points[i], points[i + 1]);
  }
  if (!(length > 0.0) || !std::isfinite(length)) {
    throw Error(ErrorCode::kInvalidGeometry, "polyline has zero or non-finite length");
  }
  return Polyline{std::move(points)};
}

Polygon MakePolygon(std::vector<Point> ring, double eps) {
  if (ring.empty()) throw Error(ErrorCode::kInvalidGeometry, "empty polygon ring");
  if (!Near(ring.front(), ring.back(), eps)) {
    ring.push_back(ring.front());
  } else if (ring.size() > 1) {
    ring.back() = ring.front();
  }
  // Distinct vertices, ignoring the closing repeat.
  std::size_t distinct = 0;
  for (std::size_t i = 0; i + 1 < ring.size(); ++i) {
    bool seen = false;
    for (std::size_t j = 0; j < i && !seen; ++j) seen = Near(ring[i], ring[j], eps);
    if (!seen) ++distinct;
  }
  if (distinct < 3) {
    throw Error(ErrorCode::kInvalidGeometry, "polygon ring needs at least 3 distinct points");
  }
  for (const Point& p : ring) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      throw Error(ErrorCode::kInvalidGeometry, "polygon has non-finite coordinates");
    }
  }
  return Polygon{std::move(ring)};
}

double Distance(const Point& a, const Point& b) { return std::hypot(a.x - b.x, a.y - b.y); }

double DistanceToSegment(const Point& p, const Point& a, const Point& b) {
  const double dx = b.x - a.x;
  const double dy = b.y - a.y;
  const double len2 = dx * dx + dy * dy;
  if (len2 == 0.0) return Distance(p, a);
  const double t = std::clamp(((p.x - a.x) * dx + (p.y - a.y) * dy) / len2, 0.0, 1.0);
  return Distance(p, Point{a.x + t * dx, a.y + t * dy});
}

bool TouchesLineLine(const Polyline& a, const Polyline& b, double eps) {
  if (SameSequence(a.points, b.points, eps)) return false;
  const Point ends_a[] = {a.points.front(), a.points.back()};
  const Point ends_b[] = {b.points.front(), b.points.back()};
  for (const Point& pa : ends_a) {
    for (const Point& pb : ends_b) {
      if (Near(pa, pb, eps)) return true;
    }
  }
  return false;
}

bool TouchesPolygonLine(const Polygon& p, const Polyline& l, double eps) {
  for (const Point& end : {l.points.front(), l.points.back()}) {
    for (std::size_t i = 0; i + 1 < p.ring.size(); ++i) {
      if (DistanceToSegment(end, p.ring[i], p.ring[i + 1]) <= eps) return true;
    }
  }
  return false;
}

bool PointInPolygon(const Point& p, const Polygon& polygon, double eps) {
  const auto& r = polygon.ring;
  for (std::size_t i = 0; i + 1 < r.size(); ++i) {
    if (DistanceToSegment(p, r[i], r[i + 1]) <= eps) return true;
  }
  bool inside = false;
  for (std::size_t i = 0, j = r.size() - 2; i + 1 < r.size(); j = i++) {
    if ((r[i].y > p.y) != (r[j].y > p.y) &&
        p.x < (r[j].x - r[i].x) * (p.y - r[i].y) / (r[j].y - r[i].y) + r[i].x) {
      inside = !inside;
    }
  }
  return inside;
}

double Distance(const Geometry& a, const Geometry& b) {
  const auto va = Vertices(a);
  const auto vb = Vertices(b);
  if (const auto* pa = std::get_if<Polygon>(&a)) {
    if (PointInPolygon(vb.front(), *pa)) return 0.0;
  }
  if (const auto* pb = std::get_if<Polygon>(&b)) {
    if (PointInPolygon(va.front(), *pb)) return 0.0;
  }
  return ChainDistance(va, vb);
}

}  // namespace spatnet
