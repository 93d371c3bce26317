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

#ifndef SPATNET_GEOMETRY_H_
#define SPATNET_GEOMETRY_H_

#include <string_view>
#include <variant>
#include <vector>

namespace spatnet {

inline constexpr double kDefaultEpsilon = 1e-9;

enum class TopologyKind { kPoint, kPolyline, kPolygon };

std::string_view TopologyKindName(TopologyKind kind);
// Throws kParseError for anything other than "point", "polyline", "polygon".
TopologyKind ParseTopologyKind(std::string_view name);

struct Point {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Point&, const Point&) = default;
};

// At least two vertices and nonzero total length; use MakePolyline.
struct Polyline {
  std::vector<Point> points;
  friend bool operator==(const Polyline&, const Polyline&) = default;
};

// Closed ring: front() == back(), at least three distinct vertices.
struct Polygon {
  std::vector<Point> ring;
  friend bool operator==(const Polygon&, const Polygon&) = default;
};

using Geometry = std::variant<Point, Polyline, Polygon>;

TopologyKind KindOf(const Geometry& geometry);

// Validating constructors, both throw kInvalidGeometry.
Polyline MakePolyline(std::vector<Point> points);
// Appends the first vertex when the ring is not already closed within eps.
Polygon MakePolygon(std::vector<Point> ring, double eps = kDefaultEpsilon);

double Distance(const Point& a, const Point& b);
double DistanceToSegment(const Point& p, const Point& a, const Point& b);

// Endpoint contact between two line features: some endpoint of a lies
// within eps of some endpoint of b, and the two are not the same feature
// (same vertex sequence in either direction).
bool TouchesLineLine(const Polyline& a, const Polyline& b, double eps = kDefaultEpsilon);

// At least one endpoint of the line lies on the polygon boundary within eps.
bool TouchesPolygonLine(const Polygon& p, const Polyline& l, double eps = kDefaultEpsilon);

// Even-odd point-in-polygon test for the closed ring; boundary points count
// as inside.
bool PointInPolygon(const Point& p, const Polygon& polygon, double eps = kDefaultEpsilon);

// Minimum Euclidean distance between two geometries. Polygons are treated
// as areas, so a geometry reaching into a polygon is at distance 0.
double Distance(const Geometry& a, const Geometry& b);

}  // namespace spatnet

#endif  // SPATNET_GEOMETRY_H_
