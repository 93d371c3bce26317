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

#include "spatnet/network_io.h"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include "spatnet/error.h"

namespace spatnet {

using nlohmann::json;

namespace {

[[noreturn]] void Fail(const std::string& context, const std::string& what) {
  throw Error(ErrorCode::kParseError, context + ": " + what);
}

void WarnUnknown(const json& obj, std::initializer_list<std::string_view> known,
                 const std::string& context, const WarningSink& warn) {
  if (!warn) return;
  for (const auto& [key, value] : obj.items()) {
    bool found = false;
    for (auto k : known) found = found || key == k;
    if (!found) warn(context + ": ignoring unknown field '" + key + "'");
  }
}

std::int64_t RequireInt(const json& obj, const char* key, const std::string& context) {
  auto it = obj.find(key);
  if (it == obj.end()) Fail(context, std::string("missing field '") + key + "'");
  if (!it->is_number_integer()) Fail(context, std::string("field '") + key + "' must be an integer");
  return it->get<std::int64_t>();
}

std::optional<int> OptionalInt(const json& obj, const char* key, const std::string& context) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (!it->is_number_integer()) Fail(context, std::string("field '") + key + "' must be an integer");
  return it->get<int>();
}

double OptionalReal(const json& obj, const char* key, double fallback,
                    const std::string& context) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return fallback;
  if (!it->is_number()) Fail(context, std::string("field '") + key + "' must be a number");
  return it->get<double>();
}

Point PointFromJson(const json& coords, const std::string& context) {
  if (!coords.is_array() || coords.size() != 2 || !coords[0].is_number() ||
      !coords[1].is_number()) {
    Fail(context, "a coordinate must be [x, y]");
  }
  return Point{coords[0].get<double>(), coords[1].get<double>()};
}

std::vector<Point> PointsFromJson(const json& coords, const std::string& context) {
  if (!coords.is_array()) Fail(context, "coords must be an array of [x, y]");
  std::vector<Point> pts;
  for (const auto& c : coords) pts.push_back(PointFromJson(c, context));
  return pts;
}

json PointToJson(const Point& p) { return json::array({p.x, p.y}); }

}  // namespace

std::string ReadTextFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kParseError, "cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json ParamsToJson(const ParameterVector& params) {
  json out = json::object();
  for (const auto& [name, value] : params) {
    std::visit([&](const auto& v) { out[name] = v; }, value);
  }
  return out;
}

ParameterVector ParamsFromJson(const json& obj, const std::string& context) {
  ParameterVector params;
  if (obj.is_null()) return params;
  if (!obj.is_object()) Fail(context, "params must be an object");
  for (const auto& [name, value] : obj.items()) {
    if (value.is_number_integer()) {
      params.Set(name, value.get<std::int64_t>());
    } else if (value.is_number_float()) {
      const double d = value.get<double>();
      if (!std::isfinite(d)) Fail(context, "parameter '" + name + "' is not finite");
      params.Set(name, d);
    } else if (value.is_string()) {
      params.Set(name, value.get<std::string>());
    } else {
      Fail(context, "parameter '" + name + "' must be an integer, a real or a string");
    }
  }
  return params;
}

json GeometryToJson(const Geometry& geometry) {
  return std::visit(
      [](const auto& g) -> json {
        using T = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<T, Point>) {
          return {{"type", "point"}, {"coords", PointToJson(g)}};
        } else {
          const auto& pts = [&]() -> const std::vector<Point>& {
            if constexpr (std::is_same_v<T, Polyline>) return g.points;
            else return g.ring;
          }();
          json coords = json::array();
          for (const auto& p : pts) coords.push_back(PointToJson(p));
          return {{"type", std::is_same_v<T, Polyline> ? "polyline" : "polygon"},
                  {"coords", coords}};
        }
      },
      geometry);
}

Geometry GeometryFromJson(const json& obj, const std::string& context) {
  if (!obj.is_object()) Fail(context, "geometry must be an object");
  auto type = obj.find("type");
  auto coords = obj.find("coords");
  if (type == obj.end() || !type->is_string()) Fail(context, "geometry needs a string 'type'");
  if (coords == obj.end()) Fail(context, "geometry needs 'coords'");
  const std::string kind = type->get<std::string>();
  try {
    if (kind == "point") return PointFromJson(*coords, context);
    if (kind == "polyline") return MakePolyline(PointsFromJson(*coords, context));
    if (kind == "polygon") return MakePolygon(PointsFromJson(*coords, context));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kParseError) throw;
    Fail(context, e.what());
  }
  Fail(context, "unknown geometry type '" + kind + "'");
}

Network NetworkFromJson(const json& doc, const WarningSink& warn) {
  if (!doc.is_object()) Fail("network", "top level must be an object");
  WarnUnknown(doc, {"topology", "k", "c", "objects", "links"}, "network", warn);

  TopologyKind topology = TopologyKind::kPoint;
  if (auto it = doc.find("topology"); it != doc.end()) {
    if (!it->is_string()) Fail("network", "'topology' must be a string");
    topology = ParseTopologyKind(it->get<std::string>());
  } else {
    Fail("network", "missing field 'topology'");
  }
  Network net(topology);
  net.set_category_count(OptionalInt(doc, "k", "network"));
  net.set_link_category_count(OptionalInt(doc, "c", "network"));

  const json empty = json::array();
  const json& objects = doc.contains("objects") ? doc["objects"] : empty;
  const json& links = doc.contains("links") ? doc["links"] : empty;
  if (!objects.is_array()) Fail("network", "'objects' must be an array");
  if (!links.is_array()) Fail("network", "'links' must be an array");

  for (std::size_t i = 0; i < objects.size(); ++i) {
    const json& o = objects[i];
    std::string ctx = "objects[" + std::to_string(i) + "]";
    if (!o.is_object()) Fail(ctx, "must be an object");
    SpatialObject obj;
    obj.id = ObjectId{RequireInt(o, "id", ctx)};
    ctx = "object " + std::to_string(obj.id.value);
    WarnUnknown(o, {"id", "p", "geometry", "params"}, ctx, warn);
    obj.category = OptionalInt(o, "p", ctx);
    if (auto g = o.find("geometry"); g != o.end() && !g->is_null()) {
      obj.geometry = GeometryFromJson(*g, ctx);
    }
    if (auto p = o.find("params"); p != o.end()) obj.params = ParamsFromJson(*p, ctx);
    try {
      net.AddObject(std::move(obj));
    } catch (const Error& e) {
      Fail(ctx, std::string(e.what()) + " (" + std::string(ErrorCodeName(e.code())) + ")");
    }
  }

  for (std::size_t i = 0; i < links.size(); ++i) {
    const json& l = links[i];
    std::string ctx = "links[" + std::to_string(i) + "]";
    if (!l.is_object()) Fail(ctx, "must be an object");
    Link link;
    link.id = LinkId{RequireInt(l, "link_id", ctx)};
    ctx = "link " + std::to_string(link.id.value);
    WarnUnknown(l, {"link_id", "from", "to", "l", "q", "r", "params"}, ctx, warn);
    link.from = ObjectId{RequireInt(l, "from", ctx)};
    link.to = ObjectId{RequireInt(l, "to", ctx)};
    link.category = OptionalInt(l, "l", ctx);
    link.q = OptionalReal(l, "q", 1.0, ctx);
    link.r = OptionalReal(l, "r", 1.0, ctx);
    if (auto p = l.find("params"); p != l.end()) link.params = ParamsFromJson(*p, ctx);
    try {
      net.AddLink(std::move(link));
    } catch (const Error& e) {
      Fail(ctx, std::string(e.what()) + " (" + std::string(ErrorCodeName(e.code())) + ")");
    }
  }
  return net;
}

Network ParseNetwork(std::string_view text, const WarningSink& warn) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kParseError, std::string("invalid JSON: ") + e.what());
  }
  return NetworkFromJson(doc, warn);
}

Network LoadNetwork(const std::filesystem::path& path, const WarningSink& warn) {
  return ParseNetwork(ReadTextFile(path), warn);
}

json NetworkToJson(const Network& net) {
  json doc;
  doc["topology"] = std::string(TopologyKindName(net.topology()));
  if (net.category_count()) doc["k"] = *net.category_count();
  if (net.link_category_count()) doc["c"] = *net.link_category_count();
  json objects = json::array();
  for (const auto& [id, obj] : net.objects()) {
    json o;
    o["id"] = id.value;
    if (obj.category) o["p"] = *obj.category;
    if (obj.geometry) o["geometry"] = GeometryToJson(*obj.geometry);
    o["params"] = ParamsToJson(obj.params);
    objects.push_back(std::move(o));
  }
  json links = json::array();
  for (const auto& [id, link] : net.links()) {
    json l;
    l["link_id"] = id.value;
    l["from"] = link.from.value;
    l["to"] = link.to.value;
    if (link.category) l["l"] = *link.category;
    l["q"] = link.q;
    l["r"] = link.r;
    l["params"] = ParamsToJson(link.params);
    links.push_back(std::move(l));
  }
  doc["objects"] = std::move(objects);
  doc["links"] = std::move(links);
  return doc;
}

void SaveNetwork(const Network& net, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kParseError, "cannot write '" + path.string() + "'");
  out << NetworkToJson(net).dump(2) << '\n';
}

}  // namespace spatnet
