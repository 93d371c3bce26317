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

#include "spatnet/structure_rules.h"

#include <algorithm>
#include <charconv>
#include <string>

#include "spatnet/error.h"

namespace spatnet {

namespace {

std::string Str(ObjectId id) { return std::to_string(id.value); }
std::string Str(LinkId id) { return std::to_string(id.value); }

int CategoryOf(const SpatialObject& obj, const HierarchyConfig& cfg) {
  if (!obj.category) {
    throw Error(ErrorCode::kMissingCategory, "object " + Str(obj.id) + " has no category p");
  }
  if (*obj.category < 1 || *obj.category > cfg.k) {
    throw Error(ErrorCode::kInvalidConfig, "object " + Str(obj.id) + ": category " +
                                               std::to_string(*obj.category) +
                                               " outside [1, " + std::to_string(cfg.k) + "]");
  }
  return *obj.category;
}

int CategoryOf(const Link& link, int c) {
  if (!link.category) {
    throw Error(ErrorCode::kMissingLinkCategory, "link " + Str(link.id) + " has no category l");
  }
  if (*link.category < 1 || *link.category > c) {
    throw Error(ErrorCode::kInvalidConfig, "link " + Str(link.id) + ": category " +
                                               std::to_string(*link.category) +
                                               " outside [1, " + std::to_string(c) + "]");
  }
  return *link.category;
}

}  // namespace

void HierarchyConfig::Validate() const {
  if (k < 1 || a < 1 || a > k) {
    throw Error(ErrorCode::kInvalidConfig, "object rules need 1 <= a <= k, got k=" +
                                               std::to_string(k) + " a=" + std::to_string(a));
  }
  if (c) {
    if (!a_link || *c < 1 || *a_link < 1 || *a_link > *c) {
      throw Error(ErrorCode::kInvalidConfig, "link rules need 1 <= a_link <= c");
    }
  }
}

HierarchyConfig ParseHierarchyConfig(std::string_view text) {
  std::vector<int> values;
  while (!text.empty()) {
    const auto comma = text.find(',');
    const std::string_view part = text.substr(0, comma);
    int v = 0;
    auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
    if (ec != std::errc() || ptr != part.data() + part.size()) {
      throw Error(ErrorCode::kInvalidConfig,
                  "hierarchy must be integers 'k,a[,c,a_link]', got '" + std::string(part) + "'");
    }
    values.push_back(v);
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  if (values.size() != 2 && values.size() != 4) {
    throw Error(ErrorCode::kInvalidConfig, "hierarchy must be 'k,a' or 'k,a,c,a_link'");
  }
  HierarchyConfig cfg{.k = values[0], .a = values[1], .c = std::nullopt, .a_link = std::nullopt};
  if (values.size() == 4) {
    cfg.c = values[2];
    cfg.a_link = values[3];
  }
  cfg.Validate();
  return cfg;
}

std::vector<Violation> DetectInvalidObjectLinks(const Network& net, const HierarchyConfig& cfg) {
  cfg.Validate();
  std::map<ObjectId, int> p;
  for (const auto& [id, obj] : net.objects()) p[id] = CategoryOf(obj, cfg);
  std::vector<Violation> out;
  if (p.empty()) return out;
  const auto [lo, hi] = std::minmax_element(p.begin(), p.end(), [](const auto& x, const auto& y) {
    return x.second < y.second;
  });
  const int min_p = lo->second;
  const int max_p = hi->second;

  for (const auto& [id, pi] : p) {
    bool out_to_higher_or_equal = false;  // link to O_f with p_i >= p_f
    bool in_from_lower_or_equal = false;  // link from O_g with p_g >= p_i
    bool extreme_link = false;
    ObjectId extreme_target;
    for (LinkId l : net.Outgoing(id)) {
      const ObjectId to = net.link(l).to;
      const int pf = p.at(to);
      out_to_higher_or_equal = out_to_higher_or_equal || pi >= pf;
      if (min_p != max_p && !extreme_link &&
          ((pi == max_p && pf == min_p) || (pi == min_p && pf == max_p))) {
        extreme_link = true;
        extreme_target = to;
      }
    }
    for (LinkId l : net.Incoming(id)) {
      in_from_lower_or_equal = in_from_lower_or_equal || p.at(net.link(l).from) >= pi;
    }

    if (pi < cfg.a && !(out_to_higher_or_equal && in_from_lower_or_equal)) {
      out.push_back({Rule::kObjRule1, id,
                     "object " + Str(id) + " (p=" + std::to_string(pi) +
                         ") is not part of a closed network: " +
                         (out_to_higher_or_equal ? "" : "no outgoing link to p<=" +
                                                            std::to_string(pi)) +
                         (!out_to_higher_or_equal && !in_from_lower_or_equal ? ", " : "") +
                         (in_from_lower_or_equal ? "" : "no incoming link from p>=" +
                                                            std::to_string(pi))});
    }
    if (extreme_link) {
      out.push_back({Rule::kObjRule2, id,
                     "object " + Str(id) + " (p=" + std::to_string(pi) + ") links to object " +
                         Str(extreme_target) + " (p=" + std::to_string(p.at(extreme_target)) +
                         "); the highest and lowest categories must not be linked"});
    }
    if (pi >= cfg.a && !(out_to_higher_or_equal || in_from_lower_or_equal)) {
      out.push_back({Rule::kObjRule3, id,
                     "object " + Str(id) + " (p=" + std::to_string(pi) +
                         ") has no outgoing link to p<=" + std::to_string(pi) +
                         " and no incoming link from p>=" + std::to_string(pi)});
    }
  }
  NormalizeViolations(out);
  return out;
}

std::vector<Violation> DetectInvalidLinkCategories(const Network& net,
                                                   const HierarchyConfig& cfg) {
  cfg.Validate();
  if (!cfg.c) throw Error(ErrorCode::kInvalidConfig, "link rules need c and a_link");
  const int c = *cfg.c;
  const int a_link = *cfg.a_link;
  std::map<LinkId, int> cat;
  for (const auto& [id, link] : net.links()) cat[id] = CategoryOf(link, c);
  std::vector<Violation> out;
  if (cat.empty()) return out;
  const auto [lo, hi] = std::minmax_element(cat.begin(), cat.end(), [](const auto& x, const auto& y) {
    return x.second < y.second;
  });
  const int min_l = lo->second;
  const int max_l = hi->second;

  for (const auto& [id, link] : net.links()) {
    const int lq = cat.at(id);
    bool feeder = false;    // other link into O_i with l <= l_q
    bool continuation = false;  // other link out of O_f with l <= l_q
    for (LinkId other : net.Incoming(link.from)) {
      feeder = feeder || (other != id && cat.at(other) <= lq);
    }
    for (LinkId other : net.Outgoing(link.to)) {
      continuation = continuation || (other != id && cat.at(other) <= lq);
    }
    if (lq < a_link && !(feeder && continuation)) {
      out.push_back({Rule::kLinkRule1, link.from,
                     "link " + Str(id) + " (l=" + std::to_string(lq) + ", " + Str(link.from) +
                         " -> " + Str(link.to) + ") lacks " +
                         (feeder ? std::string() : "an incoming link to " + Str(link.from)) +
                         (!feeder && !continuation ? " and " : "") +
                         (continuation ? std::string()
                                       : "an outgoing link from " + Str(link.to)) +
                         " of category <= " + std::to_string(lq)});
    }
    if (lq >= a_link && !(feeder || continuation)) {
      out.push_back({Rule::kLinkRule3, link.from,
                     "link " + Str(id) + " (l=" + std::to_string(lq) + ", " + Str(link.from) +
                         " -> " + Str(link.to) + ") has no incoming link to " +
                         Str(link.from) + " and no outgoing link from " + Str(link.to) +
                         " of category <= " + std::to_string(lq)});
    }
  }

  if (min_l != max_l) {
    for (const auto& [id, obj] : net.objects()) {
      std::optional<LinkId> with_min;
      std::optional<LinkId> with_max;
      auto scan = [&](std::span<const LinkId> ids) {
        for (LinkId l : ids) {
          if (cat.at(l) == min_l && !with_min) with_min = l;
          if (cat.at(l) == max_l && !with_max) with_max = l;
        }
      };
      scan(net.Incoming(id));
      scan(net.Outgoing(id));
      if (with_min && with_max) {
        out.push_back({Rule::kLinkRule2, id,
                       "object " + Str(id) + " is associated with link " + Str(*with_min) +
                           " (l=" + std::to_string(min_l) + ") and link " + Str(*with_max) +
                           " (l=" + std::to_string(max_l) + ")"});
      }
    }
  }
  NormalizeViolations(out);
  return out;
}

}  // namespace spatnet
