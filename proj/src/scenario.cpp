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

#include "spatnet/scenario.h"

#include <cmath>

#include "spatnet/error.h"

namespace spatnet {

using nlohmann::json;

namespace {

[[noreturn]] void Fail(const std::string& context, const std::string& what) {
  throw Error(ErrorCode::kScenarioParseError, context + ": " + what);
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

const json* Field(const json& obj, const char* key) {
  auto it = obj.find(key);
  return it == obj.end() || it->is_null() ? nullptr : &*it;
}

double Real(const json& obj, const char* key, const std::string& context) {
  const json* v = Field(obj, key);
  if (v == nullptr) Fail(context, std::string("missing field '") + key + "'");
  if (!v->is_number()) Fail(context, std::string("field '") + key + "' must be a number");
  return v->get<double>();
}

std::uint64_t Count(const json& v, const std::string& context) {
  if (!v.is_number_integer() || v.get<std::int64_t>() < 0) {
    Fail(context, "must be a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

std::string Text(const json& obj, const char* key, const std::string& context) {
  const json* v = Field(obj, key);
  if (v == nullptr) Fail(context, std::string("missing field '") + key + "'");
  if (!v->is_string()) Fail(context, std::string("field '") + key + "' must be a string");
  return v->get<std::string>();
}

ObjectId ParseObjectId(const std::string& key, const std::string& context) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(key, &used);
  } catch (const std::exception&) {
    Fail(context, "'" + key + "' is not an object id");
  }
  if (used != key.size()) Fail(context, "'" + key + "' is not an object id");
  return ObjectId(v);
}

// Converts `value` to the kind of `current` so effects keep the schema.
ParamValue Coerce(const ParamValue& current, const json& value, const std::string& name,
                  const std::string& context) {
  if (std::holds_alternative<std::string>(current)) {
    if (!value.is_string()) Fail(context, "'" + name + "' must be set to a string");
    return value.get<std::string>();
  }
  if (!value.is_number()) Fail(context, "'" + name + "' must be set to a number");
  if (std::holds_alternative<std::int64_t>(current)) {
    const double d = value.get<double>();
    if (d != std::floor(d)) Fail(context, "'" + name + "' is an integer parameter");
    return static_cast<std::int64_t>(d);
  }
  return value.get<double>();
}

InteractionSet InteractionFromJson(const json& spec, Scenario& sc, const WarningSink& warn) {
  const std::string ctx = "interaction";
  std::string name;
  const json* props = nullptr;
  if (spec.is_string()) {
    name = spec.get<std::string>();
  } else if (spec.is_object()) {
    name = Text(spec, "name", ctx);
    props = &spec;
  } else {
    Fail(ctx, "must be a name or an object");
  }
  sc.interaction_name = name;

  if (name == "identity") {
    if (props) WarnUnknown(*props, {"name"}, ctx, warn);
    return InteractionSet::Identity();
  }
  if (name == "conservative_transfer") {
    if (!props) Fail(ctx, "conservative_transfer needs 'param' and 'rate'");
    WarnUnknown(*props, {"name", "param", "rate", "probabilistic"}, ctx, warn);
    const double rate = Real(*props, "rate", ctx);
    if (!(rate >= 0.0) || !std::isfinite(rate)) Fail(ctx, "rate must be non-negative");
    bool probabilistic = false;
    if (const json* p = Field(*props, "probabilistic")) {
      if (!p->is_boolean()) Fail(ctx, "'probabilistic' must be true or false");
      probabilistic = p->get<bool>();
    }
    return InteractionSet::ConservativeTransfer(Text(*props, "param", ctx), rate, probabilistic);
  }
  if (name == "traffic") {
    sc.is_traffic = true;
    if (props) {
      WarnUnknown(*props,
                  {"name", "mode", "bpr_alpha", "bpr_beta", "headway_s",
                   "literal_receiver_capacity"},
                  ctx, warn);
      if (Field(*props, "mode")) {
        const std::string mode = Text(*props, "mode", ctx);
        if (mode == "deterministic") {
          sc.traffic.mode = traffic::TrafficMode::kDeterministic;
        } else if (mode == "probabilistic") {
          sc.traffic.mode = traffic::TrafficMode::kProbabilistic;
        } else {
          Fail(ctx, "unknown traffic mode '" + mode + "'");
        }
      }
      if (Field(*props, "bpr_alpha")) sc.traffic.bpr.alpha = Real(*props, "bpr_alpha", ctx);
      if (Field(*props, "bpr_beta")) sc.traffic.bpr.beta = Real(*props, "bpr_beta", ctx);
      if (Field(*props, "headway_s")) sc.traffic.headway = Real(*props, "headway_s", ctx);
      if (const json* lit = Field(*props, "literal_receiver_capacity")) {
        if (!lit->is_boolean()) Fail(ctx, "'literal_receiver_capacity' must be true or false");
        sc.traffic.literal_receiver_capacity = lit->get<bool>();
      }
    }
    InteractionSet s = InteractionSet::Identity();
    s.name = "traffic";
    return s;
  }
  Fail(ctx, "unknown interaction '" + name + "'");
}

NetworkCoupling CouplingFromJson(const json& spec, const std::filesystem::path& base_dir,
                                 const std::string& ctx, const WarningSink& warn) {
  if (!spec.is_object()) Fail(ctx, "must be an object");
  WarnUnknown(spec, {"network", "relation", "objects", "links", "range", "effect",
                     "source_effect"},
              ctx, warn);
  NetworkCoupling c;
  const json* net = Field(spec, "network");
  if (net == nullptr) Fail(ctx, "missing field 'network'");
  try {
    if (net->is_string()) {
      std::filesystem::path p = net->get<std::string>();
      if (p.is_relative()) p = base_dir / p;
      c.related = LoadNetwork(p, warn);
    } else {
      c.related = NetworkFromJson(*net, warn);
    }
  } catch (const Error& e) {
    Fail(ctx, std::string("related network: ") + e.what());
  }

  const std::string relation = Text(spec, "relation", ctx);
  if (relation == "static") {
    StaticRelation rel;
    auto pairs = [&](const char* key, auto make) {
      const json* list = Field(spec, key);
      if (list == nullptr) return;
      if (!list->is_array()) Fail(ctx, std::string("'") + key + "' must be a list of pairs");
      for (const auto& pair : *list) {
        if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number_integer() ||
            !pair[1].is_number_integer()) {
          Fail(ctx, std::string("'") + key + "' entries must be [source, target] ids");
        }
        make(pair[0].get<std::int64_t>(), pair[1].get<std::int64_t>());
      }
    };
    pairs("objects", [&](std::int64_t a, std::int64_t b) {
      rel.objects.push_back({ObjectId(a), ObjectId(b)});
    });
    pairs("links", [&](std::int64_t a, std::int64_t b) {
      rel.links.push_back({LinkId(a), LinkId(b)});
    });
    c.relation = rel;
  } else if (relation == "dynamic") {
    const double range = Real(spec, "range", ctx);
    if (!(range >= 0.0)) Fail(ctx, "range must be non-negative");
    c.relation = DynamicRelation{range};
  } else {
    Fail(ctx, "relation must be 'static' or 'dynamic'");
  }
  if (const json* f = Field(spec, "effect")) c.f = CouplingEffectFromJson(*f, ctx + ".effect");
  if (const json* g = Field(spec, "source_effect")) {
    // The source effect sees (target, source) so its "when" tests the target.
    auto fn = CouplingEffectFromJson(*g, ctx + ".source_effect");
    c.g = [fn](const ParameterVector& source, const ParameterVector& target) {
      return fn(target, source);
    };
  }
  return c;
}

}  // namespace

NetworkCoupling::Fn CouplingEffectFromJson(const json& spec, const std::string& context) {
  if (!spec.is_object()) Fail(context, "must be an object");
  const std::string kind = Text(spec, "kind", context);
  if (kind == "assign") {
    std::optional<std::string> when_param;
    double when_min = 0.0;
    if (const json* when = Field(spec, "when")) {
      if (!when->is_object()) Fail(context, "'when' must be an object");
      when_param = Text(*when, "param", context);
      when_min = Real(*when, "min", context);
    }
    const json* set = Field(spec, "set");
    if (set == nullptr || !set->is_object()) Fail(context, "'set' must be an object");
    json values = *set;
    return [=](const ParameterVector& source, const ParameterVector& target) {
      if (when_param) {
        const ParamValue* v = source.Find(*when_param);
        if (v == nullptr || !IsNumeric(*v) || AsReal(*v) < when_min) return target;
      }
      ParameterVector out = target;
      for (const auto& [name, value] : values.items()) {
        const ParamValue* current = target.Find(name);
        if (current == nullptr) {
          throw Error(ErrorCode::kSchemaMismatch,
                      context + ": target lacks parameter '" + name + "'");
        }
        out.Set(name, Coerce(*current, value, name, context));
      }
      return out;
    };
  }
  if (kind == "add") {
    const std::string param = Text(spec, "param", context);
    const double amount = Real(spec, "amount", context);
    return [=](const ParameterVector&, const ParameterVector& target) {
      const ParamValue* current = target.Find(param);
      if (current == nullptr || !IsNumeric(*current)) {
        throw Error(ErrorCode::kSchemaMismatch,
                    context + ": target lacks numeric parameter '" + param + "'");
      }
      ParameterVector out = target;
      if (const auto* i = std::get_if<std::int64_t>(current)) {
        out.Set(param, *i + static_cast<std::int64_t>(std::floor(amount)));
      } else {
        out.Set(param, AsReal(*current) + amount);
      }
      return out;
    };
  }
  Fail(context, "unknown effect kind '" + kind + "'");
}

Scenario ScenarioFromJson(const json& doc, const std::filesystem::path& base_dir,
                          const WarningSink& warn) {
  if (!doc.is_object()) Fail("scenario", "top level must be an object");
  WarnUnknown(doc,
              {"interaction", "couplings", "initial", "steps", "seed", "algorithm",
               "frontier_set", "frontier_mode", "max_interactions_per_object"},
              "scenario", warn);
  Scenario sc;
  if (const json* i = Field(doc, "interaction")) sc.interaction = InteractionFromJson(*i, sc, warn);
  if (const json* cap = Field(doc, "max_interactions_per_object")) {
    if (!cap->is_number_integer() || cap->get<std::int64_t>() < 0) {
      Fail("max_interactions_per_object", "must be a non-negative integer");
    }
    sc.interaction.max_interactions_per_object = cap->get<int>();
  }
  if (const json* list = Field(doc, "couplings")) {
    if (!list->is_array()) Fail("couplings", "must be a list");
    for (std::size_t i = 0; i < list->size(); ++i) {
      sc.couplings.push_back(
          CouplingFromJson((*list)[i], base_dir, "couplings[" + std::to_string(i) + "]", warn));
    }
  }
  if (const json* init = Field(doc, "initial")) {
    if (!init->is_object()) Fail("initial", "must map object ids to parameters");
    for (const auto& [key, params] : init->items()) {
      try {
        sc.initial.emplace(ParseObjectId(key, "initial"), ParamsFromJson(params, "initial"));
      } catch (const Error& e) {
        if (e.code() == ErrorCode::kScenarioParseError) throw;
        Fail("initial", e.what());
      }
    }
  }
  if (const json* steps = Field(doc, "steps")) sc.steps = Count(*steps, "steps");
  if (const json* seed = Field(doc, "seed")) sc.seed = Count(*seed, "seed");
  if (Field(doc, "algorithm")) {
    sc.algorithm = Text(doc, "algorithm", "scenario");
    if (sc.algorithm != "full" && sc.algorithm != "frontier") {
      Fail("algorithm", "must be 'full' or 'frontier'");
    }
  }
  if (const json* set = Field(doc, "frontier_set")) {
    if (!set->is_array()) Fail("frontier_set", "must be a list of object ids");
    for (const auto& id : *set) {
      if (!id.is_number_integer()) Fail("frontier_set", "must be a list of object ids");
      sc.frontier_set.insert(ObjectId(id.get<std::int64_t>()));
    }
  }
  if (Field(doc, "frontier_mode")) {
    const std::string mode = Text(doc, "frontier_mode", "scenario");
    if (mode == "wavefront") {
      sc.frontier_mode = FrontierMode::kWavefront;
    } else if (mode == "cumulative") {
      sc.frontier_mode = FrontierMode::kCumulative;
    } else {
      Fail("frontier_mode", "must be 'wavefront' or 'cumulative'");
    }
  }
  return sc;
}

Scenario ParseScenario(std::string_view text, const std::filesystem::path& base_dir,
                       const WarningSink& warn) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    Fail("scenario", e.what());
  }
  return ScenarioFromJson(doc, base_dir, warn);
}

Scenario LoadScenario(const std::filesystem::path& path, const WarningSink& warn) {
  std::string text;
  try {
    text = ReadTextFile(path);
  } catch (const Error& e) {
    Fail("scenario", e.what());
  }
  return ParseScenario(text, path.parent_path(), warn);
}

Scenario TrafficScenario() {
  Scenario sc;
  sc.interaction_name = "traffic";
  sc.is_traffic = true;
  sc.interaction.name = "traffic";
  return sc;
}

void ApplyInitial(const Scenario& scenario, Network& net) {
  for (const auto& [id, params] : scenario.initial) {
    ParameterVector& target = net.mutable_object(id).params;
    for (const auto& [name, value] : params) target.Set(name, value);
  }
}

}  // namespace spatnet
