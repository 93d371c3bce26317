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

#include "spatnet/propagation.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "spatnet/error.h"

namespace spatnet {

namespace {

void CheckUnitInterval(double v, const char* what) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw Error(ErrorCode::kFactorOutOfRange,
                std::string(what) + " = " + std::to_string(v) + " outside [0, 1]");
  }
}

void RequireSchema(const ParameterVector& in, const ParameterVector& out, const char* which) {
  if (!in.SameSchema(out)) {
    throw Error(ErrorCode::kSchemaMismatch,
                std::string("interaction output ") + which +
                    " does not keep the parameter names and kinds of its input");
  }
}

}  // namespace

ParameterVector LinkVector(const Link& link) {
  ParameterVector v = link.params;
  v.Set(kFactorQ, link.q);
  v.Set(kFactorR, link.r);
  return v;
}

void StoreLinkVector(Network& net, LinkId id, const ParameterVector& v) {
  ParameterVector params = v;
  const double q = v.Contains(kFactorQ) ? v.GetReal(kFactorQ) : net.link(id).q;
  const double r = v.Contains(kFactorR) ? v.GetReal(kFactorR) : net.link(id).r;
  params.Erase(kFactorQ);
  params.Erase(kFactorR);
  net.SetFactors(id, q, r);
  net.mutable_link(id).params = std::move(params);
}

InteractionSet InteractionSet::Identity() {
  InteractionSet s;
  s.name = "identity";
  return s;
}

InteractionSet InteractionSet::ConservativeTransfer(std::string param, double rate,
                                                    bool probabilistic) {
  if (!(rate >= 0.0) || !std::isfinite(rate)) {
    throw Error(ErrorCode::kInvalidArgument, "transfer rate must be finite and >= 0");
  }
  InteractionSet s;
  s.name = "conservative_transfer";
  s.required = {param};

  // Amount leaving A over this link, in the parameter's own kind.
  auto amount = [param, rate](const ParameterVector& a, const ParameterVector& e) -> ParamValue {
    const double q = e.Contains(kFactorQ) ? e.GetReal(kFactorQ) : 1.0;
    const ParamValue& held = a.Get(param);
    if (const auto* i = std::get_if<std::int64_t>(&held)) {
      const double base = std::min(rate, static_cast<double>(std::max<std::int64_t>(*i, 0)));
      return static_cast<std::int64_t>(std::floor(base * q));
    }
    const double base = std::min(rate, std::max(AsReal(held), 0.0));
    return base * q;
  };
  auto shifted = [param](const ParameterVector& v, const ParamValue& delta, int sign) {
    ParameterVector out = v;
    const ParamValue& cur = v.Get(param);
    if (const auto* i = std::get_if<std::int64_t>(&cur)) {
      out.Set(param, *i + sign * std::get<std::int64_t>(delta));
    } else if (const auto* d = std::get_if<double>(&cur)) {
      out.Set(param, *d + sign * std::get<double>(delta));
    } else {
      throw Error(ErrorCode::kSchemaMismatch, "transfer parameter '" + param + "' is text");
    }
    return out;
  };

  if (probabilistic) {
    s.stochastic = [param, rate, shifted](const ParameterVector& a, const ParameterVector& b,
                                          const ParameterVector& e, Rng& rng) {
      const std::int64_t held = a.GetInt(param);
      b.GetInt(param);
      const double q = e.Contains(kFactorQ) ? e.GetReal(kFactorQ) : 1.0;
      const auto candidates = static_cast<std::int64_t>(
          std::floor(std::min(rate, static_cast<double>(std::max<std::int64_t>(held, 0)))));
      const std::int64_t moved =
          ProbabilisticPropagation(held, std::numeric_limits<std::int64_t>::max(), candidates,
                                   0, q, rng);
      return InteractionResult{shifted(a, ParamValue{moved}, -1),
                               shifted(b, ParamValue{moved}, +1), e};
    };
  } else {
    s.f = [amount, shifted](const ParameterVector& a, const ParameterVector& b,
                            const ParameterVector& e) { return shifted(b, amount(a, e), +1); };
    s.e = [amount, shifted](const ParameterVector& a, const ParameterVector&,
                            const ParameterVector& e) { return shifted(a, amount(a, e), -1); };
  }
  return s;
}

InteractionResult ApplyInteraction(const InteractionSet& iset, const ParameterVector& a,
                                   const ParameterVector& b, const ParameterVector& e, Rng* rng) {
  for (const auto& name : iset.required) {
    if (!a.Contains(name) || !b.Contains(name)) {
      throw Error(ErrorCode::kSchemaMismatch, "interaction '" + iset.name +
                                                  "' needs parameter '" + name +
                                                  "' on both objects");
    }
  }
  InteractionResult out;
  if (iset.stochastic) {
    if (rng == nullptr) {
      throw Error(ErrorCode::kInvalidArgument,
                  "interaction '" + iset.name + "' needs a random generator");
    }
    out = iset.stochastic(a, b, e, *rng);
  } else {
    out.b = iset.f ? iset.f(a, b, e) : b;
    out.a = iset.e ? iset.e(a, b, e) : a;
    out.e = iset.l ? iset.l(a, b) : e;
  }
  RequireSchema(a, out.a, "V_A'");
  RequireSchema(b, out.b, "V_B'");
  RequireSchema(e, out.e, "V_E'");
  return out;
}

std::vector<double> SplitOutflow(double p_a, std::span<const double> q) {
  std::vector<double> out;
  out.reserve(q.size());
  for (double qi : q) {
    CheckUnitInterval(qi, "splitting factor");
    out.push_back(p_a * qi);
  }
  return out;
}

std::vector<double> CapInflow(double max_p_a, std::span<const double> contributions,
                              std::span<const double> r) {
  if (contributions.size() != r.size()) {
    throw Error(ErrorCode::kInvalidArgument, "one receiving factor per contribution is needed");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    CheckUnitInterval(r[i], "receiving factor");
    total += contributions[i];
  }
  std::vector<double> out(contributions.begin(), contributions.end());
  if (total <= max_p_a) return out;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::min(out[i], max_p_a * r[i]);
  return out;
}

std::int64_t ProbabilisticPropagation(std::int64_t c_a, std::int64_t c_b, std::int64_t t_a,
                                      std::int64_t t_b, double q, Rng& rng) {
  std::int64_t volume = 0;
  std::int64_t i = t_a;
  std::int64_t k = t_b;
  while (i > 0 && c_a > 0 && k < c_b) {
    const double n1 = rng.Uniform();
    if (n1 <= q) {
      ++volume;
      ++k;
    }
    --i;
  }
  return volume;
}

ReceiveResult ProbabilisticReceiving(std::int64_t c_b, std::int64_t t_a, std::int64_t t_b,
                                     std::int64_t volume, double r, Rng& rng) {
  std::int64_t d = c_b;
  while (d > 0 && volume > 0 && t_b < c_b) {
    const double n2 = rng.Uniform();
    if (n2 <= r) {
      --volume;
      --t_a;
      ++t_b;
    }
    --d;
  }
  return ReceiveResult{t_a, t_b};
}

void PendingUpdates::Record(const ParameterVector& before, const ParameterVector& after) {
  for (const auto& [name, value] : after) {
    const ParamValue* old = before.Find(name);
    if (old == nullptr || old->index() != value.index()) {
      throw Error(ErrorCode::kSchemaMismatch,
                  "parameter '" + name + "' was added or changed kind during an update");
    }
    if (*old == value) continue;
    auto [it, inserted] = deltas_.try_emplace(name);
    Delta& d = it->second;
    if (const auto* i = std::get_if<std::int64_t>(&value)) {
      const std::int64_t diff = *i - std::get<std::int64_t>(*old);
      d.sum = (inserted ? 0 : std::get<std::int64_t>(d.sum)) + diff;
    } else if (const auto* x = std::get_if<double>(&value)) {
      const double diff = *x - std::get<double>(*old);
      d.sum = (inserted ? 0.0 : std::get<double>(d.sum)) + diff;
    }
    d.last = value;
    ++d.writers;
  }
}

ParameterVector PendingUpdates::Commit(const ParameterVector& before) const {
  ParameterVector out = before;
  for (const auto& [name, d] : deltas_) {
    const ParamValue& old = before.Get(name);
    if (d.writers == 1 || std::holds_alternative<std::string>(old)) {
      out.Set(name, d.last);
    } else if (const auto* i = std::get_if<std::int64_t>(&old)) {
      out.Set(name, *i + std::get<std::int64_t>(d.sum));
    } else {
      out.Set(name, std::get<double>(old) + std::get<double>(d.sum));
    }
  }
  return out;
}

std::vector<ObjectPair> RelatedObjects(const NetworkCoupling& coupling, const Network& n,
                                       const Network& d) {
  std::vector<ObjectPair> pairs;
  if (const auto* rel = std::get_if<StaticRelation>(&coupling.relation)) {
    for (const ObjectPair& p : rel->objects) {
      if (!n.HasObject(p.source) || !d.HasObject(p.target)) {
        throw Error(ErrorCode::kDanglingCouplingReference,
                    "coupling relates missing objects " + std::to_string(p.source.value) +
                        " -> " + std::to_string(p.target.value));
      }
      pairs.push_back(p);
    }
    return pairs;
  }
  const double range = std::get<DynamicRelation>(coupling.relation).range;
  for (const auto& [aid, a] : n.objects()) {
    if (!a.geometry) {
      throw Error(ErrorCode::kMissingGeometry, "dynamic coupling: related object " +
                                                   std::to_string(aid.value) + " has no geometry");
    }
    for (const auto& [bid, b] : d.objects()) {
      if (!b.geometry) {
        throw Error(ErrorCode::kMissingGeometry, "dynamic coupling: object " +
                                                     std::to_string(bid.value) +
                                                     " has no geometry");
      }
      if (Distance(*a.geometry, *b.geometry) <= range) pairs.push_back({aid, bid});
    }
  }
  return pairs;
}

void ApplyCoupling(const NetworkCoupling& coupling, Network& n, Network& d) {
  const std::vector<ObjectPair> objects = RelatedObjects(coupling, n, d);
  std::vector<LinkPair> links;
  if (const auto* rel = std::get_if<StaticRelation>(&coupling.relation)) {
    for (const LinkPair& p : rel->links) {
      if (!n.HasLink(p.source) || !d.HasLink(p.target)) {
        throw Error(ErrorCode::kDanglingCouplingReference,
                    "coupling relates missing links " + std::to_string(p.source.value) +
                        " -> " + std::to_string(p.target.value));
      }
      links.push_back(p);
    }
  }

  std::map<ObjectId, PendingUpdates> n_obj, d_obj;
  for (const ObjectPair& p : objects) {
    const ParameterVector& va = n.object(p.source).params;
    const ParameterVector& vb = d.object(p.target).params;
    if (coupling.f) {
      ParameterVector out = coupling.f(va, vb);
      RequireSchema(vb, out, "of f");
      d_obj[p.target].Record(vb, out);
    }
    if (coupling.g) {
      ParameterVector out = coupling.g(va, vb);
      RequireSchema(va, out, "of g");
      n_obj[p.source].Record(va, out);
    }
  }
  std::map<LinkId, PendingUpdates> n_link, d_link;
  std::map<LinkId, ParameterVector> n_before, d_before;
  for (const LinkPair& p : links) {
    const ParameterVector ve = n_before.try_emplace(p.source, LinkVector(n.link(p.source)))
                                   .first->second;
    const ParameterVector vl = d_before.try_emplace(p.target, LinkVector(d.link(p.target)))
                                   .first->second;
    if (coupling.k) {
      ParameterVector out = coupling.k(ve, vl);
      RequireSchema(vl, out, "of k");
      d_link[p.target].Record(vl, out);
    }
    if (coupling.m) {
      ParameterVector out = coupling.m(ve, vl);
      RequireSchema(ve, out, "of m");
      n_link[p.source].Record(ve, out);
    }
  }

  for (auto& [id, pending] : d_obj) {
    d.mutable_object(id).params = pending.Commit(d.object(id).params);
  }
  for (auto& [id, pending] : n_obj) {
    n.mutable_object(id).params = pending.Commit(n.object(id).params);
  }
  for (auto& [id, pending] : d_link) StoreLinkVector(d, id, pending.Commit(d_before.at(id)));
  for (auto& [id, pending] : n_link) StoreLinkVector(n, id, pending.Commit(n_before.at(id)));
}

}  // namespace spatnet
