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

#include "spatnet/param_vector.h"

#include <charconv>
#include <cmath>
#include <string_view>

#include "spatnet/error.h"

namespace spatnet {

bool IsNumeric(const ParamValue& value) {
  return !std::holds_alternative<std::string>(value);
}

double AsReal(const ParamValue& value) {
  if (const auto* i = std::get_if<std::int64_t>(&value)) return static_cast<double>(*i);
  if (const auto* d = std::get_if<double>(&value)) return *d;
  throw Error(ErrorCode::kSchemaMismatch, "text parameter used as a number");
}

std::string ToString(const ParamValue& value) {
  if (const auto* s = std::get_if<std::string>(&value)) return *s;
  char buf[64];
  std::to_chars_result res;
  if (const auto* i = std::get_if<std::int64_t>(&value)) {
    res = std::to_chars(buf, buf + sizeof(buf), *i);
  } else {
    // Shortest representation that round-trips.
    res = std::to_chars(buf, buf + sizeof(buf), std::get<double>(value));
  }
  return std::string(buf, res.ptr);
}

ParameterVector::ParameterVector(
    std::initializer_list<std::pair<const std::string, ParamValue>> init) {
  for (const auto& [name, value] : init) Set(name, value);
}

void ParameterVector::Set(const std::string& name, ParamValue value) {
  if (const auto* d = std::get_if<double>(&value); d && !std::isfinite(*d)) {
    throw Error(ErrorCode::kNonFiniteValue, "parameter '" + name + "' is not finite");
  }
  values_.insert_or_assign(name, std::move(value));
}

bool ParameterVector::Erase(const std::string& name) { return values_.erase(name) > 0; }

bool ParameterVector::Contains(std::string_view name) const {
  return values_.find(name) != values_.end();
}

const ParamValue* ParameterVector::Find(std::string_view name) const {
  auto it = values_.find(name);
  return it == values_.end() ? nullptr : &it->second;
}

const ParamValue& ParameterVector::Get(std::string_view name) const {
  const ParamValue* v = Find(name);
  if (v == nullptr) {
    throw Error(ErrorCode::kMissingParameter,
                "missing parameter '" + std::string(name) + "'");
  }
  return *v;
}

double ParameterVector::GetReal(std::string_view name) const {
  const ParamValue& v = Get(name);
  if (!IsNumeric(v)) {
    throw Error(ErrorCode::kSchemaMismatch,
                "parameter '" + std::string(name) + "' is not numeric");
  }
  return AsReal(v);
}

std::int64_t ParameterVector::GetInt(std::string_view name) const {
  const ParamValue& v = Get(name);
  if (const auto* i = std::get_if<std::int64_t>(&v)) return *i;
  throw Error(ErrorCode::kSchemaMismatch,
              "parameter '" + std::string(name) + "' is not an integer");
}

const std::string& ParameterVector::GetText(std::string_view name) const {
  const ParamValue& v = Get(name);
  if (const auto* s = std::get_if<std::string>(&v)) return *s;
  throw Error(ErrorCode::kSchemaMismatch,
              "parameter '" + std::string(name) + "' is not text");
}

bool ParameterVector::SameSchema(const ParameterVector& other) const {
  if (values_.size() != other.values_.size()) return false;
  auto a = values_.begin();
  auto b = other.values_.begin();
  for (; a != values_.end(); ++a, ++b) {
    if (a->first != b->first || a->second.index() != b->second.index()) return false;
  }
  return true;
}

}  // namespace spatnet
