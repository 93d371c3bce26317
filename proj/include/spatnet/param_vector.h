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

#ifndef SPATNET_PARAM_VECTOR_H_
#define SPATNET_PARAM_VECTOR_H_

#include <cstdint>
#include <initializer_list>
#include <map>
#include <string>
#include <utility>
#include <variant>

namespace spatnet {

// A single parameter: an integer count, a real quantity or a text label.
using ParamValue = std::variant<std::int64_t, double, std::string>;

bool IsNumeric(const ParamValue& value);
// Integer or real value widened to double. Throws kSchemaMismatch on text.
double AsReal(const ParamValue& value);
std::string ToString(const ParamValue& value);

// The state of an object or link: named parameters kept in name order.
// Real values are always finite.
class ParameterVector {
 public:
  using Storage = std::map<std::string, ParamValue, std::less<>>;
  using const_iterator = Storage::const_iterator;

  ParameterVector() = default;
  ParameterVector(std::initializer_list<std::pair<const std::string, ParamValue>> init);

  // Inserts or overwrites. Throws kNonFiniteValue for NaN or infinity.
  void Set(const std::string& name, ParamValue value);
  bool Erase(const std::string& name);

  bool Contains(std::string_view name) const;
  // nullptr when absent.
  const ParamValue* Find(std::string_view name) const;
  // Throw kMissingParameter when absent, kSchemaMismatch on wrong kind.
  const ParamValue& Get(std::string_view name) const;
  double GetReal(std::string_view name) const;
  std::int64_t GetInt(std::string_view name) const;
  const std::string& GetText(std::string_view name) const;

  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }
  const_iterator begin() const { return values_.begin(); }
  const_iterator end() const { return values_.end(); }

  // True when both vectors hold the same names with the same value kinds.
  bool SameSchema(const ParameterVector& other) const;

  friend bool operator==(const ParameterVector&, const ParameterVector&) = default;

 private:
  Storage values_;
};

}  // namespace spatnet

#endif  // SPATNET_PARAM_VECTOR_H_
