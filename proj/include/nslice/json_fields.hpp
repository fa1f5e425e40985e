// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <type_traits>
#include <vector>

#include <json.hpp>

#include "nslice/errors.hpp"

namespace nslice {

/// Strict reader over one JSON object: every key must be claimed by a
/// read() call before finish(), otherwise the leftover key is reported.
class JsonFields {
 public:
  JsonFields(const nlohmann::json& object, std::string path) : object_(object), path_(std::move(path)) {
    if (!object_.is_object()) throw ConfigError(display(""), "expected an object");
  }

  bool has(const std::string& key) const { return object_.contains(key); }

  std::string path_of(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  /// Reads `key` into `out` when present; absent keys keep `out` unchanged.
  template <typename T>
  void read(const std::string& key, T& out) {
    if (!object_.contains(key)) return;
    claimed_.insert(key);
    out = convert<T>(object_.at(key), path_of(key));
  }

  const nlohmann::json& claim(const std::string& key) {
    claimed_.insert(key);
    return object_.at(key);
  }

  void finish() const {
    for (const auto& item : object_.items()) {
      if (!claimed_.contains(item.key())) throw ConfigError(path_of(item.key()), "unknown key");
    }
  }

  template <typename T>
  static T convert(const nlohmann::json& value, const std::string& where) {
    if constexpr (std::is_same_v<T, bool>) {
      if (!value.is_boolean()) throw ConfigError(where, "expected a boolean");
      return value.get<bool>();
    } else if constexpr (std::is_integral_v<T>) {
      if (!value.is_number_integer()) throw ConfigError(where, "expected an integer");
      if constexpr (std::is_unsigned_v<T>) {
        if (value.is_number_unsigned()) return value.get<T>();
        if (value.get<std::int64_t>() < 0) throw ConfigError(where, "expected a non-negative integer");
      }
      return value.get<T>();
    } else if constexpr (std::is_floating_point_v<T>) {
      if (!value.is_number()) throw ConfigError(where, "expected a number");
      return value.get<T>();
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (!value.is_string()) throw ConfigError(where, "expected a string");
      return value.get<std::string>();
    } else {
      // std::vector<U>
      if (!value.is_array()) throw ConfigError(where, "expected an array");
      T out;
      for (std::size_t i = 0; i < value.size(); ++i) {
        out.push_back(convert<typename T::value_type>(value[i], where + "." + std::to_string(i)));
      }
      return out;
    }
  }

 private:
  std::string display(const std::string& key) const { return key.empty() ? (path_.empty() ? "<root>" : path_) : path_of(key); }

  const nlohmann::json& object_;
  std::string path_;
  std::set<std::string> claimed_;
};

}  // namespace nslice
