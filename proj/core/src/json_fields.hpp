#pragma once

// Checked accessors for the JSON documents; failures become ValidationError
// with the dotted path of the offending field.

#include "fivemass/common.hpp"

#include <json.hpp>

#include <string>

namespace fivemass::detail {

using nlohmann::json;

inline const json& field(const json& obj, const char* key, const std::string& ctx) {
  if (!obj.is_object()) throw ValidationError("'" + ctx + "' must be an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw ValidationError("missing field '" + ctx + key + "'");
  return *it;
}

inline double number(const json& obj, const char* key, const std::string& ctx) {
  const json& v = field(obj, key, ctx);
  if (!v.is_number()) throw ValidationError("field '" + ctx + key + "' must be a number");
  return v.get<double>();
}

inline Vec3 vec3(const json& v, const std::string& what) {
  if (!v.is_array() || v.size() != 3) {
    throw ValidationError("field '" + what + "' must be a 3-element array");
  }
  for (const auto& e : v) {
    if (!e.is_number()) throw ValidationError("field '" + what + "' must be numeric");
  }
  return {v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
}

inline Vec3 vec3(const json& obj, const char* key, const std::string& ctx) {
  return vec3(field(obj, key, ctx), ctx + key);
}

inline json parseDocument(std::string_view text, const std::string& what) {
  try {
    json root = json::parse(text);
    if (!root.is_object()) throw ValidationError(what + " must be a JSON object");
    return root;
  } catch (const json::parse_error& e) {
    throw ValidationError(what + " is not valid JSON: " + e.what());
  }
}

}  // namespace fivemass::detail
