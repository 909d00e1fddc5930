#pragma once

// Typed JSON accessors that report failures as ConfigError with a JSON pointer.

#include "levychaos/errors.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace levychaos::detail {

inline std::string child(const std::string& pointer, const std::string& key) { return pointer + "/" + key; }
inline std::string child(const std::string& pointer, std::size_t index) {
    return pointer + "/" + std::to_string(index);
}

inline const nlohmann::json& require(const nlohmann::json& obj, const std::string& key, const std::string& pointer) {
    if (!obj.is_object()) throw ConfigError(pointer.empty() ? "/" : pointer, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) throw ConfigError(child(pointer, key), "missing required field");
    return *it;
}

inline double as_number(const nlohmann::json& v, const std::string& pointer) {
    if (!v.is_number()) throw ConfigError(pointer, "expected a number");
    return v.get<double>();
}

inline std::int64_t as_integer(const nlohmann::json& v, const std::string& pointer) {
    if (!v.is_number_integer()) throw ConfigError(pointer, "expected an integer");
    return v.get<std::int64_t>();
}

inline std::uint64_t as_seed(const nlohmann::json& v, const std::string& pointer) {
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(v.get<std::int64_t>());
    throw ConfigError(pointer, "expected a nonnegative integer seed");
}

inline const nlohmann::json& as_array(const nlohmann::json& v, const std::string& pointer) {
    if (!v.is_array()) throw ConfigError(pointer, "expected an array");
    return v;
}

inline std::vector<double> as_number_array(const nlohmann::json& v, const std::string& pointer) {
    as_array(v, pointer);
    std::vector<double> out;
    out.reserve(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(as_number(v[i], child(pointer, i)));
    return out;
}

}  // namespace levychaos::detail
