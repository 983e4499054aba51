#pragma once

#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "eqfd/error.hpp"
#include "eqfd/weights.hpp"

namespace eqfd {

/// {"type": "constant"|"gaussian_well"|"table", ...}
inline WeightSpec weight_from_json(const nlohmann::json& j) {
    try {
        const std::string type = j.at("type").get<std::string>();
        if (type == "constant") return WeightSpec::constant(j.at("level").get<double>());
        if (type == "gaussian_well") {
            return WeightSpec::gaussian_well(j.at("depth").get<double>(), j.value("center", 0.0),
                                             j.at("width").get<double>());
        }
        if (type == "table") {
            return WeightSpec::table(j.at("abscissae").get<std::vector<double>>(),
                                     j.at("values").get<std::vector<double>>());
        }
        throw ValidationError("unknown weight type '" + type + "'");
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("malformed weight spec: ") + e.what());
    }
}

inline nlohmann::json weight_to_json(const WeightSpec& spec) {
    return std::visit(
        [](const auto& w) -> nlohmann::json {
            using T = std::decay_t<decltype(w)>;
            if constexpr (std::is_same_v<T, weight::Constant>) {
                return {{"type", "constant"}, {"level", w.level}};
            } else if constexpr (std::is_same_v<T, weight::GaussianWell>) {
                return {{"type", "gaussian_well"}, {"depth", w.depth}, {"center", w.center}, {"width", w.width}};
            } else {
                return {{"type", "table"}, {"abscissae", w.abscissae}, {"values", w.values}};
            }
        },
        spec.variant());
}

}  // namespace eqfd
