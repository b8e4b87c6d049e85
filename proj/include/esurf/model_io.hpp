#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "esurf/forest.hpp"

namespace esurf {

inline constexpr std::uint32_t kModelFormatVersion = 1;

/// Model container: "ESURF" magic, version, then length-prefixed sections
/// (params, feature space, preorder trees). Byte layout documented in
/// docs/model-format.md; serialization is bit-exact and deterministic.
std::vector<std::uint8_t> serialize_model(const ForestModel& model);
ForestModel deserialize_model(std::span<const std::uint8_t> bytes);

void save_model(const ForestModel& model, const std::string& path);
ForestModel load_model(const std::string& path);

}  // namespace esurf
