#pragma once

// Internal config helpers shared by the experiment translation units.

#include <cstdint>
#include <vector>

#include "aniso/experiments.hpp"
#include "aniso/field.hpp"

namespace aniso::detail_cfg {

double num(const json& j, const char* key, double fallback);
std::uint64_t seed(const json& j, std::uint64_t fallback);
std::vector<double> exponents(const json& j, std::vector<double> fallback);
GridSpec grid(const json& j, std::vector<std::size_t> sizes,
              std::vector<double> lengths);
json echo(const json& config, json defaults);

} // namespace aniso::detail_cfg
