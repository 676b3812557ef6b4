#pragma once

#include <string>

#include "secbeam/channel.hpp"

namespace secbeam {

/// Parses a JSON instance document with keys n_antennas, noise_power, exactly
/// one of power_budget_db / power_budget_linear, and users / eves as lists of
/// [re, im] pair lists. Throws ParseError naming the offending key.
SystemInstance parse_instance(const std::string& text);

/// Canonical JSON form of an instance (power emitted in linear units).
/// parse_instance(serialize_instance(x)) reproduces x exactly.
std::string serialize_instance(const SystemInstance& inst);

SystemInstance load_instance_file(const std::string& path);

}  // namespace secbeam
