#pragma once

#include <string>

#include "space/core/context.hpp"

namespace space {

// Instance-set CSV:
//   # kind=<train|test>[;bounds=lo:hi|lo:hi|...]
//   id,<feature name 1>,...,<feature name k>
//   <id>,<value>,...,<value>
// UTF-8, '.' decimal separator, LF endings, values in round-trip precision.
std::string format_instance_set(const InstanceSet& set);
InstanceSet parse_instance_set(const std::string& text);

void write_instance_set(const std::string& path, const InstanceSet& set);
InstanceSet read_instance_set(const std::string& path);

}  // namespace space
