#include "space/core/instance_io.hpp"

#include <sstream>

#include "space/core/csv.hpp"
#include "space/core/errors.hpp"

namespace space {

std::string format_instance_set(const InstanceSet& set) {
  std::ostringstream out;
  out << "# kind=" << to_string(set.kind());
  if (!set.empty() && set[0].context.bounds) {
    out << ";bounds=";
    const auto& bounds = *set[0].context.bounds;
    for (std::size_t k = 0; k < bounds.size(); ++k) {
      if (k) out << '|';
      out << csv::format_double(bounds[k].low) << ':' << csv::format_double(bounds[k].high);
    }
  }
  out << '\n' << "id";
  for (const auto& name : set.feature_names()) out << ',' << name;
  out << '\n';
  for (const auto& inst : set) {
    out << inst.id;
    for (double v : inst.context.features) out << ',' << csv::format_double(v);
    out << '\n';
  }
  return out.str();
}

InstanceSet parse_instance_set(const std::string& text) {
  std::vector<std::string> lines = csv::split(text, '\n');
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.size() < 2 || lines[0].rfind("# ", 0) != 0) {
    throw invalid_argument_error("instance set CSV needs a metadata line and a header");
  }

  SetKind kind = SetKind::train;
  std::optional<std::vector<FeatureBounds>> bounds;
  for (const auto& entry : csv::split(lines[0].substr(2), ';')) {
    const auto eq = entry.find('=');
    if (eq == std::string::npos) throw invalid_argument_error("bad metadata entry: " + entry);
    const std::string key = entry.substr(0, eq);
    const std::string value = entry.substr(eq + 1);
    if (key == "kind") {
      kind = set_kind_from_string(value);
    } else if (key == "bounds") {
      bounds.emplace();
      for (const auto& pair : csv::split(value, '|')) {
        const auto parts = csv::split(pair, ':');
        if (parts.size() != 2) throw invalid_argument_error("bad bounds entry: " + pair);
        bounds->push_back({csv::parse_double(parts[0]), csv::parse_double(parts[1])});
      }
    } else {
      throw invalid_argument_error("unknown metadata key: " + key);
    }
  }

  auto header = csv::split(lines[1], ',');
  if (header.empty() || header[0] != "id") {
    throw invalid_argument_error("instance set header must start with 'id'");
  }
  std::vector<std::string> names(header.begin() + 1, header.end());

  std::vector<Instance> instances;
  for (std::size_t row = 2; row < lines.size(); ++row) {
    const auto fields = csv::split(lines[row], ',');
    if (fields.size() != header.size()) {
      throw invalid_argument_error("row " + std::to_string(row + 1) + " has " +
                                   std::to_string(fields.size()) + " fields, expected " +
                                   std::to_string(header.size()));
    }
    const long long id = csv::parse_int(fields[0]);
    if (id < 0) throw invalid_argument_error("instance ids must be non-negative");
    Instance inst;
    inst.id = static_cast<InstanceId>(id);
    inst.context.feature_names = names;
    inst.context.bounds = bounds;
    for (std::size_t k = 1; k < fields.size(); ++k) {
      inst.context.features.push_back(csv::parse_double(fields[k]));
    }
    instances.push_back(std::move(inst));
  }
  return InstanceSet(std::move(instances), kind);
}

void write_instance_set(const std::string& path, const InstanceSet& set) {
  csv::write_text(path, format_instance_set(set));
}

InstanceSet read_instance_set(const std::string& path) {
  std::string text;
  for (const auto& line : csv::read_lines(path)) {
    text += line;
    text += '\n';
  }
  return parse_instance_set(text);
}

}  // namespace space
