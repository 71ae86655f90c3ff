#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "budgeted_efx/model.hpp"

namespace budgeted_efx {

using Json = nlohmann::json;

/// Malformed input, with a location prefix such as "agents[1].values[2]".
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Integers or "p/q" strings.
Rational rational_from_json(const Json& j, const std::string& where);
/// Canonical string form, always a JSON string.
Json rational_to_json(const Rational& r);

/// {"goods": [{"id", "cost"}], "agents": [{"id", "budget", "values"}]}.
/// Ids must be 0, 1, 2, ... in order.
Instance instance_from_json(const Json& j);
Json instance_to_json(const Instance& instance);

/// Canonical text: sorted keys, lowest-terms rational strings, two-space
/// indent, trailing newline.
std::string serialize_instance(const Instance& instance);

/// {"bundles": [[good ids]...]} or any object carrying such an object under
/// "allocation" (a solve report). Scope is every good.
Allocation allocation_from_json(const Json& j, const Instance& instance);
/// {"bundles": [...], "unallocated": [...]}.
Json allocation_to_json(const Allocation& allocation);
Json bundle_to_json(const Bundle& bundle);

/// A corpus file: {"instances": [instance...]} plus optional metadata.
std::vector<Instance> corpus_from_json(const Json& j);
Json corpus_to_json(const std::vector<Instance>& instances);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);
/// Reads and parses JSON; errors become ParseError naming the file.
Json load_json(const std::filesystem::path& path);
Instance load_instance(const std::filesystem::path& path);

/// Lowercase hex SHA-256.
std::string sha256_hex(const std::string& data);

}  // namespace budgeted_efx
