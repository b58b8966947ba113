#pragma once

#include <string>
#include <vector>

#include "subriem/jsonio.hpp"

namespace subriem {

/// Checks a document against a small JSON-schema dialect: type (string or
/// list), properties / required / additionalProperties, items, enum,
/// minimum / maximum, minItems. Returns one message per violation, each
/// prefixed with the JSON-pointer-style location.
std::vector<std::string> schema_errors(const OrderedJson& schema, const OrderedJson& doc);

/// Throws std::runtime_error listing every violation; no-op when clean.
void validate_against_schema(const OrderedJson& schema, const OrderedJson& doc);

}  // namespace subriem
