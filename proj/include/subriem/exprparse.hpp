#pragma once

#include <string>

#include "subriem/field.hpp"

namespace subriem {

/// Builds a scalar field from an arithmetic expression over the model's
/// coordinate symbols (x, y, z on the nilpotent model; mIJ / mIJre, mIJim on
/// the matrix models). Grammar: + - * /, unary -, integer powers via ^,
/// exp(...) and log(...), numeric literals, parentheses. Throws
/// std::runtime_error with the offending offset on malformed input.
ScalarField parse_field(Model m, const std::string& text);

}  // namespace subriem
