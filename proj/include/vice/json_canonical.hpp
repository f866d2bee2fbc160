#pragma once

#include <string>

#include <json.hpp>

namespace vice {

/// Deterministic JSON serialization: UTF-8, object keys sorted (nlohmann's
/// map ordering), floating-point numbers printed with the given number of
/// significant digits. Used for golden-file-stable artifacts.
std::string canonical_dump(const nlohmann::json& value, int float_digits = 9);

}  // namespace vice
