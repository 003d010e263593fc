#pragma once

#include <string>
#include <string_view>

namespace metaharvest {

/// Lowercase hex SHA-256 digest of `data`.
[[nodiscard]] auto sha256_hex(std::string_view data) -> std::string;

/// True when `key` looks like a digest produced by sha256_hex.
[[nodiscard]] auto is_sha256_hex(std::string_view key) -> bool;

}  // namespace metaharvest
