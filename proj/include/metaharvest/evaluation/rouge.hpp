#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace metaharvest::evaluation {

/// Name recorded with score tables so runs stay comparable.
inline constexpr std::string_view kTokenizerName = "lowercase-ascii/split-non-alphanumeric";

/// Lowercases ASCII letters and splits on runs of characters that are not
/// ASCII letters or digits. Bytes of multi-byte UTF-8 sequences count as
/// word characters, so accented words stay whole.
[[nodiscard]] auto tokenize(std::string_view text) -> std::vector<std::string>;

/// Length of the longest common subsequence of two token sequences.
[[nodiscard]] auto lcs_length(std::span<std::string const> a, std::span<std::string const> b) -> std::size_t;

/// ROUGE-L F1 over tokens: 2PR/(P+R) with P = LCS/|candidate| and
/// R = LCS/|reference|; 0 when either side has no tokens.
[[nodiscard]] auto rouge_l_f1(std::string_view candidate, std::string_view reference) -> double;

[[nodiscard]] auto rouge_l_f1(std::span<std::string const> candidate, std::span<std::string const> reference)
    -> double;

}  // namespace metaharvest::evaluation
