#include "metaharvest/evaluation/rouge.hpp"

#include <algorithm>

namespace metaharvest::evaluation {

auto tokenize(std::string_view text) -> std::vector<std::string>
{
    std::vector<std::string> tokens;
    std::string current;
    for (char c : text) {
        auto const u = static_cast<unsigned char>(c);
        bool const word = (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || u >= 0x80;
        if (word) {
            current.push_back(c);
        } else if (c >= 'A' && c <= 'Z') {
            current.push_back(static_cast<char>(c - 'A' + 'a'));
        } else if (!current.empty()) {
            tokens.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) {
        tokens.push_back(std::move(current));
    }
    return tokens;
}

auto lcs_length(std::span<std::string const> a, std::span<std::string const> b) -> std::size_t
{
    if (a.size() < b.size()) {
        std::swap(a, b);
    }
    // one row over the shorter sequence
    std::vector<std::size_t> row(b.size() + 1, 0);
    for (auto const& x : a) {
        std::size_t diagonal = 0;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            auto const above = row[j];
            row[j] = x == b[j - 1] ? diagonal + 1 : std::max(row[j], row[j - 1]);
            diagonal = above;
        }
    }
    return row[b.size()];
}

auto rouge_l_f1(std::span<std::string const> candidate, std::span<std::string const> reference) -> double
{
    if (candidate.empty() || reference.empty()) {
        return 0.0;
    }
    auto const lcs = static_cast<double>(lcs_length(candidate, reference));
    if (lcs == 0.0) {
        return 0.0;
    }
    auto const precision = lcs / static_cast<double>(candidate.size());
    auto const recall = lcs / static_cast<double>(reference.size());
    return 2.0 * precision * recall / (precision + recall);
}

auto rouge_l_f1(std::string_view candidate, std::string_view reference) -> double
{
    auto const c = tokenize(candidate);
    auto const r = tokenize(reference);
    return rouge_l_f1(c, r);
}

}  // namespace metaharvest::evaluation
