#include <doctest.h>

#include <random>

#include "metaharvest/evaluation/rouge.hpp"
#include "support/oracles.hpp"

using namespace metaharvest::evaluation;

namespace {

auto random_tokens(std::mt19937& rng, std::size_t max_len, int vocabulary) -> std::vector<std::string>
{
    std::vector<std::string> out(rng() % (max_len + 1));
    for (auto& t : out) {
        t = "w" + std::to_string(rng() % vocabulary);
    }
    return out;
}

auto joined(std::vector<std::string> const& tokens) -> std::string
{
    std::string out;
    for (auto const& t : tokens) {
        out += t + " ";
    }
    return out;
}

}  // namespace

TEST_CASE("tokenizer")
{
    CHECK(tokenize("The CAT, sat-on_the mat!") == std::vector<std::string>{"the", "cat", "sat", "on", "the", "mat"});
    CHECK(tokenize("  ").empty());
    CHECK(tokenize("caf\xC3\xA9 2016") == std::vector<std::string>{"caf\xC3\xA9", "2016"});
    CHECK(tokenize("https://doi.org/10.5281/zenodo.1") == oracle::words("https://doi.org/10.5281/zenodo.1"));
}

TEST_CASE("worked example")
{
    double const expected = 10.0 / 11.0;
    CHECK(oracle::rouge_l(oracle::words("the cat on the mat"), oracle::words("the cat sat on the mat"))
          == doctest::Approx(expected).epsilon(1e-12));
    CHECK(std::abs(rouge_l_f1("the cat on the mat", "the cat sat on the mat") - expected) < 1e-12);
}

TEST_CASE("matches the memoised LCS oracle on random pairs")
{
    std::mt19937 rng(2024);
    for (int i = 0; i < 1000; ++i) {
        auto const a = random_tokens(rng, 20, 1 + static_cast<int>(rng() % 8));
        auto const b = random_tokens(rng, 20, 1 + static_cast<int>(rng() % 8));
        CHECK(lcs_length(a, b) == oracle::lcs(a, b));
        CHECK(std::abs(rouge_l_f1(a, b) - oracle::rouge_l(a, b)) < 1e-12);
        CHECK(std::abs(rouge_l_f1(joined(a), joined(b)) - oracle::rouge_l(a, b)) < 1e-12);
        CHECK(rouge_l_f1(a, b) == rouge_l_f1(b, a));
    }
}

TEST_CASE("identity, disjointness and empty inputs")
{
    std::mt19937 rng(5);
    for (int i = 0; i < 200; ++i) {
        auto a = random_tokens(rng, 20, 10);
        if (a.empty()) {
            a.push_back("x");
        }
        CHECK(rouge_l_f1(a, a) == 1.0);
        std::vector<std::string> b;
        for (auto const& t : a) {
            b.push_back("z" + t);
        }
        CHECK(rouge_l_f1(a, b) == 0.0);
    }
    CHECK(rouge_l_f1("", "something") == 0.0);
    CHECK(rouge_l_f1("something", "") == 0.0);
    CHECK(rouge_l_f1("", "") == 0.0);
    CHECK(rouge_l_f1("Vegetation Map", "vegetation map") == 1.0);
}
