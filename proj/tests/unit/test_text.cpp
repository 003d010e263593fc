#include <doctest.h>

#include <chrono>

#include "metaharvest/core/hash.hpp"
#include "metaharvest/core/text.hpp"

using namespace metaharvest;

TEST_CASE("sanitize_utf8 keeps valid text and replaces invalid bytes")
{
    CHECK(sanitize_utf8("plain ascii") == "plain ascii");
    CHECK(sanitize_utf8("caf\xC3\xA9") == "caf\xC3\xA9");
    CHECK(sanitize_utf8("a\xFF" "b") == "a\xEF\xBF\xBD" "b");
    // truncated 3-byte sequence at the end
    CHECK(sanitize_utf8("x\xE2\x82") == "x\xEF\xBF\xBD");
    // overlong encoding of '/'
    CHECK(sanitize_utf8("\xC0\xAF").find("/") == std::string::npos);
}

TEST_CASE("utf8 length and prefix count code points")
{
    std::string const s = "\xC3\xA9t\xC3\xA9";  // "été"
    CHECK(utf8_length(s) == 3);
    CHECK(utf8_prefix(s, 2) == "\xC3\xA9t");
    CHECK(utf8_prefix(s, 10) == s);
}

TEST_CASE("whitespace helpers")
{
    CHECK(trim("  a b \n") == "a b");
    CHECK(collapse_whitespace(" a \t\n b  ") == "a b");
    CHECK(iequals("Title", "tITLE"));
    CHECK_FALSE(iequals("Title", "Titles"));
    auto const lines = split_lines("a\r\nb\n\nc");
    REQUIRE(lines.size() == 4);
    CHECK(lines[0] == "a");
    CHECK(lines[2].empty());
}

TEST_CASE("format_utc renders second-precision UTC")
{
    using namespace std::chrono;
    auto const tp = sys_days{2025y / June / 7} + 12h + 3min + 4s;
    CHECK(format_utc(tp) == "2025-06-07T12:03:04Z");
}

TEST_CASE("sha256 matches published test vectors")
{
    CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    CHECK(is_sha256_hex(sha256_hex("x")));
    CHECK_FALSE(is_sha256_hex("ABC"));
    CHECK_FALSE(is_sha256_hex(std::string(64, 'g')));
}
