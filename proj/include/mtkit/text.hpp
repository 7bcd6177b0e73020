#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mtkit::text {

bool is_valid_utf8(std::string_view s);

/// Decodes UTF-8 into code points. Throws InputError on malformed input.
std::u32string decode_utf8(std::string_view s);
void append_utf8(std::string& out, char32_t cp);
std::string encode_utf8(std::u32string_view cps);

std::size_t codepoint_count(std::string_view s);

/// Unicode whitespace as understood by Python's str.isspace(); sacreBLEU splits on it.
bool is_space(char32_t cp);

/// Strips leading and trailing Unicode whitespace. Interior whitespace is untouched.
std::string_view trim(std::string_view s);
std::string_view rtrim(std::string_view s);

/// Splits on runs of Unicode whitespace, dropping empty pieces (Python str.split()).
std::vector<std::string_view> split_whitespace(std::string_view s);

/// Splits on every occurrence of `sep`; keeps empty fields.
std::vector<std::string_view> split(std::string_view s, char sep);

/// Canonical composition (NFC).
std::string nfc(std::string_view s);

/// Full Unicode case folding.
std::string fold_case(std::string_view s);

bool contains_newline(std::string_view s);

/// Strict decimal parse of the whole field; nullopt on trailing junk.
std::optional<double> parse_double(std::string_view s);
/// Shortest representation that parses back to the same double.
std::string format_double(double v);
/// Fixed-point rendering with `digits` decimals.
std::string format_fixed(double v, int digits);

}  // namespace mtkit::text
