#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace mtkit {

enum class TokenizerId {
  /// The mteval-v13a rules as applied by sacreBLEU's default "13a" tokenizer.
  Intl13a,
  /// One token per non-whitespace code point.
  Char,
};

/// "intl-13a" / "char".
std::string_view to_string(TokenizerId id);
/// Also accepts "13a" as an alias of "intl-13a".
TokenizerId parse_tokenizer(std::string_view name);

struct TokenSequence {
  std::vector<std::string> tokens;
  TokenizerId tokenizer = TokenizerId::Intl13a;

  std::size_t size() const { return tokens.size(); }
  bool empty() const { return tokens.empty(); }
};

/// Trailing whitespace is removed first, as the reference scorer does before tokenising.
TokenSequence tokenize(std::string_view text, TokenizerId id);

/// The 13a-tokenised string, tokens joined by single spaces.
std::string tokenize_13a_string(std::string_view text);

}  // namespace mtkit
