#include "mtkit/tokenizer.hpp"

#include "mtkit/error.hpp"
#include "mtkit/text.hpp"

namespace mtkit {

std::string_view to_string(TokenizerId id) {
  switch (id) {
    case TokenizerId::Intl13a: return "intl-13a";
    case TokenizerId::Char: return "char";
  }
  return "?";
}

TokenizerId parse_tokenizer(std::string_view name) {
  if (name == "intl-13a" || name == "13a") return TokenizerId::Intl13a;
  if (name == "char") return TokenizerId::Char;
  throw InputError("unknown tokenizer '" + std::string(name) + "'");
}

namespace {

void replace_all(std::string& s, std::string_view from, std::string_view to) {
  if (s.find(from) == std::string::npos) return;
  std::string out;
  out.reserve(s.size());
  std::size_t pos = 0;
  for (;;) {
    auto hit = s.find(from, pos);
    if (hit == std::string::npos) break;
    out.append(s, pos, hit - pos);
    out.append(to);
    pos = hit + from.size();
  }
  out.append(s, pos, std::string::npos);
  s = std::move(out);
}

bool is_digit(char c) { return c >= '0' && c <= '9'; }

// [{-~[-` -&(-+:-@/]
bool is_13a_symbol(char ch) {
  auto c = static_cast<unsigned char>(ch);
  return (c >= 0x7B && c <= 0x7E) || (c >= 0x5B && c <= 0x60) || (c >= 0x20 && c <= 0x26) ||
         (c >= 0x28 && c <= 0x2B) || (c >= 0x3A && c <= 0x40) || c == 0x2F;
}

// The four rules are applied one after another, each as a left-to-right scan with
// non-overlapping matches. Every character class involved is ASCII, so scanning UTF-8
// bytes gives the same result as scanning code points.
std::string apply_13a_rules(const std::string& in) {
  std::string a;
  a.reserve(in.size() * 2);
  for (char c : in) {
    if (is_13a_symbol(c)) {
      a += ' ';
      a += c;
      a += ' ';
    } else {
      a += c;
    }
  }

  // ([^0-9])([\.,]) -> "\1 \2 "
  std::string b;
  b.reserve(a.size() + a.size() / 4);
  for (std::size_t i = 0; i < a.size();) {
    if (i + 1 < a.size() && !is_digit(a[i]) && (a[i + 1] == '.' || a[i + 1] == ',')) {
      b += a[i];
      b += ' ';
      b += a[i + 1];
      b += ' ';
      i += 2;
    } else {
      b += a[i++];
    }
  }

  // ([\.,])([^0-9]) -> " \1 \2"
  std::string c;
  c.reserve(b.size() + b.size() / 4);
  for (std::size_t i = 0; i < b.size();) {
    if (i + 1 < b.size() && (b[i] == '.' || b[i] == ',') && !is_digit(b[i + 1])) {
      c += ' ';
      c += b[i];
      c += ' ';
      c += b[i + 1];
      i += 2;
    } else {
      c += b[i++];
    }
  }

  // ([0-9])(-) -> "\1 \2 "
  std::string d;
  d.reserve(c.size() + 16);
  for (std::size_t i = 0; i < c.size();) {
    if (i + 1 < c.size() && is_digit(c[i]) && c[i + 1] == '-') {
      d += c[i];
      d += " - ";
      i += 2;
    } else {
      d += c[i++];
    }
  }
  return d;
}

std::string prepare_13a(std::string_view text) {
  std::string line(text::rtrim(text));
  replace_all(line, "<skipped>", "");
  replace_all(line, "-\n", "");
  replace_all(line, "\n", " ");
  if (line.find('&') != std::string::npos) {
    replace_all(line, "&quot;", "\"");
    replace_all(line, "&amp;", "&");
    replace_all(line, "&lt;", "<");
    replace_all(line, "&gt;", ">");
  }
  return apply_13a_rules(" " + line + " ");
}

}  // namespace

TokenSequence tokenize(std::string_view text, TokenizerId id) {
  TokenSequence out;
  out.tokenizer = id;
  if (id == TokenizerId::Char) {
    for (char32_t cp : text::decode_utf8(text)) {
      if (text::is_space(cp)) continue;
      std::string tok;
      text::append_utf8(tok, cp);
      out.tokens.push_back(std::move(tok));
    }
    return out;
  }
  std::string prepared = prepare_13a(text);
  for (auto piece : text::split_whitespace(prepared)) out.tokens.emplace_back(piece);
  return out;
}

std::string tokenize_13a_string(std::string_view text) {
  std::string joined;
  std::string prepared = prepare_13a(text);
  for (auto piece : text::split_whitespace(prepared)) {
    if (!joined.empty()) joined += ' ';
    joined.append(piece);
  }
  return joined;
}

}  // namespace mtkit
