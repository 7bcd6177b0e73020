#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>

#include "mtkit/tokenizer.hpp"

namespace mtkit {

inline constexpr int kBleuOrder = 4;

/// Sufficient statistics; they add up across sentences.
struct BleuStats {
  std::array<std::int64_t, kBleuOrder> correct{};
  std::array<std::int64_t, kBleuOrder> total{};
  std::int64_t hyp_len = 0;
  std::int64_t ref_len = 0;

  BleuStats& operator+=(const BleuStats& o);
  friend bool operator==(const BleuStats&, const BleuStats&) = default;
};

BleuStats bleu_stats(const TokenSequence& hyp, const TokenSequence& ref);

struct Smoothing {
  enum class Method { None, Exp, Floor };
  Method method = Method::None;
  double value = 0.0;  // floor only

  static Smoothing none() { return {Method::None, 0.0}; }
  static Smoothing exp() { return {Method::Exp, 0.0}; }
  static Smoothing floor(double f = 0.1) { return {Method::Floor, f}; }

  /// "none", "exp", "floor" (or "floor:0.1" when the value is not the default).
  std::string id() const;
  /// Inverse of id().
  static Smoothing parse(std::string_view text);
};

struct BleuScore {
  double score = 0.0;                         // [0, 100]
  std::array<double, kBleuOrder> precisions{};  // [0, 1], smoothed values where smoothing applied
  double brevity_penalty = 0.0;
  std::int64_t hyp_len = 0;
  std::int64_t ref_len = 0;
  std::string signature;
};

/// Score from statistics. With `effective_order`, orders that have no n-grams in the
/// hypothesis are left out of the geometric mean (the sentence-level convention).
BleuScore compute_bleu(const BleuStats& stats, Smoothing smoothing, bool effective_order, TokenizerId tokenizer);

/// Throws InputError when the sequences differ in length or are empty.
BleuScore corpus_bleu(std::span<const TokenSequence> hyps, std::span<const TokenSequence> refs,
                      Smoothing smoothing = Smoothing::none());

/// Effective order is always on.
BleuScore sentence_bleu(const TokenSequence& hyp, const TokenSequence& ref, Smoothing smoothing = Smoothing::exp());

/// `bleu|order:4|tok:<id>|smooth:<id>|version:mtkit-x.y.z`
std::string bleu_signature(TokenizerId tokenizer, Smoothing smoothing);

/// |hyp| / |ref|. Throws InputError for an empty reference.
double length_ratio(const TokenSequence& hyp, const TokenSequence& ref);

}  // namespace mtkit
