#include "mtkit/bleu.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>
#include <vector>

#include "mtkit/error.hpp"
#include "mtkit/text.hpp"
#include "mtkit/version.hpp"

namespace mtkit {

BleuStats& BleuStats::operator+=(const BleuStats& o) {
  for (int n = 0; n < kBleuOrder; ++n) {
    correct[n] += o.correct[n];
    total[n] += o.total[n];
  }
  hyp_len += o.hyp_len;
  ref_len += o.ref_len;
  return *this;
}

namespace {

using Gram = std::array<std::uint32_t, kBleuOrder>;

std::vector<std::uint32_t> to_ids(const std::vector<std::string>& tokens,
                                  std::unordered_map<std::string_view, std::uint32_t>& vocab) {
  std::vector<std::uint32_t> ids;
  ids.reserve(tokens.size());
  for (const auto& t : tokens) {
    auto [it, inserted] = vocab.try_emplace(t, static_cast<std::uint32_t>(vocab.size()));
    ids.push_back(it->second);
  }
  return ids;
}

std::vector<Gram> sorted_grams(const std::vector<std::uint32_t>& ids, int n) {
  std::vector<Gram> grams;
  if (ids.size() < static_cast<std::size_t>(n)) return grams;
  grams.reserve(ids.size() - n + 1);
  for (std::size_t i = 0; i + n <= ids.size(); ++i) {
    Gram g{};
    for (int k = 0; k < n; ++k) g[k] = ids[i + k];
    grams.push_back(g);
  }
  std::sort(grams.begin(), grams.end());
  return grams;
}

// Sum over distinct n-grams of min(hyp count, ref count): the size of the multiset
// intersection of two sorted sequences.
std::int64_t clipped_matches(const std::vector<Gram>& h, const std::vector<Gram>& r) {
  std::int64_t matches = 0;
  std::size_t i = 0, j = 0;
  while (i < h.size() && j < r.size()) {
    if (h[i] < r[j]) {
      ++i;
    } else if (r[j] < h[i]) {
      ++j;
    } else {
      ++matches;
      ++i;
      ++j;
    }
  }
  return matches;
}

constexpr double kLogZero = -9999999999.0;

double safe_log(double x) { return x == 0.0 ? kLogZero : std::log(x); }

}  // namespace

BleuStats bleu_stats(const TokenSequence& hyp, const TokenSequence& ref) {
  std::unordered_map<std::string_view, std::uint32_t> vocab;
  vocab.reserve(hyp.size() + ref.size());
  auto h = to_ids(hyp.tokens, vocab);
  auto r = to_ids(ref.tokens, vocab);
  BleuStats s;
  s.hyp_len = static_cast<std::int64_t>(h.size());
  s.ref_len = static_cast<std::int64_t>(r.size());
  for (int n = 1; n <= kBleuOrder; ++n) {
    auto hg = sorted_grams(h, n);
    s.total[n - 1] = static_cast<std::int64_t>(hg.size());
    if (!hg.empty()) s.correct[n - 1] = clipped_matches(hg, sorted_grams(r, n));
  }
  return s;
}

std::string Smoothing::id() const {
  switch (method) {
    case Method::None: return "none";
    case Method::Exp: return "exp";
    case Method::Floor: return value == 0.1 ? "floor" : "floor:" + text::format_double(value);
  }
  return "?";
}

Smoothing Smoothing::parse(std::string_view s) {
  if (s == "none") return none();
  if (s == "exp") return exp();
  if (s == "floor") return floor();
  if (s.starts_with("floor:")) {
    auto v = text::parse_double(s.substr(6));
    if (!v || *v < 0) throw InputError("bad floor smoothing value in '" + std::string(s) + "'");
    return floor(*v);
  }
  throw InputError("unknown smoothing '" + std::string(s) + "'");
}

std::string bleu_signature(TokenizerId tokenizer, Smoothing smoothing) {
  return "bleu|order:" + std::to_string(kBleuOrder) + "|tok:" + std::string(to_string(tokenizer)) +
         "|smooth:" + smoothing.id() + "|version:" + std::string(kToolkitId);
}

BleuScore compute_bleu(const BleuStats& stats, Smoothing smoothing, bool effective_order, TokenizerId tokenizer) {
  BleuScore out;
  out.hyp_len = stats.hyp_len;
  out.ref_len = stats.ref_len;
  out.signature = bleu_signature(tokenizer, smoothing);

  double bp = 1.0;
  if (stats.hyp_len < stats.ref_len) {
    bp = stats.hyp_len > 0 ? std::exp(1.0 - static_cast<double>(stats.ref_len) / stats.hyp_len) : 0.0;
  }
  out.brevity_penalty = bp;

  bool any_match = std::any_of(stats.correct.begin(), stats.correct.end(), [](auto c) { return c > 0; });
  if (!any_match) return out;

  // Percentages, as the reference implementation computes them.
  std::array<double, kBleuOrder> pct{};
  double exp_factor = 1.0;
  int orders = kBleuOrder;
  for (int n = 0; n < kBleuOrder; ++n) {
    if (stats.total[n] == 0) break;
    if (effective_order) orders = n + 1;
    auto total = static_cast<double>(stats.total[n]);
    if (stats.correct[n] == 0) {
      if (smoothing.method == Smoothing::Method::Exp) {
        exp_factor *= 2;
        pct[n] = 100.0 / (exp_factor * total);
      } else if (smoothing.method == Smoothing::Method::Floor) {
        pct[n] = 100.0 * smoothing.value / total;
      }
    } else {
      pct[n] = 100.0 * static_cast<double>(stats.correct[n]) / total;
    }
  }
  double log_sum = 0.0;
  for (int n = 0; n < orders; ++n) log_sum += safe_log(pct[n]);
  out.score = bp * std::exp(log_sum / orders);
  for (int n = 0; n < kBleuOrder; ++n) out.precisions[n] = pct[n] / 100.0;
  return out;
}

BleuScore corpus_bleu(std::span<const TokenSequence> hyps, std::span<const TokenSequence> refs, Smoothing smoothing) {
  if (hyps.size() != refs.size()) {
    throw InputError("corpus_bleu: " + std::to_string(hyps.size()) + " hypotheses but " +
                     std::to_string(refs.size()) + " references");
  }
  if (hyps.empty()) throw InputError("corpus_bleu: no sentences");
  BleuStats total;
  for (std::size_t i = 0; i < hyps.size(); ++i) total += bleu_stats(hyps[i], refs[i]);
  return compute_bleu(total, smoothing, false, hyps.front().tokenizer);
}

BleuScore sentence_bleu(const TokenSequence& hyp, const TokenSequence& ref, Smoothing smoothing) {
  return compute_bleu(bleu_stats(hyp, ref), smoothing, true, hyp.tokenizer);
}

double length_ratio(const TokenSequence& hyp, const TokenSequence& ref) {
  if (ref.empty()) throw InputError("length_ratio: empty reference");
  return static_cast<double>(hyp.size()) / static_cast<double>(ref.size());
}

}  // namespace mtkit
