#include "mtkit/instructions.hpp"

#include <json.hpp>

#include "mtkit/digest.hpp"
#include "mtkit/error.hpp"
#include "mtkit/io.hpp"
#include "mtkit/random.hpp"
#include "mtkit/text.hpp"

namespace mtkit {

using nlohmann::json;

std::string_view to_string(InstructionKind k) {
  return k == InstructionKind::Translation ? "translation" : "monolingual";
}

std::string InstructionInstance::pair_key() const {
  return kind == InstructionKind::Translation ? pair.str() : pair.target.str();
}

namespace {

constexpr std::string_view kAmbiguousMarker = "]: ";

struct Slots {
  std::string_view src_name, tgt_name, src, tgt;
};

// Single pass, so placeholder-like text inside a sentence is never expanded.
std::string expand(std::string_view pattern, const Slots& slots) {
  std::string out;
  out.reserve(pattern.size() + slots.src.size() + slots.tgt.size() + 32);
  std::size_t i = 0;
  while (i < pattern.size()) {
    if (pattern[i] == '{') {
      auto close = pattern.find('}', i);
      if (close != std::string_view::npos) {
        auto name = pattern.substr(i + 1, close - i - 1);
        const std::string_view* value = nullptr;
        if (name == "src_name") value = &slots.src_name;
        else if (name == "tgt_name") value = &slots.tgt_name;
        else if (name == "src") value = &slots.src;
        else if (name == "tgt") value = &slots.tgt;
        if (value) {
          out.append(*value);
          i = close + 1;
          continue;
        }
      }
    }
    out.push_back(pattern[i++]);
  }
  return out;
}

void check_text(std::string_view t, const char* what) {
  if (text::trim(t).empty()) throw InputError(std::string(what) + " text is empty");
  if (text::contains_newline(t)) throw InputError(std::string(what) + " text contains a newline");
}

void check_pattern(std::string_view p, const char* key) {
  if (p.empty()) throw InputError(std::string("template '") + key + "' is empty");
  if (text::contains_newline(p)) throw InputError(std::string("template '") + key + "' spans several lines");
}

}  // namespace

InstructionTemplates InstructionTemplates::load(const std::filesystem::path& path) {
  return parse(io::read_file(path));
}

InstructionTemplates InstructionTemplates::parse(std::string_view contents) {
  InstructionTemplates t;
  for (auto raw : text::split(contents, '\n')) {
    if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
    if (text::trim(raw).empty() || text::trim(raw).front() == '#') continue;
    auto eq = raw.find('=');
    if (eq == std::string_view::npos) throw InputError("template line without '=': " + std::string(raw));
    auto key = text::trim(raw.substr(0, eq));
    auto value = raw.substr(eq + 1);
    if (key == "translation") t.translation = std::string(value);
    else if (key == "monolingual") t.monolingual = std::string(value);
    else throw InputError("unknown template key '" + std::string(key) + "'");
  }
  check_pattern(t.translation, "translation");
  check_pattern(t.monolingual, "monolingual");
  return t;
}

bool InstructionTemplates::is_default() const {
  InstructionTemplates d;
  return translation == d.translation && monolingual == d.monolingual;
}

InstructionInstance render_translation_instruction(const ParallelSentence& s, const LanguageRegistry& registry,
                                                   const InstructionTemplates& templates) {
  const auto& src_name = registry.display_name(s.src_lang);
  const auto& tgt_name = registry.display_name(s.tgt_lang);
  check_text(s.src_text, "source");
  check_text(s.tgt_text, "target");
  InstructionInstance inst;
  inst.text = expand(templates.translation, {src_name, tgt_name, s.src_text, s.tgt_text});
  inst.pair = s.pair();
  inst.kind = InstructionKind::Translation;
  // A source ending in "]:" forms the marker together with the separator space.
  inst.ambiguous = (s.src_text + ' ').find(kAmbiguousMarker) != std::string::npos ||
                   s.tgt_text.find(kAmbiguousMarker) != std::string::npos;
  return inst;
}

InstructionInstance render_monolingual_instruction(const LanguageCode& lang, std::string_view txt,
                                                   const LanguageRegistry& registry,
                                                   const InstructionTemplates& templates) {
  const auto& name = registry.display_name(lang);
  check_text(txt, "monolingual");
  auto trimmed = text::trim(txt);
  InstructionInstance inst;
  inst.text = expand(templates.monolingual, {name, name, trimmed, trimmed});
  inst.pair = {lang, lang};
  inst.kind = InstructionKind::Monolingual;
  inst.ambiguous = trimmed.find(kAmbiguousMarker) != std::string_view::npos;
  return inst;
}

ParsedTranslation parse_translation_instruction(std::string_view line, const LanguageRegistry& registry) {
  constexpr std::string_view prefix = "Translation: [";
  if (line.substr(0, prefix.size()) != prefix) throw InputError("missing 'Translation: [' prefix");
  auto rest = line.substr(prefix.size());
  auto src_close = rest.find(kAmbiguousMarker);
  if (src_close == std::string_view::npos) throw InputError("unterminated source language tag");
  auto src_name = rest.substr(0, src_close);
  rest.remove_prefix(src_close + kAmbiguousMarker.size());

  auto tgt_close = rest.find(kAmbiguousMarker);
  if (tgt_close == std::string_view::npos) throw InputError("missing target language tag");
  auto open = rest.rfind(" [", tgt_close);
  if (open == std::string_view::npos) throw InputError("missing target language tag");
  auto tgt_name = rest.substr(open + 2, tgt_close - open - 2);
  auto src_text = rest.substr(0, open);
  auto tgt_text = rest.substr(tgt_close + kAmbiguousMarker.size());

  auto src = registry.find_by_name(src_name);
  auto tgt = registry.find_by_name(tgt_name);
  if (!src) throw InputError("unknown language name '" + std::string(src_name) + "'");
  if (!tgt) throw InputError("unknown language name '" + std::string(tgt_name) + "'");
  if (src_text.empty() || tgt_text.empty()) throw InputError("empty sentence in instruction");
  return {*src, *tgt, std::string(src_text), std::string(tgt_text)};
}

std::string TrainingManifest::to_json() const {
  json j;
  j["total"] = total;
  j["per_pair_counts"] = per_pair_counts;
  j["per_kind_counts"] = per_kind_counts;
  j["seed"] = seed;
  j["rng"] = rng;
  j["digest"] = {{"sha256", digest}};
  j["ambiguous_instances"] = ambiguous;
  return j.dump(2) + "\n";
}

TrainingManifest TrainingManifest::from_json(std::string_view text) {
  json j = json::parse(text);
  TrainingManifest m;
  m.total = j.at("total").get<std::size_t>();
  m.per_pair_counts = j.at("per_pair_counts").get<std::map<std::string, std::size_t>>();
  m.per_kind_counts = j.at("per_kind_counts").get<std::map<std::string, std::size_t>>();
  m.seed = j.at("seed").get<std::uint64_t>();
  m.rng = j.at("rng").get<std::string>();
  m.digest = j.at("digest").at("sha256").get<std::string>();
  m.ambiguous = j.at("ambiguous_instances").get<std::size_t>();
  return m;
}

std::string render_training_text(const std::vector<InstructionInstance>& instances, std::uint64_t shuffle_seed) {
  std::vector<std::size_t> order(instances.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng rng(shuffle_seed);
  rng.shuffle(std::span<std::size_t>(order));
  std::size_t bytes = 0;
  for (const auto& inst : instances) bytes += inst.text.size() + 1;
  std::string out;
  out.reserve(bytes);
  for (auto i : order) {
    if (text::contains_newline(instances[i].text)) throw InputError("instance text contains a newline");
    out += instances[i].text;
    out += '\n';
  }
  return out;
}

TrainingManifest build_training_file(const std::vector<InstructionInstance>& instances, std::uint64_t shuffle_seed,
                                     const std::filesystem::path& out) {
  if (instances.empty()) throw InputError("no instances to write");
  std::string body = render_training_text(instances, shuffle_seed);
  io::write_file_atomic(out, body);
  TrainingManifest m;
  m.total = instances.size();
  for (const auto& inst : instances) {
    ++m.per_pair_counts[inst.pair_key()];
    ++m.per_kind_counts[std::string(to_string(inst.kind))];
    m.ambiguous += inst.ambiguous ? 1 : 0;
  }
  m.seed = shuffle_seed;
  m.rng = std::string(Rng::kAlgorithm);
  m.digest = sha256_hex(body);
  return m;
}

IclPrompt build_icl_prompt(const std::vector<ParallelSentence>& pool, std::string_view query, std::size_t k,
                           std::uint64_t seed) {
  check_text(query, "query");
  std::vector<std::size_t> eligible;
  for (std::size_t i = 0; i < pool.size(); ++i) {
    if (pool[i].src_text != query) eligible.push_back(i);
  }
  if (eligible.size() < k) {
    throw InputError("demonstration pool has " + std::to_string(eligible.size()) + " eligible sentences, need " +
                     std::to_string(k));
  }
  Rng rng(seed);
  IclPrompt p;
  p.query_src = std::string(query);
  for (auto j : sample_without_replacement(eligible.size(), k, rng)) {
    const auto& s = pool[eligible[j]];
    p.demonstrations.emplace_back(s.src_text, s.tgt_text);
    p.rendered += s.src_text + " = " + s.tgt_text + "\n";
  }
  p.rendered += p.query_src + " = ";
  return p;
}

}  // namespace mtkit
