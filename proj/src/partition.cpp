#include "mtkit/partition.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include <json.hpp>

#include "mtkit/error.hpp"
#include "mtkit/io.hpp"

namespace mtkit {

using nlohmann::json;

std::string_view to_string(Condition c) {
  switch (c) {
    case Condition::SameDirection: return "SameDirection";
    case Condition::ReversedDirection: return "ReversedDirection";
    case Condition::UnseenDirection: return "UnseenDirection";
    case Condition::UnseenSrc: return "UnseenSrc";
    case Condition::UnseenTgt: return "UnseenTgt";
    case Condition::UnseenBoth: return "UnseenBoth";
  }
  return "?";
}

Condition parse_condition(std::string_view name) {
  for (auto c : kAllConditions) {
    if (to_string(c) == name) return c;
  }
  throw InputError("unknown condition '" + std::string(name) + "'");
}

std::set<LanguageCode> PartitionSpec::languages() const {
  std::set<LanguageCode> all = unseen;
  all.insert(only_source.begin(), only_source.end());
  all.insert(only_target.begin(), only_target.end());
  all.insert(source_target.begin(), source_target.end());
  return all;
}

bool PartitionSpec::contains(const LanguageCode& l) const {
  return unseen.count(l) || only_source.count(l) || only_target.count(l) || source_target.count(l);
}

namespace {

json codes_json(const std::set<LanguageCode>& s) {
  json a = json::array();
  for (const auto& c : s) a.push_back(c.str());
  return a;
}

}  // namespace

std::string PartitionSpec::to_json() const {
  json j;
  j["name"] = name;
  if (!note.empty()) j["note"] = note;
  j["unseen"] = codes_json(unseen);
  j["only_source"] = codes_json(only_source);
  j["only_target"] = codes_json(only_target);
  j["source_target"] = codes_json(source_target);
  j["train_pairs"] = json::array();
  for (const auto& p : train_pairs) j["train_pairs"].push_back(p.str());
  return j.dump(2) + "\n";
}

void validate_partition(const PartitionSpec& spec) {
  const std::set<LanguageCode>* groups[] = {&spec.unseen, &spec.only_source, &spec.only_target, &spec.source_target};
  const char* names[] = {"unseen", "only_source", "only_target", "source_target"};
  for (int a = 0; a < 4; ++a) {
    for (int b = a + 1; b < 4; ++b) {
      for (const auto& l : *groups[a]) {
        if (groups[b]->count(l)) {
          throw InputError("language '" + l.str() + "' is in both " + names[a] + " and " + names[b]);
        }
      }
    }
  }
  for (const auto& p : spec.train_pairs) {
    if (p.source == p.target) throw InputError("pair " + p.str() + " has identical languages");
    if (!spec.contains(p.source)) throw InputError("pair " + p.str() + ": '" + p.source.str() + "' has no role");
    if (!spec.contains(p.target)) throw InputError("pair " + p.str() + ": '" + p.target.str() + "' has no role");
    if (spec.unseen.count(p.source) || spec.unseen.count(p.target)) {
      throw InputError("pair " + p.str() + " uses a held-out language");
    }
    if (spec.only_target.count(p.source)) {
      throw InputError("pair " + p.str() + ": only-target language '" + p.source.str() + "' on the source side");
    }
    if (spec.only_source.count(p.target)) {
      throw InputError("pair " + p.str() + ": only-source language '" + p.target.str() + "' on the target side");
    }
  }
}

PartitionSpec build_partition(const std::vector<LanguageCode>& registry, const std::set<LanguageCode>& unseen,
                              const std::set<LanguageCode>& only_source, const std::set<LanguageCode>& only_target,
                              const std::vector<LanguagePair>& pairs, std::string name) {
  std::set<LanguageCode> known(registry.begin(), registry.end());
  for (const auto* group : {&unseen, &only_source, &only_target}) {
    for (const auto& l : *group) {
      if (!known.count(l)) throw UnknownLanguageError(l.str());
    }
  }
  PartitionSpec spec;
  spec.name = std::move(name);
  spec.unseen = unseen;
  spec.only_source = only_source;
  spec.only_target = only_target;
  for (const auto& l : registry) {
    if (!unseen.count(l) && !only_source.count(l) && !only_target.count(l)) spec.source_target.insert(l);
  }
  // Overlaps between the explicit groups would otherwise be hidden by the derivation above.
  for (const auto& l : unseen) {
    if (only_source.count(l) || only_target.count(l)) {
      throw InputError("language '" + l.str() + "' is both held out and assigned a role");
    }
  }
  for (const auto& l : only_source) {
    if (only_target.count(l)) throw InputError("language '" + l.str() + "' is in both only_source and only_target");
  }
  for (const auto& p : pairs) {
    if (!known.count(p.source)) throw UnknownLanguageError(p.source.str());
    if (!known.count(p.target)) throw UnknownLanguageError(p.target.str());
    if (!spec.train_pairs.insert(p).second) throw InputError("duplicate training pair " + p.str());
  }
  validate_partition(spec);
  return spec;
}

namespace {

std::set<LanguageCode> read_codes(const json& j, const char* key, const LanguageRegistry& registry) {
  std::set<LanguageCode> out;
  if (!j.contains(key)) return out;
  for (const auto& v : j.at(key)) {
    LanguageCode c(v.get<std::string>());
    registry.require(c);
    if (!out.insert(c).second) throw InputError(std::string("duplicate '") + c.str() + "' in " + key);
  }
  return out;
}

}  // namespace

PartitionSpec parse_partition(std::string_view json_text, const LanguageRegistry& registry) {
  json j = json::parse(json_text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw InputError("partition config is not a JSON object");
  try {
    PartitionSpec spec;
    spec.name = j.value("name", "");
    spec.note = j.value("note", "");
    spec.unseen = read_codes(j, "unseen", registry);
    spec.only_source = read_codes(j, "only_source", registry);
    spec.only_target = read_codes(j, "only_target", registry);
    spec.source_target = read_codes(j, "source_target", registry);
    for (const auto& p : j.at("train_pairs")) {
      LanguagePair pair = p.is_string() ? LanguagePair::parse(p.get<std::string>())
                                        : LanguagePair{LanguageCode(p.at(0).get<std::string>()),
                                                       LanguageCode(p.at(1).get<std::string>())};
      registry.require(pair.source);
      registry.require(pair.target);
      if (!spec.train_pairs.insert(pair).second) throw InputError("duplicate training pair " + pair.str());
    }
    validate_partition(spec);
    return spec;
  } catch (const json::exception& e) {
    throw InputError(std::string("partition config: ") + e.what());
  }
}

PartitionSpec load_partition(const std::filesystem::path& path, const LanguageRegistry& registry) {
  return parse_partition(io::read_file(path), registry);
}

std::vector<LanguagePair> enumerate_directions(const std::set<LanguageCode>& langs) {
  std::vector<LanguagePair> out;
  out.reserve(langs.size() * (langs.size() ? langs.size() - 1 : 0));
  for (const auto& s : langs) {
    for (const auto& t : langs) {
      if (s != t) out.push_back({s, t});
    }
  }
  return out;
}

std::vector<LanguagePair> enumerate_directions(const std::vector<LanguageCode>& langs) {
  std::set<LanguageCode> unique(langs.begin(), langs.end());
  if (unique.size() != langs.size()) throw InputError("duplicate language in direction list");
  return enumerate_directions(unique);
}

Condition classify(const PartitionSpec& spec, const LanguagePair& dir) {
  if (!spec.contains(dir.source)) throw UnknownLanguageError(dir.source.str());
  if (!spec.contains(dir.target)) throw UnknownLanguageError(dir.target.str());
  if (spec.train_pairs.count(dir)) return Condition::SameDirection;
  if (spec.train_pairs.count(dir.reversed())) return Condition::ReversedDirection;
  bool src_seen = false, tgt_seen = false;
  for (const auto& p : spec.train_pairs) {
    src_seen = src_seen || p.source == dir.source || p.target == dir.source;
    tgt_seen = tgt_seen || p.source == dir.target || p.target == dir.target;
  }
  if (src_seen && tgt_seen) return Condition::UnseenDirection;
  if (tgt_seen) return Condition::UnseenSrc;
  if (src_seen) return Condition::UnseenTgt;
  return Condition::UnseenBoth;
}

PartitionSpec extend_partition(const PartitionSpec& base, const std::vector<LanguagePair>& extra, std::string name) {
  PartitionSpec spec = base;
  spec.name = std::move(name);
  for (const auto& p : extra) {
    for (const auto& l : {p.source, p.target}) {
      if (!spec.contains(l)) spec.source_target.insert(l);
    }
    if (!spec.train_pairs.insert(p).second) throw InputError("pair " + p.str() + " is already in " + base.name);
  }
  validate_partition(spec);
  return spec;
}

std::vector<PartitionSpec> load_scaling_snapshots(const std::filesystem::path& path,
                                                  const LanguageRegistry& registry) {
  json j = json::parse(io::read_file(path), nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw InputError(path.string() + ": not a JSON object");
  try {
    auto base = load_partition(path.parent_path() / j.at("base").get<std::string>(), registry);
    std::vector<LanguagePair> order;
    for (const auto& p : j.at("extension_order")) {
      auto pair = LanguagePair::parse(p.get<std::string>());
      registry.require(pair.source);
      registry.require(pair.target);
      order.push_back(pair);
    }
    auto stem = base.name;
    while (!stem.empty() && std::isdigit(static_cast<unsigned char>(stem.back()))) stem.pop_back();
    if (stem.size() == base.name.size()) stem += "-";
    std::vector<PartitionSpec> out{base};
    std::size_t used = 0;
    for (const auto& size_json : j.at("snapshots")) {
      auto size = size_json.get<std::size_t>();
      const auto& prev = out.back();
      if (size <= prev.train_pairs.size()) throw InputError("snapshot sizes must increase");
      std::size_t need = size - prev.train_pairs.size();
      if (used + need > order.size()) {
        throw InputError("extension_order too short for snapshot of " + std::to_string(size) + " pairs");
      }
      std::vector<LanguagePair> extra(order.begin() + used, order.begin() + used + need);
      used += need;
      out.push_back(extend_partition(prev, extra, stem + std::to_string(size)));
    }
    return out;
  } catch (const json::exception& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

std::string condition_matrix_tsv(const PartitionSpec& spec, const std::vector<LanguageCode>& langs) {
  std::ostringstream out;
  out << "src\\tgt";
  for (const auto& t : langs) out << '\t' << t.str();
  out << '\n';
  for (const auto& s : langs) {
    out << s.str();
    for (const auto& t : langs) {
      out << '\t' << (s == t ? std::string_view("-") : to_string(classify(spec, {s, t})));
    }
    out << '\n';
  }
  return out.str();
}

PartitionSpec all_pairs_partition(const std::vector<LanguageCode>& langs, std::string name) {
  return build_partition(langs, {}, {}, {}, enumerate_directions(langs), std::move(name));
}

}  // namespace mtkit
