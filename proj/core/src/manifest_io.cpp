#include "dadprune/manifest_io.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "dadprune/error.hpp"

namespace dadprune {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

constexpr std::string_view kFormatTag = "dadprune.manifest";
constexpr int kFormatVersion = 1;

[[noreturn]] void bad(const std::string& what) {
  throw Error(Errc::malformed_record, "manifest: " + what);
}

const json& field(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) bad(std::string("missing key '") + key + "'");
  return *it;
}

std::vector<std::string> string_list(const json& j, const char* key) {
  const json& arr = field(j, key);
  if (!arr.is_array()) bad(std::string("'") + key + "' is not an array");
  std::vector<std::string> out;
  out.reserve(arr.size());
  for (const auto& v : arr) {
    if (!v.is_string()) bad(std::string("'") + key + "' has a non-string entry");
    out.push_back(v.get<std::string>());
  }
  return out;
}

}  // namespace

std::string format_manifest(const PruneManifest& m) {
  ordered_json j;
  j["format"] = kFormatTag;
  j["format_version"] = kFormatVersion;
  j["engine_version"] = m.engine_version;
  j["strategy"] = strategy_name(m.strategy);
  j["fraction_pruned"] = m.fraction_pruned;
  j["scoring_epoch"] = m.scoring_epoch;
  j["metric"] = m.metric;
  j["seed"] = m.seed ? ordered_json(*m.seed) : ordered_json(nullptr);
  j["sample_count"] = m.kept.size() + m.dropped.size();
  j["kept_count"] = m.kept.size();
  ordered_json ranking = ordered_json::array();
  for (const auto& e : m.ranking) {
    ordered_json entry;
    entry["sample_id"] = e.sample_id;
    entry["score"] = e.score;
    ranking.push_back(std::move(entry));
  }
  j["ranking"] = std::move(ranking);
  j["kept"] = m.kept;
  j["dropped"] = m.dropped;
  return j.dump(2) + "\n";
}

PruneManifest parse_manifest(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    bad(std::string("not valid JSON: ") + e.what());
  }
  if (!j.is_object()) bad("top level is not an object");
  if (field(j, "format") != kFormatTag) bad("unrecognized format tag");
  if (field(j, "format_version") != kFormatVersion) bad("unsupported format_version");

  PruneManifest m;
  try {
    m.engine_version = field(j, "engine_version").get<std::string>();
    m.strategy = parse_strategy(field(j, "strategy").get<std::string>());
    m.fraction_pruned = field(j, "fraction_pruned").get<double>();
    m.scoring_epoch = field(j, "scoring_epoch").get<int>();
    m.metric = field(j, "metric").get<std::string>();
    const json& seed = field(j, "seed");
    if (!seed.is_null()) m.seed = seed.get<std::uint64_t>();
    for (const auto& e : field(j, "ranking")) {
      m.ranking.push_back({field(e, "sample_id").get<std::string>(), field(e, "score").get<double>()});
    }
  } catch (const json::exception& e) {
    bad(std::string("wrong value type: ") + e.what());
  } catch (const Error& e) {
    bad(e.message());
  }
  m.kept = string_list(j, "kept");
  m.dropped = string_list(j, "dropped");

  const std::size_t n = m.kept.size() + m.dropped.size();
  if (field(j, "sample_count") != n) bad("sample_count disagrees with kept + dropped");
  if (field(j, "kept_count") != m.kept.size()) bad("kept_count disagrees with kept");
  if (!(m.fraction_pruned >= 0.0 && m.fraction_pruned < 1.0)) bad("fraction_pruned outside [0, 1)");
  if (m.strategy == Strategy::random && !m.seed) bad("random strategy without a seed");

  std::set<std::string> kept(m.kept.begin(), m.kept.end());
  std::set<std::string> dropped(m.dropped.begin(), m.dropped.end());
  if (kept.size() != m.kept.size() || dropped.size() != m.dropped.size()) bad("duplicate sample ids");
  for (const auto& id : kept) {
    if (dropped.contains(id)) bad("sample '" + id + "' is both kept and dropped");
  }
  if (m.ranking.size() != n) bad("ranking size disagrees with kept + dropped");
  for (const auto& e : m.ranking) {
    if (!kept.contains(e.sample_id) && !dropped.contains(e.sample_id)) {
      bad("ranked sample '" + e.sample_id + "' is neither kept nor dropped");
    }
  }
  return m;
}

void write_manifest(const std::filesystem::path& path, const PruneManifest& manifest) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::io_failure, "cannot open '" + path.string() + "' for writing");
  out << format_manifest(manifest);
  if (!out) throw Error(Errc::io_failure, "write to '" + path.string() + "' failed");
}

PruneManifest read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io_failure, "cannot open manifest '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_manifest(ss.str());
}

}  // namespace dadprune
