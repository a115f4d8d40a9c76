#include "dadprune/score_stream.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <ostream>

#include <json.hpp>

#include "dadprune/ddt1.hpp"
#include "dadprune/error.hpp"
#include "dadprune/metrics.hpp"

namespace dadprune {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

std::string format_score_line(const ScoreRecord& record) {
  ordered_json j;
  j["sample_id"] = record.sample_id;
  j["epoch"] = record.epoch;
  j["dice"] = record.dice;
  for (const auto& [name, value] : record.extras) j[name] = value;
  return j.dump();
}

ScoreRecord parse_score_line(std::string_view line, std::size_t line_no) {
  const std::string where = " (line " + std::to_string(line_no) + ")";
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    throw Error(Errc::malformed_record, std::string("not valid JSON: ") + e.what() + where);
  }
  if (!j.is_object()) throw Error(Errc::malformed_record, "line is not a JSON object" + where);

  ScoreRecord r;
  auto id = j.find("sample_id");
  if (id == j.end() || !id->is_string()) {
    throw Error(Errc::malformed_record, "missing string key 'sample_id'" + where);
  }
  r.sample_id = id->get<std::string>();
  auto epoch = j.find("epoch");
  if (epoch == j.end() || !epoch->is_number_integer()) {
    throw Error(Errc::malformed_record, "missing integer key 'epoch'" + where);
  }
  const auto e = epoch->get<std::int64_t>();
  if (e < 0 || e > std::numeric_limits<int>::max()) {
    throw Error(Errc::out_of_range, "epoch " + std::to_string(e) + " out of range" + where);
  }
  r.epoch = static_cast<int>(e);
  auto dice = j.find("dice");
  if (dice == j.end() || !dice->is_number()) {
    throw Error(Errc::malformed_record, "missing numeric key 'dice'" + where);
  }
  r.dice = dice->get<double>();
  if (!(r.dice >= 0.0 && r.dice <= 1.0)) {
    throw Error(Errc::out_of_range, "dice " + std::to_string(r.dice) + " is outside [0, 1]" + where);
  }
  for (const auto& [key, value] : j.items()) {
    if (key == "sample_id" || key == "epoch" || key == "dice") continue;
    if (!value.is_number()) {
      throw Error(Errc::malformed_record, "metric '" + key + "' is not a number" + where);
    }
    r.extras.emplace(key, value.get<double>());
  }
  return r;
}

void ScoreStreamReader::feed(std::string_view chunk) {
  if (finished_) throw Error(Errc::invalid_value, "feed() after finish()");
  pending_.append(chunk);
  std::size_t start = 0;
  for (std::size_t nl; (nl = pending_.find('\n', start)) != std::string::npos; start = nl + 1) {
    ++line_no_;
    consume_line(std::string_view(pending_).substr(start, nl - start));
  }
  pending_.erase(0, start);
}

void ScoreStreamReader::consume_line(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  if (line.find_first_not_of(" \t") == std::string_view::npos) return;
  builder_.add(parse_score_line(line, line_no_), line_no_);
}

void ScoreStreamReader::finish() {
  if (finished_) return;
  finished_ = true;
  if (pending_.find_first_not_of(" \t\r") == std::string::npos) {
    pending_.clear();
    return;
  }
  ++line_no_;
  const std::string tail = std::move(pending_);
  pending_.clear();
  try {
    consume_line(tail);
  } catch (const Error& e) {
    if (e.code() != Errc::malformed_record) throw;
    warnings_.push_back("truncated final line " + std::to_string(line_no_) +
                        " ignored; all earlier records retained");
  }
}

IngestResult ScoreStreamReader::result() const {
  IngestResult out;
  out.store = builder_.finalize();
  out.warnings = warnings_;
  out.records = builder_.record_count();
  const auto partial = out.store.partial_epochs();
  if (!partial.empty()) {
    std::string list;
    for (std::size_t i = 0; i < partial.size(); ++i) list += (i ? ", " : "") + std::to_string(partial[i]);
    out.warnings.push_back("partial epochs excluded from analysis: [" + list + "]");
  }
  return out;
}

IngestResult ingest_scores(std::istream& in) {
  ScoreStreamReader reader;
  std::string buffer(1 << 16, '\0');
  while (in) {
    in.read(buffer.data(), static_cast<std::streamsize>(buffer.size()));
    const auto got = static_cast<std::size_t>(in.gcount());
    if (got == 0) break;
    reader.feed(std::string_view(buffer.data(), got));
  }
  reader.finish();
  return reader.result();
}

IngestResult ingest_scores(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io_failure, "cannot open score stream '" + path.string() + "'");
  return ingest_scores(in);
}

void write_score_lines(std::ostream& out, const std::vector<ScoreRecord>& records) {
  for (const auto& r : records) out << format_score_line(r) << '\n';
}

void append_score_lines(const fs::path& path, const std::vector<ScoreRecord>& records) {
  std::ofstream out(path, std::ios::binary | std::ios::app);
  if (!out) throw Error(Errc::io_failure, "cannot open '" + path.string() + "' for appending");
  write_score_lines(out, records);
  out.flush();
  if (!out) throw Error(Errc::io_failure, "append to '" + path.string() + "' failed");
}

namespace {

std::map<std::string, fs::path> list_volumes(const fs::path& dir) {
  if (!fs::is_directory(dir)) {
    throw Error(Errc::io_failure, "'" + dir.string() + "' is not a directory");
  }
  std::map<std::string, fs::path> out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".ddt1") {
      out.emplace(entry.path().filename().string(), entry.path());
    }
  }
  return out;
}

}  // namespace

ScoreVolumesResult score_volumes(const fs::path& pred_dir, const fs::path& truth_dir, int epoch) {
  const auto preds = list_volumes(pred_dir);
  const auto truths = list_volumes(truth_dir);
  for (const auto& [name, path] : preds) {
    if (!truths.contains(name)) {
      throw Error(Errc::unmatched_file, "prediction '" + path.string() + "' has no matching label in '" +
                                            truth_dir.string() + "'");
    }
  }
  for (const auto& [name, path] : truths) {
    if (!preds.contains(name)) {
      throw Error(Errc::unmatched_file, "label '" + path.string() + "' has no matching prediction in '" +
                                            pred_dir.string() + "'");
    }
  }

  ScoreVolumesResult out;
  if (preds.empty()) {
    out.warnings.push_back("no .ddt1 volumes found; nothing scored");
    return out;
  }
  for (const auto& [name, pred_path] : preds) {
    const auto truth_any = read_volume(truths.at(name));
    const auto* truth = std::get_if<MaskVolume>(&truth_any);
    if (!truth) {
      throw Error(Errc::bad_dtype, "label '" + truths.at(name).string() + "' is not a mask volume");
    }
    ScoreRecord r;
    r.sample_id = fs::path(name).stem().string();
    r.epoch = epoch;
    const auto pred_any = read_volume(pred_path);
    if (const auto* mask = std::get_if<MaskVolume>(&pred_any)) {
      r.dice = dice(*mask, *truth);
    } else {
      const auto& probs = std::get<ProbabilityVolume>(pred_any);
      r.dice = dice(probs, *truth);
      r.extras["el2n"] = el2n(probs, *truth);
      if (truth->foreground_count() > 0) r.extras["el2nx"] = el2nx(probs, *truth);
    }
    out.records.push_back(std::move(r));
  }
  return out;
}

}  // namespace dadprune
