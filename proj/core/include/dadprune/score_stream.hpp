#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "dadprune/trajectory.hpp"

namespace dadprune {

// Score stream: one JSON object per line,
//   {"sample_id":"case_007","epoch":12,"dice":0.8125,"el2nx":0.21}
// sample_id, epoch and dice are required; any other numeric key is kept as a
// named extra metric. Lines are appended in (epoch, arrival) order.

/// Serializes one record as a line (without the trailing newline). Keys come
/// out as sample_id, epoch, dice, then extras sorted by name.
std::string format_score_line(const ScoreRecord& record);

/// Parses one line. `line_no` is only used in diagnostics.
ScoreRecord parse_score_line(std::string_view line, std::size_t line_no = 0);

struct IngestResult {
  TrajectoryStore store;
  std::vector<std::string> warnings;
  std::size_t records = 0;
};

/// Incremental reader. Bytes can arrive in arbitrary chunks; only
/// newline-terminated lines are consumed until finish() is called, so a
/// reader following a file that is still being written stops at the last
/// complete line.
class ScoreStreamReader {
 public:
  void feed(std::string_view chunk);
  /// Handles a final unterminated line: kept if it parses, otherwise
  /// reported as truncated. Earlier records are never affected.
  void finish();

  std::size_t lines_read() const noexcept { return line_no_; }
  std::size_t records() const noexcept { return builder_.record_count(); }
  const std::vector<std::string>& warnings() const noexcept { return warnings_; }

  /// Finalizes the store and appends a warning for partial epochs.
  IngestResult result() const;

 private:
  void consume_line(std::string_view line);

  TrajectoryBuilder builder_;
  std::string pending_;
  std::size_t line_no_ = 0;
  bool finished_ = false;
  std::vector<std::string> warnings_;
};

IngestResult ingest_scores(std::istream& in);
IngestResult ingest_scores(const std::filesystem::path& path);

/// Appends lines to `path`, creating it if needed.
void append_score_lines(const std::filesystem::path& path, const std::vector<ScoreRecord>& records);
void write_score_lines(std::ostream& out, const std::vector<ScoreRecord>& records);

struct ScoreVolumesResult {
  std::vector<ScoreRecord> records;
  std::vector<std::string> warnings;
};

/// Pairs `<stem>.ddt1` files across the two directories (stem = sample id)
/// and scores each pair at `epoch`. Records come out sorted by file name.
/// Probability predictions are thresholded for dice and also get el2n (and
/// el2nx when the label has foreground).
ScoreVolumesResult score_volumes(const std::filesystem::path& pred_dir,
                                 const std::filesystem::path& truth_dir, int epoch);

}  // namespace dadprune
