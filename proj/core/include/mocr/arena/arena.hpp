#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mocr/elo/elo.hpp"
#include "mocr/judge/judge.hpp"

namespace mocr::arena {

/// One model's transcription of one document. The text may be empty (a
/// legal, losing-prone output); absence of a transcription is a task-level
/// error raised by the loader, not an empty candidate.
struct Candidate {
  std::string model;
  std::string transcription;
};

/// One scheduled comparison. Model order here is presentation order; the
/// battle key is order-independent.
struct BattleTask {
  std::string document;
  std::string model_a;
  std::string model_b;
};

struct PairingPlan {
  std::vector<BattleTask> tasks;
};

struct PairingStrategy {
  enum class Kind { kAllPairs, kSampled } kind = Kind::kAllPairs;
  std::size_t sample_count = 0;  // kSampled only
  std::uint64_t seed = 0;        // kSampled only
};

/// All-pairs: every unordered model pair for every document, in input
/// order. Sampled: `sample_count` distinct tasks drawn uniformly from that
/// set, deterministic per seed. Throws ConfigError on fewer than 2 models,
/// no documents, duplicate names, or an oversized sample.
PairingPlan schedule_pairs(std::span<const std::string> models,
                           std::span<const std::string> documents,
                           const PairingStrategy& strategy);

/// Hex digest of (document, unordered model pair); stable across label
/// swaps, used for resume bookkeeping.
std::string battle_key(std::string_view document, std::string_view model_a,
                       std::string_view model_b);

/// The consistency rule. `trial1` was judged with A presented first,
/// `trial2` with B presented first. A side scores a win only when both
/// trials prefer it; every tie or contradiction is 0.5.
double combine_trials(judge::TrialVerdict trial1, judge::TrialVerdict trial2);

struct BattleRecord {
  std::string key;
  std::string document;
  std::string model_a;
  std::string model_b;
  judge::TrialVerdict trial1 = judge::TrialVerdict::kTie;  // A presented first
  judge::TrialVerdict trial2 = judge::TrialVerdict::kTie;  // B presented first
  double score_a = 0.5;
  std::string raw1;  // judge responses, kept for audit
  std::string raw2;
  bool failed = false;   // judge gave no usable verdict; excluded from ratings
  std::string error;
};

/// Everything a battle needs at judge time.
struct BattleInputs {
  std::string document;
  Candidate a;
  Candidate b;
  std::vector<std::uint8_t> image_png;
};

/// Runs the two swapped-order trials and combines them. Judge failures
/// (TransportError, JudgeFailure) yield a record with `failed` set instead
/// of propagating; other exceptions propagate.
BattleRecord run_battle(const BattleInputs& inputs, judge::Judge& judge);

/// Append-only battle log, schema "mocr-arena/1", one checksummed JSON
/// record per line. Appends are single writes: a record is either fully
/// present or absent, so a crash costs at most the in-flight record.
class BattleLog {
 public:
  explicit BattleLog(std::string path);

  const std::string& path() const { return path_; }

  /// Parses all complete records; a missing file is an empty log. A
  /// trailing line without a newline is a crash artifact and is ignored;
  /// anything else that fails parsing or its checksum throws TextParseError
  /// with the line number.
  std::vector<BattleRecord> load() const;

  /// Writes one record line. A torn trailing line from an earlier crash is
  /// truncated first so the new record starts at a line boundary.
  void append(const BattleRecord& record);

 private:
  std::string path_;
};

/// One log line without the trailing newline; `parse_record` is its inverse
/// and verifies the checksum.
std::string serialize_record(const BattleRecord& record);
BattleRecord parse_record(std::string_view line, std::size_t line_number);

struct RunSummary {
  std::size_t scheduled = 0;
  std::size_t already_complete = 0;  // successful record existed before this run
  std::size_t succeeded = 0;
  std::size_t failed = 0;       // judge failures, recorded in the log
  std::size_t task_errors = 0;  // loader failures, nothing recorded
  std::vector<std::string> errors;

  bool clean() const { return failed == 0 && task_errors == 0; }
};

/// Materializes a task (reads transcriptions and the document image).
/// Throw Error subclasses for task-level problems.
using BattleLoader = std::function<BattleInputs(const BattleTask&)>;

/// Runs every task not yet completed in the log, up to `jobs` battles in
/// flight. Tasks whose previous attempts all failed are retried. Records
/// append in completion order under a single-writer lock; results do not
/// depend on that order.
RunSummary run_arena(const PairingPlan& plan, judge::Judge& judge, BattleLog& log,
                     const BattleLoader& loader, unsigned jobs = 1);

struct LeaderboardEntry {
  std::string model;
  elo::ModelDistribution rating;
  std::size_t battles = 0;  // non-failed battles involving this model
};

struct Leaderboard {
  std::vector<LeaderboardEntry> entries;  // mean descending, name ascending on ties
  std::size_t battles_used = 0;
  std::size_t battles_failed = 0;
};

/// Bootstrap ratings over the non-failed records. Throws Error when no
/// usable battles exist.
Leaderboard leaderboard(std::span<const BattleRecord> records, const elo::EloConfig& config,
                        std::uint32_t iterations, std::uint64_t seed);

}  // namespace mocr::arena
