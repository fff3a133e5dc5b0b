#include "mocr/arena/arena.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <unordered_map>
#include <unordered_set>
#include <utility>

#include <nlohmann/json.hpp>

#include "mocr/common/error.hpp"
#include "mocr/common/hash.hpp"
#include "mocr/common/rng.hpp"

namespace mocr::arena {

namespace {

constexpr std::string_view kSchema = "mocr-arena/1";

void require_distinct(std::span<const std::string> names, const char* what) {
  std::set<std::string_view> seen;
  for (const std::string& name : names)
    if (!seen.insert(name).second)
      throw ConfigError(std::string("duplicate ") + what + " \"" + name + "\"");
}

// JSON body of a record minus the checksum; the checksum covers exactly
// this serialization (nlohmann orders keys, so it is canonical).
nlohmann::json record_body(const BattleRecord& record) {
  return nlohmann::json{
      {"schema", kSchema},
      {"key", record.key},
      {"document", record.document},
      {"model_a", record.model_a},
      {"model_b", record.model_b},
      {"trial1", judge::verdict_name(record.trial1)},
      {"trial2", judge::verdict_name(record.trial2)},
      {"score_a", record.score_a},
      {"raw1", record.raw1},
      {"raw2", record.raw2},
      {"failed", record.failed},
      {"error", record.error},
  };
}

}  // namespace

PairingPlan schedule_pairs(std::span<const std::string> models,
                           std::span<const std::string> documents,
                           const PairingStrategy& strategy) {
  if (models.size() < 2) throw ConfigError("pairing requires at least 2 models");
  if (documents.empty()) throw ConfigError("pairing requires at least 1 document");
  require_distinct(models, "model");
  require_distinct(documents, "document");

  PairingPlan plan;
  plan.tasks.reserve(documents.size() * models.size() * (models.size() - 1) / 2);
  for (const std::string& document : documents)
    for (std::size_t i = 0; i < models.size(); ++i)
      for (std::size_t j = i + 1; j < models.size(); ++j)
        plan.tasks.push_back({document, models[i], models[j]});

  if (strategy.kind == PairingStrategy::Kind::kSampled) {
    if (strategy.sample_count == 0)
      throw ConfigError("sampled pairing requires a positive sample count");
    if (strategy.sample_count > plan.tasks.size())
      throw ConfigError("sample count " + std::to_string(strategy.sample_count) +
                        " exceeds the " + std::to_string(plan.tasks.size()) +
                        " available tasks");
    auto engine = rng::make_engine(rng::substream_seed(strategy.seed, 0));
    rng::fisher_yates(std::span<BattleTask>(plan.tasks), engine);
    plan.tasks.resize(strategy.sample_count);
  }
  return plan;
}

std::string battle_key(std::string_view document, std::string_view model_a,
                       std::string_view model_b) {
  const std::string_view lo = std::min(model_a, model_b);
  const std::string_view hi = std::max(model_a, model_b);
  std::string material;
  material.reserve(document.size() + lo.size() + hi.size() + 2);
  material.append(document);
  material.push_back('\n');
  material.append(lo);
  material.push_back('\n');
  material.append(hi);
  return to_hex(fnv1a64(material));
}

double combine_trials(judge::TrialVerdict trial1, judge::TrialVerdict trial2) {
  using judge::TrialVerdict;
  // trial1 presents A first, trial2 presents B first; a verdict only counts
  // when it survives the swap.
  const bool a_both = trial1 == TrialVerdict::kFirst && trial2 == TrialVerdict::kSecond;
  const bool b_both = trial1 == TrialVerdict::kSecond && trial2 == TrialVerdict::kFirst;
  if (a_both) return 1.0;
  if (b_both) return 0.0;
  return 0.5;
}

BattleRecord run_battle(const BattleInputs& inputs, judge::Judge& judge_client) {
  BattleRecord record;
  record.document = inputs.document;
  record.model_a = inputs.a.model;
  record.model_b = inputs.b.model;
  record.key = battle_key(inputs.document, inputs.a.model, inputs.b.model);

  judge::JudgeRequest trial1;
  trial1.image_png = inputs.image_png;
  trial1.first = inputs.a.transcription;
  trial1.second = inputs.b.transcription;
  judge::JudgeRequest trial2;
  trial2.image_png = inputs.image_png;
  trial2.first = inputs.b.transcription;
  trial2.second = inputs.a.transcription;

  try {
    const judge::JudgeResponse response1 = judge_client.judge(trial1);
    record.trial1 = response1.verdict;
    record.raw1 = response1.raw_text;
    const judge::JudgeResponse response2 = judge_client.judge(trial2);
    record.trial2 = response2.verdict;
    record.raw2 = response2.raw_text;
    record.score_a = combine_trials(record.trial1, record.trial2);
  } catch (const TransportError& error) {
    record.failed = true;
    record.error = error.what();
  } catch (const JudgeFailure& error) {
    record.failed = true;
    record.error = error.what();
  }
  return record;
}

std::string serialize_record(const BattleRecord& record) {
  nlohmann::json body = record_body(record);
  const std::uint32_t checksum = crc32_ieee(body.dump());
  body["crc"] = to_hex(checksum);
  return body.dump();
}

BattleRecord parse_record(std::string_view line, std::size_t line_number) {
  auto bad = [&](const std::string& why) -> TextParseError {
    return TextParseError("battle log line " + std::to_string(line_number) + ": " + why);
  };
  nlohmann::json parsed = nlohmann::json::parse(line, nullptr, false);
  if (parsed.is_discarded() || !parsed.is_object()) throw bad("not a JSON record");
  if (parsed.value("schema", "") != kSchema) throw bad("unsupported schema");
  if (!parsed.contains("crc") || !parsed["crc"].is_string()) throw bad("missing checksum");

  const std::string stored_crc = parsed["crc"].get<std::string>();
  parsed.erase("crc");
  const std::uint32_t actual = crc32_ieee(parsed.dump());
  if (to_hex(actual) != stored_crc) throw bad("checksum mismatch (corrupt record)");

  try {
    BattleRecord record;
    record.key = parsed.at("key").get<std::string>();
    record.document = parsed.at("document").get<std::string>();
    record.model_a = parsed.at("model_a").get<std::string>();
    record.model_b = parsed.at("model_b").get<std::string>();
    const auto trial = [&](const char* field) {
      const std::string name = parsed.at(field).get<std::string>();
      const std::optional<judge::TrialVerdict> verdict = judge::verdict_from(name);
      if (!verdict) throw bad(std::string("unknown verdict \"") + name + "\"");
      return *verdict;
    };
    record.trial1 = trial("trial1");
    record.trial2 = trial("trial2");
    record.score_a = parsed.at("score_a").get<double>();
    record.raw1 = parsed.at("raw1").get<std::string>();
    record.raw2 = parsed.at("raw2").get<std::string>();
    record.failed = parsed.at("failed").get<bool>();
    record.error = parsed.at("error").get<std::string>();
    if (!record.failed && record.score_a != combine_trials(record.trial1, record.trial2))
      throw bad("stored score contradicts the stored verdicts");
    return record;
  } catch (const nlohmann::json::exception& error) {
    throw bad(std::string("malformed record: ") + error.what());
  }
}

BattleLog::BattleLog(std::string path) : path_(std::move(path)) {}

std::vector<BattleRecord> BattleLog::load() const {
  std::ifstream in(path_, std::ios::binary);
  if (!in) return {};  // no log yet

  std::ostringstream buffer;
  buffer << in.rdbuf();
  const std::string content = buffer.str();

  std::vector<BattleRecord> records;
  std::size_t line_number = 0;
  std::size_t start = 0;
  while (start < content.size()) {
    const std::size_t end = content.find('\n', start);
    if (end == std::string::npos) break;  // trailing partial line: crash artifact
    ++line_number;
    const std::string_view line(content.data() + start, end - start);
    start = end + 1;
    if (line.empty()) continue;
    records.push_back(parse_record(line, line_number));
  }
  return records;
}

namespace {

/// A crash can leave a torn final line. Appending after it would glue the
/// next record onto the fragment and corrupt the log for good, so the
/// fragment (an incomplete record; its battle reruns) is cut back to the
/// last line boundary before new writes.
void truncate_torn_tail(const std::string& path) {
  std::ifstream probe(path, std::ios::binary | std::ios::ate);
  if (!probe) return;  // no log yet
  const auto size = static_cast<std::uint64_t>(probe.tellg());
  if (size == 0) return;
  std::uint64_t keep = size;
  for (; keep > 0; --keep) {
    probe.seekg(static_cast<std::streamoff>(keep - 1));
    char byte = 0;
    probe.get(byte);
    if (byte == '\n') break;
  }
  if (keep == size) return;  // clean tail
  probe.close();
  std::error_code ec;
  std::filesystem::resize_file(path, keep, ec);
  if (ec) throw IoError("cannot truncate torn battle log line: " + path + ": " + ec.message());
}

}  // namespace

void BattleLog::append(const BattleRecord& record) {
  truncate_torn_tail(path_);
  std::ofstream out(path_, std::ios::binary | std::ios::app);
  if (!out) throw IoError("cannot open battle log for append: " + path_);
  // One buffered write per record keeps partially-written records confined
  // to process death mid-call; load() tolerates exactly that.
  out << (serialize_record(record) + "\n") << std::flush;
  if (!out) throw IoError("failed appending to battle log: " + path_);
}

RunSummary run_arena(const PairingPlan& plan, judge::Judge& judge_client, BattleLog& log,
                     const BattleLoader& loader, unsigned jobs) {
  if (jobs < 1) throw ConfigError("run_arena requires at least one job");

  std::unordered_set<std::string> completed;
  for (const BattleRecord& record : log.load())
    if (!record.failed) completed.insert(record.key);

  RunSummary summary;
  summary.scheduled = plan.tasks.size();

  std::vector<const BattleTask*> pending;
  for (const BattleTask& task : plan.tasks) {
    if (completed.contains(battle_key(task.document, task.model_a, task.model_b)))
      ++summary.already_complete;
    else
      pending.push_back(&task);
  }

  std::mutex mutex;  // guards log appends and the summary
  std::size_t next = 0;

  auto worker = [&] {
    for (;;) {
      const BattleTask* task;
      {
        std::lock_guard lock(mutex);
        if (next >= pending.size()) return;
        task = pending[next++];
      }
      try {
        const BattleInputs inputs = loader(*task);
        BattleRecord record = run_battle(inputs, judge_client);
        std::lock_guard lock(mutex);
        log.append(record);
        if (record.failed) {
          ++summary.failed;
          summary.errors.push_back("battle " + record.key + " (" + task->document + ", " +
                                   task->model_a + " vs " + task->model_b +
                                   "): " + record.error);
        } else {
          ++summary.succeeded;
        }
      } catch (const Error& error) {
        std::lock_guard lock(mutex);
        ++summary.task_errors;
        summary.errors.push_back("task (" + task->document + ", " + task->model_a + " vs " +
                                 task->model_b + "): " + error.what());
      }
    }
  };

  if (jobs == 1 || pending.size() <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    const unsigned n = std::min<std::size_t>(jobs, pending.size());
    pool.reserve(n);
    for (unsigned i = 0; i < n; ++i) pool.emplace_back(worker);
    for (std::thread& thread : pool) thread.join();
  }
  return summary;
}

Leaderboard leaderboard(std::span<const BattleRecord> records, const elo::EloConfig& config,
                        std::uint32_t iterations, std::uint64_t seed) {
  std::vector<elo::BattleOutcome> outcomes;
  std::unordered_map<std::string, std::size_t> battle_counts;
  Leaderboard board;
  for (const BattleRecord& record : records) {
    if (record.failed) {
      ++board.battles_failed;
      continue;
    }
    outcomes.push_back({record.model_a, record.model_b, record.score_a});
    ++battle_counts[record.model_a];
    ++battle_counts[record.model_b];
  }
  if (outcomes.empty()) throw Error("no battles to rate (log empty or all failed)");
  board.battles_used = outcomes.size();

  const elo::BootstrapResult bootstrap = elo::bootstrap(outcomes, config, iterations, seed);
  for (const auto& [model, distribution] : bootstrap.models)
    board.entries.push_back({model, distribution, battle_counts[model]});
  std::sort(board.entries.begin(), board.entries.end(),
            [](const LeaderboardEntry& a, const LeaderboardEntry& b) {
              if (a.rating.mean != b.rating.mean) return a.rating.mean > b.rating.mean;
              return a.model < b.model;
            });
  return board;
}

}  // namespace mocr::arena
