#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace mocr::cli {

/// Documented, stable exit codes. Every command returns one of these; the
/// dispatcher maps uncaught errors onto the same set.
enum ExitCode : int {
  kOk = 0,
  kUnexpected = 1,  // a bug or an unclassified failure
  kConfig = 2,      // bad flags, bad config file, contradictory options
  kIo = 3,          // unreadable/unwritable/malformed files
  kPartial = 4,     // the run finished but some work failed or was invalid
};

struct ArenaRunOptions {
  std::string transcriptions_dir;  // <model>/<doc-id>.md
  std::string documents_dir;       // <doc-id>.png
  std::vector<std::string> models; // empty: every subdirectory of transcriptions_dir
  std::string log_path;
  std::string judge_spec = "mock:always-tie";
  std::string judge_url;
  std::string judge_model;
  std::string judge_api_path = "/v1/chat/completions";
  std::string judge_auth_env = "MOCR_JUDGE_API_KEY";
  std::string prompt_template_path;  // empty: built-in template
  double judge_timeout = 60.0;
  unsigned judge_retries = 3;
  double judge_backoff = 0.5;
  unsigned judge_in_flight = 4;
  double judge_rps = 0.0;
  std::size_t sample_count = 0;  // 0: all pairs
  std::uint64_t seed = 0;
  unsigned jobs = 1;
};
int run_arena_run(const ArenaRunOptions& options);

struct ArenaReportOptions {
  std::string log_path;
  std::string out_path;  // optional machine-readable export
  std::uint32_t iterations = 1000;
  std::uint64_t seed = 0;
  double initial_rating = 1000.0;
  double k_factor = 32.0;
  double scale = 400.0;
};
int run_arena_report(const ArenaReportOptions& options);

struct SvgPipelineOptions {
  std::string input_dir;
  std::string manifest_path;
  std::string selected_path;  // optional selected-pair list (JSONL)
  std::string domains_path;   // optional id -> domain JSON object
  std::string export_dir;     // optional canonical SVG + PNG export tree
  unsigned hash_size = 256;   // square raster edge used for perceptual hashing
  unsigned dedup_threshold = 6;
  std::size_t target = 0;  // 0: select every dedup survivor
  double max_domain_share = 1.0;
  std::vector<double> strata_boundaries;
  std::vector<double> strata_proportions;  // empty: uniform across strata
  std::uint64_t seed = 0;
};
int run_svg_pipeline(const SvgPipelineOptions& options);

struct ScoreOptions {
  std::string reference_path;  // PNG
  std::string predicted_path;  // SVG
};
int run_score(const ScoreOptions& options);

struct ParseValidateOptions {
  std::string input_path;  // one serialized document per line
};
int run_parse_validate(const ParseValidateOptions& options);

/// Reads a whole file; IoError when unreadable.
std::string read_file(const std::string& path);
std::vector<std::uint8_t> read_binary_file(const std::string& path);

}  // namespace mocr::cli
