#include <cstdio>
#include <exception>
#include <functional>
#include <iostream>
#include <stdexcept>

#include <CLI11.hpp>

#include "commands.hpp"
#include "mocr/common/error.hpp"

namespace {

using namespace mocr::cli;

void add_arena_run(CLI::App& arena, ArenaRunOptions& options,
                   std::function<int()>& command) {
  CLI::App* cmd = arena.add_subcommand(
      "run", "Judge all scheduled battles, appending to a resumable log");
  cmd->add_option("--transcriptions", options.transcriptions_dir,
                  "Directory laid out as <model>/<doc-id>.md");
  cmd->add_option("--documents", options.documents_dir,
                  "Directory of document images, <doc-id>.png");
  cmd->add_option("--models", options.models,
                  "Models to pair (default: every subdirectory of --transcriptions)")
      ->delimiter(',');
  cmd->add_option("--log", options.log_path, "Battle log to append to (JSONL)");
  cmd->add_option("--judge", options.judge_spec,
                  "\"http\" or \"mock:always-tie\", \"mock:always-first\", "
                  "\"mock:always-second\", \"mock:prefer-marker:TOKEN\"")->capture_default_str();
  cmd->add_option("--judge-url", options.judge_url, "Judge endpoint, scheme://host[:port]")
      ->envname("MOCR_JUDGE_URL");
  cmd->add_option("--judge-model", options.judge_model, "Model name sent to the judge")
      ->envname("MOCR_JUDGE_MODEL");
  cmd->add_option("--judge-path", options.judge_api_path, "Endpoint path")->capture_default_str();
  cmd->add_option("--judge-auth-env", options.judge_auth_env,
                  "Environment variable holding the bearer token")->capture_default_str();
  cmd->add_option("--judge-timeout", options.judge_timeout, "Request timeout, seconds")->capture_default_str();
  cmd->add_option("--judge-retries", options.judge_retries,
                  "Retries after the first attempt")->capture_default_str();
  cmd->add_option("--judge-backoff", options.judge_backoff,
                  "Base backoff, seconds (doubles per retry)")->capture_default_str();
  cmd->add_option("--judge-in-flight", options.judge_in_flight,
                  "Max concurrent judge requests")->capture_default_str();
  cmd->add_option("--judge-rps", options.judge_rps,
                  "Request rate limit per second (0 = unlimited)")->capture_default_str();
  cmd->add_option("--prompt-template", options.prompt_template_path,
                  "File with a custom prompt template ({{candidate_1}}, {{candidate_2}})");
  cmd->add_option("--sample", options.sample_count,
                  "Judge only this many randomly drawn pairings (default: all pairs)");
  cmd->add_option("--seed", options.seed, "Seed for sampled pairing")->capture_default_str();
  cmd->add_option("--jobs", options.jobs, "Battles to run concurrently")->capture_default_str()
      ->envname("MOCR_JOBS");
  cmd->callback([&command, &options] {
    command = [&options] { return run_arena_run(options); };
  });
}

void add_arena_report(CLI::App& arena, ArenaReportOptions& options,
                      std::function<int()>& command) {
  CLI::App* cmd =
      arena.add_subcommand("report", "Bootstrap ratings from a battle log");
  cmd->add_option("--log", options.log_path, "Battle log to rate (JSONL)");
  cmd->add_option("--out", options.out_path, "Write the leaderboard as JSON");
  cmd->add_option("--iterations", options.iterations, "Bootstrap iterations")->capture_default_str();
  cmd->add_option("--seed", options.seed, "Bootstrap seed")->capture_default_str();
  cmd->add_option("--initial-rating", options.initial_rating, "Starting rating")->capture_default_str();
  cmd->add_option("--k-factor", options.k_factor, "Update step size")->capture_default_str();
  cmd->add_option("--scale", options.scale, "Logistic scale")->capture_default_str();
  cmd->callback([&command, &options] {
    command = [&options] { return run_arena_report(options); };
  });
}

void add_svg_pipeline(CLI::App& svg, SvgPipelineOptions& options,
                      std::function<int()>& command) {
  CLI::App* cmd = svg.add_subcommand(
      "pipeline", "Canonicalize, hash, deduplicate and sample an SVG corpus");
  cmd->add_option("--input", options.input_dir, "Directory scanned recursively for .svg");
  cmd->add_option("--out-manifest", options.manifest_path,
                  "Manifest of deduplicated assets (JSONL)");
  cmd->add_option("--selected", options.selected_path,
                  "Selected image-SVG pair list (JSONL)");
  cmd->add_option("--domains", options.domains_path,
                  "JSON object mapping asset id to domain");
  cmd->add_option("--export-dir", options.export_dir,
                  "Write canonical SVGs and PNG renders of the selection here");
  cmd->add_option("--hash-size", options.hash_size,
                  "Square raster edge for perceptual hashing")->capture_default_str();
  cmd->add_option("--dedup-threshold", options.dedup_threshold,
                  "Max Hamming distance merged as near-duplicate")->capture_default_str();
  cmd->add_option("--target", options.target,
                  "Sample size (default 0: keep every survivor)");
  cmd->add_option("--max-domain-share", options.max_domain_share,
                  "Cap per domain as a fraction of --target")->capture_default_str();
  cmd->add_option("--strata-boundaries", options.strata_boundaries,
                  "Ascending path-command-count cut points")
      ->delimiter(',');
  cmd->add_option("--strata-proportions", options.strata_proportions,
                  "Share per stratum, must sum to 1 (default: uniform)")
      ->delimiter(',');
  cmd->add_option("--seed", options.seed, "Sampling seed")->capture_default_str();
  cmd->callback([&command, &options] {
    command = [&options] { return run_svg_pipeline(options); };
  });
}

void add_score(CLI::App& app, ScoreOptions& options, std::function<int()>& command) {
  CLI::App* cmd = app.add_subcommand(
      "score", "Render a predicted SVG and compare it to a reference image");
  cmd->add_option("--reference", options.reference_path, "Reference raster (PNG)");
  cmd->add_option("--predicted", options.predicted_path, "Predicted program (SVG)");
  cmd->callback([&command, &options] {
    command = [&options] { return run_score(options); };
  });
}

void add_parse_validate(CLI::App& parse, ParseValidateOptions& options,
                        std::function<int()>& command) {
  CLI::App* cmd = parse.add_subcommand(
      "validate", "Check serialized parsed documents against every invariant");
  cmd->add_option("--input", options.input_path, "File with one document record per line");
  cmd->callback([&command, &options] {
    command = [&options] { return run_parse_validate(options); };
  });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mocr: document-parsing evaluation toolkit"};
  app.set_config("--config", "", "Read option defaults from an INI/TOML file");
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.footer(
      "Exit codes: 0 success, 1 unexpected failure, 2 configuration error,\n"
      "3 input/output error, 4 completed with failures.\n"
      "Precedence: flags > config file > environment variables.");
  bool print_config = false;
  app.add_flag("--print-config", print_config,
               "Print the fully resolved configuration and exit");

  ArenaRunOptions run_options;
  ArenaReportOptions report_options;
  SvgPipelineOptions pipeline_options;
  ScoreOptions score_options;
  ParseValidateOptions validate_options;
  std::function<int()> command;

  CLI::App* arena = app.add_subcommand("arena", "Pairwise battles and Elo ratings");
  add_arena_run(*arena, run_options, command);
  add_arena_report(*arena, report_options, command);
  CLI::App* svg = app.add_subcommand("svg", "SVG corpus construction");
  add_svg_pipeline(*svg, pipeline_options, command);
  add_score(app, score_options, command);
  CLI::App* parse = app.add_subcommand("parse", "Parsed-document utilities");
  add_parse_validate(*parse, validate_options, command);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);  // prints help or the parse problem
    return code == 0 ? kOk : kConfig;
  }

  if (print_config) {
    std::cout << app.config_to_str(true, true);
    return kOk;
  }
  if (!command) {
    std::cout << app.help();
    return kConfig;
  }

  try {
    return command();
  } catch (const mocr::ConfigError& error) {
    std::fprintf(stderr, "mocr: %s\n", error.what());
    return kConfig;
  } catch (const std::invalid_argument& error) {
    std::fprintf(stderr, "mocr: %s\n", error.what());
    return kConfig;
  } catch (const mocr::IoError& error) {
    std::fprintf(stderr, "mocr: %s\n", error.what());
    return kIo;
  } catch (const mocr::TextParseError& error) {
    std::fprintf(stderr, "mocr: %s\n", error.what());
    return kIo;
  } catch (const mocr::Error& error) {
    std::fprintf(stderr, "mocr: %s\n", error.what());
    return kIo;
  } catch (const std::exception& error) {
    std::fprintf(stderr, "mocr: unexpected: %s\n", error.what());
    return kUnexpected;
  }
}
