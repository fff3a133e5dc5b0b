#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <string_view>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "commands.hpp"
#include "mocr/common/error.hpp"
#include "mocr/render/bitmap.hpp"
#include "mocr/render/phash.hpp"
#include "mocr/render/renderer.hpp"
#include "mocr/svg/asset.hpp"
#include "mocr/svg/canonical.hpp"
#include "mocr/svg/dedup.hpp"
#include "mocr/svg/metrics.hpp"
#include "mocr/svg/sample.hpp"

namespace mocr::cli {

namespace fs = std::filesystem;

namespace {

std::vector<fs::path> discover_svgs(const fs::path& root) {
  std::vector<fs::path> files;
  for (const fs::directory_entry& entry : fs::recursive_directory_iterator(root))
    if (entry.is_regular_file() && entry.path().extension() == ".svg")
      files.push_back(fs::relative(entry.path(), root));
  std::sort(files.begin(), files.end());
  return files;
}

std::unordered_map<std::string, std::string> load_domain_map(const std::string& path) {
  std::unordered_map<std::string, std::string> domains;
  if (path.empty()) return domains;
  const nlohmann::json parsed = nlohmann::json::parse(read_file(path), nullptr, false);
  if (parsed.is_discarded() || !parsed.is_object())
    throw TextParseError("domain map " + path + " is not a JSON object");
  for (const auto& [id, domain] : parsed.items()) {
    if (!domain.is_string())
      throw TextParseError("domain map " + path + ": value for \"" + id +
                           "\" is not a string");
    domains.emplace(id, domain.get<std::string>());
  }
  return domains;
}

void write_text_file(const fs::path& path, std::string_view content) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << content;
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace

int run_svg_pipeline(const SvgPipelineOptions& options) {
  if (options.input_dir.empty()) throw ConfigError("svg pipeline: --input is required");
  if (options.manifest_path.empty())
    throw ConfigError("svg pipeline: --out-manifest is required");
  if (options.hash_size < 32)
    throw ConfigError("svg pipeline: --hash-size must be at least 32");
  if (!fs::is_directory(options.input_dir))
    throw IoError("svg pipeline: not a directory: " + options.input_dir);

  const fs::path root(options.input_dir);
  const std::vector<fs::path> files = discover_svgs(root);
  if (files.empty()) throw IoError("svg pipeline: no .svg assets in " + options.input_dir);
  const auto domains = load_domain_map(options.domains_path);

  std::vector<svg::SvgAsset> assets;
  std::vector<std::string> clean_failures;
  std::vector<std::string> render_failures;
  for (const fs::path& file : files) {
    fs::path id_path = file;
    id_path.replace_extension();
    svg::SvgAsset asset;
    asset.id = id_path.generic_string();
    asset.path = (root / file).generic_string();
    const auto domain = domains.find(asset.id);
    asset.domain = domain == domains.end() ? "unknown" : domain->second;

    try {
      asset.canonical_text = svg::canonicalize(read_file(asset.path));
      asset.metrics = svg::complexity(asset.canonical_text);
      asset.fingerprint = svg::fingerprint_of(asset.canonical_text);
    } catch (const Error& error) {
      clean_failures.push_back(asset.id + ": " + error.what());
      continue;
    }
    try {
      const render::Bitmap bitmap =
          render::render(asset.canonical_text, options.hash_size, options.hash_size);
      asset.phash = render::phash(bitmap);
      asset.render_ok = true;
    } catch (const Error& error) {
      render_failures.push_back(asset.id + ": " + error.what());
    }
    assets.push_back(std::move(asset));
  }
  if (assets.empty())
    throw IoError("svg pipeline: every asset failed canonicalization");

  const svg::DedupReport dedup_report = svg::dedup(assets, options.dedup_threshold);
  std::set<std::string> keep;
  for (const svg::DedupCluster& cluster : dedup_report.clusters)
    keep.insert(cluster.representative);
  std::vector<svg::SvgAsset> survivors;
  for (svg::SvgAsset& asset : assets)
    if (keep.contains(asset.id)) survivors.push_back(std::move(asset));

  std::vector<std::string> selected;
  std::size_t shortfall = 0;
  if (options.target > 0) {
    svg::SamplingSpec spec;
    spec.target_size = options.target;
    spec.seed = options.seed;
    spec.max_domain_share = options.max_domain_share;
    spec.strata_boundaries = options.strata_boundaries;
    if (options.strata_proportions.empty()) {
      const std::size_t strata = options.strata_boundaries.size() + 1;
      spec.strata_proportions.assign(strata, 1.0 / static_cast<double>(strata));
    } else {
      spec.strata_proportions = options.strata_proportions;
    }
    const svg::SampleResult result = svg::sample(survivors, spec);
    selected = result.ids;
    shortfall = result.shortfall;
  } else {
    for (const svg::SvgAsset& asset : survivors) selected.push_back(asset.id);
  }

  svg::write_manifest(options.manifest_path, survivors);

  std::unordered_map<std::string, const svg::SvgAsset*> by_id;
  for (const svg::SvgAsset& asset : survivors) by_id.emplace(asset.id, &asset);

  if (!options.selected_path.empty()) {
    std::ofstream out(options.selected_path, std::ios::binary);
    if (!out) throw IoError("svg pipeline: cannot write " + options.selected_path);
    for (const std::string& id : selected) {
      const svg::SvgAsset& asset = *by_id.at(id);
      std::string svg_out;
      std::string image_out;
      if (!options.export_dir.empty()) {
        const fs::path svg_path = fs::path(options.export_dir) / "svg" / (id + ".svg");
        write_text_file(svg_path, asset.canonical_text);
        svg_out = svg_path.generic_string();
        if (asset.render_ok) {
          const fs::path png_path = fs::path(options.export_dir) / "png" / (id + ".png");
          fs::create_directories(png_path.parent_path());
          const render::Bitmap bitmap =
              render::render(asset.canonical_text, options.hash_size, options.hash_size);
          render::write_png(bitmap, png_path.string());
          image_out = png_path.generic_string();
        }
      }
      const nlohmann::json line{
          {"schema", "mocr-pair/1"}, {"id", asset.id},   {"domain", asset.domain},
          {"source", asset.path},    {"svg", svg_out},   {"image", image_out},
      };
      out << line.dump() << "\n";
    }
    if (!out) throw IoError("svg pipeline: failed writing " + options.selected_path);
  }

  std::printf("discovered:     %zu\n", files.size());
  std::printf("canonicalized:  %zu (%zu failed)\n", assets.size(), clean_failures.size());
  std::printf("hashed:         %zu (%zu render failures kept code-only)\n",
              assets.size() - render_failures.size(), render_failures.size());
  std::printf("deduplicated:   %zu -> %zu (%zu merges)\n", assets.size(), survivors.size(),
              dedup_report.merges.size());
  if (options.target > 0)
    std::printf("sampled:        %zu of %zu (shortfall %zu)\n", selected.size(),
                survivors.size(), shortfall);
  else
    std::printf("selected:       all %zu survivors\n", selected.size());
  for (const std::string& failure : clean_failures)
    std::printf("  - clean: %s\n", failure.c_str());
  for (const std::string& failure : render_failures)
    std::printf("  - render: %s\n", failure.c_str());

  return kOk;
}

}  // namespace mocr::cli
