#include "mocr/svg/asset.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

#include "mocr/common/error.hpp"
#include "mocr/common/hash.hpp"

namespace mocr::svg {

namespace {
constexpr std::string_view kSchema = "mocr-svg/1";
}

std::uint64_t fingerprint_of(std::string_view canonical_text) { return fnv1a64(canonical_text); }

std::string manifest_record(const SvgAsset& asset) {
  nlohmann::json record{
      {"schema", kSchema},
      {"id", asset.id},
      {"domain", asset.domain},
      {"path", asset.path},
      {"metrics",
       {{"elements", asset.metrics.element_count},
        {"path_commands", asset.metrics.path_command_count},
        {"bytes", asset.metrics.byte_length},
        {"colors", asset.metrics.color_count}}},
      {"fingerprint", to_hex(asset.fingerprint)},
      {"phash", to_hex(asset.phash)},
      {"render", asset.render_ok ? "ok" : "failed"},
  };
  return record.dump();
}

SvgAsset parse_manifest_record(std::string_view line, std::size_t line_number) {
  nlohmann::json record = nlohmann::json::parse(line, nullptr, false);
  auto bad = [&](const std::string& why) -> SvgAsset {
    throw TextParseError("manifest line " + std::to_string(line_number) + ": " + why);
  };
  if (record.is_discarded()) return bad("not valid JSON");
  if (!record.is_object()) return bad("record is not an object");
  if (record.value("schema", "") != kSchema)
    return bad("unsupported schema '" + record.value("schema", "") + "'");
  try {
    SvgAsset asset;
    asset.id = record.at("id").get<std::string>();
    asset.domain = record.at("domain").get<std::string>();
    asset.path = record.at("path").get<std::string>();
    const auto& metrics = record.at("metrics");
    asset.metrics.element_count = metrics.at("elements").get<std::size_t>();
    asset.metrics.path_command_count = metrics.at("path_commands").get<std::size_t>();
    asset.metrics.byte_length = metrics.at("bytes").get<std::size_t>();
    asset.metrics.color_count = metrics.at("colors").get<std::size_t>();
    asset.fingerprint = parse_hex64(record.at("fingerprint").get<std::string>());
    asset.phash = parse_hex64(record.at("phash").get<std::string>());
    const std::string render = record.at("render").get<std::string>();
    if (render != "ok" && render != "failed") return bad("render must be ok|failed");
    asset.render_ok = render == "ok";
    return asset;
  } catch (const nlohmann::json::exception& e) {
    return bad(e.what());
  } catch (const std::invalid_argument& e) {
    return bad(e.what());
  }
}

void write_manifest(const std::string& path, std::span<const SvgAsset> assets) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open manifest for writing: " + path);
  for (const SvgAsset& asset : assets) out << manifest_record(asset) << '\n';
  out.flush();
  if (!out) throw IoError("failed writing manifest: " + path);
}

std::vector<SvgAsset> read_manifest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open manifest: " + path);
  std::vector<SvgAsset> assets;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    assets.push_back(parse_manifest_record(line, line_number));
  }
  return assets;
}

}  // namespace mocr::svg
