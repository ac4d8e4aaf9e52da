#pragma once

// `key = value` settings files: one pair per line, '#' starts a comment,
// blank lines ignored. Keys are normalized to the dashed flag spelling
// (`d_sat` and `d-sat` are the same key).

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>

namespace lle::cli {

using Settings = std::map<std::string, std::string, std::less<>>;

std::string normalize_key(std::string_view key);

/// Throws lle::Error(InvalidArgument) on malformed lines, unknown keys
/// (when `allowed` is non-empty) and duplicate keys; messages carry the
/// line number.
Settings parse_settings(std::string_view text,
                        const std::set<std::string, std::less<>>& allowed = {});
Settings load_settings(const std::filesystem::path& path,
                       const std::set<std::string, std::less<>>& allowed = {});

/// `overrides` wins on conflicts.
Settings merge(Settings base, const Settings& overrides);

}  // namespace lle::cli
