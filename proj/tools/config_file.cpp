#include "config_file.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "lle/error.hpp"

namespace lle::cli {
namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

std::string normalize_key(std::string_view key) {
  std::string k(key);
  std::replace(k.begin(), k.end(), '_', '-');
  return k;
}

Settings parse_settings(std::string_view text,
                        const std::set<std::string, std::less<>>& allowed) {
  Settings out;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::InvalidArgument,
                  fmt::format("line {}: expected 'key = value', got '{}'",
                              line_no, line));
    }
    const std::string key = normalize_key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw Error(ErrorCode::InvalidArgument,
                  fmt::format("line {}: empty key or value", line_no));
    }
    if (!allowed.empty() && !allowed.contains(key)) {
      throw Error(ErrorCode::InvalidArgument,
                  fmt::format("line {}: unknown key '{}'", line_no, key));
    }
    if (!out.emplace(key, std::string(value)).second) {
      throw Error(ErrorCode::InvalidArgument,
                  fmt::format("line {}: duplicate key '{}'", line_no, key));
    }
  }
  return out;
}

Settings load_settings(const std::filesystem::path& path,
                       const std::set<std::string, std::less<>>& allowed) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::InvalidArgument,
                fmt::format("cannot read config file '{}'", path.string()));
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_settings(buf.str(), allowed);
  } catch (const Error& e) {
    throw Error(e.code(), fmt::format("{}: {}", path.string(), e.what()));
  }
}

Settings merge(Settings base, const Settings& overrides) {
  for (const auto& [k, v] : overrides) base.insert_or_assign(k, v);
  return base;
}

}  // namespace lle::cli
