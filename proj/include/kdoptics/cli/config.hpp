#pragma once

#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "kdoptics/polarization.hpp"

namespace kdoptics::cli {

/// Malformed configuration: parse failure, wrong type, or unknown field.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

nlohmann::json load_config(const std::string& path);

/// Typed view of one JSON object. Every accessor records the value it resolved
/// (default or given) in echo(); finish() rejects keys nobody asked for.
/// A null value selects the default.
class Section {
 public:
  Section(const nlohmann::json& node, std::string path);

  double number(const std::string& key, double fallback);
  std::size_t count(const std::string& key, std::size_t fallback);
  std::uint64_t u64(const std::string& key, std::uint64_t fallback);
  int sign(const std::string& key, int fallback);
  pol::Complex complex(const std::string& key, pol::Complex fallback);
  pol::StokesVector stokes(const std::string& key, pol::StokesVector fallback);
  /// "x" | "y" | "z", [sx, sy, sz], or {"theta": t, "phi": p}.
  pol::BasisAxis axis(const std::string& key, const std::string& fallback);
  std::string text(const std::string& key, const std::string& fallback);
  bool has(const std::string& key) const;
  Section child(const std::string& key);
  void adopt(const std::string& key, Section& child);
  /// Overrides the echoed value of `key` (command-line flags beat the file).
  void note(const std::string& key, const nlohmann::json& value) { echo_[key] = value; }

  void finish() const;
  const nlohmann::json& echo() const { return echo_; }

 private:
  const nlohmann::json* lookup(const std::string& key);
  [[noreturn]] void fail(const std::string& key, const std::string& what) const;

  nlohmann::json node_;
  std::string path_;
  std::set<std::string> used_;
  nlohmann::json echo_ = nlohmann::json::object();
};

}  // namespace kdoptics::cli
