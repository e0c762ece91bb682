// Flat key-value experiment configuration. The file format is TOML-flavored:
// [section] headers followed by key = value lines, '#' comments, no nesting.
// Keys are addressed as "section.key".
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace plv::cli {

class Config {
 public:
  static Config load(const std::string& path);
  static Config from_string(const std::string& text, const std::string& name = "<inline>");

  bool has(const std::string& key) const { return kv_.count(key) > 0; }
  std::string get_str(const std::string& key, const std::string& def) const;
  std::string require_str(const std::string& key) const;
  double get_double(const std::string& key, double def) const;
  long get_long(const std::string& key, long def) const;
  std::uint64_t get_u64(const std::string& key, std::uint64_t def) const;
  bool get_bool(const std::string& key, bool def) const;
  std::vector<double> get_doubles(const std::string& key, const std::vector<double>& def) const;
  std::vector<long> get_longs(const std::string& key, const std::vector<long>& def) const;

  const std::string& source_name() const { return name_; }
  // FNV-1a of the raw config text, stamped into every output file.
  std::uint64_t hash() const { return hash_; }
  std::string hash_hex() const;

 private:
  std::map<std::string, std::string> kv_;
  std::string name_;
  std::uint64_t hash_ = 0;
};

struct CliOptions {
  std::string out_dir = "out";
  std::uint64_t seed = 0;
  bool seed_given = false;
  long replicas = 0;  // 0 = use config value
  unsigned workers = 0;  // 0 = hardware concurrency
  bool strict_eta = false;

  unsigned effective_workers() const;
};

}  // namespace plv::cli
