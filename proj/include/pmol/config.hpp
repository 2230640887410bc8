#pragma once
// Flat experiment configuration: a JSON object of scalars and numeric lists.
// Every value read, including defaults, lands in the resolved record so a run can
// be reproduced from its output directory alone.

#include <memory>
#include <set>
#include <string>
#include <vector>

#include "pmol/errors.hpp"

namespace pmol {

class ExperimentConfig {
 public:
  ExperimentConfig();
  ~ExperimentConfig();
  ExperimentConfig(const ExperimentConfig&);
  ExperimentConfig& operator=(const ExperimentConfig&);

  // Throws UsageError on malformed input or a non-object document.
  static ExperimentConfig parse(const std::string& json_text);
  static ExperimentConfig load(const std::string& path);

  bool empty() const;
  bool has(const std::string& key) const;

  // Command line overrides; the value is parsed as JSON when possible, else kept as a string.
  void set(const std::string& key, const std::string& value);

  // Typed reads. A missing key takes the default; a wrong type is a UsageError.
  int get_int(const std::string& key, int def);
  double get_double(const std::string& key, double def);
  bool get_bool(const std::string& key, bool def);
  std::string get_string(const std::string& key, const std::string& def);
  std::vector<double> get_doubles(const std::string& key, const std::vector<double>& def);
  std::string require_string(const std::string& key);

  // given keys no reader asked for
  std::vector<std::string> unused() const;

  // Sorted, indented JSON of every resolved value and its FNV-1a hash.
  std::string resolved_text() const;
  std::string hash() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace pmol
