#include "pmol/config.hpp"

#include <fstream>
#include <json.hpp>
#include <sstream>

#include "pmol/io.hpp"

namespace pmol {

using nlohmann::json;

struct ExperimentConfig::Impl {
  json given = json::object();
  json resolved = json::object();
  std::set<std::string> read;

  const json* find(const std::string& key) {
    read.insert(key);
    auto it = given.find(key);
    return it == given.end() ? nullptr : &*it;
  }
};

ExperimentConfig::ExperimentConfig() : impl_(std::make_unique<Impl>()) {}
ExperimentConfig::~ExperimentConfig() = default;
ExperimentConfig::ExperimentConfig(const ExperimentConfig& o) : impl_(std::make_unique<Impl>(*o.impl_)) {}
ExperimentConfig& ExperimentConfig::operator=(const ExperimentConfig& o) {
  if (this != &o) *impl_ = *o.impl_;
  return *this;
}

ExperimentConfig ExperimentConfig::parse(const std::string& json_text) {
  ExperimentConfig c;
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw UsageError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw UsageError("config must be a JSON object");
  for (auto& [k, v] : doc.items()) {
    if (v.is_object()) throw UsageError("config key '" + k + "' is nested; only flat key-value pairs are accepted");
    if (v.is_array())
      for (const auto& e : v)
        if (!e.is_number()) throw UsageError("config list '" + k + "' must hold numbers");
  }
  c.impl_->given = std::move(doc);
  return c;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

bool ExperimentConfig::empty() const { return impl_->given.empty(); }
bool ExperimentConfig::has(const std::string& key) const { return impl_->given.contains(key); }

void ExperimentConfig::set(const std::string& key, const std::string& value) {
  json v = json::parse(value, nullptr, false);
  if (v.is_discarded() || v.is_object()) v = value;
  impl_->given[key] = std::move(v);
}

int ExperimentConfig::get_int(const std::string& key, int def) {
  int out = def;
  if (const json* v = impl_->find(key)) {
    if (!v->is_number_integer()) throw UsageError("config key '" + key + "' must be an integer");
    out = v->get<int>();
  }
  impl_->resolved[key] = out;
  return out;
}

double ExperimentConfig::get_double(const std::string& key, double def) {
  double out = def;
  if (const json* v = impl_->find(key)) {
    if (!v->is_number()) throw UsageError("config key '" + key + "' must be a number");
    out = v->get<double>();
  }
  impl_->resolved[key] = out;
  return out;
}

bool ExperimentConfig::get_bool(const std::string& key, bool def) {
  bool out = def;
  if (const json* v = impl_->find(key)) {
    if (!v->is_boolean()) throw UsageError("config key '" + key + "' must be true or false");
    out = v->get<bool>();
  }
  impl_->resolved[key] = out;
  return out;
}

std::string ExperimentConfig::get_string(const std::string& key, const std::string& def) {
  std::string out = def;
  if (const json* v = impl_->find(key)) {
    if (!v->is_string()) throw UsageError("config key '" + key + "' must be a string");
    out = v->get<std::string>();
  }
  impl_->resolved[key] = out;
  return out;
}

std::vector<double> ExperimentConfig::get_doubles(const std::string& key, const std::vector<double>& def) {
  std::vector<double> out = def;
  if (const json* v = impl_->find(key)) {
    if (v->is_number()) out = {v->get<double>()};
    else if (v->is_array()) out = v->get<std::vector<double>>();
    else throw UsageError("config key '" + key + "' must be a number or a list of numbers");
  }
  impl_->resolved[key] = out;
  return out;
}

std::string ExperimentConfig::require_string(const std::string& key) {
  if (!has(key)) throw UsageError("config key '" + key + "' is required");
  return get_string(key, "");
}

std::vector<std::string> ExperimentConfig::unused() const {
  std::vector<std::string> out;
  for (auto& [k, v] : impl_->given.items())
    if (!impl_->read.count(k)) out.push_back(k);
  return out;
}

std::string ExperimentConfig::resolved_text() const { return impl_->resolved.dump(2) + "\n"; }

std::string ExperimentConfig::hash() const { return content_hash(impl_->resolved.dump()); }

}  // namespace pmol
