// Copyright 2026 The audiosum Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "audiosum/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

namespace audiosum {

namespace {

struct MethodInfo {
  Method method;
  std::string_view name;
};

constexpr MethodInfo kMethods[] = {
    {Method::kGaussianSampler, "gaussian-sampler"},
    {Method::kGrasshopper, "grasshopper"},
    {Method::kLexRank, "lexrank"},
    {Method::kLsa, "lsa"},
    {Method::kMmr, "mmr"},
    {Method::kSupportSets, "support-sets"},
    {Method::kAvs, "avs"},
    {Method::kBeginning, "beginning"},
    {Method::kMiddle, "middle"},
    {Method::kEnd, "end"},
};

std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

double parse_double(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != value.size() || !std::isfinite(v)) {
    throw ConfigError(key + ": expected a number, got '" + value + "'");
  }
  return v;
}

long long parse_int(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != value.size()) throw ConfigError(key + ": expected an integer, got '" + value + "'");
  return v;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "1" || value == "true" || value == "yes" || value == "on" || value == "Y") return true;
  if (value == "0" || value == "false" || value == "no" || value == "off" || value == "N") return false;
  throw ConfigError(key + ": expected a boolean, got '" + value + "'");
}

std::string trim_copy(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::string strip_comment(std::string_view line) {
  return trim_copy(line.substr(0, line.find('#')));
}

}  // namespace

Method parse_method(std::string_view name) {
  for (const auto& m : kMethods) {
    if (m.name == name) return m.method;
  }
  throw ConfigError("unknown method '" + std::string(name) + "'");
}

std::string_view method_name(Method m) {
  for (const auto& info : kMethods) {
    if (info.method == m) return info.name;
  }
  return "?";
}

bool is_phrase_method(Method m) {
  return m == Method::kGrasshopper || m == Method::kLexRank || m == Method::kLsa ||
         m == Method::kMmr || m == Method::kSupportSets;
}

bool is_fixed_segment(Method m) {
  return m == Method::kBeginning || m == Method::kMiddle || m == Method::kEnd;
}

SummaryConfig SummaryConfig::resolved() const {
  SummaryConfig r = *this;
  if (!r.frame_len_s) {
    if (method == Method::kGaussianSampler) {
      r.frame_len_s = 0.05;
    } else if (is_phrase_method(method)) {
      r.frame_len_s = 0.1;
    } else {
      r.frame_len_s = 0.5;
    }
  }
  if (method == Method::kLsa) {
    r.weighting = Weighting::kBinary;
  } else if (!r.weighting) {
    r.weighting = Weighting::kDampenedTfIdf;
  }
  if (!r.lambda) {
    if (method == Method::kMmr) r.lambda = 0.7;
    else r.lambda = 0.5;
  }
  return r;
}

void SummaryConfig::validate() const {
  const SummaryConfig r = resolved();
  if (!(r.duration_s > 0.0)) throw ConfigError("duration must be positive");
  if (!(*r.frame_len_s > 0.0)) throw ConfigError("frame must be positive");
  if (*r.frame_len_s > r.duration_s) throw ConfigError("frame longer than the summary duration");
  if (!(r.vocab_ratio > 0.0 && r.vocab_ratio <= 1.0)) throw ConfigError("vocab_ratio must be in (0, 1]");
  if (r.phrase_len < 1) throw ConfigError("phrase_len must be at least 1");
  if (!(*r.lambda >= 0.0 && *r.lambda <= 1.0)) throw ConfigError("lambda must be in [0, 1]");
  if (!(r.damping > 0.0 && r.damping < 1.0)) throw ConfigError("damping must be in (0, 1)");
  if (!(r.threshold >= 0.0 && r.threshold <= 1.0)) throw ConfigError("threshold must be in [0, 1]");
  if (!(r.trim_db < 0.0)) throw ConfigError("trim_db must be negative");
  if (method == Method::kLsa && weighting && *weighting != Weighting::kBinary) {
    throw ConfigError("lsa requires binary weighting");
  }
}

namespace {

std::string descriptor_impl(const SummaryConfig& config, bool with_duration) {
  const SummaryConfig r = config.resolved();
  std::ostringstream out;
  out << "method=" << method_name(r.method);
  if (with_duration) out << " duration=" << fmt_double(r.duration_s);
  out << " frame=" << fmt_double(*r.frame_len_s);
  if (is_phrase_method(r.method)) {
    out << " vocab_ratio=" << fmt_double(r.vocab_ratio) << " phrase_len=" << r.phrase_len
        << " weighting=" << weighting_name(*r.weighting);
    if (r.standardize) out << " standardize=1";
  }
  switch (r.method) {
    case Method::kGrasshopper:
    case Method::kMmr:
      out << " lambda=" << fmt_double(*r.lambda);
      break;
    case Method::kLexRank:
      out << " damping=" << fmt_double(r.damping) << " threshold=" << fmt_double(r.threshold)
          << " lexrank_weighted=" << (r.lexrank_weighted ? 1 : 0);
      break;
    case Method::kGaussianSampler:
      out << " mean_shift=" << (r.mean_shift ? 1 : 0);
      break;
    default:
      break;
  }
  if (!r.trim) out << " trim=0";
  else if (r.trim_db != -60.0) out << " trim_db=" << fmt_double(r.trim_db);
  const bool randomized = r.method == Method::kGaussianSampler || is_phrase_method(r.method);
  if (randomized && r.seed != 0) out << " seed=" << r.seed;
  return out.str();
}

}  // namespace

std::string SummaryConfig::descriptor() const { return descriptor_impl(*this, true); }

std::string SummaryConfig::descriptor_without_duration() const {
  return descriptor_impl(*this, false);
}

nlohmann::ordered_json SummaryConfig::to_json() const {
  const SummaryConfig r = resolved();
  nlohmann::ordered_json j;
  j["method"] = method_name(r.method);
  j["duration"] = r.duration_s;
  j["frame"] = *r.frame_len_s;
  j["vocab_ratio"] = r.vocab_ratio;
  j["phrase_len"] = r.phrase_len;
  j["weighting"] = weighting_name(*r.weighting);
  j["lambda"] = *r.lambda;
  j["damping"] = r.damping;
  j["threshold"] = r.threshold;
  j["lexrank_weighted"] = r.lexrank_weighted;
  j["mean_shift"] = r.mean_shift;
  j["standardize"] = r.standardize;
  j["trim"] = r.trim;
  j["trim_db"] = r.trim_db;
  j["seed"] = r.seed;
  return j;
}

SummaryConfig config_from_pairs(const std::map<std::string, std::string>& kv) {
  SummaryConfig c;
  for (const auto& [key, value] : kv) {
    if (key == "method") c.method = parse_method(value);
    else if (key == "duration") c.duration_s = parse_double(key, value);
    else if (key == "frame") c.frame_len_s = parse_double(key, value);
    else if (key == "vocab_ratio") c.vocab_ratio = parse_double(key, value);
    else if (key == "phrase_len") c.phrase_len = static_cast<int>(parse_int(key, value));
    else if (key == "weighting") {
      try {
        c.weighting = parse_weighting(value);
      } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
      }
    } else if (key == "lambda") c.lambda = parse_double(key, value);
    else if (key == "damping") c.damping = parse_double(key, value);
    else if (key == "threshold") c.threshold = parse_double(key, value);
    else if (key == "lexrank_weighted") c.lexrank_weighted = parse_bool(key, value);
    else if (key == "mean_shift") c.mean_shift = parse_bool(key, value);
    else if (key == "standardize") c.standardize = parse_bool(key, value);
    else if (key == "trim") c.trim = parse_bool(key, value);
    else if (key == "trim_db") c.trim_db = parse_double(key, value);
    else if (key == "seed") {
      const long long s = parse_int(key, value);
      if (s < 0) throw ConfigError("seed must be non-negative");
      c.seed = static_cast<std::uint64_t>(s);
    } else {
      throw ConfigError("unknown key '" + key + "'");
    }
  }
  if (!kv.count("method")) throw ConfigError("missing required key 'method'");
  c.validate();
  return c;
}

std::vector<SummaryConfig> parse_grid(std::string_view text) {
  std::vector<SummaryConfig> setups;
  std::vector<std::string> errors;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string body = strip_comment(line);
    if (body.empty()) continue;
    try {
      std::vector<std::pair<std::string, std::vector<std::string>>> axes;
      std::istringstream tokens(body);
      std::string token;
      while (tokens >> token) {
        const auto eq = token.find('=');
        if (eq == std::string::npos || eq == 0 || eq + 1 == token.size()) {
          throw ConfigError("expected key=value, got '" + token + "'");
        }
        std::string key = token.substr(0, eq);
        for (const auto& axis : axes) {
          if (axis.first == key) throw ConfigError("duplicate key '" + key + "'");
        }
        std::vector<std::string> values;
        std::istringstream list(token.substr(eq + 1));
        std::string v;
        while (std::getline(list, v, ',')) {
          if (v.empty()) throw ConfigError("empty value in '" + token + "'");
          values.push_back(v);
        }
        axes.emplace_back(std::move(key), std::move(values));
      }
      // Cartesian product, first axis varying slowest.
      std::map<std::string, std::string> current;
      std::function<void(std::size_t)> expand = [&](std::size_t axis) {
        if (axis == axes.size()) {
          setups.push_back(config_from_pairs(current));
          return;
        }
        for (const auto& v : axes[axis].second) {
          current[axes[axis].first] = v;
          expand(axis + 1);
        }
      };
      expand(0);
    } catch (const std::exception& e) {
      errors.push_back("grid line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (!errors.empty()) {
    std::string msg;
    for (const auto& e : errors) msg += (msg.empty() ? "" : "\n") + e;
    throw ConfigError(msg);
  }
  if (setups.empty()) throw ConfigError("grid contains no setups");
  return setups;
}

std::vector<SummaryConfig> load_grid(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open grid file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_grid(buf.str());
}

std::vector<ManifestEntry> parse_manifest(std::string_view text,
                                          const std::filesystem::path& base) {
  std::vector<ManifestEntry> entries;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string body = strip_comment(line);
    if (body.empty()) continue;
    const auto sep = body.find_first_of(",\t");
    if (sep == std::string::npos) {
      throw ConfigError("manifest line " + std::to_string(line_no) + ": expected 'id, path'");
    }
    ManifestEntry e;
    e.id = trim_copy(std::string_view(body).substr(0, sep));
    const std::string path = trim_copy(std::string_view(body).substr(sep + 1));
    if (e.id.empty() || path.empty()) {
      throw ConfigError("manifest line " + std::to_string(line_no) + ": empty id or path");
    }
    if (e.id == "id" && path == "path" && entries.empty()) continue;  // header row
    for (const auto& other : entries) {
      if (other.id == e.id) {
        throw ConfigError("manifest line " + std::to_string(line_no) + ": duplicate id '" + e.id + "'");
      }
    }
    e.path = std::filesystem::path(path).is_absolute() ? std::filesystem::path(path) : base / path;
    entries.push_back(std::move(e));
  }
  return entries;
}

std::vector<ManifestEntry> load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open manifest " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_manifest(buf.str(), path.parent_path());
}

}  // namespace audiosum
