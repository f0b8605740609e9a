// Copyright (c) 2026 ASES Authors
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

#include "ases/dataset.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "ases/jsonl.h"
#include "ases/text.h"

namespace ases {

TaskProfile TaskProfile::ForTask(Task task) {
  TaskProfile p;
  p.task = task;
  return p;
}

bool TaskProfile::ContainsStopSign(std::string_view s) const {
  const std::string& sign = StopSign();
  if (sign.empty()) return false;
  if (StopSignCaseInsensitive()) return text::FindNoCase(s, sign) != std::string::npos;
  return s.find(sign) != std::string_view::npos;
}

std::vector<TrainingRecord> BuildRecords(const CoTSample& sample,
                                         std::span<const Segment> segments,
                                         const TaskProfile& profile) {
  if (segments.empty()) throw UsageError("sample '" + sample.id + "': no segments");
  std::string joined;
  for (std::size_t i = 0; i < segments.size(); ++i) {
    if (i > 0 && segments[i].label == segments[i - 1].label) {
      throw DataError("sample '" + sample.id + "': adjacent segments share a label");
    }
    joined += segments[i].text;
  }
  if (joined != sample.target) {
    throw DataError("sample '" + sample.id + "': segments do not reconstruct the target");
  }

  std::size_t final_index = segments.size() - 1;
  if (profile.task == Task::kMWP) {
    bool found = false;
    for (std::size_t i = segments.size(); i-- > 0;) {
      if (profile.ContainsStopSign(segments[i].text)) {
        final_index = i;
        found = true;
        break;
      }
    }
    if (!found) throw DataError("sample '" + sample.id + "': no stop sign");
  }

  std::vector<TrainingRecord> records;
  records.reserve(segments.size());
  std::string prefix = sample.query + profile.separator;
  for (std::size_t i = 0; i < segments.size(); ++i) {
    TrainingRecord r;
    r.sample_id = sample.id;
    r.step = i;
    r.input = prefix;
    r.target = segments[i].text;
    r.role = segments[i].label;
    r.is_final = i == final_index;
    if (r.is_final && profile.task == Task::kPET) r.target += profile.stop_token;
    prefix += segments[i].text;
    records.push_back(std::move(r));
  }
  return records;
}

DatasetBundle RouteRecords(std::span<const TrainingRecord> records) {
  DatasetBundle bundle;
  AppendRecords(bundle, records);
  return bundle;
}

void AppendRecords(DatasetBundle& bundle, std::span<const TrainingRecord> records) {
  for (const auto& r : records) {
    (r.role == Label::kAS ? bundle.as_records : bundle.es_records).push_back(r);
  }
}

std::vector<TrainingRecord> UnionRecords(const DatasetBundle& bundle) {
  std::vector<TrainingRecord> all = bundle.es_records;
  all.insert(all.end(), bundle.as_records.begin(), bundle.as_records.end());
  std::stable_sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
    if (a.sample_id != b.sample_id) return a.sample_id < b.sample_id;
    return a.step < b.step;
  });
  return all;
}

std::string ReconstructTarget(std::span<const TrainingRecord> sample_records,
                              const TaskProfile& profile) {
  std::vector<const TrainingRecord*> ordered;
  for (const auto& r : sample_records) ordered.push_back(&r);
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const auto* a, const auto* b) { return a->step < b->step; });
  std::string out;
  for (const auto* r : ordered) {
    std::string_view t = r->target;
    if (r->is_final && profile.task == Task::kPET && t.ends_with(profile.stop_token)) {
      t.remove_suffix(profile.stop_token.size());
    }
    out += t;
  }
  return out;
}

KeywordMap ParseKeywordMap(std::string_view content) {
  KeywordMap map;
  std::set<std::string> seen;
  std::istringstream in{std::string(content)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto trimmed = text::TrimSpace(line);
    if (trimmed.empty()) continue;
    const auto eq = trimmed.find('=');
    if (eq == std::string_view::npos) {
      throw DataError("keyword map line " + std::to_string(line_no) + ": expected 'region = keywords'");
    }
    std::string region(text::TrimSpace(trimmed.substr(0, eq)));
    if (region.empty()) {
      throw DataError("keyword map line " + std::to_string(line_no) + ": empty region name");
    }
    if (!seen.insert(region).second) {
      throw DataError("keyword map line " + std::to_string(line_no) + ": duplicate region '" + region + "'");
    }
    std::vector<std::string> keywords;
    std::string rest(trimmed.substr(eq + 1));
    // Both ASCII and fullwidth commas separate keywords.
    for (std::size_t pos; (pos = rest.find("，")) != std::string::npos;) {
      rest.replace(pos, std::string_view("，").size(), ",");
    }
    std::istringstream kws(rest);
    std::string kw;
    while (std::getline(kws, kw, ',')) {
      const auto k = text::TrimSpace(kw);
      if (!k.empty()) keywords.emplace_back(k);
    }
    if (keywords.empty()) {
      throw DataError("keyword map line " + std::to_string(line_no) + ": region '" + region + "' has no keywords");
    }
    map.emplace_back(std::move(region), std::move(keywords));
  }
  if (map.empty()) throw UsageError("keyword map is empty");
  return map;
}

KeywordMap LoadKeywordMap(const std::filesystem::path& path) {
  try {
    return ParseKeywordMap(jsonl::ReadText(path));
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

std::string RouteToRegion(std::string_view sentence, const KeywordMap& map) {
  for (const auto& [region, keywords] : map) {
    for (const auto& kw : keywords) {
      if (text::FindNoCase(sentence, kw) != std::string::npos) return region;
    }
  }
  return std::string(kOtherRegion);
}

std::vector<RegionSection> SplitReportByRegion(std::string_view report_id,
                                               std::string_view report,
                                               std::string_view impression,
                                               const KeywordMap& keyword_map,
                                               const TaskProfile& profile) {
  if (keyword_map.empty()) throw UsageError("keyword map is empty");
  std::map<std::string, std::string> findings;
  std::map<std::string, std::string> impressions;

  auto route_all = [&](std::string_view body, std::map<std::string, std::string>& into) {
    if (text::TrimSpace(body).empty()) return;
    std::vector<SubSentence> subs;
    try {
      subs = SplitSubSentences(body, profile.delimiters);
    } catch (const DataError&) {
      return;  // delimiters only
    }
    for (const auto& sub : subs) into[RouteToRegion(sub.text, keyword_map)] += sub.text;
  };
  route_all(report, findings);
  route_all(impression, impressions);

  std::vector<std::string> order;
  for (const auto& [region, kws] : keyword_map) order.push_back(region);
  order.emplace_back(kOtherRegion);

  std::vector<RegionSection> sections;
  for (const auto& region : order) {
    auto f = findings.find(region);
    auto i = impressions.find(region);
    if (f == findings.end() && i == impressions.end()) continue;
    RegionSection s;
    s.report_id = std::string(report_id);
    s.region = region;
    if (f != findings.end()) s.findings = f->second;
    s.impression = i != impressions.end() ? i->second : profile.normal_target;
    sections.push_back(std::move(s));
  }
  return sections;
}

bool IsNormalSection(const RegionSection& section, const TaskProfile& profile) {
  return text::TrimSpace(section.impression) == text::TrimSpace(profile.normal_target);
}

std::size_t InjectionCount(double gamma, std::size_t total_reports) {
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) {
    throw UsageError("gamma must be a finite non-negative ratio");
  }
  return static_cast<std::size_t>(
      std::floor(gamma * static_cast<double>(total_reports) + 1e-9));
}

DatasetBundle InjectNormality(const DatasetBundle& bundle,
                              std::span<const RegionSection> normals,
                              double gamma, std::size_t total_reports,
                              std::uint64_t seed, const TaskProfile& profile) {
  const std::size_t count = InjectionCount(gamma, total_reports);
  if (gamma > 0.0 && normals.empty()) {
    throw DataError("gamma > 0 but there are no normal sections to inject");
  }
  for (const auto& n : normals) {
    if (text::TrimSpace(n.findings).empty()) {
      throw DataError("normal section " + n.report_id + "/" + n.region + " has no findings");
    }
  }

  std::vector<std::size_t> picks;
  SplitMix64 rng(seed);
  if (count <= normals.size()) {
    std::vector<std::size_t> idx(normals.size());
    std::iota(idx.begin(), idx.end(), 0);
    for (std::size_t i = 0; i < count; ++i) {
      const std::size_t j = i + static_cast<std::size_t>(rng.Below(idx.size() - i));
      std::swap(idx[i], idx[j]);
      picks.push_back(idx[i]);
    }
  } else {
    for (std::size_t i = 0; i < count; ++i) {
      picks.push_back(static_cast<std::size_t>(rng.Below(normals.size())));
    }
  }

  DatasetBundle out = bundle;
  for (std::size_t k = 0; k < picks.size(); ++k) {
    const RegionSection& s = normals[picks[k]];
    TrainingRecord r;
    r.sample_id = "normal:" + s.report_id + ":" + s.region + ":" + std::to_string(k);
    r.step = 0;
    r.input = s.findings + profile.separator;
    r.target = profile.normal_target + profile.stop_token;
    r.role = Label::kES;
    r.is_final = true;
    out.es_records.push_back(std::move(r));
  }
  return out;
}

std::uint64_t SplitMix64::Next() {
  std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t SplitMix64::Below(std::uint64_t bound) {
  if (bound == 0) throw UsageError("empty sampling range");
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    const std::uint64_t r = Next();
    if (r >= threshold) return r % bound;
  }
}

SplitRatios ParseSplitRatios(std::string_view s) {
  std::vector<double> parts;
  std::istringstream in{std::string(s)};
  std::string piece;
  while (std::getline(in, piece, ',')) {
    try {
      std::size_t used = 0;
      const std::string p(text::TrimSpace(piece));
      parts.push_back(std::stod(p, &used));
      if (used != p.size()) throw std::invalid_argument(p);
    } catch (const std::exception&) {
      throw UsageError("bad split ratio '" + piece + "'");
    }
  }
  if (parts.size() != 3) throw UsageError("split ratios need three values: train,validation,test");
  return {parts[0], parts[1], parts[2]};
}

std::array<std::size_t, 3> PartitionSizes(std::size_t n, const SplitRatios& ratios) {
  const std::array<double, 3> r = {ratios.train, ratios.validation, ratios.test};
  for (double x : r) {
    if (!(x >= 0.0)) throw UsageError("split ratios must be non-negative");
  }
  if (std::abs(r[0] + r[1] + r[2] - 1.0) > 1e-9) {
    throw UsageError("split ratios must sum to 1");
  }
  const auto nonzero = static_cast<std::size_t>(std::count_if(r.begin(), r.end(), [](double x) { return x > 0.0; }));
  if (n < nonzero) {
    throw DataError("fewer samples (" + std::to_string(n) + ") than partitions (" +
                    std::to_string(nonzero) + ")");
  }

  std::array<std::size_t, 3> sizes{};
  std::array<double, 3> frac{};
  std::size_t assigned = 0;
  for (int i = 0; i < 3; ++i) {
    const double raw = r[i] * static_cast<double>(n);
    sizes[i] = static_cast<std::size_t>(std::floor(raw + 1e-9));
    frac[i] = raw - static_cast<double>(sizes[i]);
    assigned += sizes[i];
  }
  while (assigned < n) {
    int best = -1;
    for (int i = 0; i < 3; ++i) {
      if (r[i] > 0.0 && (best < 0 || frac[i] > frac[best])) best = i;
    }
    ++sizes[best];
    frac[best] = -1.0;
    ++assigned;
  }
  for (int i = 0; i < 3; ++i) {
    if (r[i] > 0.0 && sizes[i] == 0) {
      int donor = 0;
      for (int k = 1; k < 3; ++k) {
        if (sizes[k] > sizes[donor]) donor = k;
      }
      --sizes[donor];
      ++sizes[i];
    }
  }
  return sizes;
}

SplitAssignment SplitIds(std::span<const std::string> ids, const SplitRatios& ratios,
                         std::uint64_t seed) {
  std::vector<std::string> unique;
  std::set<std::string> seen;
  for (const auto& id : ids) {
    if (seen.insert(id).second) unique.push_back(id);
  }
  const auto sizes = PartitionSizes(unique.size(), ratios);

  std::vector<std::size_t> order(unique.size());
  std::iota(order.begin(), order.end(), 0);
  SplitMix64 rng(seed);
  for (std::size_t i = order.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.Below(i));
    std::swap(order[i - 1], order[j]);
  }
  std::vector<int> part(unique.size(), 0);
  for (std::size_t k = 0; k < order.size(); ++k) {
    part[order[k]] = k < sizes[0] ? 0 : (k < sizes[0] + sizes[1] ? 1 : 2);
  }
  SplitAssignment out;
  for (std::size_t i = 0; i < unique.size(); ++i) {
    (part[i] == 0 ? out.train : part[i] == 1 ? out.validation : out.test).push_back(unique[i]);
  }
  return out;
}

std::string RecordToJsonLine(const TrainingRecord& record) {
  jsonl::Json j;
  j["sample_id"] = record.sample_id;
  j["step"] = record.step;
  j["input"] = record.input;
  j["target"] = record.target;
  j["role"] = std::string(LabelName(record.role));
  j["is_final"] = record.is_final;
  return jsonl::Dump(j);
}

namespace {

TrainingRecord RecordFromJson(const jsonl::Json& j) {
  TrainingRecord r;
  r.sample_id = jsonl::GetString(j, "sample_id");
  const long long step = jsonl::GetInt(j, "step");
  if (step < 0) throw DataError("field 'step' must be non-negative");
  r.step = static_cast<std::size_t>(step);
  r.input = jsonl::GetString(j, "input");
  r.target = jsonl::GetString(j, "target");
  r.role = ParseLabel(jsonl::GetString(j, "role"));
  r.is_final = jsonl::GetBool(j, "is_final");
  return r;
}

}  // namespace

TrainingRecord RecordFromJsonLine(std::string_view line) {
  return RecordFromJson(jsonl::Parse(line));
}

void WriteRecords(const std::filesystem::path& path,
                  std::span<const TrainingRecord> records) {
  std::vector<std::string> lines;
  lines.reserve(records.size());
  for (const auto& r : records) lines.push_back(RecordToJsonLine(r));
  jsonl::WriteLines(path, lines);
}

std::vector<TrainingRecord> ReadRecords(const std::filesystem::path& path) {
  std::vector<TrainingRecord> out;
  jsonl::ForEachLine(path, [&](const jsonl::Json& j, std::size_t) {
    out.push_back(RecordFromJson(j));
  });
  return out;
}

void SerializeBundle(const DatasetBundle& bundle, const std::filesystem::path& dir) {
  WriteRecords(dir / "as.jsonl", bundle.as_records);
  WriteRecords(dir / "es.jsonl", bundle.es_records);
}

DatasetBundle LoadBundle(const std::filesystem::path& dir) {
  DatasetBundle bundle;
  bundle.as_records = ReadRecords(dir / "as.jsonl");
  bundle.es_records = ReadRecords(dir / "es.jsonl");
  for (const auto& r : bundle.as_records) {
    if (r.role != Label::kAS) throw DataError((dir / "as.jsonl").string() + ": record with role ES");
  }
  for (const auto& r : bundle.es_records) {
    if (r.role != Label::kES) throw DataError((dir / "es.jsonl").string() + ": record with role AS");
  }
  return bundle;
}

}  // namespace ases
