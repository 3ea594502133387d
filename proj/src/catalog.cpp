#include "quakerules/catalog.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "quakerules/error.hpp"

namespace quakerules {

namespace {

constexpr std::string_view kWhitespace = " \t\r\n\v\f";

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(kWhitespace);
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(kWhitespace);
  return s.substr(first, last - first + 1);
}

std::optional<double> parse_number(std::string_view text) {
  text = trim(text);
  if (text.empty()) return std::nullopt;
  if (text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(value)) return std::nullopt;
  return value;
}

std::optional<int> parse_int(std::string_view text) {
  if (text.empty()) return std::nullopt;
  int value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) return std::nullopt;
  return value;
}

// Accepts YYYY<sep>MM<sep>DD with one of the allowed separators.
std::optional<Date> parse_date_with(std::string_view text, std::string_view separators) {
  text = trim(text);
  if (text.size() != 10) return std::nullopt;
  const char sep = text[4];
  if (separators.find(sep) == std::string_view::npos || text[7] != sep) return std::nullopt;
  const auto y = parse_int(text.substr(0, 4));
  const auto m = parse_int(text.substr(5, 2));
  const auto d = parse_int(text.substr(8, 2));
  if (!y || !m || !d) return std::nullopt;
  const Date date{std::chrono::year{*y}, std::chrono::month{static_cast<unsigned>(*m)},
                  std::chrono::day{static_cast<unsigned>(*d)}};
  if (!date.ok()) return std::nullopt;
  return date;
}

// HH:MM:SS, optionally followed by a fractional part when `allow_fraction`.
std::optional<std::chrono::seconds> parse_time(std::string_view text, bool allow_fraction) {
  text = trim(text);
  if (allow_fraction) {
    if (const auto dot = text.find('.'); dot != std::string_view::npos) {
      const auto frac = text.substr(dot + 1);
      if (frac.empty() || !std::all_of(frac.begin(), frac.end(), [](char c) { return c >= '0' && c <= '9'; }))
        return std::nullopt;
      text = text.substr(0, dot);
    }
  }
  if (text.size() != 8 || text[2] != ':' || text[5] != ':') return std::nullopt;
  const auto h = parse_int(text.substr(0, 2));
  const auto m = parse_int(text.substr(3, 2));
  const auto s = parse_int(text.substr(6, 2));
  if (!h || !m || !s || *h < 0 || *h > 23 || *m < 0 || *m > 59 || *s < 0 || *s > 59) return std::nullopt;
  return std::chrono::seconds{*h * 3600 + *m * 60 + *s};
}

// Returns an empty string when the record satisfies the EventRecord invariants.
std::string check_record(const EventRecord& r) {
  if (!(r.latitude >= -90.0 && r.latitude <= 90.0)) return "latitude out of range";
  if (!(r.longitude >= -180.0 && r.longitude <= 180.0)) return "longitude out of range";
  if (!(r.depth_km >= 0.0)) return "negative depth";
  for (const auto& mag : {r.md, r.ml, r.mw}) {
    if (mag && !(*mag >= 0.0 && *mag <= 10.0)) return "magnitude out of range";
  }
  if (r.raw_location.empty()) return "empty location";
  return {};
}

LineOutcome fail(std::string reason) { return LineOutcome{std::nullopt, std::move(reason)}; }

// Empty text means absent; anything else must be a number.
bool parse_optional_magnitude(std::string_view text, std::optional<double>& out) {
  text = trim(text);
  if (text.empty() || text == "-.-") {
    out.reset();
    return true;
  }
  out = parse_number(text);
  return out.has_value();
}

bool is_koeri_quality_tag(std::string_view token) {
  const std::string folded = fold_location_key(token);
  return folded == "ILKSEL" || folded.starts_with("REVIZE");
}

// Drops the trailing solution-quality column KOERI appends after the
// location ("Ilksel", "REVIZE01 (2019.08.08 14:56)").
std::string_view strip_koeri_quality(std::string_view tail) {
  tail = trim(tail);
  if (!tail.empty() && tail.back() == ')') {
    if (const auto lp = tail.rfind('('); lp != std::string_view::npos) {
      const auto before = trim(tail.substr(0, lp));
      const auto sp = before.find_last_of(kWhitespace);
      const auto last = sp == std::string_view::npos ? before : before.substr(sp + 1);
      if (fold_location_key(last).starts_with("REVIZE"))
        tail = sp == std::string_view::npos ? std::string_view{} : trim(before.substr(0, sp));
    }
  }
  const auto sp = tail.find_last_of(kWhitespace);
  if (sp != std::string_view::npos && is_koeri_quality_tag(tail.substr(sp + 1))) tail = trim(tail.substr(0, sp));
  return tail;
}

void append_number(std::string& out, double v) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  out.append(buf.data(), ptr);
}

std::set<std::string> fold_all(const std::set<std::string>& names) {
  std::set<std::string> out;
  for (const auto& n : names) out.insert(fold_location_key(n));
  return out;
}

}  // namespace

std::optional<Date> parse_date(std::string_view text) { return parse_date_with(text, "-"); }

std::string format_date(const Date& d) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(d.year()), static_cast<unsigned>(d.month()),
                static_cast<unsigned>(d.day()));
  return buf;
}

std::string format_time(std::chrono::seconds tod) {
  const std::chrono::hh_mm_ss hms{tod};
  char buf[64];
  std::snprintf(buf, sizeof buf, "%02lld:%02lld:%02lld", static_cast<long long>(hms.hours().count()),
                static_cast<long long>(hms.minutes().count()), static_cast<long long>(hms.seconds().count()));
  return buf;
}

LineOutcome parse_canonical_csv_line(std::string_view line) {
  std::array<std::string_view, 8> fields;
  std::size_t start = 0;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    const auto comma = line.find(',', start);
    if (comma == std::string_view::npos) return fail("expected 9 comma-separated fields");
    fields[i] = line.substr(start, comma - start);
    start = comma + 1;
  }
  EventRecord r;
  const auto date = parse_date(fields[0]);
  if (!date) return fail("invalid date");
  r.date = *date;
  const auto tod = parse_time(fields[1], false);
  if (!tod) return fail("invalid time");
  r.time_of_day = *tod;
  const auto lat = parse_number(fields[2]);
  const auto lon = parse_number(fields[3]);
  const auto depth = parse_number(fields[4]);
  if (!lat || !lon || !depth) return fail("invalid coordinate or depth");
  r.latitude = *lat;
  r.longitude = *lon;
  r.depth_km = *depth;
  if (!parse_optional_magnitude(fields[5], r.md) || !parse_optional_magnitude(fields[6], r.ml) ||
      !parse_optional_magnitude(fields[7], r.mw))
    return fail("invalid magnitude");
  r.raw_location = std::string(trim(line.substr(start)));
  if (auto reason = check_record(r); !reason.empty()) return fail(std::move(reason));
  return LineOutcome{std::move(r), {}};
}

LineOutcome parse_koeri_line(std::string_view line) {
  std::array<std::string_view, 8> tokens;
  std::size_t pos = 0;
  for (auto& token : tokens) {
    const auto begin = line.find_first_not_of(kWhitespace, pos);
    if (begin == std::string_view::npos) return fail("expected 8 columns and a location");
    auto end = line.find_first_of(kWhitespace, begin);
    if (end == std::string_view::npos) end = line.size();
    token = line.substr(begin, end - begin);
    pos = end;
  }
  EventRecord r;
  const auto date = parse_date_with(tokens[0], ".-/");
  if (!date) return fail("invalid date");
  r.date = *date;
  const auto tod = parse_time(tokens[1], true);
  if (!tod) return fail("invalid time");
  r.time_of_day = *tod;
  const auto lat = parse_number(tokens[2]);
  const auto lon = parse_number(tokens[3]);
  const auto depth = parse_number(tokens[4]);
  if (!lat || !lon || !depth) return fail("invalid coordinate or depth");
  r.latitude = *lat;
  r.longitude = *lon;
  r.depth_km = *depth;
  if (!parse_optional_magnitude(tokens[5], r.md) || !parse_optional_magnitude(tokens[6], r.ml) ||
      !parse_optional_magnitude(tokens[7], r.mw))
    return fail("invalid magnitude");
  r.raw_location = std::string(strip_koeri_quality(line.substr(pos)));
  if (auto reason = check_record(r); !reason.empty()) return fail(std::move(reason));
  return LineOutcome{std::move(r), {}};
}

ParseResult parse_catalog(std::istream& source, CatalogFormat format) {
  if (!source) throw IngestionError("catalog source is not readable");
  ParseResult result;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(source, line)) {
    ++line_no;
    std::string_view view = line;
    if (line_no == 1 && view.starts_with("\xEF\xBB\xBF")) view.remove_prefix(3);
    view = trim(view);
    if (view.empty()) continue;
    if (format == CatalogFormat::canonical_csv && view == kCanonicalCsvHeader) continue;
    auto outcome = format == CatalogFormat::canonical_csv ? parse_canonical_csv_line(view) : parse_koeri_line(view);
    if (outcome.record) {
      result.records.push_back(std::move(*outcome.record));
    } else {
      result.diagnostics.push_back({line_no, std::move(outcome.reason)});
    }
  }
  if (source.bad()) throw IngestionError("read error after line " + std::to_string(line_no));
  if (result.records.empty()) throw EmptyCatalogError("catalog contains no well-formed records");
  return result;
}

ParseResult parse_catalog_file(const std::string& path, CatalogFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IngestionError("cannot open catalog file: " + path);
  try {
    return parse_catalog(in, format);
  } catch (const EmptyCatalogError&) {
    throw EmptyCatalogError("catalog contains no well-formed records: " + path);
  }
}

void emit_canonical_csv(std::span<const EventRecord> records, std::ostream& out) {
  std::string buf;
  buf.append(kCanonicalCsvHeader).push_back('\n');
  for (const auto& r : records) {
    buf += format_date(r.date);
    buf += ',';
    buf += format_time(r.time_of_day);
    for (const double v : {r.latitude, r.longitude, r.depth_km}) {
      buf += ',';
      append_number(buf, v);
    }
    for (const auto& mag : {r.md, r.ml, r.mw}) {
      buf += ',';
      if (mag) append_number(buf, *mag);
    }
    buf += ',';
    buf += r.raw_location;
    buf += '\n';
  }
  out << buf;
}

// ---------------------------------------------------------------------------

NormalizationMap::NormalizationMap(const std::map<std::string, std::string>& entries,
                                   const std::set<std::string>& passthrough)
    : canonical_(fold_all(passthrough)) {
  for (const auto& [key, value] : entries) {
    const auto k = fold_location_key(key);
    const auto v = fold_location_key(value);
    if (k.empty() || v.empty()) throw ConfigError("normalization entry with empty key or value");
    if (const auto [it, inserted] = entries_.emplace(k, v); !inserted && it->second != v)
      throw ConfigError("conflicting normalization entries for " + k);
    canonical_.insert(v);
  }
  for (const auto& [key, value] : entries_) {
    if (canonical_.contains(key))
      throw ConfigError("normalization key is also a canonical name: " + key);
  }
}

NormalizationMap NormalizationMap::parse(std::istream& in) {
  std::map<std::string, std::string> entries;
  std::set<std::string> passthrough;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto view = trim(line);
    if (view.empty() || view.front() == '#') continue;
    if (const auto eq = view.find('='); eq != std::string_view::npos) {
      const auto key = fold_location_key(view.substr(0, eq));
      const auto value = fold_location_key(view.substr(eq + 1));
      if (key.empty() || value.empty())
        throw ConfigError("normalization map line " + std::to_string(line_no) + ": empty key or value");
      if (const auto [it, inserted] = entries.emplace(key, value); !inserted && it->second != value)
        throw ConfigError("normalization map line " + std::to_string(line_no) + ": conflicting entry for " + key);
    } else {
      passthrough.insert(fold_location_key(view));
    }
  }
  return NormalizationMap(entries, passthrough);
}

NormalizationMap NormalizationMap::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open normalization map: " + path);
  return parse(in);
}

std::optional<std::string> normalize_location(std::string_view raw, const NormalizationMap& map) {
  const std::string key = fold_location_key(raw);
  if (key.empty()) return std::nullopt;
  const auto& entries = map.entries();

  if (const auto rp = key.rfind(')'); rp != std::string::npos) {
    if (const auto lp = key.rfind('(', rp); lp != std::string::npos) {
      const std::string inner = fold_location_key(std::string_view(key).substr(lp + 1, rp - lp - 1));
      if (map.is_canonical(inner)) return inner;
      if (const auto it = entries.find(inner); it != entries.end()) return it->second;
    }
  }
  if (const auto it = entries.find(key); it != entries.end()) return it->second;
  if (map.is_canonical(key)) return key;
  return std::nullopt;
}

std::vector<EventRecord> normalize_events(std::span<const EventRecord> events, const NormalizationMap& map) {
  std::vector<EventRecord> out(events.begin(), events.end());
  for (auto& e : out) e.region = normalize_location(e.raw_location, map);
  return out;
}

// ---------------------------------------------------------------------------

RegionWhitelist parse_region_whitelist(std::istream& in) {
  RegionWhitelist names;
  std::string line;
  while (std::getline(in, line)) {
    const auto view = trim(line);
    if (view.empty() || view.front() == '#') continue;
    names.insert(fold_location_key(view));
  }
  return names;
}

RegionWhitelist load_region_whitelist(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open region whitelist: " + path);
  auto names = parse_region_whitelist(in);
  if (names.empty()) throw ConfigError("region whitelist is empty: " + path);
  return names;
}

void FilterPolicy::validate() const {
  if (!(min_ml >= 0.0)) throw ConfigError("min_ml must be >= 0");
  if (region_whitelist.empty()) throw ConfigError("region whitelist must not be empty");
}

bool FilterPolicy::within_borders(const EventRecord& e) const {
  return e.region && region_whitelist.contains(*e.region);
}

bool FilterPolicy::passes_magnitude(const EventRecord& e) const {
  if (!e.ml) return !drop_missing_ml;
  return *e.ml >= min_ml;
}

std::vector<EventRecord> filter_events(std::span<const EventRecord> events, const FilterPolicy& policy) {
  policy.validate();
  std::vector<EventRecord> kept;
  std::copy_if(events.begin(), events.end(), std::back_inserter(kept),
               [&](const EventRecord& e) { return policy.within_borders(e) && policy.passes_magnitude(e); });
  return kept;
}

CatalogStats compute_stats(std::span<const EventRecord> all, const FilterPolicy& policy) {
  CatalogStats stats;
  stats.n_all = all.size();
  for (const auto& e : all) {
    if (!policy.within_borders(e)) continue;
    ++stats.n_within_borders;
    if (!e.ml) continue;
    if (*e.ml >= policy.min_ml) ++stats.n_ml_ge_threshold;
    if (!stats.max_ml || *e.ml > *stats.max_ml) stats.max_ml = e.ml;
  }
  return stats;
}

}  // namespace quakerules
