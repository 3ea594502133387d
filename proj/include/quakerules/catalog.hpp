#pragma once

#include <chrono>
#include <cstddef>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace quakerules {

using Date = std::chrono::year_month_day;

/// One catalog row. `region` stays empty until normalization resolves it;
/// after normalization an empty region means the location was unmapped.
struct EventRecord {
  Date date{};
  std::chrono::seconds time_of_day{0};
  double latitude = 0.0;
  double longitude = 0.0;
  double depth_km = 0.0;
  std::optional<double> md;
  std::optional<double> ml;
  std::optional<double> mw;
  std::string raw_location;
  std::optional<std::string> region;

  friend bool operator==(const EventRecord&, const EventRecord&) = default;
};

enum class CatalogFormat { canonical_csv, koeri_text };

struct ParseDiagnostic {
  std::size_t line = 0;  // 1-based
  std::string reason;
};

struct ParseResult {
  std::vector<EventRecord> records;
  std::vector<ParseDiagnostic> diagnostics;
};

/// Parses a whole catalog stream. Malformed lines are skipped and reported;
/// blank lines and the canonical CSV header are skipped silently.
/// Throws IngestionError if the stream is unreadable and EmptyCatalogError
/// if no line yields a record.
ParseResult parse_catalog(std::istream& source, CatalogFormat format);
ParseResult parse_catalog_file(const std::string& path, CatalogFormat format);

// Single-line parsers; return the failure reason on error.
struct LineOutcome {
  std::optional<EventRecord> record;
  std::string reason;
};
LineOutcome parse_canonical_csv_line(std::string_view line);
LineOutcome parse_koeri_line(std::string_view line);

inline constexpr std::string_view kCanonicalCsvHeader = "date,time,lat,lon,depth_km,md,ml,mw,location";

/// Writes the canonical CSV (header included). Numbers are printed in their
/// shortest round-trip form so that parse -> emit -> parse is lossless.
void emit_canonical_csv(std::span<const EventRecord> records, std::ostream& out);

// Date/time text helpers shared with the other modules.
std::string format_date(const Date& d);
std::string format_time(std::chrono::seconds tod);
std::optional<Date> parse_date(std::string_view text);

// ---------------------------------------------------------------------------
// Location normalization

/// Uppercases ASCII, folds Turkish and common Latin diacritics to ASCII
/// (İ/ı -> I, Ğ -> G, Ş -> S, ...), trims and collapses internal whitespace.
std::string fold_location_key(std::string_view raw);

class NormalizationMap {
 public:
  NormalizationMap() = default;

  /// `entries` maps alias -> canonical name, `passthrough` lists names kept
  /// as-is. Keys and names are folded. Every entry value joins the canonical
  /// set. Throws ConfigError if a canonical name is also an alias key.
  NormalizationMap(const std::map<std::string, std::string>& entries,
                   const std::set<std::string>& passthrough);

  /// `KEY=VALUE` lines are aliases, bare lines are passthrough names, `#`
  /// starts a comment line.
  static NormalizationMap parse(std::istream& in);
  static NormalizationMap load(const std::string& path);

  bool is_canonical(const std::string& folded) const { return canonical_.contains(folded); }
  const std::map<std::string, std::string>& entries() const { return entries_; }
  const std::set<std::string>& canonical_names() const { return canonical_; }

 private:
  std::map<std::string, std::string> entries_;
  std::set<std::string> canonical_;
};

/// Resolves a raw location to its canonical region, or nullopt if unmapped.
/// Order: parenthesized suffix (canonical, then via alias), whole key via
/// alias, whole key as canonical name.
std::optional<std::string> normalize_location(std::string_view raw, const NormalizationMap& map);

/// Copies `events` with `region` filled in by normalize_location.
std::vector<EventRecord> normalize_events(std::span<const EventRecord> events,
                                          const NormalizationMap& map);

// ---------------------------------------------------------------------------
// Filtering and statistics

using RegionWhitelist = std::set<std::string>;

/// One folded name per line, `#` comments.
RegionWhitelist parse_region_whitelist(std::istream& in);
RegionWhitelist load_region_whitelist(const std::string& path);

struct FilterPolicy {
  double min_ml = 2.0;
  RegionWhitelist region_whitelist;
  bool drop_missing_ml = true;

  /// Throws ConfigError on a negative threshold or an empty whitelist.
  void validate() const;
  bool within_borders(const EventRecord& e) const;
  bool passes_magnitude(const EventRecord& e) const;
};

/// Keeps records inside the whitelist whose ML is at least `min_ml`
/// (inclusive). Order is preserved.
std::vector<EventRecord> filter_events(std::span<const EventRecord> events, const FilterPolicy& policy);

struct CatalogStats {
  std::size_t n_all = 0;
  std::size_t n_within_borders = 0;
  std::size_t n_ml_ge_threshold = 0;
  std::optional<double> max_ml;

  friend bool operator==(const CatalogStats&, const CatalogStats&) = default;
};

CatalogStats compute_stats(std::span<const EventRecord> all, const FilterPolicy& policy);

}  // namespace quakerules
