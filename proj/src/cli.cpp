#include "quakerules/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "quakerules/error.hpp"
#include "quakerules/miner.hpp"
#include "quakerules/rules.hpp"

#ifndef QUAKERULES_DATA_DIR
#define QUAKERULES_DATA_DIR "data"
#endif

namespace quakerules {

namespace {

constexpr std::size_t kMaxDiagnosticsShown = 5;
constexpr std::size_t kMaxUnmappedShown = 20;

// Distinguishes configuration problems (exit 1) from data problems (exit 2).
struct DataFailure : Error {
  using Error::Error;
};

struct Inputs {
  RegionWhitelist whitelist;
  NormalizationMap normmap;
};

Inputs load_inputs(const RunConfig& cfg) {
  if (cfg.inputs.empty()) throw ConfigError("at least one --input is required");
  const std::string dir = default_data_dir();
  Inputs in;
  in.whitelist = load_region_whitelist(cfg.regions_path.empty() ? dir + "/regions.txt" : cfg.regions_path);
  in.normmap = NormalizationMap::load(cfg.normmap_path.empty() ? dir + "/normmap.txt" : cfg.normmap_path);
  if (cfg.range.empty()) throw ConfigError("--from is after --to");
  return in;
}

FilterPolicy make_policy(const RunConfig& cfg, const Inputs& in) {
  FilterPolicy policy;
  policy.min_ml = cfg.min_ml;
  policy.region_whitelist = in.whitelist;
  policy.validate();
  return policy;
}

// Parses, normalizes and range-restricts one catalog file.
std::vector<EventRecord> load_catalog(const std::string& path, const RunConfig& cfg, const Inputs& in,
                                      std::ostream& err) {
  ParseResult parsed;
  try {
    parsed = parse_catalog_file(path, cfg.format);
  } catch (const IngestionError& e) {
    throw ConfigError(e.what());
  } catch (const EmptyCatalogError& e) {
    throw DataFailure(e.what());
  }
  if (!parsed.diagnostics.empty()) {
    err << path << ": skipped " << parsed.diagnostics.size() << " malformed line(s)\n";
    for (std::size_t i = 0; i < std::min(parsed.diagnostics.size(), kMaxDiagnosticsShown); ++i)
      err << "  line " << parsed.diagnostics[i].line << ": " << parsed.diagnostics[i].reason << '\n';
  }
  auto events = normalize_events(parsed.records, in.normmap);
  std::erase_if(events, [&](const EventRecord& e) { return !cfg.range.contains(e.date); });
  return events;
}

void report_unmapped(std::span<const EventRecord> events, std::ostream& err) {
  std::map<std::string, std::size_t> counts;
  for (const auto& e : events) {
    if (!e.region) ++counts[fold_location_key(e.raw_location)];
  }
  if (counts.empty()) return;
  std::vector<std::pair<std::string, std::size_t>> sorted(counts.begin(), counts.end());
  std::stable_sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  std::size_t total = 0;
  for (const auto& [name, n] : sorted) total += n;
  err << "unmapped locations: " << total << " event(s) in " << sorted.size() << " location(s)\n";
  for (std::size_t i = 0; i < std::min(sorted.size(), kMaxUnmappedShown); ++i)
    err << "  " << sorted[i].first << ": " << sorted[i].second << '\n';
  if (sorted.size() > kMaxUnmappedShown) err << "  ... and " << sorted.size() - kMaxUnmappedShown << " more\n";
}

std::string derive_title(const std::vector<std::string>& inputs) {
  std::string title;
  for (const auto& path : inputs) {
    if (!title.empty()) title += ", ";
    title += std::filesystem::path(path).stem().string();
  }
  return title;
}

bool write_document(const std::string& path, const std::string& doc, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << doc;
    return static_cast<bool>(out);
  }
  std::ofstream file(path, std::ios::binary);
  file << doc;
  return static_cast<bool>(file);
}

void write_debug_dump(const std::string& path, const std::string& doc) {
  if (path.empty()) return;
  std::ofstream file(path, std::ios::binary);
  file << doc;
  if (!file) throw ConfigError("cannot write " + path);
}

template <typename Body>
int guarded(std::ostream& err, Body&& body) {
  try {
    return body();
  } catch (const DataFailure& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const EmptyCatalogError& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const EmptyDatabaseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
}

}  // namespace

std::string default_data_dir() { return QUAKERULES_DATA_DIR; }

int run_mine(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Inputs in = load_inputs(cfg);
    const FilterPolicy policy = make_policy(cfg, in);
    MiningConfig mining{cfg.min_support, std::nullopt, cfg.workers};
    mining.validate();
    const RankingPolicy ranking{cfg.min_confidence, cfg.top_k};
    ranking.validate();

    std::vector<EventRecord> events;
    for (const auto& path : cfg.inputs) {
      auto part = load_catalog(path, cfg, in, err);
      events.insert(events.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
    }
    report_unmapped(events, err);

    const std::string title = cfg.title.empty() ? derive_title(cfg.inputs) : cfg.title;
    const std::vector<LabeledStats> stats{{title, compute_stats(events, policy)}};
    err << emit_stats_table(stats, TableFormat::csv);

    const auto missing_ml = std::count_if(events.begin(), events.end(), [&](const EventRecord& e) {
      return policy.within_borders(e) && !e.ml;
    });
    if (missing_ml > 0) err << "dropped " << missing_ml << " event(s) without ML\n";

    const auto kept = filter_events(events, policy);
    if (kept.empty()) throw DataFailure("no events left after filtering");

    const TransactionDb db = basketize(kept, cfg.range, cfg.denominator);
    std::ostringstream baskets;
    dump_baskets(db, baskets);
    write_debug_dump(cfg.dump_baskets_path, baskets.str());

    const SupportTable table = frequent_itemsets(db, mining);
    std::ostringstream itemsets;
    dump_itemsets(table, db, itemsets);
    write_debug_dump(cfg.dump_itemsets_path, itemsets.str());

    const auto rules = generate_rules(table, cfg.min_confidence);
    const auto ranked = rank_rules(rules, ranking);
    err << "transactions: " << db.n_transactions() << " (support denominator " << db.support_denominator()
        << "), items: " << db.dictionary_size() << ", frequent itemsets: " << table.size()
        << ", rules: " << rules.size() << ", reported: " << ranked.size() << '\n';

    if (!write_document(cfg.out_path, emit_rule_table(ranked, db, cfg.out_format, title), out))
      throw ConfigError("cannot write output " + cfg.out_path);
    return static_cast<int>(kExitOk);
  });
}

int run_stats(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Inputs in = load_inputs(cfg);
    const FilterPolicy policy = make_policy(cfg, in);
    std::vector<LabeledStats> rows;
    for (const auto& path : cfg.inputs) {
      const auto events = load_catalog(path, cfg, in, err);
      report_unmapped(events, err);
      rows.emplace_back(std::filesystem::path(path).stem().string(), compute_stats(events, policy));
    }
    if (!write_document(cfg.out_path, emit_stats_table(rows, cfg.out_format), out))
      throw ConfigError("cannot write output " + cfg.out_path);
    return static_cast<int>(kExitOk);
  });
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Association rules between regions from daily earthquake baskets", "quakerules"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string from, to;

  const std::map<std::string, CatalogFormat> formats{{"canonical-csv", CatalogFormat::canonical_csv},
                                                     {"koeri-text", CatalogFormat::koeri_text}};
  const std::map<std::string, TableFormat> out_formats{{"csv", TableFormat::csv}, {"markdown", TableFormat::markdown}};
  const std::map<std::string, DenominatorMode> denominators{{"active-days", DenominatorMode::active_days},
                                                            {"all-days", DenominatorMode::all_days}};

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--input", cfg.inputs, "Catalog file(s), repeatable")->required()->check(CLI::ExistingFile);
    sub->add_option("--format", cfg.format, "canonical-csv or koeri-text")
        ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case))
        ->option_text("FORMAT");
    sub->add_option("--from", from, "First day to include (YYYY-MM-DD)");
    sub->add_option("--to", to, "Last day to include (YYYY-MM-DD)");
    sub->add_option("--min-ml", cfg.min_ml, "Minimum local magnitude, inclusive")->check(CLI::NonNegativeNumber);
    sub->add_option("--regions", cfg.regions_path, "Region whitelist file");
    sub->add_option("--normmap", cfg.normmap_path, "Location normalization map file");
    sub->add_option("--out", cfg.out_path, "Output file, '-' for standard output");
    sub->add_option("--out-format", cfg.out_format, "csv or markdown")
        ->transform(CLI::CheckedTransformer(out_formats, CLI::ignore_case))
        ->option_text("FORMAT");
  };

  CLI::App* mine = app.add_subcommand("mine", "Mine and rank association rules");
  add_common(mine);
  mine->add_option("--min-support", cfg.min_support, "Minimum support fraction in (0, 1]")
      ->check(CLI::Range(0.0, 1.0));
  mine->add_option("--min-confidence", cfg.min_confidence, "Minimum confidence in [0, 1]")
      ->check(CLI::Range(0.0, 1.0));
  mine->add_option("--top-k", cfg.top_k, "Rules kept by confidence before sorting by lift")
      ->check(CLI::PositiveNumber);
  mine->add_option("--denominator", cfg.denominator, "active-days or all-days")
      ->transform(CLI::CheckedTransformer(denominators, CLI::ignore_case))
      ->option_text("MODE");
  mine->add_option("--title", cfg.title, "Report title (default: input file names)");
  mine->add_option("--threads", cfg.workers, "Support counting threads")->check(CLI::PositiveNumber);
  mine->add_option("--dump-baskets", cfg.dump_baskets_path, "Write the daily baskets to this file");
  mine->add_option("--dump-itemsets", cfg.dump_itemsets_path, "Write the frequent itemsets to this file");

  CLI::App* stats = app.add_subcommand("stats", "Catalog statistics, one row per input file");
  add_common(stats);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (app.exit(e, out, err) == 0) return kExitOk;
    return kExitUsage;
  }

  for (const auto& [text, slot] : {std::pair{&from, &cfg.range.from}, std::pair{&to, &cfg.range.to}}) {
    if (text->empty()) continue;
    *slot = parse_date(*text);
    if (!*slot) {
      err << "usage error: invalid date '" << *text << "', expected YYYY-MM-DD\n";
      return kExitUsage;
    }
  }

  if (mine->parsed()) return run_mine(cfg, out, err);
  return run_stats(cfg, out, err);
}

}  // namespace quakerules
