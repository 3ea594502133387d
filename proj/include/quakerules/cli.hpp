#pragma once

#include <cstddef>
#include <ostream>
#include <string>
#include <vector>

#include "quakerules/basketizer.hpp"
#include "quakerules/catalog.hpp"
#include "quakerules/report.hpp"

namespace quakerules {

enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitData = 2 };

struct RunConfig {
  std::vector<std::string> inputs;
  CatalogFormat format = CatalogFormat::canonical_csv;
  DateRange range;
  double min_ml = 2.0;
  std::string regions_path;
  std::string normmap_path;
  double min_support = 0.05;
  double min_confidence = 0.25;
  std::size_t top_k = 30;
  DenominatorMode denominator = DenominatorMode::active_days;
  std::string out_path = "-";  // "-" writes to the output stream
  TableFormat out_format = TableFormat::csv;
  std::string title;  // empty: derived from the input file names
  unsigned workers = 1;
  std::string dump_baskets_path;
  std::string dump_itemsets_path;
};

/// Directory holding the shipped region whitelist and normalization map.
std::string default_data_dir();

/// Full pipeline. The rule table goes to `out` (or cfg.out_path), catalog
/// statistics and diagnostics to `err`. Returns an ExitCode.
int run_mine(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// One statistics row per input file, labelled by the file stem.
int run_stats(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Parses `args` (without the program name) and dispatches to a subcommand.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace quakerules
