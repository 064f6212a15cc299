#pragma once

#include <string>
#include <utility>
#include <vector>

#include "powbench/measurement.hpp"
#include "powbench/stats.hpp"

namespace powbench {

// Markdown table: config parameters, then Min | Max | Sigma | Mean | K |
// Chebyshev. Times use 2 decimals, K up to 2, Chebyshev percent 2.
std::string render_stats_table(
    const std::vector<std::pair<PowConfig, StatsSummary>>& rows);

// Markdown table of completed-run counts: one row per platform and load
// mode (idle first), one column per OS; empty cells render as "-".
std::string render_counts_table(const std::vector<CampaignRecord>& records);

}  // namespace powbench
