#pragma once

#include <string>
#include <vector>

#include "powbench/measurement.hpp"
#include "powbench/stats.hpp"

namespace powbench {

// Campaign schema v1: UTF-8 JSON, sorted object keys, seconds serialized as
// decimal strings (shortest round-trip form, padded to >= 6 fractional
// digits) so load(save(r)) reproduces every field bit-exactly.

std::string campaign_to_json(const CampaignRecord& record);
CampaignRecord campaign_from_json(const std::string& text);

void save_campaign(const CampaignRecord& record, const std::string& path);
CampaignRecord load_campaign(const std::string& path);

std::string gate_to_json(const GateSpec& gate);
GateSpec gate_from_json(const std::string& text);

void save_gate(const GateSpec& gate, const std::string& path);
GateSpec load_gate(const std::string& path);

// One row per sample, RFC 4180 quoting, header:
//   label,algorithm,os,declared_class,load,run_index,duration_s,completed
std::string campaigns_to_csv(const std::vector<CampaignRecord>& records);
void export_csv(const std::vector<CampaignRecord>& records,
                const std::string& path);

// Decimal-seconds formatting used across files and reports.
std::string format_seconds(double value);
double parse_seconds(const std::string& text);

}  // namespace powbench
