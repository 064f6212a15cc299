#include "powbench/storage.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "powbench/hex.hpp"

namespace powbench {

using nlohmann::json;

std::string format_seconds(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  std::string s(buf, ptr);
  if (s.find('e') != std::string::npos || s.find('E') != std::string::npos ||
      s.find("inf") != std::string::npos || s.find("nan") != std::string::npos) {
    return s;
  }
  auto dot = s.find('.');
  if (dot == std::string::npos) {
    return s + ".000000";
  }
  std::size_t frac = s.size() - dot - 1;
  if (frac < 6) {
    s.append(6 - frac, '0');
  }
  return s;
}

double parse_seconds(const std::string& text) {
  double value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(),
                                   value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw InvariantViolation("seconds", "malformed decimal '" + text + "'");
  }
  return value;
}

namespace {

json config_to_json(const PowConfig& config) {
  json params;
  switch (config.algorithm) {
    case Algorithm::Argon2i: {
      const auto& p = config.argon2i();
      params = {{"p", p.parallelism},
                {"t", p.iterations},
                {"m_kib", p.memory_kib},
                {"tag_len", p.tag_len},
                {"salt_hex", to_hex(p.salt)}};
      break;
    }
    case Algorithm::CatenaBrg: {
      const auto& p = config.catena();
      params = {{"garlic", p.garlic}, {"lambda", p.lambda}};
      break;
    }
    case Algorithm::YescryptLike: {
      const auto& p = config.yescrypt();
      params = {{"threads", p.threads},
                {"blocks", p.blocks},
                {"block_size", p.block_size}};
      break;
    }
  }
  return {{"algorithm", to_string(config.algorithm)},
          {"label", config.label},
          {"params", params}};
}

PowConfig config_from_json(const json& j) {
  PowConfig config;
  config.algorithm = algorithm_from_string(j.at("algorithm").get<std::string>());
  config.label = j.at("label").get<std::string>();
  const json& params = j.at("params");
  switch (config.algorithm) {
    case Algorithm::Argon2i: {
      Argon2iParams p;
      p.parallelism = params.at("p").get<std::uint32_t>();
      p.iterations = params.at("t").get<std::uint32_t>();
      p.memory_kib = params.at("m_kib").get<std::uint32_t>();
      p.tag_len = params.at("tag_len").get<std::uint32_t>();
      p.salt = from_hex(params.at("salt_hex").get<std::string>());
      config.params = p;
      break;
    }
    case Algorithm::CatenaBrg: {
      CatenaParams p;
      p.garlic = params.at("garlic").get<std::uint32_t>();
      p.lambda = params.at("lambda").get<std::uint32_t>();
      config.params = p;
      break;
    }
    case Algorithm::YescryptLike: {
      YescryptParams p;
      p.threads = params.at("threads").get<std::uint32_t>();
      p.blocks = params.at("blocks").get<std::uint32_t>();
      p.block_size = params.at("block_size").get<std::uint32_t>();
      config.params = p;
      break;
    }
  }
  return config;
}

json env_to_json(const EnvMetadata& env) {
  json j = {{"os_name", env.os_name},
            {"os_version", env.os_version},
            {"cpu_model", env.cpu_model},
            {"logical_cores", env.logical_cores},
            {"host_id", env.host_id},
            {"captured_at", env.captured_at}};
  if (env.declared_class) {
    j["declared_class"] = to_string(*env.declared_class);
  }
  return j;
}

EnvMetadata env_from_json(const json& j) {
  EnvMetadata env;
  env.os_name = j.at("os_name").get<std::string>();
  env.os_version = j.at("os_version").get<std::string>();
  env.cpu_model = j.at("cpu_model").get<std::string>();
  env.logical_cores = j.at("logical_cores").get<std::uint32_t>();
  env.host_id = j.at("host_id").get<std::string>();
  env.captured_at = j.at("captured_at").get<std::string>();
  if (j.contains("declared_class")) {
    env.declared_class =
        platform_class_from_string(j.at("declared_class").get<std::string>());
  }
  return env;
}

json load_to_json(const LoadCondition& load) {
  if (load.mode == LoadMode::Idle) {
    return {{"mode", "idle"}};
  }
  return {{"mode", "busy"}, {"workers", load.workers}};
}

LoadCondition load_from_json(const json& j) {
  std::string mode = j.at("mode").get<std::string>();
  if (mode == "idle") {
    if (j.contains("workers")) {
      throw InvariantViolation("load.workers", "idle load carries no workers");
    }
    return LoadCondition::idle();
  }
  if (mode == "busy") {
    return LoadCondition::busy(j.at("workers").get<std::uint32_t>());
  }
  throw InvariantViolation("load.mode", "unknown mode '" + mode + "'");
}

void validate_record(const CampaignRecord& record) {
  try {
    validate_config(record.config);
  } catch (const InvalidParam& e) {
    throw InvariantViolation("config." + e.field, e.reason);
  } catch (const MemoryCapExceeded&) {
    // The cap is a run-time guard, not a file invariant.
  }
  if (!(record.budget_s > 0)) {
    throw InvariantViolation("budget_s", "must be positive");
  }
  if (record.env.logical_cores < 1) {
    throw InvariantViolation("env.logical_cores", "must be at least 1");
  }
  if (record.load.mode == LoadMode::Busy && record.load.workers < 1) {
    throw InvariantViolation("load.workers", "busy mode needs >= 1 worker");
  }
  double prev_offset = -1.0;
  std::uint64_t model = cost_model(record.config);
  for (std::size_t i = 0; i < record.samples.size(); ++i) {
    const RunSample& s = record.samples[i];
    std::string at = "samples[" + std::to_string(i) + "]";
    if (!(s.started_offset_s < record.budget_s)) {
      throw InvariantViolation(at + ".started_offset_s",
                               "must be below budget_s");
    }
    if (s.started_offset_s < prev_offset) {
      throw InvariantViolation(at + ".started_offset_s",
                               "samples must be ordered by start offset");
    }
    prev_offset = s.started_offset_s;
    if (s.completed && !(s.duration_s > 0)) {
      throw InvariantViolation(at + ".duration_s",
                               "completed runs need positive duration");
    }
    if (s.completed && s.cost_blocks != model) {
      throw InvariantViolation(at + ".cost_blocks",
                               "does not match the config's cost model");
    }
  }
}

}  // namespace

std::string campaign_to_json(const CampaignRecord& record) {
  json samples = json::array();
  for (const RunSample& s : record.samples) {
    samples.push_back({{"duration_s", format_seconds(s.duration_s)},
                       {"started_offset_s", format_seconds(s.started_offset_s)},
                       {"cost_blocks", s.cost_blocks},
                       {"completed", s.completed}});
  }
  json j = {{"schema_version", record.schema_version},
            {"config", config_to_json(record.config)},
            {"env", env_to_json(record.env)},
            {"load", load_to_json(record.load)},
            {"budget_s", format_seconds(record.budget_s)},
            {"samples", samples}};
  return j.dump(2) + "\n";
}

CampaignRecord campaign_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw InvariantViolation("json", e.what());
  }
  try {
    std::int64_t version = j.at("schema_version").get<std::int64_t>();
    if (version != 1) {
      throw SchemaError(version);
    }
    CampaignRecord record;
    record.schema_version = version;
    record.config = config_from_json(j.at("config"));
    record.env = env_from_json(j.at("env"));
    record.load = load_from_json(j.at("load"));
    record.budget_s = parse_seconds(j.at("budget_s").get<std::string>());
    for (const json& s : j.at("samples")) {
      RunSample sample;
      sample.duration_s = parse_seconds(s.at("duration_s").get<std::string>());
      sample.started_offset_s =
          parse_seconds(s.at("started_offset_s").get<std::string>());
      sample.cost_blocks = s.at("cost_blocks").get<std::uint64_t>();
      sample.completed = s.at("completed").get<bool>();
      record.samples.push_back(sample);
    }
    validate_record(record);
    return record;
  } catch (const json::exception& e) {
    throw InvariantViolation("json", e.what());
  }
}

void save_campaign(const CampaignRecord& record, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError(path, "cannot open for writing");
  }
  out << campaign_to_json(record);
  if (!out) {
    throw IoError(path, "write failed");
  }
}

CampaignRecord load_campaign(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError(path, "cannot open for reading");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return campaign_from_json(buf.str());
}

std::string gate_to_json(const GateSpec& gate) {
  json j = {{"schema_version", 1},
            {"config", config_to_json(gate.config)},
            {"n_required", gate.n_required},
            {"t_budget_s", format_seconds(gate.t_budget_s)}};
  return j.dump(2) + "\n";
}

GateSpec gate_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw InvariantViolation("json", e.what());
  }
  try {
    std::int64_t version = j.at("schema_version").get<std::int64_t>();
    if (version != 1) {
      throw SchemaError(version);
    }
    GateSpec gate;
    gate.config = config_from_json(j.at("config"));
    gate.n_required = j.at("n_required").get<std::uint32_t>();
    gate.t_budget_s = parse_seconds(j.at("t_budget_s").get<std::string>());
    if (gate.n_required < 1) {
      throw InvariantViolation("n_required", "must be at least 1");
    }
    if (!(gate.t_budget_s > 0)) {
      throw InvariantViolation("t_budget_s", "must be positive");
    }
    return gate;
  } catch (const json::exception& e) {
    throw InvariantViolation("json", e.what());
  }
}

void save_gate(const GateSpec& gate, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError(path, "cannot open for writing");
  }
  out << gate_to_json(gate);
  if (!out) {
    throw IoError(path, "write failed");
  }
}

GateSpec load_gate(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError(path, "cannot open for reading");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return gate_from_json(buf.str());
}

namespace {

std::string csv_quote(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) {
    return field;
  }
  std::string quoted = "\"";
  for (char c : field) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

}  // namespace

std::string campaigns_to_csv(const std::vector<CampaignRecord>& records) {
  if (records.empty()) {
    throw EmptyInput("record list");
  }
  std::string out =
      "label,algorithm,os,declared_class,load,run_index,duration_s,completed\n";
  for (const auto& record : records) {
    std::string load = record.load.mode == LoadMode::Idle
                           ? "idle"
                           : "busy:" + std::to_string(record.load.workers);
    std::string klass = record.env.declared_class
                            ? to_string(*record.env.declared_class)
                            : "";
    for (std::size_t i = 0; i < record.samples.size(); ++i) {
      const RunSample& s = record.samples[i];
      out += csv_quote(record.config.label) + ',' +
             to_string(record.config.algorithm) + ',' +
             csv_quote(record.env.os_name) + ',' + klass + ',' + load + ',' +
             std::to_string(i) + ',' + format_seconds(s.duration_s) + ',' +
             (s.completed ? "true" : "false") + '\n';
    }
  }
  return out;
}

void export_csv(const std::vector<CampaignRecord>& records,
                const std::string& path) {
  std::string csv = campaigns_to_csv(records);
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError(path, "cannot open for writing");
  }
  out << csv;
  if (!out) {
    throw IoError(path, "write failed");
  }
}

}  // namespace powbench
