#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstddef>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include <json.hpp>

#include "chartkit/errors.hpp"
#include "chartkit/lct.hpp"
#include "chartkit/sim/llm_client.hpp"
#include "chartkit/sim/prompts.hpp"
#include "chartkit/sim/sandbox.hpp"

namespace chartkit::sim {

struct LlmParams {
  std::string model = "unknown";
  double temperature = 0.7;
};

enum class JobStatus { pending, label_done, verified, skipped };

inline std::string_view to_string(JobStatus s) {
  switch (s) {
    case JobStatus::pending: return "pending";
    case JobStatus::label_done: return "label_done";
    case JobStatus::verified: return "verified";
    case JobStatus::skipped: return "skipped";
  }
  return "unknown";
}

inline JobStatus job_status_from_string(std::string_view s) {
  if (s == "pending") return JobStatus::pending;
  if (s == "label_done") return JobStatus::label_done;
  if (s == "verified") return JobStatus::verified;
  if (s == "skipped") return JobStatus::skipped;
  throw Error(errc::parse_error, "unknown job status '" + std::string(s) + "'");
}

// Asks the model to imitate the seed table and validates the answer:
// it must parse as LCT (code fences are stripped first) and every entity
// must be non-empty. The row count is free to differ from the seed.
// Invalid answers are retried up to max_retries times in total.
inline std::string generate_label(const std::string& seed_lct, LlmClient& client,
                                  const PromptTemplate& prompt, const LlmParams& params,
                                  int max_retries = 3) {
  parse_lct(seed_lct);  // caller contract: the seed itself must be valid

  std::string last_reason;
  for (int attempt = 1; attempt <= max_retries; ++attempt) {
    const std::string response = client.complete(
        {params.model, prompt.system_text, prompt.render_user(seed_lct), params.temperature});
    const std::string cleaned = strip_code_fences(response);
    try {
      const LctTable table = parse_lct(cleaned);
      bool entities_ok = true;
      for (const auto& e : table.col_entities)
        if (text::trim(e).empty()) entities_ok = false;
      for (const auto& e : table.row_entities)
        if (text::trim(e).empty()) entities_ok = false;
      if (!entities_ok) {
        last_reason = "empty entity in generated table";
        continue;
      }
      return cleaned;
    } catch (const Error& e) {
      last_reason = e.what();
    }
  }
  throw Error(errc::validation_failed,
              "label generation failed after " + std::to_string(max_retries) +
                  " attempt(s): " + last_reason);
}

// Asks the model for drawing code for the given table. Fences are
// stripped per the prompt's own no-extra-words instruction; an empty body
// is a validation failure (the pipeline's retry loop owns regeneration).
inline std::string generate_script(const std::string& label_lct, LlmClient& client,
                                   const PromptTemplate& prompt, const LlmParams& params) {
  parse_lct(label_lct);
  const std::string response = client.complete(
      {params.model, prompt.system_text, prompt.render_user(label_lct), params.temperature});
  const std::string cleaned = strip_code_fences(response);
  if (text::trim(cleaned).empty())
    throw Error(errc::validation_failed, "model returned an empty script");
  return cleaned;
}

struct SimSeed {
  std::string id;  // filesystem-safe; used to name artifacts
  std::string lct_text;
};

struct ManifestEntry {
  std::string id;
  std::string sim_label_path;
  std::string script_path;
  std::string image_path;
  JobStatus status = JobStatus::pending;
  int attempts = 0;
  std::string model_id;
  std::string created_at;
};

struct StatusCounts {
  std::size_t pending = 0;
  std::size_t label_done = 0;
  std::size_t verified = 0;
  std::size_t skipped = 0;
};

struct SimManifest {
  std::vector<ManifestEntry> entries;

  StatusCounts counts() const {
    StatusCounts c;
    for (const auto& e : entries) {
      switch (e.status) {
        case JobStatus::pending: ++c.pending; break;
        case JobStatus::label_done: ++c.label_done; break;
        case JobStatus::verified: ++c.verified; break;
        case JobStatus::skipped: ++c.skipped; break;
      }
    }
    return c;
  }
};

namespace detail {

inline nlohmann::ordered_json entry_to_json(const ManifestEntry& e) {
  nlohmann::ordered_json j;
  j["id"] = e.id;
  j["sim_label_path"] = e.sim_label_path;
  j["script_path"] = e.script_path;
  j["image_path"] = e.image_path;
  j["status"] = std::string(to_string(e.status));
  j["attempts"] = e.attempts;
  j["model_id"] = e.model_id;
  j["created_at"] = e.created_at;
  return j;
}

inline ManifestEntry entry_from_json(const nlohmann::json& j) {
  ManifestEntry e;
  e.id = j.at("id").get<std::string>();
  e.sim_label_path = j.value("sim_label_path", std::string{});
  e.script_path = j.value("script_path", std::string{});
  e.image_path = j.value("image_path", std::string{});
  e.status = job_status_from_string(j.at("status").get<std::string>());
  e.attempts = j.value("attempts", 0);
  e.model_id = j.value("model_id", std::string{});
  e.created_at = j.value("created_at", std::string{});
  return e;
}

inline std::string now_iso8601() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  ::gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline void move_file(const std::filesystem::path& from, const std::filesystem::path& to) {
  std::error_code ec;
  std::filesystem::rename(from, to, ec);
  if (ec) {  // cross-device fallback
    std::filesystem::copy_file(from, to, std::filesystem::copy_options::overwrite_existing);
    std::filesystem::remove(from);
  }
}

}  // namespace detail

// Writes one JSON object per line, entries in the order given.
inline void write_manifest(const std::filesystem::path& root, const SimManifest& manifest) {
  std::ofstream out(root / "manifest.jsonl", std::ios::binary | std::ios::trunc);
  if (!out) throw Error(errc::config_invalid, "cannot write manifest under " + root.string());
  for (const auto& e : manifest.entries) out << detail::entry_to_json(e).dump() << "\n";
}

inline SimManifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(errc::config_invalid, "cannot read manifest " + path.string());
  SimManifest manifest;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    const auto j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded())
      throw Error(errc::parse_error,
                  "manifest line " + std::to_string(line_no) + " is not valid JSON");
    manifest.entries.push_back(detail::entry_from_json(j));
  }
  return manifest;
}

struct PipelineConfig {
  std::filesystem::path output_root;
  int max_retries = 3;      // self-inspection loop bound per stage
  int concurrency = 4;      // independent jobs in flight
  LlmParams llm;
  PromptTemplate data_prompt = default_data_prompt();
  PromptTemplate image_prompt = default_image_prompt();
  SandboxConfig sandbox;
  bool resume = true;
};

// Runs the two-stage production loop over every seed: imitate the label,
// generate drawing code, execute it, and retry code generation until it
// verifies or the retry budget is spent. Per-job failures land in the
// manifest as status, never abort the batch. With resume enabled, seeds
// whose previous entry is `verified` (artifacts still present) are kept
// as-is and cost no model calls.
//
// Output layout under config.output_root:
//   labels/<id>.csv   scripts/<id>.txt   images/<id>.<ext>
//   logs/<id>.log     manifest.jsonl
inline SimManifest run_pipeline(const std::vector<SimSeed>& seeds, const PipelineConfig& config,
                                LlmClient& client) {
  namespace fs = std::filesystem;
  if (seeds.empty()) throw Error(errc::config_invalid, "no seeds given");
  if (config.output_root.empty()) throw Error(errc::config_invalid, "output_root is empty");
  if (config.max_retries < 1) throw Error(errc::config_invalid, "max_retries must be >= 1");

  const fs::path root = config.output_root;
  std::error_code ec;
  fs::create_directories(root / "labels", ec);
  fs::create_directories(root / "scripts", ec);
  fs::create_directories(root / "images", ec);
  fs::create_directories(root / "logs", ec);
  if (ec) throw Error(errc::config_invalid, "cannot create output layout under " + root.string());

  std::map<std::string, ManifestEntry> preserved;
  if (config.resume && fs::exists(root / "manifest.jsonl")) {
    for (auto& e : load_manifest(root / "manifest.jsonl").entries) {
      if (e.status != JobStatus::verified) continue;
      const bool files_ok = !e.sim_label_path.empty() && fs::exists(root / e.sim_label_path) &&
                            !e.script_path.empty() && fs::exists(root / e.script_path) &&
                            !e.image_path.empty() && fs::exists(root / e.image_path);
      if (files_ok) preserved.emplace(e.id, std::move(e));
    }
  }

  std::vector<ManifestEntry> results(seeds.size());

  const auto run_job = [&](std::size_t idx) {
    const SimSeed& seed = seeds[idx];
    if (const auto it = preserved.find(seed.id); it != preserved.end()) {
      results[idx] = it->second;
      return;
    }

    ManifestEntry entry;
    entry.id = seed.id;
    entry.model_id = config.llm.model;
    entry.created_at = detail::now_iso8601();
    std::ofstream log(root / "logs" / (seed.id + ".log"), std::ios::binary | std::ios::trunc);

    std::string label;
    try {
      label = generate_label(seed.lct_text, client, config.data_prompt, config.llm,
                             config.max_retries);
    } catch (const Error& e) {
      log << "label generation failed: " << e.what() << "\n";
      entry.status = JobStatus::skipped;
      results[idx] = std::move(entry);
      return;
    }
    const fs::path label_path = root / "labels" / (seed.id + ".csv");
    detail::write_file(label_path, label);
    entry.sim_label_path = "labels/" + seed.id + ".csv";
    entry.status = JobStatus::label_done;

    for (int attempt = 1; attempt <= config.max_retries; ++attempt) {
      entry.attempts = attempt;
      std::string script;
      try {
        script = generate_script(label, client, config.image_prompt, config.llm);
      } catch (const Error& e) {
        log << "attempt " << attempt << ": script generation failed: " << e.what() << "\n";
        continue;
      }
      detail::write_file(root / "scripts" / (seed.id + ".txt"), script);
      entry.script_path = "scripts/" + seed.id + ".txt";

      const VerifyResult vr = verify_script(script, config.sandbox);
      log << "attempt " << attempt << ": " << to_string(vr.status)
          << " exit=" << vr.exit_code << "\n";
      if (!vr.stdout_text.empty()) log << "stdout:\n" << vr.stdout_text << "\n";
      if (!vr.stderr_text.empty()) log << "stderr:\n" << vr.stderr_text << "\n";

      if (vr.ok()) {
        const std::string ext = vr.image_path.extension().string();  // includes the dot
        const fs::path image_dest = root / "images" / (seed.id + ext);
        detail::move_file(vr.image_path, image_dest);
        entry.image_path = "images/" + seed.id + ext;
        entry.status = JobStatus::verified;
      }
      if (!config.sandbox.keep_scratch) {
        std::error_code rm;
        fs::remove_all(vr.scratch_dir, rm);
      }
      if (entry.status == JobStatus::verified) break;
    }
    if (entry.status != JobStatus::verified) entry.status = JobStatus::skipped;
    results[idx] = std::move(entry);
  };

  const std::size_t workers =
      std::min<std::size_t>(std::max(config.concurrency, 1), seeds.size());
  if (workers <= 1) {
    for (std::size_t i = 0; i < seeds.size(); ++i) run_job(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (;;) {
          const std::size_t i = next.fetch_add(1);
          if (i >= seeds.size()) return;
          run_job(i);
        }
      });
    for (auto& t : pool) t.join();
  }

  SimManifest manifest;
  manifest.entries = std::move(results);
  std::sort(manifest.entries.begin(), manifest.entries.end(),
            [](const ManifestEntry& a, const ManifestEntry& b) { return a.id < b.id; });
  write_manifest(root, manifest);
  return manifest;
}

}  // namespace chartkit::sim
