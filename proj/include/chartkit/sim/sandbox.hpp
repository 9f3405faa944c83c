#pragma once

#include <fcntl.h>
#include <sched.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "chartkit/errors.hpp"

namespace chartkit::sim {

// Execution harness for generated drawing code: scratch directory +
// subprocess + wall-clock timeout. This is desk-scale containment, not an
// OS-level jail; run hostile code inside a container.
struct SandboxConfig {
  std::vector<std::string> command = {"python3"};
  std::string script_filename = "script.py";
  std::filesystem::path scratch_root;  // empty -> system temp directory
  std::chrono::milliseconds timeout{30000};
  std::vector<std::string> image_extensions = {"png", "jpg", "svg", "pdf"};
  bool isolate_network = true;  // best effort (network namespace), may be unsupported
  bool keep_scratch = false;    // pipeline honors this after archiving results
};

enum class VerifyStatus { ok, timeout, nonzero_exit, no_image };

inline std::string_view to_string(VerifyStatus s) {
  switch (s) {
    case VerifyStatus::ok: return "ok";
    case VerifyStatus::timeout: return "timeout";
    case VerifyStatus::nonzero_exit: return "nonzero_exit";
    case VerifyStatus::no_image: return "no_image";
  }
  return "unknown";
}

struct VerifyResult {
  VerifyStatus status = VerifyStatus::no_image;
  int exit_code = 0;
  std::filesystem::path scratch_dir;
  std::filesystem::path image_path;  // set when status == ok
  std::string stdout_text;
  std::string stderr_text;
  bool network_isolated = false;

  bool ok() const { return status == VerifyStatus::ok; }
};

namespace detail {

inline std::filesystem::path make_scratch_dir(const std::filesystem::path& root) {
  static std::atomic<unsigned> counter{0};
  std::random_device rd;
  const auto base = root.empty() ? std::filesystem::temp_directory_path() : root;
  std::ostringstream name;
  name << "chartkit-sandbox-" << ::getpid() << "-" << counter.fetch_add(1) << "-" << std::hex
       << rd();
  const auto dir = base / name.str();
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::filesystem::path& p, std::string_view content) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error(errc::config_invalid, "cannot write " + p.string());
}

}  // namespace detail

// Runs `script` under the configured interpreter with cwd set to a fresh
// scratch directory. Success means exit code 0 and at least one non-empty
// file with an allowed image extension in the scratch tree. stdout/stderr
// are captured. The scratch directory is left in place for the caller to
// archive and clean up.
inline VerifyResult verify_script(std::string_view script, const SandboxConfig& config) {
  namespace fs = std::filesystem;
  VerifyResult result;
  result.scratch_dir = detail::make_scratch_dir(config.scratch_root);

  const fs::path script_path = result.scratch_dir / config.script_filename;
  detail::write_file(script_path, script);
  const fs::path out_path = result.scratch_dir / "_stdout.log";
  const fs::path err_path = result.scratch_dir / "_stderr.log";
  const fs::path netns_marker = result.scratch_dir / "_netns_failed";

  if (config.command.empty())
    throw Error(errc::config_invalid, "sandbox command is empty");

  const pid_t pid = ::fork();
  if (pid < 0) throw Error(errc::config_invalid, "fork failed");
  if (pid == 0) {
    ::setpgid(0, 0);
    if (config.isolate_network) {
      if (::unshare(CLONE_NEWNET) != 0) {
        const int fd = ::open(netns_marker.c_str(), O_CREAT | O_WRONLY, 0644);
        if (fd >= 0) ::close(fd);
      }
    }
    if (::chdir(result.scratch_dir.c_str()) != 0) ::_exit(126);
    const int devnull = ::open("/dev/null", O_RDONLY);
    if (devnull >= 0) ::dup2(devnull, STDIN_FILENO);
    const int out_fd = ::open(out_path.c_str(), O_CREAT | O_WRONLY | O_TRUNC, 0644);
    const int err_fd = ::open(err_path.c_str(), O_CREAT | O_WRONLY | O_TRUNC, 0644);
    if (out_fd >= 0) ::dup2(out_fd, STDOUT_FILENO);
    if (err_fd >= 0) ::dup2(err_fd, STDERR_FILENO);

    std::vector<char*> argv;
    for (const std::string& a : config.command) argv.push_back(const_cast<char*>(a.c_str()));
    const std::string script_name = config.script_filename;
    argv.push_back(const_cast<char*>(script_name.c_str()));
    argv.push_back(nullptr);
    ::execvp(argv[0], argv.data());
    ::_exit(127);
  }

  ::setpgid(pid, pid);  // mirror the child; outcome does not matter, one wins

  const auto deadline = std::chrono::steady_clock::now() + config.timeout;
  int status = 0;
  bool timed_out = false;
  for (;;) {
    const pid_t r = ::waitpid(pid, &status, WNOHANG);
    if (r == pid) break;
    if (r < 0) break;
    if (std::chrono::steady_clock::now() >= deadline) {
      ::kill(-pid, SIGKILL);
      ::kill(pid, SIGKILL);
      ::waitpid(pid, &status, 0);
      timed_out = true;
      break;
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(5));
  }

  result.stdout_text = detail::read_file(out_path);
  result.stderr_text = detail::read_file(err_path);
  result.network_isolated = config.isolate_network && !fs::exists(netns_marker);

  if (timed_out) {
    result.status = VerifyStatus::timeout;
    result.exit_code = -1;
    return result;
  }
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status)
                                       : 128 + (WIFSIGNALED(status) ? WTERMSIG(status) : 0);
  if (result.exit_code != 0) {
    result.status = VerifyStatus::nonzero_exit;
    return result;
  }

  std::vector<fs::path> candidates;
  for (const auto& e : fs::recursive_directory_iterator(result.scratch_dir)) {
    if (!e.is_regular_file()) continue;
    std::string ext = e.path().extension().string();
    if (!ext.empty() && ext.front() == '.') ext.erase(0, 1);
    for (char& c : ext)
      if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    for (const std::string& allowed : config.image_extensions) {
      if (ext == allowed && e.file_size() > 0) {
        candidates.push_back(e.path());
        break;
      }
    }
  }
  if (candidates.empty()) {
    result.status = VerifyStatus::no_image;
    return result;
  }
  std::sort(candidates.begin(), candidates.end());
  result.image_path = candidates.front();
  result.status = VerifyStatus::ok;
  return result;
}

}  // namespace chartkit::sim
