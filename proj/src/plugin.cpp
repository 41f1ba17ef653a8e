#include "recode/plugin.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

#include "recode/error.hpp"

namespace recode {

PluginProcess::PluginProcess(const std::string& command, std::string expected_protocol,
                             std::chrono::milliseconds timeout)
    : protocol_(std::move(expected_protocol)), timeout_(timeout) {
  int in_pipe[2];
  int out_pipe[2];
  if (pipe(in_pipe) != 0) throw Error(ErrorCode::PluginUnavailable, "pipe: " + std::string(std::strerror(errno)));
  if (pipe(out_pipe) != 0) {
    close(in_pipe[0]);
    close(in_pipe[1]);
    throw Error(ErrorCode::PluginUnavailable, "pipe: " + std::string(std::strerror(errno)));
  }
  pid_ = fork();
  if (pid_ < 0) {
    close(in_pipe[0]);
    close(in_pipe[1]);
    close(out_pipe[0]);
    close(out_pipe[1]);
    throw Error(ErrorCode::PluginUnavailable, "fork: " + std::string(std::strerror(errno)));
  }
  if (pid_ == 0) {
    // Own process group, so shutdown also reaches whatever `sh -c` spawned.
    setpgid(0, 0);
    dup2(in_pipe[0], STDIN_FILENO);
    dup2(out_pipe[1], STDOUT_FILENO);
    close(in_pipe[0]);
    close(in_pipe[1]);
    close(out_pipe[0]);
    close(out_pipe[1]);
    execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
    _exit(127);
  }
  setpgid(pid_, pid_);
  close(in_pipe[0]);
  close(out_pipe[1]);
  to_child_ = in_pipe[1];
  from_child_ = out_pipe[0];
  fcntl(to_child_, F_SETFD, FD_CLOEXEC);
  fcntl(from_child_, F_SETFD, FD_CLOEXEC);
  // A dead child must surface as an error on write, not kill the host.
  signal(SIGPIPE, SIG_IGN);

  std::lock_guard lock(mutex_);
  const std::string line = read_line();
  try {
    handshake_ = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception&) {
    fail("malformed handshake: " + line);
  }
  if (!handshake_.is_object() || handshake_.value("protocol", "") != protocol_ ||
      !handshake_.contains("version") || handshake_["version"] != 1) {
    fail("unexpected handshake: " + line);
  }
}

PluginProcess::~PluginProcess() { shutdown(); }

bool PluginProcess::alive() const {
  std::lock_guard lock(mutex_);
  return !dead_;
}

void PluginProcess::shutdown() {
  if (to_child_ >= 0) close(to_child_);
  if (from_child_ >= 0) close(from_child_);
  to_child_ = from_child_ = -1;
  if (pid_ > 0) {
    int status = 0;
    // Closing stdin asks a well-behaved plugin to exit; give it a moment.
    for (int i = 0; i < 50; ++i) {
      if (waitpid(pid_, &status, WNOHANG) == pid_) {
        pid_ = -1;
        return;
      }
      usleep(10000);
    }
    kill(-pid_, SIGKILL);
    waitpid(pid_, &status, 0);
    pid_ = -1;
  }
}

void PluginProcess::fail(const std::string& why) {
  dead_ = true;
  shutdown();
  throw Error(ErrorCode::PluginUnavailable, protocol_ + ": " + why);
}

std::string PluginProcess::read_line() {
  const auto deadline = std::chrono::steady_clock::now() + timeout_;
  for (;;) {
    const auto nl = buffer_.find('\n');
    if (nl != std::string::npos) {
      std::string line = buffer_.substr(0, nl);
      buffer_.erase(0, nl + 1);
      if (!line.empty() && line.back() == '\r') line.pop_back();
      return line;
    }
    const auto remaining =
        std::chrono::duration_cast<std::chrono::milliseconds>(deadline - std::chrono::steady_clock::now());
    if (remaining.count() <= 0) fail("timed out waiting for a response");
    pollfd pfd{from_child_, POLLIN, 0};
    const int rc = poll(&pfd, 1, static_cast<int>(remaining.count()));
    if (rc < 0 && errno == EINTR) continue;
    if (rc <= 0) fail("timed out waiting for a response");
    char chunk[4096];
    const ssize_t n = read(from_child_, chunk, sizeof chunk);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) fail("plugin closed its output");
    buffer_.append(chunk, static_cast<std::size_t>(n));
  }
}

void PluginProcess::write_line(const std::string& line) {
  std::string data = line + "\n";
  std::size_t off = 0;
  while (off < data.size()) {
    const ssize_t n = write(to_child_, data.data() + off, data.size() - off);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) fail("write to plugin failed");
    off += static_cast<std::size_t>(n);
  }
}

nlohmann::json PluginProcess::request(nlohmann::json body) {
  std::lock_guard lock(mutex_);
  if (dead_) throw Error(ErrorCode::PluginUnavailable, protocol_ + ": plugin is not running");
  const std::string id = std::to_string(next_id_++);
  body["id"] = id;
  write_line(body.dump());
  const std::string line = read_line();
  nlohmann::json response;
  try {
    response = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception&) {
    fail("malformed response: " + line);
  }
  if (!response.is_object() || !response.contains("id") || response["id"] != id) {
    fail("response id mismatch for request " + id);
  }
  if (response.contains("error")) {
    throw Error(ErrorCode::PluginUnavailable, protocol_ + ": " + response["error"].dump());
  }
  return response;
}

}  // namespace recode
