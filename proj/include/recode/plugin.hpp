#pragma once

#include <chrono>
#include <cstdint>
#include <mutex>
#include <string>
#include <sys/types.h>

#include <json.hpp>

namespace recode {

/// A child process speaking line-delimited JSON over stdin/stdout.
///
/// The first line the child prints must be a handshake object
/// `{"protocol": <expected>, "version": 1, ...}`. Each request gets a fresh
/// string id; the response must echo it. Requests are serialized, so the
/// handle may be shared between threads. Any transport or protocol fault
/// raises PluginUnavailable and leaves the handle dead.
class PluginProcess {
 public:
  PluginProcess(const std::string& command, std::string expected_protocol,
                std::chrono::milliseconds timeout = std::chrono::seconds(30));
  ~PluginProcess();

  PluginProcess(const PluginProcess&) = delete;
  PluginProcess& operator=(const PluginProcess&) = delete;

  /// Sends `body` (an object without "id") and returns the matched response.
  nlohmann::json request(nlohmann::json body);

  const nlohmann::json& handshake() const { return handshake_; }
  bool alive() const;

 private:
  std::string read_line();
  void write_line(const std::string& line);
  [[noreturn]] void fail(const std::string& why);
  void shutdown();

  std::string protocol_;
  std::chrono::milliseconds timeout_;
  pid_t pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
  std::string buffer_;
  nlohmann::json handshake_;
  std::uint64_t next_id_ = 1;
  bool dead_ = false;
  mutable std::mutex mutex_;
};

}  // namespace recode
