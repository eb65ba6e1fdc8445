#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <mutex>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "dtmec/config.hpp"

namespace dtmec::harness {

/// Longest accepted request line, in bytes.
inline constexpr std::size_t kMaxLineBytes = 64u << 20;

/// Serves one session over a pair of streams until close or end of input.
void serve_stream(const NetworkConfig& config, std::istream& in, std::ostream& out);

/// Newline-delimited JSON over TCP, one thread and one session per connection.
/// When `metrics_dir` is non-empty each session writes
/// session-<n>.csv and session-<n>.jsonl there.
class TcpServer {
 public:
  TcpServer(NetworkConfig config, std::filesystem::path metrics_dir = {});
  ~TcpServer();
  TcpServer(const TcpServer&) = delete;
  TcpServer& operator=(const TcpServer&) = delete;

  /// Binds and starts accepting in a background thread. Port 0 picks a free port.
  /// Throws std::runtime_error when the endpoint cannot be bound.
  void start(const std::string& host, std::uint16_t port);
  std::uint16_t port() const { return port_; }
  /// Stops accepting, closes open connections and joins every thread.
  void stop();
  bool running() const { return running_; }

 private:
  void accept_loop();
  void serve_connection(int fd, std::int64_t session);

  NetworkConfig config_;
  std::filesystem::path metrics_dir_;
  int listen_fd_ = -1;
  std::uint16_t port_ = 0;
  std::atomic<bool> running_{false};
  std::thread acceptor_;
  std::mutex mu_;
  std::vector<std::thread> workers_;
  std::vector<int> open_fds_;
  std::int64_t next_session_ = 0;
};

}  // namespace dtmec::harness
