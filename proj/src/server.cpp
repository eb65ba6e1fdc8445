#include "dtmec/server.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstring>
#include <fstream>
#include <optional>
#include <stdexcept>

#include "dtmec/protocol.hpp"

namespace dtmec::harness {

void serve_stream(const NetworkConfig& config, std::istream& in, std::ostream& out) {
  ProtocolSession session(config);
  std::string line;
  while (!session.closed() && std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    out << session.handle_line(line) << '\n';
    out.flush();
  }
}

TcpServer::TcpServer(NetworkConfig config, std::filesystem::path metrics_dir)
    : config_(std::move(config)), metrics_dir_(std::move(metrics_dir)) {
  config_.validate();
}

TcpServer::~TcpServer() { stop(); }

void TcpServer::start(const std::string& host, std::uint16_t port) {
  if (running_) throw std::logic_error("server already running");
  addrinfo hints{};
  hints.ai_family = AF_INET;
  hints.ai_socktype = SOCK_STREAM;
  hints.ai_flags = AI_PASSIVE;
  addrinfo* res = nullptr;
  const std::string service = std::to_string(port);
  if (int rc = getaddrinfo(host.empty() ? nullptr : host.c_str(), service.c_str(), &hints, &res);
      rc != 0) {
    throw std::runtime_error("cannot resolve " + host + ": " + gai_strerror(rc));
  }
  const int fd = socket(res->ai_family, res->ai_socktype, res->ai_protocol);
  if (fd < 0) {
    freeaddrinfo(res);
    throw std::runtime_error(std::string("socket: ") + std::strerror(errno));
  }
  const int yes = 1;
  setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof yes);
  if (bind(fd, res->ai_addr, res->ai_addrlen) != 0 || listen(fd, 16) != 0) {
    const std::string err = std::strerror(errno);
    freeaddrinfo(res);
    close(fd);
    throw std::runtime_error("cannot bind " + host + ":" + service + ": " + err);
  }
  freeaddrinfo(res);

  sockaddr_in bound{};
  socklen_t len = sizeof bound;
  getsockname(fd, reinterpret_cast<sockaddr*>(&bound), &len);
  port_ = ntohs(bound.sin_port);
  listen_fd_ = fd;
  running_ = true;
  acceptor_ = std::thread([this] { accept_loop(); });
}

void TcpServer::accept_loop() {
  const int listen_fd = listen_fd_;
  while (running_) {
    const int fd = accept(listen_fd, nullptr, nullptr);
    if (fd < 0) {
      if (!running_) break;
      if (errno == EINTR || errno == ECONNABORTED) continue;
      break;
    }
    std::lock_guard lock(mu_);
    if (!running_) {
      close(fd);
      break;
    }
    open_fds_.push_back(fd);
    const std::int64_t session = next_session_++;
    workers_.emplace_back([this, fd, session] { serve_connection(fd, session); });
  }
}

namespace {

bool send_all(int fd, const std::string& data) {
  std::size_t sent = 0;
  while (sent < data.size()) {
    const ssize_t n = send(fd, data.data() + sent, data.size() - sent, MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      return false;
    }
    sent += static_cast<std::size_t>(n);
  }
  return true;
}

}  // namespace

void TcpServer::serve_connection(int fd, std::int64_t session_id) {
  ProtocolSession session(config_);
  std::ofstream csv_file;
  std::ofstream jsonl_file;
  std::optional<SlotCsvWriter> csv;
  std::optional<SlotJsonlWriter> jsonl;
  if (!metrics_dir_.empty()) {
    std::filesystem::create_directories(metrics_dir_);
    const std::string stem = "session-" + std::to_string(session_id);
    csv_file.open(metrics_dir_ / (stem + ".csv"), std::ios::binary);
    jsonl_file.open(metrics_dir_ / (stem + ".jsonl"), std::ios::binary);
    session.set_metrics(&csv.emplace(csv_file), &jsonl.emplace(jsonl_file));
  }

  std::string buffer;
  char chunk[65536];
  bool alive = true;
  while (alive && !session.closed()) {
    const ssize_t n = recv(fd, chunk, sizeof chunk, 0);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) break;
    buffer.append(chunk, static_cast<std::size_t>(n));
    std::size_t start = 0;
    for (std::size_t nl; (nl = buffer.find('\n', start)) != std::string::npos; start = nl + 1) {
      std::string line = buffer.substr(start, nl - start);
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      if (!send_all(fd, session.handle_line(line) + "\n") || session.closed()) {
        alive = false;
        break;
      }
    }
    buffer.erase(0, start);
    if (buffer.size() > kMaxLineBytes) {
      send_all(fd, R"({"op":"","status":"err","error":"request line too long"})"
                   "\n");
      break;
    }
  }

  std::lock_guard lock(mu_);
  auto it = std::find(open_fds_.begin(), open_fds_.end(), fd);
  if (it != open_fds_.end()) {
    open_fds_.erase(it);
    close(fd);
  }
}

void TcpServer::stop() {
  if (!running_.exchange(false)) return;
  shutdown(listen_fd_, SHUT_RDWR);
  if (acceptor_.joinable()) acceptor_.join();
  close(listen_fd_);
  listen_fd_ = -1;
  std::vector<std::thread> workers;
  {
    std::lock_guard lock(mu_);
    for (int fd : open_fds_) shutdown(fd, SHUT_RDWR);
    workers.swap(workers_);
  }
  for (auto& t : workers) t.join();
}

}  // namespace dtmec::harness
