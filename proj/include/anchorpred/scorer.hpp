// Copyright 2026 The Anchorpred Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ANCHORPRED_SCORER_HPP_
#define ANCHORPRED_SCORER_HPP_

#include <fcntl.h>
#include <netdb.h>
#include <poll.h>
#include <signal.h>
#include <sys/socket.h>
#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <map>
#include <mutex>
#include <optional>
#include <regex>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "anchorpred/corpus.hpp"
#include "anchorpred/dataset.hpp"
#include "anchorpred/error.hpp"
#include "anchorpred/prediction.hpp"
#include "anchorpred/ranker.hpp"
#include "json.hpp"

// Line-delimited JSON scoring protocol.
//
//   request:  {"example_id": str, "candidate_index": int, "query": str}
//   response: {"example_id": str, "candidate_index": int, "score": float}
//
// The client writes every request followed by {"done": true}, then closes
// its side. The scorer answers each request exactly once, in any order, and
// closes its output. Endpoints are either "tcp://host:port" or a shell
// command run as a child process speaking on stdin/stdout.

namespace anchorpred {

struct ScoreRequest {
  std::string example_id;
  std::size_t candidate_index = 0;
  std::string query;
};

inline std::string request_line(const ScoreRequest &r) {
  nlohmann::ordered_json j;
  j["example_id"] = r.example_id;
  j["candidate_index"] = r.candidate_index;
  j["query"] = r.query;
  return j.dump() + "\n";
}

inline constexpr std::string_view kDoneLine = "{\"done\":true}\n";

namespace scorer_internal {

inline std::string describe(const std::string &id, std::size_t index) {
  return "(example_id '" + id + "', candidate_index " + std::to_string(index) + ")";
}

inline void ignore_sigpipe() {
  static std::once_flag once;
  std::call_once(once, [] { ::signal(SIGPIPE, SIG_IGN); });
}

inline void set_nonblocking(int fd) {
  const int flags = ::fcntl(fd, F_GETFL, 0);
  ::fcntl(fd, F_SETFL, flags | O_NONBLOCK);
}

// Owns the descriptors (and child process, if any) of one session.
class Channel {
 public:
  Channel() = default;
  Channel(const Channel &) = delete;
  Channel &operator=(const Channel &) = delete;
  Channel(Channel &&o) noexcept
      : read_fd_(std::exchange(o.read_fd_, -1)),
        write_fd_(std::exchange(o.write_fd_, -1)),
        write_open_(std::exchange(o.write_open_, false)),
        socket_(o.socket_),
        pid_(std::exchange(o.pid_, -1)) {}
  Channel &operator=(Channel &&) = delete;
  ~Channel() {
    close_write();
    if (read_fd_ >= 0 && read_fd_ != write_fd_) ::close(read_fd_);
    if (socket_ && read_fd_ >= 0) ::close(read_fd_);
    if (pid_ > 0) {
      ::kill(-pid_, SIGKILL);  // the shell and anything it started
      ::waitpid(pid_, nullptr, 0);
    }
  }

  static Channel spawn(const std::string &command) {
    int to_child[2];
    int from_child[2];
    if (::pipe2(to_child, O_CLOEXEC) != 0) throw ProtocolError("pipe failed");
    if (::pipe2(from_child, O_CLOEXEC) != 0) {
      ::close(to_child[0]);
      ::close(to_child[1]);
      throw ProtocolError("pipe failed");
    }
    const pid_t pid = ::fork();
    if (pid < 0) throw ProtocolError("fork failed");
    if (pid == 0) {
      ::setpgid(0, 0);
      ::dup2(to_child[0], STDIN_FILENO);
      ::dup2(from_child[1], STDOUT_FILENO);
      ::execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char *>(nullptr));
      ::_exit(127);
    }
    ::setpgid(pid, pid);
    ::close(to_child[0]);
    ::close(from_child[1]);
    Channel c;
    c.pid_ = pid;
    c.write_fd_ = to_child[1];
    c.read_fd_ = from_child[0];
    return c;
  }

  static Channel connect_tcp(const std::string &host, const std::string &port) {
    addrinfo hints{};
    hints.ai_family = AF_UNSPEC;
    hints.ai_socktype = SOCK_STREAM;
    addrinfo *res = nullptr;
    if (::getaddrinfo(host.c_str(), port.c_str(), &hints, &res) != 0) {
      throw ProtocolError("cannot resolve scorer address " + host + ":" + port);
    }
    int fd = -1;
    for (addrinfo *ai = res; ai != nullptr; ai = ai->ai_next) {
      fd = ::socket(ai->ai_family, ai->ai_socktype | SOCK_CLOEXEC, ai->ai_protocol);
      if (fd < 0) continue;
      if (::connect(fd, ai->ai_addr, ai->ai_addrlen) == 0) break;
      ::close(fd);
      fd = -1;
    }
    ::freeaddrinfo(res);
    if (fd < 0) throw ProtocolError("cannot connect to scorer " + host + ":" + port);
    Channel c;
    c.socket_ = true;
    c.read_fd_ = fd;
    c.write_fd_ = fd;
    return c;
  }

  int read_fd() const { return read_fd_; }
  int write_fd() const { return write_open_ ? write_fd_ : -1; }

  void close_write() {
    if (!write_open_ || write_fd_ < 0) return;
    write_open_ = false;
    if (socket_) {
      ::shutdown(write_fd_, SHUT_WR);
    } else {
      ::close(write_fd_);
    }
  }

  // Exit status of the child after it closed its output; nullopt for sockets.
  std::optional<int> reap() {
    if (pid_ <= 0) return std::nullopt;
    int status = 0;
    ::waitpid(pid_, &status, 0);
    pid_ = -1;
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

 private:
  int read_fd_ = -1;
  int write_fd_ = -1;
  bool write_open_ = true;
  bool socket_ = false;
  pid_t pid_ = -1;
};

inline nlohmann::json parse_response(const std::string &line) {
  try {
    return nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error &) {
  }
  // Scorers written with permissive JSON encoders emit bare NaN/Infinity.
  static const std::regex kBare(R"(([:\[,]\s*)(-?(?:NaN|nan|Infinity|inf))(\s*[,}\]]))");
  try {
    return nlohmann::json::parse(std::regex_replace(line, kBare, "$1\"$2\"$3"));
  } catch (const nlohmann::json::parse_error &) {
    throw ProtocolError("malformed scorer response: " + line);
  }
}

inline double score_value(const nlohmann::json &v, const std::string &where) {
  if (v.is_number()) return v.get<double>();
  if (v.is_null()) return std::nan("");
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    char *end = nullptr;
    const double d = std::strtod(s.c_str(), &end);
    if (end != s.c_str() && *end == '\0') return d;
  }
  throw ProtocolError("non-numeric score for " + where);
}

}  // namespace scorer_internal

struct ScorerOptions {
  std::string endpoint;
  int timeout_ms = 30000;  // idle time allowed between reads
};

// Runs one protocol session and returns scores aligned with `requests`.
inline std::vector<double> score_requests(const ScorerOptions &options,
                                          std::span<const ScoreRequest> requests) {
  using scorer_internal::describe;
  scorer_internal::ignore_sigpipe();

  std::map<std::pair<std::string, std::size_t>, std::size_t> slots;
  std::string out;
  for (std::size_t i = 0; i < requests.size(); ++i) {
    const ScoreRequest &r = requests[i];
    if (!slots.emplace(std::make_pair(r.example_id, r.candidate_index), i).second) {
      throw ContractError("duplicate request " + describe(r.example_id, r.candidate_index));
    }
    out.append(request_line(r));
  }
  out.append(kDoneLine);

  constexpr std::string_view kTcp = "tcp://";
  scorer_internal::Channel channel = [&] {
    if (options.endpoint.rfind(kTcp, 0) == 0) {
      const std::string addr = options.endpoint.substr(kTcp.size());
      const auto colon = addr.rfind(':');
      if (colon == std::string::npos) {
        throw ContractError("scorer address needs host:port: " + options.endpoint);
      }
      return scorer_internal::Channel::connect_tcp(addr.substr(0, colon),
                                                   addr.substr(colon + 1));
    }
    if (options.endpoint.empty()) throw ContractError("empty scorer endpoint");
    return scorer_internal::Channel::spawn(options.endpoint);
  }();
  scorer_internal::set_nonblocking(channel.read_fd());
  if (channel.write_fd() >= 0) scorer_internal::set_nonblocking(channel.write_fd());

  std::vector<std::optional<double>> scores(requests.size());
  auto handle_line = [&](const std::string &raw) {
    const std::string_view line = trim(raw);
    if (line.empty()) return;
    const nlohmann::json j = scorer_internal::parse_response(std::string(line));
    if (!j.is_object()) throw ProtocolError("scorer response is not an object: " + raw);
    if (j.contains("done")) return;
    if (!j.contains("example_id") || !j["example_id"].is_string() ||
        !j.contains("candidate_index") || !j["candidate_index"].is_number_unsigned()) {
      throw ProtocolError("scorer response lacks example_id/candidate_index: " + raw);
    }
    const std::string id = j["example_id"].get<std::string>();
    const std::size_t index = j["candidate_index"].get<std::size_t>();
    const std::string where = describe(id, index);
    auto it = slots.find({id, index});
    if (it == slots.end()) throw ProtocolError("unrequested score for " + where);
    if (scores[it->second]) throw ProtocolError("duplicate score for " + where);
    if (!j.contains("score")) throw ProtocolError("missing score for " + where);
    const double s = scorer_internal::score_value(j["score"], where);
    if (!std::isfinite(s)) throw ProtocolError("non-finite score for " + where);
    scores[it->second] = s;
  };

  std::size_t written = 0;
  std::string pending;
  bool eof = false;
  char buf[1 << 16];
  while (!eof) {
    pollfd fds[2];
    nfds_t n = 0;
    const int wfd = channel.write_fd();
    const bool shared = wfd == channel.read_fd();
    fds[n++] = {channel.read_fd(), static_cast<short>(POLLIN | (shared ? POLLOUT : 0)), 0};
    if (wfd >= 0 && !shared) fds[n++] = {wfd, POLLOUT, 0};
    const int rc = ::poll(fds, n, options.timeout_ms);
    if (rc < 0) {
      if (errno == EINTR) continue;
      throw ProtocolError(std::string("poll failed: ") + std::strerror(errno));
    }
    if (rc == 0) {
      throw ProtocolError("scorer timed out after " + std::to_string(options.timeout_ms) + " ms");
    }
    for (nfds_t k = 0; k < n; ++k) {
      if (wfd >= 0 && fds[k].fd == wfd && (fds[k].revents & (POLLOUT | POLLERR | POLLHUP))) {
        const ssize_t w = shared ? ::send(wfd, out.data() + written, out.size() - written,
                                          MSG_NOSIGNAL)
                                 : ::write(wfd, out.data() + written, out.size() - written);
        if (w > 0) written += static_cast<std::size_t>(w);
        if ((w < 0 && errno != EAGAIN && errno != EINTR) || written == out.size()) {
          channel.close_write();  // scorer stopped reading or we are done
        }
      }
      if (fds[k].fd == channel.read_fd() && (fds[k].revents & (POLLIN | POLLHUP | POLLERR))) {
        const ssize_t r = ::read(channel.read_fd(), buf, sizeof buf);
        if (r == 0) {
          eof = true;
        } else if (r > 0) {
          pending.append(buf, static_cast<std::size_t>(r));
          std::size_t start = 0;
          for (std::size_t nl; (nl = pending.find('\n', start)) != std::string::npos;
               start = nl + 1) {
            handle_line(pending.substr(start, nl - start));
          }
          pending.erase(0, start);
        } else if (errno != EAGAIN && errno != EINTR) {
          eof = true;
        }
      }
    }
  }
  handle_line(pending);
  const std::optional<int> status = channel.reap();
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (!scores[i]) {
      std::string msg = "missing score for " +
                        describe(requests[i].example_id, requests[i].candidate_index);
      if (status && *status != 0) msg += " (scorer exited with status " + std::to_string(*status) + ")";
      throw ProtocolError(msg);
    }
  }
  std::vector<double> result;
  result.reserve(scores.size());
  for (const auto &s : scores) result.push_back(*s);
  return result;
}

// Ranks with scores from an external process. rank_all uses one session for
// the whole batch; rank opens a session per example.
class ExternalRanker : public Ranker {
 public:
  ExternalRanker(const Corpus &corpus, ScorerOptions options, QueryLimits limits = {})
      : corpus_(corpus), options_(std::move(options)), limits_(limits) {}

  std::string name() const override { return "external"; }

  Prediction rank(const Example &ex) const override {
    return std::move(rank_all(std::span<const Example>(&ex, 1)).front());
  }

  std::vector<Prediction> rank_all(std::span<const Example> examples) const override {
    std::vector<ScoreRequest> requests;
    for (const Example &ex : examples) {
      for (std::size_t i = 0; i < ex.candidates.size(); ++i) {
        requests.push_back({ex.example_id, i, serialize_query(ex, i, corpus_, limits_)});
      }
    }
    const std::vector<double> scores = score_requests(options_, requests);
    std::vector<Prediction> out;
    std::size_t at = 0;
    for (const Example &ex : examples) {
      std::vector<double> s(scores.begin() + static_cast<std::ptrdiff_t>(at),
                            scores.begin() + static_cast<std::ptrdiff_t>(at + ex.candidates.size()));
      at += ex.candidates.size();
      out.push_back(make_prediction(ex.example_id, std::move(s)));
    }
    return out;
  }

 private:
  const Corpus &corpus_;
  ScorerOptions options_;
  QueryLimits limits_;
};

}  // namespace anchorpred

#endif  // ANCHORPRED_SCORER_HPP_
