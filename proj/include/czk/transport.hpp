// Copyright 2026 the czk authors.
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

#ifndef CZK_TRANSPORT_HPP_
#define CZK_TRANSPORT_HPP_

#include <arpa/inet.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <chrono>
#include <condition_variable>
#include <deque>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <thread>

#include "czk/bytes.hpp"

// Party-to-party messaging with labeled rounds. Protocols are sensitive to
// the order in which values are exchanged and revealed, so every message
// carries a (tag, round) label and receivers assert it matches what the
// protocol expects.

namespace czk {

class TransportError : public Error {
 public:
  enum class Kind { timeout, desync, closed };
  TransportError(Kind kind, const std::string& what) : Error(what), kind(kind) {}
  Kind kind;
};

struct RoundLabel {
  std::string tag;
  uint32_t round = 0;

  bool operator==(const RoundLabel& o) const {
    return tag == o.tag && round == o.round;
  }
  std::string str() const { return tag + "#" + std::to_string(round); }

  Bytes encode() const {
    Writer w;
    w.lp(tag);
    w.u32(round);
    return w.take();
  }
  static RoundLabel decode(Reader& r) {
    RoundLabel l;
    auto tag = r.lp();
    l.tag.assign(tag.begin(), tag.end());
    l.round = r.u32();
    return l;
  }
};

struct TrafficStats {
  uint64_t messages_sent = 0;
  uint64_t bytes_sent = 0;
  uint64_t broadcasts = 0;
};

class Transport {
 public:
  virtual ~Transport() = default;

  virtual int party_id() const = 0;
  virtual int n_parties() const = 0;

  void send(int to, const RoundLabel& label, BytesView payload) {
    check_label_order(to, label);
    do_send(to, label, payload);
    stats_.messages_sent += 1;
    stats_.bytes_sent += payload.size();
  }

  Bytes recv(int from, const RoundLabel& label) {
    auto [got, payload] = do_recv(from);
    if (!(got == label))
      throw TransportError(TransportError::Kind::desync,
                           "round desync with party " + std::to_string(from) +
                               ": expected " + label.str() + ", got " + got.str());
    return payload;
  }

  // Everyone sends `payload` under the same label; returns the N-1 peer
  // payloads ordered by sender id (own payload excluded).
  std::vector<Bytes> broadcast(const RoundLabel& label, BytesView payload) {
    for (int j = 0; j < n_parties(); ++j)
      if (j != party_id()) send(j, label, payload);
    std::vector<Bytes> out;
    out.reserve(n_parties() - 1);
    for (int j = 0; j < n_parties(); ++j)
      if (j != party_id()) out.push_back(recv(j, label));
    stats_.broadcasts += 1;
    return out;
  }

  const TrafficStats& stats() const { return stats_; }

  void set_timeout(std::chrono::milliseconds t) { timeout_ = t; }
  std::chrono::milliseconds timeout() const { return timeout_; }

 protected:
  virtual void do_send(int to, const RoundLabel& label, BytesView payload) = 0;
  virtual std::pair<RoundLabel, Bytes> do_recv(int from) = 0;

 private:
  // (tag, round) must strictly increase per peer per tag.
  void check_label_order(int to, const RoundLabel& label) {
    auto key = std::make_pair(to, label.tag);
    auto it = last_sent_.find(key);
    if (it != last_sent_.end() && label.round <= it->second)
      throw TransportError(TransportError::Kind::desync,
                           "non-increasing round label " + label.str());
    last_sent_[key] = label.round;
  }

  TrafficStats stats_;
  std::map<std::pair<int, std::string>, uint32_t> last_sent_;
  std::chrono::milliseconds timeout_{30000};
};

// Monotone per-tag round counter; parties making identical call sequences
// derive identical labels.
class RoundCounter {
 public:
  RoundLabel next(std::string_view tag) {
    return {std::string(tag), counters_[std::string(tag)]++};
  }

 private:
  std::map<std::string, uint32_t> counters_;
};

// ---------------------------------------------------------------------------
// In-process backend: one hub, one queue per (sender, receiver) pair.

class MemHub {
 public:
  explicit MemHub(int n) : n_(n), queues_(static_cast<size_t>(n) * n) {}

  static std::shared_ptr<MemHub> create(int n) {
    return std::make_shared<MemHub>(n);
  }

  void poison(const std::string& why) {
    std::scoped_lock lock(mu_);
    poisoned_ = true;
    poison_reason_ = why;
    cv_.notify_all();
  }

 private:
  friend class MemTransport;
  struct Msg {
    RoundLabel label;
    Bytes payload;
  };

  std::deque<Msg>& queue(int from, int to) {
    return queues_[static_cast<size_t>(from) * n_ + to];
  }

  int n_;
  std::mutex mu_;
  std::condition_variable cv_;
  std::vector<std::deque<Msg>> queues_;
  bool poisoned_ = false;
  std::string poison_reason_;
};

class MemTransport : public Transport {
 public:
  MemTransport(std::shared_ptr<MemHub> hub, int id) : hub_(std::move(hub)), id_(id) {}

  int party_id() const override { return id_; }
  int n_parties() const override { return hub_->n_; }

 protected:
  void do_send(int to, const RoundLabel& label, BytesView payload) override {
    std::scoped_lock lock(hub_->mu_);
    hub_->queue(id_, to).push_back({label, Bytes(payload.begin(), payload.end())});
    hub_->cv_.notify_all();
  }

  std::pair<RoundLabel, Bytes> do_recv(int from) override {
    std::unique_lock lock(hub_->mu_);
    auto& q = hub_->queue(from, id_);
    bool ok = hub_->cv_.wait_for(lock, timeout(), [&] {
      return !q.empty() || hub_->poisoned_;
    });
    if (hub_->poisoned_)
      throw TransportError(TransportError::Kind::closed,
                           "session aborted: " + hub_->poison_reason_);
    if (!ok)
      throw TransportError(TransportError::Kind::timeout,
                           "recv timeout from party " + std::to_string(from));
    auto msg = std::move(q.front());
    q.pop_front();
    return {msg.label, std::move(msg.payload)};
  }

 private:
  std::shared_ptr<MemHub> hub_;
  int id_;
};

// Runs one thread per party over a fresh hub; rethrows the first failure.
inline void run_parties(int n,
                        const std::function<void(int, Transport&)>& body,
                        std::chrono::milliseconds timeout =
                            std::chrono::milliseconds(30000)) {
  auto hub = MemHub::create(n);
  std::vector<std::thread> threads;
  std::vector<std::exception_ptr> errors(n);
  for (int i = 0; i < n; ++i) {
    threads.emplace_back([&, i] {
      MemTransport t(hub, i);
      t.set_timeout(timeout);
      try {
        body(i, t);
      } catch (...) {
        errors[i] = std::current_exception();
        hub->poison("party " + std::to_string(i) + " failed");
      }
    });
  }
  for (auto& th : threads) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

// ---------------------------------------------------------------------------
// TCP backend. Full mesh; the lower-id party listens, the higher-id party
// connects and identifies itself with a 4-byte hello. Framing per message:
// 4-byte big-endian total length, label (length-prefixed tag + round), payload.

struct PartyAddress {
  int party_id = 0;
  std::string host;
  uint16_t port = 0;
};

// Line-oriented topology file: "<party_id> <host>:<port>", '#' comments.
inline std::vector<PartyAddress> parse_topology(std::istream& in) {
  std::vector<PartyAddress> out;
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    int id;
    std::string ep;
    if (!(ls >> id >> ep)) continue;
    auto colon = ep.rfind(':');
    if (colon == std::string::npos) throw Error("topology: missing port in " + ep);
    PartyAddress a;
    a.party_id = id;
    a.host = ep.substr(0, colon);
    a.port = static_cast<uint16_t>(std::stoi(ep.substr(colon + 1)));
    out.push_back(a);
  }
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.party_id < b.party_id; });
  for (size_t i = 0; i < out.size(); ++i)
    if (out[i].party_id != static_cast<int>(i))
      throw Error("topology: party ids must be 0..N-1 and unique");
  return out;
}

inline std::vector<PartyAddress> load_topology(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open topology file " + path);
  return parse_topology(in);
}

class TcpTransport : public Transport {
 public:
  TcpTransport(std::vector<PartyAddress> topo, int id,
               std::chrono::milliseconds connect_timeout =
                   std::chrono::milliseconds(30000))
      : topo_(std::move(topo)), id_(id) {
    fds_.assign(topo_.size(), -1);
    connect_mesh(connect_timeout);
  }

  ~TcpTransport() override {
    for (int fd : fds_)
      if (fd >= 0) ::close(fd);
  }

  int party_id() const override { return id_; }
  int n_parties() const override { return static_cast<int>(topo_.size()); }

 protected:
  void do_send(int to, const RoundLabel& label, BytesView payload) override {
    Writer w;
    Bytes lab = label.encode();
    uint32_t total = static_cast<uint32_t>(lab.size() + payload.size());
    uint8_t hdr[4] = {static_cast<uint8_t>(total >> 24), static_cast<uint8_t>(total >> 16),
                      static_cast<uint8_t>(total >> 8), static_cast<uint8_t>(total)};
    write_all(fds_[to], hdr, 4);
    write_all(fds_[to], lab.data(), lab.size());
    write_all(fds_[to], payload.data(), payload.size());
  }

  std::pair<RoundLabel, Bytes> do_recv(int from) override {
    uint8_t hdr[4];
    read_all(fds_[from], hdr, 4);
    uint32_t total = static_cast<uint32_t>(hdr[0]) << 24 | static_cast<uint32_t>(hdr[1]) << 16 |
                     static_cast<uint32_t>(hdr[2]) << 8 | hdr[3];
    Bytes buf(total);
    read_all(fds_[from], buf.data(), buf.size());
    Reader r(buf);
    RoundLabel label = RoundLabel::decode(r);
    BytesView rest = r.raw(r.remaining());
    return {label, Bytes(rest.begin(), rest.end())};
  }

 private:
  void connect_mesh(std::chrono::milliseconds connect_timeout) {
    using clock = std::chrono::steady_clock;
    auto deadline = clock::now() + connect_timeout;
    int listener = -1;
    if (id_ < n_parties() - 1) {
      listener = ::socket(AF_INET, SOCK_STREAM, 0);
      int opt = 1;
      setsockopt(listener, SOL_SOCKET, SO_REUSEADDR, &opt, sizeof opt);
      sockaddr_in addr{};
      addr.sin_family = AF_INET;
      addr.sin_addr.s_addr = htonl(INADDR_ANY);
      addr.sin_port = htons(topo_[id_].port);
      if (bind(listener, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0)
        throw TransportError(TransportError::Kind::closed,
                             "bind failed on port " + std::to_string(topo_[id_].port));
      listen(listener, n_parties());
    }

    // Outbound to every lower id.
    for (int j = 0; j < id_; ++j) {
      int fd = -1;
      for (;;) {
        fd = ::socket(AF_INET, SOCK_STREAM, 0);
        sockaddr_in addr{};
        addr.sin_family = AF_INET;
        addr.sin_port = htons(topo_[j].port);
        if (inet_pton(AF_INET, topo_[j].host == "localhost" ? "127.0.0.1"
                                                            : topo_[j].host.c_str(),
                      &addr.sin_addr) != 1)
          throw Error("bad host " + topo_[j].host);
        if (connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr) == 0) break;
        ::close(fd);
        if (clock::now() > deadline)
          throw TransportError(TransportError::Kind::timeout,
                               "connect timeout to party " + std::to_string(j));
        std::this_thread::sleep_for(std::chrono::milliseconds(50));
      }
      int opt = 1;
      setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &opt, sizeof opt);
      uint8_t hello[4] = {static_cast<uint8_t>(id_ >> 24), static_cast<uint8_t>(id_ >> 16),
                          static_cast<uint8_t>(id_ >> 8), static_cast<uint8_t>(id_)};
      write_all(fd, hello, 4);
      fds_[j] = fd;
    }

    // Inbound from every higher id.
    for (int count = id_ + 1; count < n_parties(); ++count) {
      pollfd pfd{listener, POLLIN, 0};
      auto remain = std::chrono::duration_cast<std::chrono::milliseconds>(
          deadline - clock::now());
      if (remain.count() <= 0 || poll(&pfd, 1, static_cast<int>(remain.count())) <= 0)
        throw TransportError(TransportError::Kind::timeout, "accept timeout");
      int fd = accept(listener, nullptr, nullptr);
      if (fd < 0) throw TransportError(TransportError::Kind::closed, "accept failed");
      int opt = 1;
      setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &opt, sizeof opt);
      uint8_t hello[4];
      read_all(fd, hello, 4);
      int peer = static_cast<int>(hello[0]) << 24 | static_cast<int>(hello[1]) << 16 |
                 static_cast<int>(hello[2]) << 8 | hello[3];
      if (peer <= id_ || peer >= n_parties() || fds_[peer] != -1)
        throw TransportError(TransportError::Kind::closed, "bad peer hello");
      fds_[peer] = fd;
    }
    if (listener >= 0) ::close(listener);
  }

  void write_all(int fd, const uint8_t* data, size_t n) {
    while (n > 0) {
      ssize_t w = ::write(fd, data, n);
      if (w <= 0)
        throw TransportError(TransportError::Kind::closed, "peer connection lost");
      data += w;
      n -= static_cast<size_t>(w);
    }
  }

  void read_all(int fd, uint8_t* data, size_t n) {
    while (n > 0) {
      pollfd pfd{fd, POLLIN, 0};
      int rc = poll(&pfd, 1, static_cast<int>(timeout().count()));
      if (rc == 0)
        throw TransportError(TransportError::Kind::timeout, "recv timeout");
      if (rc < 0)
        throw TransportError(TransportError::Kind::closed, "poll failed");
      ssize_t r = ::read(fd, data, n);
      if (r <= 0)
        throw TransportError(TransportError::Kind::closed, "peer closed connection");
      data += r;
      n -= static_cast<size_t>(r);
    }
  }

  std::vector<PartyAddress> topo_;
  int id_;
  std::vector<int> fds_;
};

}  // namespace czk

#endif  // CZK_TRANSPORT_HPP_
