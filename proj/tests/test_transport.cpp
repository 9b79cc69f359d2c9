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

#include <atomic>

#include <catch2/catch_amalgamated.hpp>

#include "czk/transport.hpp"

using namespace czk;
using namespace std::chrono_literals;

namespace {
Bytes bytes_of(std::string_view s) { return Bytes(s.begin(), s.end()); }
}  // namespace

TEST_CASE("broadcast delivers peer payloads in id order", "[transport]") {
  std::vector<std::vector<Bytes>> got(3);
  run_parties(3, [&](int id, Transport& t) {
    got[id] = t.broadcast({"x", 0}, bytes_of("p" + std::to_string(id)));
  });
  REQUIRE(got[0] == std::vector<Bytes>{bytes_of("p1"), bytes_of("p2")});
  REQUIRE(got[1] == std::vector<Bytes>{bytes_of("p0"), bytes_of("p2")});
  REQUIRE(got[2] == std::vector<Bytes>{bytes_of("p0"), bytes_of("p1")});
}

TEST_CASE("broadcast stats", "[transport]") {
  const int n = 4;
  std::vector<TrafficStats> stats(n);
  run_parties(n, [&](int id, Transport& t) {
    REQUIRE(t.stats().messages_sent == 0);
    REQUIRE(t.stats().bytes_sent == 0);
    for (uint32_t k = 0; k < 5; ++k) t.broadcast({"x", k}, bytes_of("abc"));
    stats[id] = t.stats();
  });
  for (const auto& s : stats) {
    REQUIRE(s.messages_sent == 5 * (n - 1));
    REQUIRE(s.broadcasts == 5);
    REQUIRE(s.bytes_sent == 5 * (n - 1) * 3);
  }
}

TEST_CASE("send/recv is fifo and label-checked", "[transport]") {
  SECTION("roundtrip and order") {
    run_parties(2, [&](int id, Transport& t) {
      if (id == 0) {
        t.send(1, {"m", 0}, bytes_of("first"));
        t.send(1, {"m", 1}, bytes_of("second"));
      } else {
        REQUIRE(t.recv(0, {"m", 0}) == bytes_of("first"));
        REQUIRE(t.recv(0, {"m", 1}) == bytes_of("second"));
      }
    });
  }
  SECTION("label mismatch is a desync error") {
    REQUIRE_THROWS_AS(run_parties(2,
                                  [&](int id, Transport& t) {
                                    if (id == 0) {
                                      t.send(1, {"a", 0}, bytes_of("x"));
                                    } else {
                                      t.recv(0, {"b", 0});
                                    }
                                  },
                                  2000ms),
                      TransportError);
  }
  SECTION("recv with no sender times out") {
    bool timed_out = false;
    run_parties(2,
                [&](int id, Transport& t) {
                  if (id == 1) {
                    try {
                      t.recv(0, {"void", 0});
                    } catch (const TransportError& e) {
                      timed_out = e.kind == TransportError::Kind::timeout;
                    }
                  }
                },
                200ms);
    REQUIRE(timed_out);
  }
  SECTION("non-increasing round labels are rejected at the sender") {
    run_parties(2, [&](int id, Transport& t) {
      if (id == 0) {
        t.send(1, {"a", 3}, bytes_of("x"));
        REQUIRE_THROWS_AS(t.send(1, {"a", 3}, bytes_of("x")), TransportError);
        REQUIRE_THROWS_AS(t.send(1, {"a", 1}, bytes_of("x")), TransportError);
      } else {
        t.recv(0, {"a", 3});
      }
    });
  }
}

TEST_CASE("round counter", "[transport]") {
  RoundCounter rc;
  REQUIRE(rc.next("a") == RoundLabel{"a", 0});
  REQUIRE(rc.next("a") == RoundLabel{"a", 1});
  REQUIRE(rc.next("b") == RoundLabel{"b", 0});
}

TEST_CASE("topology parsing", "[transport]") {
  std::istringstream in(
      "# comment\n"
      "1 127.0.0.1:9102\n"
      "0 localhost:9101  # trailing\n");
  auto topo = parse_topology(in);
  REQUIRE(topo.size() == 2);
  REQUIRE(topo[0].party_id == 0);
  REQUIRE(topo[0].host == "localhost");
  REQUIRE(topo[0].port == 9101);
  REQUIRE(topo[1].port == 9102);

  std::istringstream bad("0 h:1\n2 h:2\n");
  REQUIRE_THROWS_AS(parse_topology(bad), Error);
}

TEST_CASE("tcp transport matches mem semantics", "[transport][tcp]") {
  uint16_t base = static_cast<uint16_t>(20000 + (getpid() % 2000));
  std::vector<PartyAddress> topo;
  for (int i = 0; i < 3; ++i)
    topo.push_back({i, "127.0.0.1", static_cast<uint16_t>(base + i)});

  std::vector<std::vector<Bytes>> got(3);
  std::vector<std::thread> threads;
  std::vector<std::exception_ptr> errs(3);
  for (int i = 0; i < 3; ++i) {
    threads.emplace_back([&, i] {
      try {
        TcpTransport t(topo, i, 10000ms);
        t.set_timeout(10000ms);
        got[i] = t.broadcast({"x", 0}, bytes_of("p" + std::to_string(i)));
        if (i == 0) t.send(2, {"y", 0}, bytes_of("direct"));
        if (i == 2) REQUIRE(t.recv(0, {"y", 0}) == bytes_of("direct"));
      } catch (...) {
        errs[i] = std::current_exception();
      }
    });
  }
  for (auto& th : threads) th.join();
  for (auto& e : errs)
    if (e) std::rethrow_exception(e);
  REQUIRE(got[0] == std::vector<Bytes>{bytes_of("p1"), bytes_of("p2")});
  REQUIRE(got[2] == std::vector<Bytes>{bytes_of("p0"), bytes_of("p1")});
}
