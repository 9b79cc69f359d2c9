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

#ifndef CZK_BYTES_HPP_
#define CZK_BYTES_HPP_

#include <cstdint>
#include <cstring>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace czk {

using Bytes = std::vector<uint8_t>;
using BytesView = std::span<const uint8_t>;

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class SerializationError : public Error {
 public:
  explicit SerializationError(const std::string& what) : Error(what) {}
};

inline BytesView as_bytes(std::string_view s) {
  return {reinterpret_cast<const uint8_t*>(s.data()), s.size()};
}

inline std::string to_hex(BytesView b) {
  static const char* digits = "0123456789abcdef";
  std::string out;
  out.reserve(b.size() * 2);
  for (uint8_t c : b) {
    out.push_back(digits[c >> 4]);
    out.push_back(digits[c & 0xf]);
  }
  return out;
}

inline Bytes from_hex(std::string_view s) {
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    throw SerializationError("bad hex digit");
  };
  if (s.size() % 2 != 0) throw SerializationError("odd hex length");
  Bytes out(s.size() / 2);
  for (size_t i = 0; i < out.size(); ++i)
    out[i] = static_cast<uint8_t>(nibble(s[2 * i]) << 4 | nibble(s[2 * i + 1]));
  return out;
}

// Little-endian binary writer. All variable-length payloads are
// length-prefixed so concatenated encodings parse unambiguously.
class Writer {
 public:
  void u8(uint8_t v) { buf_.push_back(v); }
  void u16(uint16_t v) {
    for (int i = 0; i < 2; ++i) buf_.push_back(static_cast<uint8_t>(v >> (8 * i)));
  }
  void u32(uint32_t v) {
    for (int i = 0; i < 4; ++i) buf_.push_back(static_cast<uint8_t>(v >> (8 * i)));
  }
  void u64(uint64_t v) {
    for (int i = 0; i < 8; ++i) buf_.push_back(static_cast<uint8_t>(v >> (8 * i)));
  }
  void raw(BytesView b) { buf_.insert(buf_.end(), b.begin(), b.end()); }
  void lp(BytesView b) {
    u32(static_cast<uint32_t>(b.size()));
    raw(b);
  }
  void lp(std::string_view s) { lp(as_bytes(s)); }

  const Bytes& bytes() const { return buf_; }
  Bytes take() { return std::move(buf_); }

 private:
  Bytes buf_;
};

class Reader {
 public:
  explicit Reader(BytesView b) : buf_(b) {}

  uint8_t u8() { return take(1)[0]; }
  uint16_t u16() {
    auto b = take(2);
    return static_cast<uint16_t>(b[0] | b[1] << 8);
  }
  uint32_t u32() {
    auto b = take(4);
    return static_cast<uint32_t>(b[0]) | static_cast<uint32_t>(b[1]) << 8 |
           static_cast<uint32_t>(b[2]) << 16 | static_cast<uint32_t>(b[3]) << 24;
  }
  uint64_t u64() {
    uint64_t lo = u32();
    uint64_t hi = u32();
    return lo | hi << 32;
  }
  BytesView raw(size_t n) { return take(n); }
  BytesView lp() { return take(u32()); }
  bool done() const { return pos_ == buf_.size(); }
  size_t remaining() const { return buf_.size() - pos_; }
  void expect_done() const {
    if (!done()) throw SerializationError("trailing bytes");
  }

 private:
  BytesView take(size_t n) {
    if (buf_.size() - pos_ < n) throw SerializationError("short read");
    BytesView out = buf_.subspan(pos_, n);
    pos_ += n;
    return out;
  }

  BytesView buf_;
  size_t pos_ = 0;
};

}  // namespace czk

#endif  // CZK_BYTES_HPP_
