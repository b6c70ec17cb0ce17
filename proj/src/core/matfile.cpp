// Copyright 2026 The DeepSSIM Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "core/matfile.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <span>

#include <zlib.h>

#include "core/error.hpp"

namespace deepssim::mat {
namespace {

enum DataType : std::uint32_t {
  kInt8 = 1, kUInt8 = 2, kInt16 = 3, kUInt16 = 4, kInt32 = 5, kUInt32 = 6,
  kSingle = 7, kDouble = 9, kInt64 = 12, kUInt64 = 13, kMatrix = 14,
  kCompressed = 15, kUtf8 = 16, kUtf16 = 17, kUtf32 = 18,
};

enum ArrayClass : std::uint32_t { kCellClass = 1, kCharClass = 4 };

[[noreturn]] void Corrupt(const std::string& what) {
  Fail(ErrorKind::kFormat, "MAT file: " + what);
}

template <typename T>
T Load(const std::uint8_t* p) {
  T v;
  std::memcpy(&v, p, sizeof(T));
  return v;
}

struct Element {
  std::uint32_t type;
  std::span<const std::uint8_t> data;
};

// Splits a byte range into consecutive data elements.
class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  bool done() const { return pos_ >= bytes_.size(); }

  Element Next() {
    if (bytes_.size() - pos_ < 8) Corrupt("truncated element tag");
    const auto first = Load<std::uint32_t>(bytes_.data() + pos_);
    if ((first >> 16) != 0) {  // small element: size and type share one word
      const std::uint32_t size = first >> 16;
      if (size > 4) Corrupt("bad small element");
      Element e{first & 0xffffu, bytes_.subspan(pos_ + 4, size)};
      pos_ += 8;
      return e;
    }
    const auto size = Load<std::uint32_t>(bytes_.data() + pos_ + 4);
    if (size > bytes_.size() - pos_ - 8) Corrupt("element overruns file");
    Element e{first, bytes_.subspan(pos_ + 8, size)};
    pos_ += 8 + size;
    if (first != kCompressed) pos_ = (pos_ + 7) / 8 * 8;
    return e;
  }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

std::vector<std::uint8_t> Inflate(std::span<const std::uint8_t> in) {
  std::vector<std::uint8_t> out;
  z_stream zs{};
  if (inflateInit(&zs) != Z_OK) Corrupt("zlib init failed");
  zs.next_in = const_cast<Bytef*>(in.data());
  zs.avail_in = uInt(in.size());
  std::uint8_t chunk[1 << 15];
  int rc = Z_OK;
  while (rc != Z_STREAM_END) {
    zs.next_out = chunk;
    zs.avail_out = sizeof(chunk);
    rc = inflate(&zs, Z_NO_FLUSH);
    if (rc != Z_OK && rc != Z_STREAM_END) {
      inflateEnd(&zs);
      Corrupt("bad compressed element");
    }
    out.insert(out.end(), chunk, chunk + (sizeof(chunk) - zs.avail_out));
    if (rc == Z_OK && zs.avail_in == 0 && zs.avail_out != 0) break;
  }
  inflateEnd(&zs);
  return out;
}

std::vector<double> Numbers(const Element& e) {
  std::vector<double> out;
  auto take = [&]<typename T>(T) {
    const std::size_t n = e.data.size() / sizeof(T);
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(double(Load<T>(e.data.data() + i * sizeof(T))));
  };
  switch (e.type) {
    case kInt8: take(std::int8_t{}); break;
    case kUInt8: case kUtf8: take(std::uint8_t{}); break;
    case kInt16: take(std::int16_t{}); break;
    case kUInt16: case kUtf16: take(std::uint16_t{}); break;
    case kInt32: take(std::int32_t{}); break;
    case kUInt32: case kUtf32: take(std::uint32_t{}); break;
    case kSingle: take(float{}); break;
    case kDouble: take(double{}); break;
    case kInt64: take(std::int64_t{}); break;
    case kUInt64: take(std::uint64_t{}); break;
    default: Corrupt("unsupported numeric type " + std::to_string(e.type));
  }
  return out;
}

std::string CharsToText(const Element& e) {
  if (e.type == kUtf8 || e.type == kUInt8 || e.type == kInt8) {
    return std::string(e.data.begin(), e.data.end());
  }
  std::string text;
  for (double cp : Numbers(e)) {
    const auto c = std::uint32_t(cp);
    if (c < 0x80) {
      text.push_back(char(c));
    } else if (c < 0x800) {
      text.push_back(char(0xC0 | (c >> 6)));
      text.push_back(char(0x80 | (c & 0x3F)));
    } else {
      text.push_back(char(0xE0 | (c >> 12)));
      text.push_back(char(0x80 | ((c >> 6) & 0x3F)));
      text.push_back(char(0x80 | (c & 0x3F)));
    }
  }
  return text;
}

// Char arrays are column-major; a 1xN row vector reads out in order.
std::string CharRows(const std::string& raw, const std::vector<int>& dims) {
  if (dims.size() == 2 && dims[0] > 1) {
    // Multi-row char matrix: keep the first row only.
    std::string row;
    for (int c = 0; c < dims[1]; ++c) row.push_back(raw[std::size_t(c) * dims[0]]);
    return row;
  }
  return raw;
}

bool ParseMatrix(std::span<const std::uint8_t> body, std::string& name, Variable& var) {
  Reader r(body);
  if (r.done()) return false;  // empty matrix element
  const Element flags = r.Next();
  if (flags.data.size() < 8) Corrupt("bad array flags");
  const std::uint32_t cls = Load<std::uint32_t>(flags.data.data()) & 0xffu;
  const Element dims = r.Next();
  for (double d : Numbers(dims)) var.dims.push_back(int(d));
  const Element name_el = r.Next();
  name.assign(name_el.data.begin(), name_el.data.end());

  if (cls == kCellClass) {
    while (!r.done()) {
      const Element cell = r.Next();
      if (cell.type != kMatrix) Corrupt("cell entry is not a matrix");
      std::string ignored;
      Variable inner;
      if (ParseMatrix(cell.data, ignored, inner)) {
        var.cells.push_back(inner.text);
      } else {
        var.cells.emplace_back();
      }
    }
    return true;
  }
  if (cls == kCharClass) {
    var.text = r.done() ? std::string() : CharRows(CharsToText(r.Next()), var.dims);
    return true;
  }
  if (cls >= 6 && cls <= 15) {
    if (!r.done()) var.numbers = Numbers(r.Next());
    return true;
  }
  return false;
}

void CollectTopLevel(std::span<const std::uint8_t> bytes, std::map<std::string, Variable>& out) {
  Reader r(bytes);
  while (!r.done()) {
    const Element e = r.Next();
    if (e.type == kCompressed) {
      const auto inflated = Inflate(e.data);
      CollectTopLevel(inflated, out);
    } else if (e.type == kMatrix) {
      std::string name;
      Variable var;
      if (ParseMatrix(e.data, name, var)) out[name] = std::move(var);
    }
  }
}

}  // namespace

std::map<std::string, Variable> ReadMatFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorKind::kIo, "cannot open " + path.string());
  const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                        std::istreambuf_iterator<char>());
  if (bytes.size() < 128) Corrupt(path.string() + " is too short");
  if (bytes[126] != 'I' || bytes[127] != 'M') {
    Corrupt(path.string() + " is not a little-endian level-5 MAT file");
  }
  std::map<std::string, Variable> out;
  CollectTopLevel(std::span<const std::uint8_t>(bytes).subspan(128), out);
  return out;
}

}  // namespace deepssim::mat
