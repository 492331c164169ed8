// SPDX-FileCopyrightText: 2026 blobfield authors
// SPDX-License-Identifier: Apache-2.0

#include "blobfield/bg3d.hpp"

#include "blobfield/error.hpp"

#include <bit>
#include <cstring>
#include <limits>
#include <set>

namespace blobfield {

std::size_t Bg3dEntry::element_count() const {
  std::size_t n = 1;
  for (std::uint32_t d : dims) n *= d;
  return n;
}

void Bg3dTensor::add(Bg3dEntry entry) {
  if (entry.name.size() > std::numeric_limits<std::uint16_t>::max())
    throw Error(ErrorKind::SchemaViolation, "entry name too long", entry.name.substr(0, 32));
  if (find(entry.name) != nullptr) throw Error(ErrorKind::SchemaViolation, "duplicate entry name", entry.name);
  if (entry.element_count() != entry.values.size())
    throw Error(ErrorKind::SchemaViolation, "declared dims do not match the payload length", entry.name);
  entries_.push_back(std::move(entry));
}

void Bg3dTensor::add(const std::string& name, const Map2D& map) {
  Bg3dEntry e{name, {static_cast<std::uint32_t>(map.rows()), static_cast<std::uint32_t>(map.cols())}, {}};
  e.values.reserve(static_cast<std::size_t>(map.size()));
  for (Eigen::Index y = 0; y < map.rows(); ++y)
    for (Eigen::Index x = 0; x < map.cols(); ++x) e.values.push_back(static_cast<float>(map(y, x)));
  add(std::move(e));
}

void Bg3dTensor::add(const std::string& name, const Grid& grid) {
  Bg3dEntry e{name,
              {static_cast<std::uint32_t>(grid.height()), static_cast<std::uint32_t>(grid.width()),
               static_cast<std::uint32_t>(grid.channels())},
              {}};
  e.values.reserve(static_cast<std::size_t>(grid.data().size()));
  for (Eigen::Index r = 0; r < grid.data().rows(); ++r)
    for (Eigen::Index c = 0; c < grid.data().cols(); ++c) e.values.push_back(static_cast<float>(grid.data()(r, c)));
  add(std::move(e));
}

const Bg3dEntry* Bg3dTensor::find(std::string_view name) const {
  for (const Bg3dEntry& e : entries_) {
    if (e.name == name) return &e;
  }
  return nullptr;
}

const Bg3dEntry& Bg3dTensor::at(std::string_view name) const {
  const Bg3dEntry* e = find(name);
  if (e == nullptr) throw Error(ErrorKind::SchemaViolation, "missing entry", std::string(name));
  return *e;
}

namespace {

template <typename T>
void put(std::string& out, T value) {
  static_assert(std::is_integral_v<T>);
  for (std::size_t b = 0; b < sizeof(T); ++b) out.push_back(static_cast<char>((value >> (8 * b)) & 0xFF));
}

class Reader {
 public:
  explicit Reader(std::string_view bytes) : bytes_(bytes) {}

  template <typename T>
  T get(const char* what) {
    need(sizeof(T), what);
    T value = 0;
    for (std::size_t b = 0; b < sizeof(T); ++b)
      value |= static_cast<T>(static_cast<T>(static_cast<unsigned char>(bytes_[pos_ + b])) << (8 * b));
    pos_ += sizeof(T);
    return value;
  }

  std::string_view take(std::size_t n, const char* what) {
    need(n, what);
    std::string_view s = bytes_.substr(pos_, n);
    pos_ += n;
    return s;
  }

  [[nodiscard]] std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  void need(std::size_t n, const char* what) const {
    if (remaining() < n) throw Error(ErrorKind::MalformedDocument, "truncated container", what);
  }

  std::string_view bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string encode_bg3d(const Bg3dTensor& tensor) {
  std::string out = "BG3D";
  put<std::uint32_t>(out, kBg3dVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(tensor.entries().size()));
  for (const Bg3dEntry& e : tensor.entries()) {
    put<std::uint16_t>(out, static_cast<std::uint16_t>(e.name.size()));
    out += e.name;
    put<std::uint32_t>(out, static_cast<std::uint32_t>(e.dims.size()));
    for (std::uint32_t d : e.dims) put<std::uint32_t>(out, d);
    for (float v : e.values) put<std::uint32_t>(out, std::bit_cast<std::uint32_t>(v));
  }
  return out;
}

Bg3dTensor decode_bg3d(std::string_view bytes) {
  Reader in(bytes);
  if (in.take(4, "magic") != "BG3D") throw Error(ErrorKind::MalformedDocument, "bad magic bytes", "magic");
  const auto version = in.get<std::uint32_t>("version");
  if (version != kBg3dVersion)
    throw Error(ErrorKind::MalformedDocument, "unsupported version " + std::to_string(version), "version");
  const auto count = in.get<std::uint32_t>("entry count");
  Bg3dTensor tensor;
  for (std::uint32_t i = 0; i < count; ++i) {
    Bg3dEntry e;
    const auto name_len = in.get<std::uint16_t>("name length");
    e.name = std::string(in.take(name_len, "name"));
    const auto ndim = in.get<std::uint32_t>("ndim");
    std::size_t elements = 1;
    for (std::uint32_t d = 0; d < ndim; ++d) {
      e.dims.push_back(in.get<std::uint32_t>("dims"));
      elements *= e.dims.back();
    }
    if (elements > in.remaining() / 4) throw Error(ErrorKind::MalformedDocument, "payload shorter than declared", e.name);
    e.values.resize(elements);
    for (float& v : e.values) v = std::bit_cast<float>(in.get<std::uint32_t>("payload"));
    tensor.add(std::move(e));
  }
  if (in.remaining() != 0) throw Error(ErrorKind::MalformedDocument, "trailing bytes after last entry", "$");
  return tensor;
}

Map2D entry_to_map(const Bg3dEntry& entry) {
  if (entry.dims.size() != 2) throw Error(ErrorKind::ShapeMismatch, "expected a 2-D entry", entry.name);
  Map2D m(entry.dims[0], entry.dims[1]);
  for (Eigen::Index k = 0; k < m.size(); ++k) m.data()[k] = entry.values[static_cast<std::size_t>(k)];
  return m;
}

Map2D entry_slice(const Bg3dEntry& entry, std::uint32_t index) {
  if (entry.dims.size() != 3) throw Error(ErrorKind::ShapeMismatch, "expected a 3-D entry", entry.name);
  if (index >= entry.dims[0]) throw Error(ErrorKind::IndexOutOfRange, "slice index out of range", entry.name);
  Map2D m(entry.dims[1], entry.dims[2]);
  const std::size_t offset = static_cast<std::size_t>(index) * static_cast<std::size_t>(m.size());
  for (Eigen::Index k = 0; k < m.size(); ++k) m.data()[k] = entry.values[offset + static_cast<std::size_t>(k)];
  return m;
}

namespace {

Bg3dEntry matrix_entry(const std::string& name, const Eigen::MatrixXd& m) {
  Bg3dEntry e{name, {static_cast<std::uint32_t>(m.rows()), static_cast<std::uint32_t>(m.cols())}, {}};
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) e.values.push_back(static_cast<float>(m(r, c)));
  return e;
}

Eigen::MatrixXd entry_matrix(const Bg3dEntry& e) {
  if (e.dims.size() != 2) throw Error(ErrorKind::ShapeMismatch, "expected a 2-D entry", e.name);
  Eigen::MatrixXd m(e.dims[0], e.dims[1]);
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = e.values[static_cast<std::size_t>(r * m.cols() + c)];
  return m;
}

}  // namespace

Bg3dTensor upsampler_to_bg3d(const UpsamplerParams& params) {
  params.validate();
  Bg3dTensor t;
  t.add(matrix_entry("conv_weights", params.conv_weights));
  t.add(matrix_entry("mod_affine_w", params.mod_affine_w));
  Bg3dEntry b{"mod_affine_b", {static_cast<std::uint32_t>(params.mod_affine_b.size())}, {}};
  for (Eigen::Index k = 0; k < params.mod_affine_b.size(); ++k) b.values.push_back(static_cast<float>(params.mod_affine_b(k)));
  t.add(std::move(b));
  return t;
}

UpsamplerParams upsampler_from_bg3d(const Bg3dTensor& tensor) {
  UpsamplerParams p;
  p.conv_weights = entry_matrix(tensor.at("conv_weights"));
  p.mod_affine_w = entry_matrix(tensor.at("mod_affine_w"));
  const Bg3dEntry& b = tensor.at("mod_affine_b");
  if (b.dims.size() != 1) throw Error(ErrorKind::ShapeMismatch, "expected a 1-D entry", b.name);
  p.mod_affine_b.resize(b.dims[0]);
  for (Eigen::Index k = 0; k < p.mod_affine_b.size(); ++k) p.mod_affine_b(k) = b.values[static_cast<std::size_t>(k)];
  p.validate();
  return p;
}

}  // namespace blobfield
