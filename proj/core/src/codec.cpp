#include "ares/codec.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <array>
#include <bit>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <ostream>
#include <string>

#include "ares/error.hpp"

namespace ares {
namespace {

constexpr std::array<char, 4> kMagic{'A', 'R', 'E', 'S'};

class Writer {
 public:
  explicit Writer(std::vector<std::byte>& out) : out_(out) {}

  template <typename U>
  void uint(U value) {
    for (std::size_t i = 0; i < sizeof(U); ++i) {
      out_.push_back(static_cast<std::byte>((static_cast<std::uint64_t>(value) >> (8 * i)) & 0xFFu));
    }
  }
  void f64(double value) { uint(std::bit_cast<std::uint64_t>(value)); }

 private:
  std::vector<std::byte>& out_;
};

class Reader {
 public:
  explicit Reader(std::span<const std::byte> in) : in_(in) {}

  template <typename U>
  U uint() {
    if (in_.size() - pos_ < sizeof(U)) {
      throw Error(ErrorCode::CorruptArchive, "archive truncated at byte " + std::to_string(pos_));
    }
    std::uint64_t value = 0;
    for (std::size_t i = 0; i < sizeof(U); ++i) {
      value |= static_cast<std::uint64_t>(std::to_integer<std::uint8_t>(in_[pos_ + i])) << (8 * i);
    }
    pos_ += sizeof(U);
    return static_cast<U>(value);
  }
  double f64() { return std::bit_cast<double>(uint<std::uint64_t>()); }
  std::size_t remaining() const noexcept { return in_.size() - pos_; }

 private:
  std::span<const std::byte> in_;
  std::size_t pos_ = 0;
};

void check_homogeneous(std::span<const PolyRecord> records, const ArchiveHeader& header) {
  for (const auto& r : records) {
    if (r.domain.n != header.n || r.domain.scaling != header.scaling || r.m() != header.m) {
      throw Error(ErrorCode::DimensionMismatch,
                  "record " + std::to_string(r.id) + " does not match archive shape (n=" +
                      std::to_string(header.n) + ", m=" + std::to_string(header.m) + ")");
    }
  }
}

}  // namespace

std::uint64_t archive_size(std::uint64_t count, std::uint16_t m, bool deltas) noexcept {
  return kArchiveHeaderBytes + count * (8 + 8 * static_cast<std::uint64_t>(m) + (deltas ? 8 : 0));
}

ArchiveHeader header_for(std::span<const PolyRecord> records, bool deltas) {
  ArchiveHeader h;
  h.flags = deltas ? ArchiveHeader::kDeltasPresent : 0;
  h.count = records.size();
  if (!records.empty()) {
    const auto& r = records.front();
    if (r.m() > 0xFFFF) throw Error(ErrorCode::InvalidTargetDim, "m does not fit the archive header");
    h.n = r.domain.n;
    h.m = static_cast<std::uint16_t>(r.m());
    h.scaling = r.domain.scaling;
  }
  check_homogeneous(records, h);
  return h;
}

std::vector<std::byte> encode_archive(std::span<const PolyRecord> records, ArchiveHeader header) {
  header.count = records.size();
  if (header.m > header.n) throw Error(ErrorCode::InvalidTargetDim, "archive header has m > n");
  check_homogeneous(records, header);
  std::vector<std::byte> out;
  out.reserve(archive_size(header.count, header.m, header.has_deltas()));
  for (char c : kMagic) out.push_back(static_cast<std::byte>(c));
  Writer w(out);
  w.uint(header.version);
  w.uint(header.n);
  w.uint(header.m);
  w.uint(static_cast<std::uint8_t>(header.scaling));
  w.uint(header.count);
  w.uint(header.flags);
  for (const auto& r : records) {
    w.uint(r.id);
    for (double c : r.coeffs) w.f64(c);
    if (header.has_deltas()) w.f64(r.delta);
  }
  return out;
}

Archive decode_archive(std::span<const std::byte> bytes) {
  if (bytes.size() < kMagic.size() ||
      std::memcmp(bytes.data(), kMagic.data(), kMagic.size()) != 0) {
    throw Error(ErrorCode::UnsupportedFormat, "missing ARES magic");
  }
  Reader r(bytes.subspan(kMagic.size()));
  Archive a;
  auto& h = a.header;
  h.version = r.uint<std::uint16_t>();
  if (h.version != kArchiveVersion) {
    throw Error(ErrorCode::UnsupportedFormat, "unsupported archive version " + std::to_string(h.version));
  }
  h.n = r.uint<std::uint32_t>();
  h.m = r.uint<std::uint16_t>();
  const auto scaling = r.uint<std::uint8_t>();
  h.count = r.uint<std::uint64_t>();
  h.flags = r.uint<std::uint8_t>();
  if (scaling > 1) throw Error(ErrorCode::CorruptArchive, "unknown scaling tag " + std::to_string(scaling));
  h.scaling = static_cast<Scaling>(scaling);
  // An empty archive may carry a zero shape; a populated one may not.
  if (h.m > h.n || (h.count > 0 && h.m == 0)) {
    throw Error(ErrorCode::CorruptArchive, "invalid shape n=" + std::to_string(h.n) + " m=" + std::to_string(h.m));
  }
  const std::uint64_t per_record = 8 + 8 * static_cast<std::uint64_t>(h.m) + (h.has_deltas() ? 8 : 0);
  if (r.remaining() / per_record < h.count || r.remaining() != h.count * per_record) {
    throw Error(ErrorCode::CorruptArchive, "payload is " + std::to_string(r.remaining()) +
                                               " bytes, header promises " + std::to_string(h.count) +
                                               " records of " + std::to_string(per_record));
  }
  a.records.resize(h.count);
  for (auto& rec : a.records) {
    rec.id = r.uint<std::uint64_t>();
    rec.domain = DomainSpec{h.n, h.scaling};
    rec.coeffs.resize(h.m);
    for (auto& c : rec.coeffs) c = r.f64();
    rec.delta = h.has_deltas() ? r.f64() : 0.0;
  }
  return a;
}

std::uint64_t write_archive(const std::filesystem::path& path, std::span<const PolyRecord> records,
                            const ArchiveHeader& header) {
  const auto bytes = encode_archive(records, header);
  const int fd = ::open(path.c_str(), O_WRONLY | O_CREAT | O_TRUNC | O_CLOEXEC, 0644);
  if (fd < 0) throw Error(ErrorCode::IoError, "cannot open " + path.string() + ": " + std::strerror(errno));
  std::size_t written = 0;
  while (written < bytes.size()) {
    const auto rc = ::write(fd, bytes.data() + written, bytes.size() - written);
    if (rc < 0) {
      if (errno == EINTR) continue;
      const int err = errno;
      ::close(fd);
      throw Error(ErrorCode::IoError, "write to " + path.string() + " failed: " + std::strerror(err));
    }
    written += static_cast<std::size_t>(rc);
  }
  if (::fsync(fd) != 0 || ::close(fd) != 0) {
    throw Error(ErrorCode::IoError, "cannot flush " + path.string() + ": " + std::strerror(errno));
  }
  return bytes.size();
}

Archive read_archive(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  std::vector<char> raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw Error(ErrorCode::IoError, "read of " + path.string() + " failed");
  return decode_archive(std::as_bytes(std::span(raw)));
}

double compression_ratio(std::uint64_t original_bytes, std::uint64_t compressed_bytes) {
  if (compressed_bytes == 0) throw Error(ErrorCode::DivisionByZero, "compressed size is zero");
  return 100.0 * static_cast<double>(original_bytes) / static_cast<double>(compressed_bytes);
}

void write_csv(std::ostream& out, std::span<const VectorRecord> vectors) {
  char buf[32];
  for (const auto& v : vectors) {
    for (std::size_t i = 0; i < v.values.size(); ++i) {
      std::snprintf(buf, sizeof(buf), "%.17g", v.values[i]);
      if (i) out << ',';
      out << buf;
    }
    out << '\n';
  }
}

void write_csv(const std::filesystem::path& path, std::span<const VectorRecord> vectors) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  write_csv(out, vectors);
  if (!out) throw Error(ErrorCode::IoError, "write to " + path.string() + " failed");
}

void write_sparse(std::ostream& out, std::span<const VectorRecord> vectors) {
  char buf[32];
  for (const auto& v : vectors) {
    bool first = true;
    for (std::size_t i = 0; i < v.values.size(); ++i) {
      if (v.values[i] == 0.0) continue;
      std::snprintf(buf, sizeof(buf), "%.17g", v.values[i]);
      if (!first) out << ' ';
      out << (i + 1) << ':' << buf;
      first = false;
    }
    out << '\n';
  }
}

}  // namespace ares
