#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "ares/types.hpp"

namespace ares {

// On-disk layout of a .ares archive, all integers little-endian:
//
//   offset  size  field
//        0     4  magic "ARES"
//        4     2  version (1)
//        6     4  n
//       10     2  m
//       12     1  scaling (0 = raw, 1 = unit)
//       13     8  record count
//       21     1  flags (bit 0: deltas present)
//
// followed by `count` records of: id (u64), m coefficients (IEEE-754
// binary64), and the residual delta (binary64) when bit 0 is set.
struct ArchiveHeader {
  std::uint16_t version = 1;
  std::uint32_t n = 0;
  std::uint16_t m = 0;
  Scaling scaling = Scaling::Unit;
  std::uint64_t count = 0;
  std::uint8_t flags = kDeltasPresent;

  static constexpr std::uint8_t kDeltasPresent = 0x01;
  bool has_deltas() const noexcept { return (flags & kDeltasPresent) != 0; }

  friend bool operator==(const ArchiveHeader&, const ArchiveHeader&) = default;
};

inline constexpr std::size_t kArchiveHeaderBytes = 22;
inline constexpr std::uint16_t kArchiveVersion = 1;

struct Archive {
  ArchiveHeader header;
  std::vector<PolyRecord> records;
};

std::uint64_t archive_size(std::uint64_t count, std::uint16_t m, bool deltas) noexcept;

// Header describing `records`, which must share one (n, m, scaling).
// An empty record list needs the shape supplied explicitly.
ArchiveHeader header_for(std::span<const PolyRecord> records, bool deltas = true);

// In-memory encode/decode. encode_archive overwrites header.count with
// records.size() and throws DimensionMismatch for heterogeneous records.
std::vector<std::byte> encode_archive(std::span<const PolyRecord> records, ArchiveHeader header);
Archive decode_archive(std::span<const std::byte> bytes);

// Writes and fsyncs the archive; returns the number of bytes written.
std::uint64_t write_archive(const std::filesystem::path& path, std::span<const PolyRecord> records,
                            const ArchiveHeader& header);
Archive read_archive(const std::filesystem::path& path);

// 100 * original / compressed, i.e. a percentage (10000 means 100x).
double compression_ratio(std::uint64_t original_bytes, std::uint64_t compressed_bytes);

// Plain-text vector formats.
//   CSV: one vector per line, comma-separated values.
//   Sparse: optional leading label, then 1-based `index:value` pairs.
void write_csv(std::ostream& out, std::span<const VectorRecord> vectors);
void write_csv(const std::filesystem::path& path, std::span<const VectorRecord> vectors);
void write_sparse(std::ostream& out, std::span<const VectorRecord> vectors);

}  // namespace ares
