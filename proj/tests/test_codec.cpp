#include <gtest/gtest.h>

#include <bit>
#include <cstring>
#include <filesystem>
#include <random>
#include <sstream>

#include "ares/codec.hpp"
#include "ares/error.hpp"
#include "ares/ingest.hpp"

namespace ares {
namespace {

std::vector<PolyRecord> random_records(std::size_t count, std::uint32_t n, std::size_t m, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::vector<PolyRecord> out;
  for (std::size_t i = 0; i < count; ++i) {
    PolyRecord p{gen(), std::vector<double>(m), {n, Scaling::Unit}, unit_uniform(gen)};
    for (auto& c : p.coeffs) c = std::bit_cast<double>(gen() & 0x7fefffffffffffffull) * (gen() % 2 ? 1 : -1);
    out.push_back(std::move(p));
  }
  return out;
}

ErrorCode decode_code(std::span<const std::byte> bytes) {
  try {
    decode_archive(bytes);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "decode succeeded";
  return ErrorCode::InvalidArgument;
}

std::uint64_t read_le(std::span<const std::byte> b, std::size_t off, std::size_t len) {
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < len; ++i) v |= static_cast<std::uint64_t>(b[off + i]) << (8 * i);
  return v;
}

TEST(Archive, EmptyArchiveIsHeaderOnly) {
  ArchiveHeader h;
  h.n = 1000;
  h.m = 10;
  const auto bytes = encode_archive({}, h);
  ASSERT_EQ(bytes.size(), 22u);
  EXPECT_EQ(std::memcmp(bytes.data(), "ARES", 4), 0);
  EXPECT_EQ(read_le(bytes, 4, 2), 1u);
  EXPECT_EQ(read_le(bytes, 6, 4), 1000u);
  EXPECT_EQ(read_le(bytes, 10, 2), 10u);
  EXPECT_EQ(read_le(bytes, 12, 1), 1u);
  EXPECT_EQ(read_le(bytes, 13, 8), 0u);
  EXPECT_EQ(read_le(bytes, 21, 1), 1u);
  const auto back = decode_archive(bytes);
  EXPECT_EQ(back.header, h);
  EXPECT_TRUE(back.records.empty());
}

TEST(Archive, SingleRecordLayout) {
  const auto recs = random_records(1, 1000, 10, 1);
  const auto bytes = encode_archive(recs, header_for(recs));
  ASSERT_EQ(bytes.size(), 118u);
  EXPECT_EQ(read_le(bytes, 22, 8), recs[0].id);
  EXPECT_EQ(read_le(bytes, 30, 8), std::bit_cast<std::uint64_t>(recs[0].coeffs[0]));
  EXPECT_EQ(read_le(bytes, 110, 8), std::bit_cast<std::uint64_t>(recs[0].delta));
}

TEST(Archive, SizeAndRatioForThousandRecords) {
  const auto recs = random_records(1000, 1000, 10, 2);
  const auto bare = encode_archive(recs, header_for(recs, false));
  EXPECT_EQ(bare.size(), 88022u);
  EXPECT_EQ(archive_size(1000, 10, false), 88022u);
  EXPECT_EQ(archive_size(1000, 10, true), 96022u);
  EXPECT_NEAR(compression_ratio(8'000'000, bare.size()) / 100.0, 90.886, 1e-3);
  const auto back = decode_archive(bare);
  EXPECT_FALSE(back.header.has_deltas());
  EXPECT_EQ(back.records[5].delta, 0.0);
  EXPECT_EQ(back.records[5].coeffs, recs[5].coeffs);
}

TEST(Archive, RoundTripIsBitIdentical) {
  const auto recs = random_records(500, 64, 7, 3);
  const auto bytes = encode_archive(recs, header_for(recs));
  const auto back = decode_archive(bytes);
  ASSERT_EQ(back.records.size(), recs.size());
  for (std::size_t i = 0; i < recs.size(); ++i) {
    EXPECT_EQ(back.records[i].id, recs[i].id);
    EXPECT_EQ(back.records[i].domain, recs[i].domain);
    ASSERT_EQ(std::memcmp(back.records[i].coeffs.data(), recs[i].coeffs.data(), 7 * sizeof(double)), 0);
    EXPECT_EQ(std::bit_cast<std::uint64_t>(back.records[i].delta), std::bit_cast<std::uint64_t>(recs[i].delta));
  }
  EXPECT_EQ(encode_archive(back.records, back.header), bytes);
}

TEST(Archive, TruncationIsCorrupt) {
  const auto recs = random_records(3, 100, 4, 4);
  const auto bytes = encode_archive(recs, header_for(recs));
  for (std::size_t cut : {std::size_t{1}, std::size_t{8}, std::size_t{47}, bytes.size() - 22}) {
    EXPECT_EQ(decode_code(std::span(bytes).first(bytes.size() - cut)), ErrorCode::CorruptArchive) << cut;
  }
  auto longer = bytes;
  longer.push_back(std::byte{0});
  EXPECT_EQ(decode_code(longer), ErrorCode::CorruptArchive);
  EXPECT_EQ(decode_code(std::span(bytes).first(10)), ErrorCode::CorruptArchive);
}

TEST(Archive, RejectsForeignMagicAndVersion) {
  const auto recs = random_records(2, 100, 4, 5);
  auto bytes = encode_archive(recs, header_for(recs));
  auto bad_magic = bytes;
  bad_magic[0] = std::byte{'X'};
  EXPECT_EQ(decode_code(bad_magic), ErrorCode::UnsupportedFormat);
  auto bad_version = bytes;
  bad_version[4] = std::byte{2};
  EXPECT_EQ(decode_code(bad_version), ErrorCode::UnsupportedFormat);
  auto bad_scaling = bytes;
  bad_scaling[12] = std::byte{7};
  EXPECT_EQ(decode_code(bad_scaling), ErrorCode::CorruptArchive);
}

TEST(Archive, HeterogeneousRecordsRejected) {
  auto recs = random_records(2, 100, 4, 6);
  recs[1].coeffs.push_back(1.0);
  try {
    header_for(recs);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DimensionMismatch);
  }
  auto h = header_for(std::span(recs).first(1));
  try {
    encode_archive(recs, h);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DimensionMismatch);
  }
}

TEST(Archive, FileRoundTrip) {
  const auto path = std::filesystem::temp_directory_path() / "ares_codec_test.ares";
  const auto recs = random_records(10, 50, 3, 7);
  const auto written = write_archive(path, recs, header_for(recs));
  EXPECT_EQ(written, archive_size(10, 3, true));
  EXPECT_EQ(std::filesystem::file_size(path), written);
  const auto back = read_archive(path);
  EXPECT_EQ(back.records, recs);
  std::filesystem::remove(path);
  try {
    read_archive(path);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::IoError);
  }
}

TEST(Ratio, Examples) {
  EXPECT_EQ(compression_ratio(8'000'000, 80'000), 10000.0);
  EXPECT_EQ(compression_ratio(1234, 1234), 100.0);
  try {
    compression_ratio(10, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DivisionByZero);
  }
}

TEST(TextFormats, CsvRoundTripsThroughLoader) {
  const std::vector<VectorRecord> vs{{0, {0.1, 1.0 / 3.0, -2.5e-300}}, {1, {1, 2, 3}}};
  std::stringstream ss;
  write_csv(ss, vs);
  const auto back = load_csv(ss);
  ASSERT_EQ(back.records.size(), 2u);
  EXPECT_EQ(back.records[0].values, vs[0].values);
  EXPECT_EQ(back.records[1].values, vs[1].values);
}

TEST(TextFormats, SparseSkipsZeros) {
  const std::vector<VectorRecord> vs{{0, {0.5, 0.0, 1.0, 0.0}}};
  std::stringstream ss;
  write_sparse(ss, vs);
  EXPECT_EQ(ss.str().find("2:"), std::string::npos);
  const auto back = load_sparse(ss, 4);
  EXPECT_EQ(back.records[0].values, vs[0].values);
}

}  // namespace
}  // namespace ares
