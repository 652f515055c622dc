#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "ares/types.hpp"

namespace ares {

// Uniform double in [0, 1) from the top 53 bits of a 64-bit Mersenne
// Twister draw. Unlike std::uniform_real_distribution the mapping is fixed,
// so seeded datasets are identical across standard libraries.
inline double unit_uniform(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

// Unbiased integer in [0, bound) by rejection.
std::uint64_t bounded_uniform(std::mt19937_64& gen, std::uint64_t bound);

// N vectors of n i.i.d. uniform [0, 1) entries, ids 0..N-1, drawn row by row
// from std::mt19937_64(seed).
std::vector<VectorRecord> generate_uniform(std::uint64_t seed, std::size_t count, std::size_t n);

struct LoadedVectors {
  std::vector<VectorRecord> records;
  // Serialized size of each record's source line (including newline).
  std::vector<std::uint64_t> source_bytes;
  // Entries whose index exceeded target_n and were dropped.
  std::size_t dropped_entries = 0;
};

// Sparse text: each line is an optional label followed by 1-based
// `index:value` pairs. Ids are 0-based line numbers. ParseError carries
// the 1-based line number.
LoadedVectors load_sparse(std::istream& in, std::size_t target_n);
LoadedVectors load_sparse(const std::filesystem::path& path, std::size_t target_n);

// Dense CSV, one vector per line. Blank lines are skipped; every row must
// have the same number of fields.
LoadedVectors load_csv(std::istream& in);
LoadedVectors load_csv(const std::filesystem::path& path);

enum class Normalization {
  PerFeature,  // min-max per coordinate across records
  Global,      // one min-max over every entry
  None,
};

// Indices kept by a seeded subsample of `count` items down to `max_count`,
// drawn without replacement against input order and returned ascending.
std::vector<std::size_t> subsample_indices(std::size_t count, std::size_t max_count,
                                           std::uint64_t seed);

// Pads with zeros or truncates every vector to target_n, subsamples to at
// most max_count records, then min-max normalizes to [0, 1]. Constant
// features (or a constant dataset, for Global) map to 0.
std::vector<VectorRecord> condition(std::vector<VectorRecord> records, std::size_t target_n,
                                    std::uint64_t subsample_seed, std::size_t max_count,
                                    Normalization normalization = Normalization::PerFeature);

void resize_to(VectorRecord& v, std::size_t target_n);
void normalize(std::span<VectorRecord> records, Normalization normalization);

}  // namespace ares
