#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ares/fit.hpp"
#include "ares/ingest.hpp"
#include "ares/types.hpp"

namespace ares {

// Autoencoder is a reserved name so externally produced numbers can be merged
// into reports; the runner does not implement it.
enum class Algorithm { Ares, Pca, Nmf, Autoencoder };

std::string_view algorithm_name(Algorithm a) noexcept;
Algorithm parse_algorithm(std::string_view name);

// How the uncompressed size of a dataset is counted.
//   Dense:      8 bytes per coordinate
//   Serialized: bytes of the source text lines
enum class SizeAccounting { Dense, Serialized };

std::string_view accounting_name(SizeAccounting a) noexcept;

struct DatasetSource {
  enum class Kind { SyntheticUniform, SparseFile, DenseCsv };

  std::string name;
  Kind kind = Kind::SyntheticUniform;
  std::filesystem::path path;  // file sources
  std::size_t count = 1000;    // synthetic only
  std::size_t n = 1000;        // synthetic only
};

struct BenchConfig {
  std::vector<DatasetSource> datasets;
  std::vector<Algorithm> algorithms{Algorithm::Ares, Algorithm::Pca, Algorithm::Nmf};
  std::size_t target_dim = 10;
  std::size_t target_n = 1000;
  std::size_t max_count = 1000;
  std::size_t repeats = 5;
  unsigned threads = 0;
  Scaling scaling = Scaling::Unit;
  Solver solver = Solver::QR;
  std::size_t nmf_iters = 200;
  std::uint64_t seed = 42;
  Normalization normalization = Normalization::PerFeature;
  std::optional<SizeAccounting> accounting;  // default: Dense, Serialized for sparse files
};

struct PreparedDataset {
  std::string name;
  std::vector<VectorRecord> vectors;  // conditioned: length target_n, entries in [0, 1]
  std::uint64_t original_bytes = 0;
  SizeAccounting accounting = SizeAccounting::Dense;
  std::size_t dropped_entries = 0;
};

PreparedDataset prepare_dataset(const DatasetSource& source, const BenchConfig& config);

struct BenchRow {
  Algorithm algorithm = Algorithm::Ares;
  std::string dataset;
  std::size_t repetition = 1;
  bool ok = true;
  std::string error;  // stable error name when !ok
  unsigned threads = 1;
  double compress_ms = 0.0;
  double decompress_ms = 0.0;
  SizeAccounting accounting = SizeAccounting::Dense;
  std::uint64_t original_bytes = 0;
  std::uint64_t payload_bytes = 0;  // per-vector codes only
  std::uint64_t state_bytes = 0;    // model or container overhead needed to decompress
  double ratio_percent = 0.0;             // original / payload
  double ratio_with_state_percent = 0.0;  // original / (payload + state)
  double mae = 0.0;
};

struct BenchSummary {
  Algorithm algorithm = Algorithm::Ares;
  std::string dataset;
  std::size_t runs = 0;
  double mean_compress_ms = 0.0;
  double median_compress_ms = 0.0;
  double mean_decompress_ms = 0.0;
  double median_decompress_ms = 0.0;
  double ratio_percent = 0.0;
  double ratio_with_state_percent = 0.0;
  double mean_mae = 0.0;
};

struct BenchReport {
  std::vector<BenchRow> rows;
  std::vector<BenchSummary> summary;
};

// One timed compress/decompress cycle of `algorithm` over prepared data.
BenchRow measure(Algorithm algorithm, const PreparedDataset& data, const BenchConfig& config,
                 std::size_t repetition);

// Runs every (dataset, algorithm, repetition) cell. A failing cell yields a
// row with ok == false and the matrix continues.
BenchReport run_bench(const BenchConfig& config,
                      const std::function<void(const BenchRow&)>& on_row = {});

std::vector<BenchSummary> summarize(std::span<const BenchRow> rows);

struct ReportOptions {
  // When false, timing fields and the thread count are left out so that
  // reports from different runs can be compared byte for byte.
  bool include_timing = true;
};

void write_report_csv(std::ostream& out, const BenchReport& report, ReportOptions options = {});
void write_report_json(std::ostream& out, const BenchReport& report, ReportOptions options = {});
// Whitespace-separated summary table for gnuplot.
void write_report_gnuplot(std::ostream& out, const BenchReport& report);

struct ScalingConfig {
  std::vector<std::size_t> counts{1000, 2000, 4000, 8000};
  std::size_t fixed_n = 1000;
  std::vector<std::size_t> dims{500, 1000, 2000, 4000};
  std::size_t fixed_count = 2000;
  std::vector<std::size_t> target_dims{5, 10, 20};
  std::size_t fixed_m = 10;
  std::size_t repeats = 3;
  unsigned threads = 1;
  std::uint64_t seed = 42;
  Scaling scaling = Scaling::Unit;
  Solver solver = Solver::QR;
};

struct ScalingPoint {
  std::string axis;  // "count", "n" or "m"
  std::size_t count = 0;
  std::size_t n = 0;
  std::size_t m = 0;
  std::vector<double> times_ms;
  double median_ms = 0.0;
};

struct ScalingReport {
  std::vector<ScalingPoint> points;
  double slope_count = 0.0;
  double slope_n = 0.0;
  double slope_m = 0.0;
};

ScalingReport run_scaling(const ScalingConfig& config);
void write_scaling_csv(std::ostream& out, const ScalingReport& report);

// Least-squares slope of log(y) against log(x).
double loglog_slope(std::span<const double> x, std::span<const double> y);

double median(std::vector<double> values);
double mean_absolute_error(std::span<const VectorRecord> a, std::span<const VectorRecord> b);

}  // namespace ares
