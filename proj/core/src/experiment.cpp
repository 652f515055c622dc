#include "ares/experiment.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <ostream>

#include "ares/baselines.hpp"
#include "ares/codec.hpp"
#include "ares/error.hpp"
#include "ares/parallel.hpp"

namespace ares {
namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start, Clock::time_point stop) {
  return std::chrono::duration<double, std::milli>(stop - start).count();
}

std::string format_number(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

double matrix_mae(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  if (a.size() == 0) return 0.0;
  return (a - b).cwiseAbs().sum() / static_cast<double>(a.size());
}

constexpr const char* kMaeNote = "mae is the mean absolute error against the normalized inputs";

}  // namespace

std::string_view algorithm_name(Algorithm a) noexcept {
  switch (a) {
    case Algorithm::Ares: return "ares";
    case Algorithm::Pca: return "pca";
    case Algorithm::Nmf: return "nmf";
    case Algorithm::Autoencoder: return "autoencoder";
  }
  return "unknown";
}

Algorithm parse_algorithm(std::string_view name) {
  for (auto a : {Algorithm::Ares, Algorithm::Pca, Algorithm::Nmf, Algorithm::Autoencoder}) {
    if (algorithm_name(a) == name) return a;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown algorithm '" + std::string(name) + "'");
}

std::string_view accounting_name(SizeAccounting a) noexcept {
  return a == SizeAccounting::Dense ? "dense" : "serialized";
}

PreparedDataset prepare_dataset(const DatasetSource& source, const BenchConfig& config) {
  PreparedDataset out;
  out.name = source.name;
  LoadedVectors loaded;
  std::size_t target_n = config.target_n;
  switch (source.kind) {
    case DatasetSource::Kind::SyntheticUniform:
      loaded.records = generate_uniform(config.seed, source.count, source.n);
      target_n = source.n;
      break;
    case DatasetSource::Kind::SparseFile:
      loaded = load_sparse(source.path, config.target_n);
      break;
    case DatasetSource::Kind::DenseCsv:
      loaded = load_csv(source.path);
      break;
  }
  if (loaded.records.empty()) throw Error(ErrorCode::EmptyDomain, "dataset " + source.name + " is empty");
  out.dropped_entries = loaded.dropped_entries;

  const auto keep = subsample_indices(loaded.records.size(), config.max_count, config.seed);
  std::uint64_t serialized = 0;
  std::vector<VectorRecord> picked;
  picked.reserve(keep.size());
  for (auto i : keep) {
    if (!loaded.source_bytes.empty()) serialized += loaded.source_bytes[i];
    picked.push_back(std::move(loaded.records[i]));
  }
  out.vectors = condition(std::move(picked), target_n, config.seed, config.max_count, config.normalization);

  out.accounting = config.accounting.value_or(source.kind == DatasetSource::Kind::SparseFile
                                                  ? SizeAccounting::Serialized
                                                  : SizeAccounting::Dense);
  if (out.accounting == SizeAccounting::Serialized && source.kind == DatasetSource::Kind::SyntheticUniform) {
    out.accounting = SizeAccounting::Dense;  // nothing was serialized
  }
  out.original_bytes = out.accounting == SizeAccounting::Dense
                           ? 8u * static_cast<std::uint64_t>(out.vectors.size()) * target_n
                           : serialized;
  return out;
}

double mean_absolute_error(std::span<const VectorRecord> a, std::span<const VectorRecord> b) {
  if (a.size() != b.size()) throw Error(ErrorCode::DimensionMismatch, "MAE inputs differ in length");
  double total = 0.0;
  std::size_t entries = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].values.size() != b[i].values.size()) {
      throw Error(ErrorCode::DimensionMismatch, "MAE vectors differ in length");
    }
    for (std::size_t k = 0; k < a[i].values.size(); ++k) total += std::abs(a[i].values[k] - b[i].values[k]);
    entries += a[i].values.size();
  }
  return entries == 0 ? 0.0 : total / static_cast<double>(entries);
}

BenchRow measure(Algorithm algorithm, const PreparedDataset& data, const BenchConfig& config,
                 std::size_t repetition) {
  BenchRow row;
  row.algorithm = algorithm;
  row.dataset = data.name;
  row.repetition = repetition;
  row.threads = resolve_threads(config.threads);
  row.accounting = data.accounting;
  row.original_bytes = data.original_bytes;
  const auto count = static_cast<std::uint64_t>(data.vectors.size());
  const auto m = static_cast<std::uint64_t>(config.target_dim);
  row.payload_bytes = 8 * count * m;

  switch (algorithm) {
    case Algorithm::Ares: {
      const auto t0 = Clock::now();
      const auto compressed = compress_batch(data.vectors, config.target_dim, config.scaling, config.solver,
                                             config.threads);
      const auto t1 = Clock::now();
      const auto restored = decompress_batch(compressed, config.threads);
      const auto t2 = Clock::now();
      row.compress_ms = elapsed_ms(t0, t1);
      row.decompress_ms = elapsed_ms(t1, t2);
      row.mae = mean_absolute_error(restored, data.vectors);
      row.state_bytes = archive_size(count, static_cast<std::uint16_t>(m), false) - row.payload_bytes;
      break;
    }
    case Algorithm::Pca: {
      const Eigen::MatrixXd matrix = to_matrix(data.vectors);
      const auto t0 = Clock::now();
      const auto fitted = pca_fit_transform(matrix, config.target_dim);
      const auto t1 = Clock::now();
      const Eigen::MatrixXd restored = pca_inverse(fitted.model, fitted.scores);
      const auto t2 = Clock::now();
      row.compress_ms = elapsed_ms(t0, t1);
      row.decompress_ms = elapsed_ms(t1, t2);
      row.mae = matrix_mae(restored, matrix);
      row.state_bytes = fitted.model.state_bytes();
      break;
    }
    case Algorithm::Nmf: {
      const Eigen::MatrixXd matrix = to_matrix(data.vectors);
      const auto t0 = Clock::now();
      const auto model = nmf_fit(matrix, config.target_dim, config.nmf_iters, config.seed);
      const auto t1 = Clock::now();
      const Eigen::MatrixXd restored = nmf_reconstruct(model);
      const auto t2 = Clock::now();
      row.compress_ms = elapsed_ms(t0, t1);
      row.decompress_ms = elapsed_ms(t1, t2);
      row.mae = matrix_mae(restored, matrix);
      row.state_bytes = model.state_bytes();
      break;
    }
    case Algorithm::Autoencoder:
      throw Error(ErrorCode::InvalidArgument, "autoencoder results are external only; nothing to run");
  }
  row.ratio_percent = compression_ratio(row.original_bytes, row.payload_bytes);
  row.ratio_with_state_percent = compression_ratio(row.original_bytes, row.payload_bytes + row.state_bytes);
  return row;
}

BenchReport run_bench(const BenchConfig& config, const std::function<void(const BenchRow&)>& on_row) {
  BenchReport report;
  const auto emit = [&](BenchRow row) {
    if (on_row) on_row(row);
    report.rows.push_back(std::move(row));
  };
  const auto failed = [&](Algorithm a, const std::string& dataset, std::size_t rep, std::string error) {
    BenchRow row;
    row.algorithm = a;
    row.dataset = dataset;
    row.repetition = rep;
    row.ok = false;
    row.error = std::move(error);
    row.threads = resolve_threads(config.threads);
    return row;
  };

  for (const auto& source : config.datasets) {
    std::optional<PreparedDataset> data;
    std::string prepare_error;
    try {
      data = prepare_dataset(source, config);
    } catch (const Error& e) {
      prepare_error = std::string(error_name(e.code()));
    }
    for (auto algorithm : config.algorithms) {
      for (std::size_t rep = 1; rep <= config.repeats; ++rep) {
        if (!data) {
          emit(failed(algorithm, source.name, rep, prepare_error));
          continue;
        }
        try {
          emit(measure(algorithm, *data, config, rep));
        } catch (const Error& e) {
          emit(failed(algorithm, source.name, rep, std::string(error_name(e.code()))));
        } catch (const std::exception&) {
          emit(failed(algorithm, source.name, rep, "InternalError"));
        }
      }
    }
  }
  report.summary = summarize(report.rows);
  return report;
}

double median(std::vector<double> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const auto mid = values.size() / 2;
  return values.size() % 2 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
}

std::vector<BenchSummary> summarize(std::span<const BenchRow> rows) {
  // Preserve first-appearance order of (dataset, algorithm).
  std::vector<std::pair<std::string, Algorithm>> order;
  std::map<std::pair<std::string, Algorithm>, std::vector<const BenchRow*>> groups;
  for (const auto& r : rows) {
    if (!r.ok) continue;
    const auto key = std::make_pair(r.dataset, r.algorithm);
    if (!groups.contains(key)) order.push_back(key);
    groups[key].push_back(&r);
  }
  std::vector<BenchSummary> out;
  for (const auto& key : order) {
    const auto& group = groups[key];
    BenchSummary s;
    s.dataset = key.first;
    s.algorithm = key.second;
    s.runs = group.size();
    std::vector<double> compress;
    std::vector<double> decompress;
    double mae = 0.0;
    for (const auto* r : group) {
      compress.push_back(r->compress_ms);
      decompress.push_back(r->decompress_ms);
      mae += r->mae;
    }
    const auto runs = static_cast<double>(group.size());
    s.mean_compress_ms = std::accumulate(compress.begin(), compress.end(), 0.0) / runs;
    s.mean_decompress_ms = std::accumulate(decompress.begin(), decompress.end(), 0.0) / runs;
    s.median_compress_ms = median(compress);
    s.median_decompress_ms = median(decompress);
    s.ratio_percent = group.front()->ratio_percent;
    s.ratio_with_state_percent = group.front()->ratio_with_state_percent;
    s.mean_mae = mae / runs;
    out.push_back(std::move(s));
  }
  return out;
}

void write_report_csv(std::ostream& out, const BenchReport& report, ReportOptions options) {
  const bool t = options.include_timing;
  out << "# " << kMaeNote << '\n';
  out << "algorithm,dataset,repetition,status";
  if (t) out << ",threads,compress_ms,decompress_ms";
  out << ",accounting,original_bytes,payload_bytes,state_bytes,ratio_percent,ratio_with_state_percent,mae\n";
  for (const auto& r : report.rows) {
    out << algorithm_name(r.algorithm) << ',' << r.dataset << ',' << r.repetition << ','
        << (r.ok ? std::string("ok") : "failed:" + r.error);
    if (!r.ok) {
      if (t) out << ',' << r.threads << ",,";
      out << ",,,,,,,\n";
      continue;
    }
    if (t) out << ',' << r.threads << ',' << format_number("%.3f", r.compress_ms) << ',' << format_number("%.3f", r.decompress_ms);
    out << ',' << accounting_name(r.accounting) << ',' << r.original_bytes << ',' << r.payload_bytes << ','
        << r.state_bytes << ',' << format_number("%.12g", r.ratio_percent) << ','
        << format_number("%.12g", r.ratio_with_state_percent) << ',' << format_number("%.12g", r.mae) << '\n';
  }
  out << "\n# summary\n";
  out << "algorithm,dataset,runs";
  if (t) out << ",mean_compress_ms,median_compress_ms,mean_decompress_ms,median_decompress_ms";
  out << ",ratio_percent,ratio_with_state_percent,mean_mae\n";
  for (const auto& s : report.summary) {
    out << algorithm_name(s.algorithm) << ',' << s.dataset << ',' << s.runs;
    if (t) {
      out << ',' << format_number("%.3f", s.mean_compress_ms) << ',' << format_number("%.3f", s.median_compress_ms) << ','
          << format_number("%.3f", s.mean_decompress_ms) << ',' << format_number("%.3f", s.median_decompress_ms);
    }
    out << ',' << format_number("%.12g", s.ratio_percent) << ',' << format_number("%.12g", s.ratio_with_state_percent) << ','
        << format_number("%.12g", s.mean_mae) << '\n';
  }
}

void write_report_json(std::ostream& out, const BenchReport& report, ReportOptions options) {
  using nlohmann::json;
  const bool t = options.include_timing;
  json doc;
  doc["note"] = kMaeNote;
  doc["rows"] = json::array();
  for (const auto& r : report.rows) {
    json row{{"algorithm", algorithm_name(r.algorithm)},
             {"dataset", r.dataset},
             {"repetition", r.repetition},
             {"status", r.ok ? std::string("ok") : "failed:" + r.error}};
    if (t) row["threads"] = r.threads;
    if (r.ok) {
      if (t) {
        row["compress_ms"] = r.compress_ms;
        row["decompress_ms"] = r.decompress_ms;
      }
      row["accounting"] = accounting_name(r.accounting);
      row["original_bytes"] = r.original_bytes;
      row["payload_bytes"] = r.payload_bytes;
      row["state_bytes"] = r.state_bytes;
      row["ratio_percent"] = r.ratio_percent;
      row["ratio_with_state_percent"] = r.ratio_with_state_percent;
      row["mae"] = r.mae;
    }
    doc["rows"].push_back(std::move(row));
  }
  doc["summary"] = json::array();
  for (const auto& s : report.summary) {
    json row{{"algorithm", algorithm_name(s.algorithm)},
             {"dataset", s.dataset},
             {"runs", s.runs},
             {"ratio_percent", s.ratio_percent},
             {"ratio_with_state_percent", s.ratio_with_state_percent},
             {"mean_mae", s.mean_mae}};
    if (t) {
      row["mean_compress_ms"] = s.mean_compress_ms;
      row["median_compress_ms"] = s.median_compress_ms;
      row["mean_decompress_ms"] = s.mean_decompress_ms;
      row["median_decompress_ms"] = s.median_decompress_ms;
    }
    doc["summary"].push_back(std::move(row));
  }
  out << doc.dump(2) << '\n';
}

void write_report_gnuplot(std::ostream& out, const BenchReport& report) {
  out << "# dataset algorithm mean_compress_ms mean_decompress_ms ratio_percent mean_mae\n";
  for (const auto& s : report.summary) {
    out << s.dataset << ' ' << algorithm_name(s.algorithm) << ' ' << format_number("%.3f", s.mean_compress_ms) << ' '
        << format_number("%.3f", s.mean_decompress_ms) << ' ' << format_number("%.12g", s.ratio_percent) << ' '
        << format_number("%.12g", s.mean_mae) << '\n';
  }
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw Error(ErrorCode::InvalidArgument, "slope needs at least two (x, y) pairs");
  }
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw Error(ErrorCode::InvalidArgument, "log-log slope needs positive data");
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(y.size());
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  if (sxx == 0.0) throw Error(ErrorCode::InvalidArgument, "slope needs distinct x values");
  return sxy / sxx;
}

ScalingReport run_scaling(const ScalingConfig& config) {
  ScalingReport report;
  const auto time_point = [&](std::string axis, std::size_t count, std::size_t n, std::size_t m) {
    const auto data = generate_uniform(config.seed, count, n);
    ScalingPoint p{std::move(axis), count, n, m, {}, 0.0};
    for (std::size_t rep = 0; rep < config.repeats; ++rep) {
      const auto t0 = Clock::now();
      const auto out = compress_batch(data, m, config.scaling, config.solver, config.threads);
      const auto t1 = Clock::now();
      if (out.size() != count) throw Error(ErrorCode::InvalidArgument, "compression dropped records");
      p.times_ms.push_back(elapsed_ms(t0, t1));
    }
    p.median_ms = median(p.times_ms);
    return p;
  };
  const auto slope_of = [&](const std::string& axis, auto coordinate) {
    std::vector<double> xs;
    std::vector<double> ys;
    for (const auto& p : report.points) {
      if (p.axis != axis) continue;
      xs.push_back(static_cast<double>(coordinate(p)));
      ys.push_back(std::max(p.median_ms, 1e-6));
    }
    return xs.size() >= 2 ? loglog_slope(xs, ys) : 0.0;
  };

  for (auto c : config.counts) report.points.push_back(time_point("count", c, config.fixed_n, config.fixed_m));
  for (auto n : config.dims) report.points.push_back(time_point("n", config.fixed_count, n, config.fixed_m));
  for (auto m : config.target_dims) {
    report.points.push_back(time_point("m", config.fixed_count, config.fixed_n, m));
  }
  report.slope_count = slope_of("count", [](const ScalingPoint& p) { return p.count; });
  report.slope_n = slope_of("n", [](const ScalingPoint& p) { return p.n; });
  report.slope_m = slope_of("m", [](const ScalingPoint& p) { return p.m; });
  return report;
}

void write_scaling_csv(std::ostream& out, const ScalingReport& report) {
  out << "axis,count,n,m,repeats,median_compress_ms,times_ms\n";
  for (const auto& p : report.points) {
    out << p.axis << ',' << p.count << ',' << p.n << ',' << p.m << ',' << p.times_ms.size() << ','
        << format_number("%.3f", p.median_ms) << ',';
    for (std::size_t i = 0; i < p.times_ms.size(); ++i) out << (i ? ";" : "") << format_number("%.3f", p.times_ms[i]);
    out << '\n';
  }
  out << "# slope_count," << format_number("%.4f", report.slope_count) << '\n';
  out << "# slope_n," << format_number("%.4f", report.slope_n) << '\n';
  out << "# slope_m," << format_number("%.4f", report.slope_m) << '\n';
}

}  // namespace ares
