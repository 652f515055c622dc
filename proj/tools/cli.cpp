#include "cli.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "ares/codec.hpp"
#include "ares/error.hpp"
#include "ares/experiment.hpp"
#include "ares/fit.hpp"
#include "ares/homomorphic.hpp"
#include "ares/ingest.hpp"
#include "ares/metric.hpp"

namespace ares::cli {
namespace {

using Clock = std::chrono::steady_clock;

enum class InputFormat { Csv, Sparse };
enum class OutputFormat { Csv, Json };
enum class NormalizeFlag { None, Feature, Global };

const std::map<std::string, Scaling> kScalingNames{{"raw", Scaling::Raw}, {"unit", Scaling::Unit}};
const std::map<std::string, Solver> kSolverNames{{"qr", Solver::QR}, {"normal", Solver::NormalEq}};
const std::map<std::string, InputFormat> kInputNames{{"csv", InputFormat::Csv}, {"sparse", InputFormat::Sparse}};
const std::map<std::string, OutputFormat> kOutputNames{{"csv", OutputFormat::Csv}, {"json", OutputFormat::Json}};
const std::map<std::string, Metric> kMetricNames{{"l2", Metric::L2}, {"l1", Metric::L1}, {"linf", Metric::Linf}};
const std::map<std::string, MetricDomain> kDomainNames{{"fit", MetricDomain::Fit}, {"index", MetricDomain::Index}};
const std::map<std::string, Normalization> kNormalizationNames{
    {"none", Normalization::None}, {"feature", Normalization::PerFeature}, {"global", Normalization::Global}};
const std::map<std::string, BoundMode::Kind> kBoundNames{{"worst", BoundMode::Kind::WorstCase},
                                                         {"rms", BoundMode::Kind::IndependentRMS},
                                                         {"correlated", BoundMode::Kind::Correlated}};
const std::map<std::string, SizeAccounting> kAccountingNames{{"dense", SizeAccounting::Dense},
                                                             {"serialized", SizeAccounting::Serialized}};

template <typename T>
CLI::CheckedTransformer choices(const std::map<std::string, T>& names) {
  return CLI::CheckedTransformer(names, CLI::ignore_case);
}

std::string number(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

double elapsed_ms(Clock::time_point a, Clock::time_point b) {
  return std::chrono::duration<double, std::milli>(b - a).count();
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot open " + path + " for writing");
  return out;
}

// --- compress ---------------------------------------------------------------

struct CompressOptions {
  std::string input;
  std::string output;
  InputFormat format = InputFormat::Csv;
  std::size_t target_n = 0;
  std::size_t target_dim = 10;
  Scaling scaling = Scaling::Unit;
  Solver solver = Solver::QR;
  unsigned threads = 0;
  Normalization normalize = Normalization::None;
  bool no_deltas = false;
};

int cmd_compress(const CompressOptions& o, std::ostream& out) {
  LoadedVectors loaded;
  if (o.format == InputFormat::Sparse) {
    if (o.target_n == 0) throw Error(ErrorCode::InvalidArgument, "--target-n is required for sparse input");
    loaded = load_sparse(o.input, o.target_n);
  } else {
    loaded = load_csv(o.input);
    if (o.target_n != 0) {
      for (auto& v : loaded.records) resize_to(v, o.target_n);
    }
  }
  normalize(loaded.records, o.normalize);

  const auto t0 = Clock::now();
  const auto records = compress_batch(loaded.records, o.target_dim, o.scaling, o.solver, o.threads);
  const auto t1 = Clock::now();

  ArchiveHeader header = header_for(records, !o.no_deltas);
  if (records.empty()) {
    header.n = static_cast<std::uint32_t>(o.target_n);
    header.m = static_cast<std::uint16_t>(std::min(o.target_dim, o.target_n));
  }
  const auto archive_bytes = write_archive(o.output, records, header);
  const std::uint64_t n = header.n;
  const std::uint64_t original = 8 * records.size() * n;
  const std::uint64_t payload = 8 * records.size() * header.m;

  out << "records: " << records.size() << '\n';
  out << "n: " << n << '\n';
  out << "m: " << header.m << '\n';
  out << "original_bytes: " << original << '\n';
  out << "payload_bytes: " << payload << '\n';
  out << "archive_bytes: " << archive_bytes << '\n';
  if (payload > 0) {
    const double payload_ratio = compression_ratio(original, payload);
    const double archive_ratio = compression_ratio(original, archive_bytes);
    out << "payload_ratio: " << number("%.2f", payload_ratio / 100.0) << "x (" << number("%.2f", payload_ratio)
        << "%)\n";
    out << "archive_ratio: " << number("%.2f", archive_ratio / 100.0) << "x (" << number("%.2f", archive_ratio)
        << "%)\n";
  }
  out << "compress_ms: " << number("%.3f", elapsed_ms(t0, t1)) << '\n';
  return kExitOk;
}

// --- decompress -------------------------------------------------------------

int cmd_decompress(const std::string& input, const std::string& output, unsigned threads, std::ostream& out) {
  const auto archive = read_archive(input);
  const auto t0 = Clock::now();
  const auto vectors = decompress_batch(archive.records, threads);
  const auto t1 = Clock::now();
  write_csv(output, vectors);
  out << "records: " << vectors.size() << '\n';
  out << "n: " << archive.header.n << '\n';
  out << "decompress_ms: " << number("%.3f", elapsed_ms(t0, t1)) << '\n';
  return kExitOk;
}

// --- distance ---------------------------------------------------------------

const PolyRecord& find_record(const Archive& archive, std::uint64_t id) {
  for (const auto& r : archive.records) {
    if (r.id == id) return r;
  }
  throw Error(ErrorCode::UnknownId, "no record with id " + std::to_string(id));
}

int cmd_distance(const std::string& path, std::uint64_t id1, std::uint64_t id2, Metric metric,
                 MetricDomain which, std::ostream& out) {
  const auto archive = read_archive(path);
  const auto& p = find_record(archive, id1);
  const auto& q = find_record(archive, id2);
  out << number("%.12g", distance(metric, p, q, metric_domain(p, which))) << '\n';
  return kExitOk;
}

// --- combine ----------------------------------------------------------------

struct CombineOptions {
  std::string archive;
  std::string manifest;
  BoundMode::Kind mode = BoundMode::Kind::WorstCase;
  std::string covariance;
  std::optional<double> scale_after;
  std::string output;
  std::optional<std::uint64_t> result_id;
};

// Manifest lines: "<coefficient> <record-id>"; '#' starts a comment.
std::vector<std::pair<double, std::uint64_t>> read_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  std::vector<std::pair<double, std::uint64_t>> terms;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream fields(line);
    double c = 0.0;
    std::uint64_t id = 0;
    if (!(fields >> c)) {
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      throw Error(ErrorCode::ParseError, path + " line " + std::to_string(line_no) + ": bad coefficient");
    }
    std::string extra;
    if (!(fields >> id) || (fields >> extra)) {
      throw Error(ErrorCode::ParseError, path + " line " + std::to_string(line_no) + ": expected '<coefficient> <id>'");
    }
    terms.emplace_back(c, id);
  }
  return terms;
}

Eigen::MatrixXd read_matrix_csv(const std::string& path) {
  const auto rows = load_csv(std::filesystem::path(path)).records;
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()),
                      static_cast<Eigen::Index>(rows.empty() ? 0 : rows.front().values.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].values.size(); ++j) {
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i].values[j];
    }
  }
  return out;
}

int cmd_combine(const CombineOptions& o, std::ostream& out) {
  const auto archive = read_archive(o.archive);
  const auto manifest = read_manifest(o.manifest);
  std::vector<Term> terms;
  terms.reserve(manifest.size());
  for (const auto& [c, id] : manifest) terms.push_back({c, &find_record(archive, id)});

  BoundMode mode{o.mode, {}};
  if (o.mode == BoundMode::Kind::Correlated) {
    if (o.covariance.empty()) throw Error(ErrorCode::InvalidArgument, "--covariance is required for correlated mode");
    mode.covariance = read_matrix_csv(o.covariance);
  }
  auto result = linear_combination(terms, mode);
  if (o.scale_after) result = scale_after(std::move(result), *o.scale_after);
  if (o.result_id) result.first.id = *o.result_id;

  const auto mode_name = [&] {
    for (const auto& [name, kind] : kBoundNames) {
      if (kind == o.mode) return name;
    }
    return std::string("unknown");
  }();
  out << "terms: " << result.second.terms << '\n';
  out << "mode: " << mode_name << '\n';
  out << "delta_bound: " << number("%.12g", result.second.delta_bound) << '\n';
  out << "record_delta: " << number("%.12g", result.first.delta) << '\n';
  out << "coeffs: ";
  for (std::size_t i = 0; i < result.first.coeffs.size(); ++i) {
    out << (i ? "," : "") << number("%.17g", result.first.coeffs[i]);
  }
  out << '\n';
  if (!o.output.empty()) {
    const std::vector<PolyRecord> single{result.first};
    write_archive(o.output, single, header_for(single, true));
  }
  return kExitOk;
}

// --- bench ------------------------------------------------------------------

struct BenchOptions {
  BenchConfig config;
  bool synthetic = false;
  std::size_t samples = 1000;
  std::size_t dim = 1000;
  std::vector<std::string> csv;
  std::vector<std::string> sparse;
  std::vector<std::string> algorithms;
  std::optional<SizeAccounting> accounting;
  OutputFormat format = OutputFormat::Csv;
  std::string output;
  std::string gnuplot;
  bool no_timing = false;
};

DatasetSource file_source(const std::string& spec, DatasetSource::Kind kind) {
  DatasetSource s;
  s.kind = kind;
  const auto eq = spec.find('=');
  if (eq == std::string::npos) {
    s.path = spec;
    s.name = s.path.stem().string();
  } else {
    s.name = spec.substr(0, eq);
    s.path = spec.substr(eq + 1);
  }
  return s;
}

int cmd_bench(BenchOptions o, std::ostream& out) {
  auto& config = o.config;
  config.accounting = o.accounting;
  config.algorithms.clear();
  for (const auto& name : o.algorithms) {
    const auto a = parse_algorithm(name);
    if (a == Algorithm::Autoencoder) {
      throw Error(ErrorCode::InvalidArgument, "autoencoder is a reserved column for external results");
    }
    config.algorithms.push_back(a);
  }
  if (o.synthetic || (o.csv.empty() && o.sparse.empty())) {
    config.datasets.push_back({"random", DatasetSource::Kind::SyntheticUniform, {}, o.samples, o.dim});
  }
  for (const auto& spec : o.csv) config.datasets.push_back(file_source(spec, DatasetSource::Kind::DenseCsv));
  for (const auto& spec : o.sparse) config.datasets.push_back(file_source(spec, DatasetSource::Kind::SparseFile));

  const auto report = run_bench(config);
  const ReportOptions options{!o.no_timing};
  std::ofstream file;
  std::ostream* sink = &out;
  if (!o.output.empty()) {
    file = open_output(o.output);
    sink = &file;
  }
  if (o.format == OutputFormat::Json) {
    write_report_json(*sink, report, options);
  } else {
    write_report_csv(*sink, report, options);
  }
  if (!o.gnuplot.empty()) {
    auto plot = open_output(o.gnuplot);
    write_report_gnuplot(plot, report);
  }
  for (const auto& row : report.rows) {
    if (!row.ok) return 2;
  }
  return kExitOk;
}

// --- scaling ----------------------------------------------------------------

int cmd_scaling(const ScalingConfig& config, OutputFormat format, const std::string& output, std::ostream& out) {
  const auto report = run_scaling(config);
  std::ofstream file;
  std::ostream* sink = &out;
  if (!output.empty()) {
    file = open_output(output);
    sink = &file;
  }
  if (format == OutputFormat::Json) {
    nlohmann::json doc;
    doc["slope_count"] = report.slope_count;
    doc["slope_n"] = report.slope_n;
    doc["slope_m"] = report.slope_m;
    doc["points"] = nlohmann::json::array();
    for (const auto& p : report.points) {
      doc["points"].push_back({{"axis", p.axis},
                               {"count", p.count},
                               {"n", p.n},
                               {"m", p.m},
                               {"times_ms", p.times_ms},
                               {"median_compress_ms", p.median_ms}});
    }
    *sink << doc.dump(2) << '\n';
  } else {
    write_scaling_csv(*sink, report);
  }
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"ares: stateless polynomial compression of high-dimensional vectors"};
  app.name("ares");
  app.require_subcommand(1);

  CompressOptions compress_opts;
  auto* compress = app.add_subcommand("compress", "Fit every vector and write a .ares archive");
  compress->add_option("--input,-i", compress_opts.input, "Input vectors (CSV or sparse text)")->required();
  compress->add_option("--output,-o", compress_opts.output, "Archive to write")->required();
  compress->add_option("--input-format", compress_opts.format, "csv or sparse")->transform(choices(kInputNames));
  compress->add_option("--target-n", compress_opts.target_n, "Pad/truncate vectors to this length");
  compress->add_option("--target-dim,-m", compress_opts.target_dim, "Coefficients per vector")->capture_default_str();
  compress->add_option("--scaling", compress_opts.scaling, "Sample points: raw (k) or unit (k/n)")
      ->transform(choices(kScalingNames));
  compress->add_option("--solver", compress_opts.solver, "qr or normal")->transform(choices(kSolverNames));
  compress->add_option("--threads", compress_opts.threads, "Worker threads (0 = all cores)");
  compress->add_option("--normalize", compress_opts.normalize, "none, feature or global min-max")
      ->transform(choices(kNormalizationNames));
  compress->add_flag("--no-deltas", compress_opts.no_deltas, "Omit per-record residuals from the archive");

  std::string dec_input;
  std::string dec_output;
  unsigned dec_threads = 0;
  auto* decompress = app.add_subcommand("decompress", "Reconstruct an archive to CSV");
  decompress->add_option("--input,-i", dec_input, "Archive to read")->required();
  decompress->add_option("--output,-o", dec_output, "CSV to write")->required();
  decompress->add_option("--threads", dec_threads, "Worker threads (0 = all cores)");

  std::string dist_archive;
  std::uint64_t id1 = 0;
  std::uint64_t id2 = 0;
  Metric metric = Metric::L2;
  MetricDomain metric_dom = MetricDomain::Fit;
  auto* dist = app.add_subcommand("distance", "Distance between two archived records");
  dist->add_option("--archive,-a", dist_archive, "Archive to read")->required();
  dist->add_option("--id1", id1, "First record id")->required();
  dist->add_option("--id2", id2, "Second record id")->required();
  dist->add_option("--metric", metric, "l2, l1 or linf")->transform(choices(kMetricNames));
  dist->add_option("--metric-domain", metric_dom, "fit ([x_1, x_n]) or index ([1, m])")
      ->transform(choices(kDomainNames));

  CombineOptions combine_opts;
  auto* combine = app.add_subcommand("combine", "Linear combination of archived records with an error bound");
  combine->add_option("--archive,-a", combine_opts.archive, "Archive to read")->required();
  combine->add_option("--manifest", combine_opts.manifest, "Lines of '<coefficient> <record-id>'")->required();
  combine->add_option("--bound-mode", combine_opts.mode, "worst, rms or correlated")->transform(choices(kBoundNames));
  combine->add_option("--covariance", combine_opts.covariance, "k x k error covariance as CSV (correlated mode)");
  combine->add_option("--scale-after", combine_opts.scale_after, "Final scalar applied to the combination");
  combine->add_option("--output,-o", combine_opts.output, "Write the result as a one-record archive");
  combine->add_option("--result-id", combine_opts.result_id, "Id of the result record");

  BenchOptions bench_opts;
  bench_opts.algorithms = {"ares", "pca", "nmf"};
  auto& bc = bench_opts.config;
  auto* bench = app.add_subcommand("bench", "Run the compression benchmark matrix");
  bench->add_flag("--synthetic", bench_opts.synthetic, "Include the seeded uniform dataset (default when no files)");
  bench->add_option("--samples", bench_opts.samples, "Synthetic vector count")->capture_default_str();
  bench->add_option("--dim", bench_opts.dim, "Synthetic dimension")->capture_default_str();
  bench->add_option("--csv", bench_opts.csv, "Dense CSV dataset as NAME=PATH");
  bench->add_option("--sparse", bench_opts.sparse, "Sparse index:value dataset as NAME=PATH");
  bench->add_option("--algorithms", bench_opts.algorithms, "Subset of ares,pca,nmf")->delimiter(',');
  bench->add_option("--target-dim,-m", bc.target_dim, "Reduced dimension")->capture_default_str();
  bench->add_option("--target-n", bc.target_n, "Dimension file datasets are padded/truncated to")
      ->capture_default_str();
  bench->add_option("--max-samples", bc.max_count, "Subsample file datasets to at most this many vectors")
      ->capture_default_str();
  bench->add_option("--repeats", bc.repeats, "Repetitions per cell")->capture_default_str()->check(CLI::PositiveNumber);
  bench->add_option("--threads", bc.threads, "Worker threads (0 = all cores)");
  bench->add_option("--seed", bc.seed, "Seed for data generation, subsampling and NMF init")->capture_default_str();
  bench->add_option("--scaling", bc.scaling, "raw or unit")->transform(choices(kScalingNames));
  bench->add_option("--solver", bc.solver, "qr or normal")->transform(choices(kSolverNames));
  bench->add_option("--nmf-iters", bc.nmf_iters, "Multiplicative-update iterations")->capture_default_str();
  bench->add_option("--normalization", bc.normalization, "feature, global or none")
      ->transform(choices(kNormalizationNames));
  bench->add_option("--accounting", bench_opts.accounting, "Original-size accounting: dense or serialized")
      ->transform(choices(kAccountingNames));
  bench->add_option("--format", bench_opts.format, "csv or json")->transform(choices(kOutputNames));
  bench->add_option("--output,-o", bench_opts.output, "Write the report here instead of stdout");
  bench->add_option("--gnuplot", bench_opts.gnuplot, "Also write a gnuplot data file");
  bench->add_flag("--no-timing", bench_opts.no_timing, "Leave timing and thread columns out of the report");

  ScalingConfig scaling_cfg;
  OutputFormat scaling_format = OutputFormat::Csv;
  std::string scaling_output;
  auto* scaling = app.add_subcommand("scaling", "Measure compression time against N, n and m");
  scaling->add_option("--count-grid", scaling_cfg.counts, "Vector counts")->delimiter(',');
  scaling->add_option("--n-grid", scaling_cfg.dims, "Original dimensions")->delimiter(',');
  scaling->add_option("--m-grid", scaling_cfg.target_dims, "Target dimensions")->delimiter(',');
  scaling->add_option("--fixed-n", scaling_cfg.fixed_n, "n used on the count and m axes")->capture_default_str();
  scaling->add_option("--fixed-count", scaling_cfg.fixed_count, "N used on the n and m axes")->capture_default_str();
  scaling->add_option("--target-dim,-m", scaling_cfg.fixed_m, "m used on the count and n axes")->capture_default_str();
  scaling->add_option("--repeats", scaling_cfg.repeats, "Timings per point (median taken)")->capture_default_str();
  scaling->add_option("--threads", scaling_cfg.threads, "Worker threads (0 = all cores)")->capture_default_str();
  scaling->add_option("--seed", scaling_cfg.seed, "Data seed")->capture_default_str();
  scaling->add_option("--scaling", scaling_cfg.scaling, "raw or unit")->transform(choices(kScalingNames));
  scaling->add_option("--solver", scaling_cfg.solver, "qr or normal")->transform(choices(kSolverNames));
  scaling->add_option("--format", scaling_format, "csv or json")->transform(choices(kOutputNames));
  scaling->add_option("--output,-o", scaling_output, "Write the report here instead of stdout");

  std::vector<std::string> argv_storage{"ares"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_storage) argv.push_back(a.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*compress) return cmd_compress(compress_opts, out);
    if (*decompress) return cmd_decompress(dec_input, dec_output, dec_threads, out);
    if (*dist) return cmd_distance(dist_archive, id1, id2, metric, metric_dom, out);
    if (*combine) return cmd_combine(combine_opts, out);
    if (*bench) return cmd_bench(std::move(bench_opts), out);
    if (*scaling) return cmd_scaling(scaling_cfg, scaling_format, scaling_output, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_status(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return kExitUsage;
}

}  // namespace ares::cli
