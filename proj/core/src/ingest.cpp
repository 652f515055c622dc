#include "ares/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <numeric>
#include <string_view>

#include "ares/error.hpp"

namespace ares {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void parse_error(std::size_t line, const std::string& what) {
  throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": " + what);
}

double parse_double(std::string_view token, std::size_t line) {
  double value = 0.0;
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size() || !std::isfinite(value)) {
    parse_error(line, "bad number '" + std::string(token) + "'");
  }
  return value;
}

std::ifstream open_text(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  return in;
}

}  // namespace

std::uint64_t bounded_uniform(std::mt19937_64& gen, std::uint64_t bound) {
  if (bound <= 1) return 0;
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do {
    x = gen();
  } while (x >= limit);
  return x % bound;
}

std::vector<VectorRecord> generate_uniform(std::uint64_t seed, std::size_t count, std::size_t n) {
  std::mt19937_64 gen(seed);
  std::vector<VectorRecord> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    out[i].id = i;
    out[i].values.resize(n);
    for (auto& v : out[i].values) v = unit_uniform(gen);
  }
  return out;
}

LoadedVectors load_sparse(std::istream& in, std::size_t target_n) {
  LoadedVectors out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    VectorRecord rec;
    rec.id = line_no - 1;
    rec.values.assign(target_n, 0.0);
    std::string_view rest = trim(line);
    bool first = true;
    while (!rest.empty()) {
      const auto end = rest.find_first_of(" \t");
      const auto token = rest.substr(0, end);
      rest = end == std::string_view::npos ? std::string_view{} : trim(rest.substr(end));
      const auto colon = token.find(':');
      if (colon == std::string_view::npos) {
        if (!first) parse_error(line_no, "expected index:value, got '" + std::string(token) + "'");
        first = false;
        continue;  // label
      }
      first = false;
      std::size_t index = 0;
      const auto idx = token.substr(0, colon);
      const auto [ptr, ec] = std::from_chars(idx.data(), idx.data() + idx.size(), index);
      if (ec != std::errc() || ptr != idx.data() + idx.size() || index == 0) {
        parse_error(line_no, "bad 1-based index '" + std::string(idx) + "'");
      }
      const double value = parse_double(token.substr(colon + 1), line_no);
      if (index > target_n) {
        ++out.dropped_entries;
        continue;
      }
      rec.values[index - 1] = value;
    }
    out.records.push_back(std::move(rec));
    out.source_bytes.push_back(line.size() + 1);
  }
  if (in.bad()) throw Error(ErrorCode::IoError, "read failed after line " + std::to_string(line_no));
  return out;
}

LoadedVectors load_sparse(const std::filesystem::path& path, std::size_t target_n) {
  auto in = open_text(path);
  return load_sparse(in, target_n);
}

LoadedVectors load_csv(std::istream& in) {
  LoadedVectors out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto body = trim(line);
    if (body.empty()) continue;
    VectorRecord rec;
    rec.id = out.records.size();
    std::string_view rest = body;
    while (true) {
      const auto comma = rest.find(',');
      rec.values.push_back(parse_double(trim(rest.substr(0, comma)), line_no));
      if (comma == std::string_view::npos) break;
      rest = rest.substr(comma + 1);
    }
    if (!out.records.empty() && rec.values.size() != out.records.front().values.size()) {
      throw Error(ErrorCode::DimensionMismatch,
                  "line " + std::to_string(line_no) + " has " + std::to_string(rec.values.size()) +
                      " fields, expected " + std::to_string(out.records.front().values.size()));
    }
    out.records.push_back(std::move(rec));
    out.source_bytes.push_back(line.size() + 1);
  }
  if (in.bad()) throw Error(ErrorCode::IoError, "read failed after line " + std::to_string(line_no));
  return out;
}

LoadedVectors load_csv(const std::filesystem::path& path) {
  auto in = open_text(path);
  return load_csv(in);
}

std::vector<std::size_t> subsample_indices(std::size_t count, std::size_t max_count,
                                           std::uint64_t seed) {
  std::vector<std::size_t> idx(count);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  if (count <= max_count) return idx;
  // Partial Fisher-Yates: the first max_count slots become the sample.
  std::mt19937_64 gen(seed);
  for (std::size_t i = 0; i < max_count; ++i) {
    const auto j = i + static_cast<std::size_t>(bounded_uniform(gen, count - i));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(max_count);
  std::sort(idx.begin(), idx.end());
  return idx;
}

void resize_to(VectorRecord& v, std::size_t target_n) { v.values.resize(target_n, 0.0); }

void normalize(std::span<VectorRecord> records, Normalization normalization) {
  if (records.empty() || normalization == Normalization::None) return;
  const std::size_t n = records.front().values.size();
  if (normalization == Normalization::Global) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& r : records) {
      for (double v : r.values) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
    }
    const double span = hi - lo;
    for (auto& r : records) {
      for (auto& v : r.values) v = span > 0.0 ? (v - lo) / span : 0.0;
    }
    return;
  }
  std::vector<double> lo(n, std::numeric_limits<double>::infinity());
  std::vector<double> hi(n, -std::numeric_limits<double>::infinity());
  for (const auto& r : records) {
    for (std::size_t k = 0; k < n; ++k) {
      lo[k] = std::min(lo[k], r.values[k]);
      hi[k] = std::max(hi[k], r.values[k]);
    }
  }
  for (auto& r : records) {
    for (std::size_t k = 0; k < n; ++k) {
      const double span = hi[k] - lo[k];
      r.values[k] = span > 0.0 ? (r.values[k] - lo[k]) / span : 0.0;
    }
  }
}

std::vector<VectorRecord> condition(std::vector<VectorRecord> records, std::size_t target_n,
                                    std::uint64_t subsample_seed, std::size_t max_count,
                                    Normalization normalization) {
  if (records.size() > max_count) {
    const auto keep = subsample_indices(records.size(), max_count, subsample_seed);
    std::vector<VectorRecord> picked;
    picked.reserve(keep.size());
    for (auto i : keep) picked.push_back(std::move(records[i]));
    records = std::move(picked);
  }
  for (auto& r : records) resize_to(r, target_n);
  normalize(records, normalization);
  return records;
}

}  // namespace ares
