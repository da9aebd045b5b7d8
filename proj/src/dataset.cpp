#include "hydra/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include "hydra/serialize.hpp"

namespace hydra {

namespace {

DatasetFormat detect_format(const std::string& path, DatasetFormat requested) {
  if (requested != DatasetFormat::auto_detect) return requested;
  auto ext = std::filesystem::path(path).extension().string();
  if (ext == ".ts") return DatasetFormat::ts;
  if (ext == ".tsv" || ext == ".txt" || ext == ".csv") return DatasetFormat::tsv;
  throw Error(Errc::parse_error, "cannot infer dataset format from extension '" + ext +
                                     "' (use .ts or .tsv, or pass the format explicitly)");
}

double parse_value(std::string_view tok, std::size_t line_no) {
  double v = 0.0;
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  while (first != last && (*first == ' ' || *first == '\t')) ++first;
  while (last != first && (last[-1] == ' ' || last[-1] == '\t' || last[-1] == '\r')) --last;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last)
    throw Error(Errc::parse_error, "line " + std::to_string(line_no) + ": unparseable value '" +
                                       std::string(tok) + "'");
  if (!std::isfinite(v))
    throw Error(Errc::parse_error,
                "line " + std::to_string(line_no) + ": non-finite value '" + std::string(tok) + "'");
  return v;
}

std::string trim(std::string_view s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

struct RawRow {
  std::vector<double> values;
  std::string label;  // "?" marks unlabeled
  std::size_t line_no;
};

// Numeric-aware sort so "10" orders after "2" for the usual integer labels.
void sort_labels(std::vector<std::string>& labels) {
  bool all_numeric = true;
  std::vector<double> numeric(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const std::string& s = labels[i];
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), numeric[i]);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
      all_numeric = false;
      break;
    }
  }
  if (all_numeric) {
    std::vector<std::size_t> order(labels.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return numeric[a] != numeric[b] ? numeric[a] < numeric[b] : labels[a] < labels[b];
    });
    std::vector<std::string> sorted;
    sorted.reserve(labels.size());
    for (std::size_t i : order) sorted.push_back(labels[i]);
    labels = std::move(sorted);
  } else {
    std::sort(labels.begin(), labels.end());
  }
}

TimeSeriesDataset assemble(std::vector<RawRow> rows, const std::string& name) {
  if (rows.empty()) throw Error(Errc::parse_error, "no data rows in '" + name + "'");

  const std::size_t len = rows.front().values.size();
  for (const RawRow& r : rows) {
    if (r.values.size() != len)
      throw Error(Errc::length_mismatch,
                  "line " + std::to_string(r.line_no) + ": series length " +
                      std::to_string(r.values.size()) + " differs from " + std::to_string(len));
  }
  if (len == 0) throw Error(Errc::parse_error, "empty series in '" + name + "'");

  bool any_labeled = false, any_unlabeled = false;
  for (const RawRow& r : rows) (r.label == "?" ? any_unlabeled : any_labeled) = true;
  if (any_labeled && any_unlabeled)
    throw Error(Errc::parse_error, "'" + name + "' mixes labeled and unlabeled rows");

  TimeSeriesDataset out;
  out.name = name;
  out.length = len;
  out.values.reserve(rows.size() * len);
  for (const RawRow& r : rows)
    out.values.insert(out.values.end(), r.values.begin(), r.values.end());

  if (any_labeled) {
    std::vector<std::string> uniq;
    for (const RawRow& r : rows)
      if (std::find(uniq.begin(), uniq.end(), r.label) == uniq.end()) uniq.push_back(r.label);
    if (uniq.size() < 2)
      throw Error(Errc::degenerate_labels,
                  "'" + name + "' has " + std::to_string(uniq.size()) + " class(es), need >= 2");
    sort_labels(uniq);
    std::map<std::string, int> to_index;
    for (std::size_t i = 0; i < uniq.size(); ++i) to_index[uniq[i]] = static_cast<int>(i);
    out.class_names = std::move(uniq);
    out.labels.reserve(rows.size());
    for (const RawRow& r : rows) out.labels.push_back(to_index.at(r.label));
  }
  return out;
}

std::vector<RawRow> parse_ts(std::istream& in) {
  std::vector<RawRow> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string t = trim(line);
    if (t.empty() || t[0] == '@' || t[0] == '#') continue;
    auto colon = t.rfind(':');
    if (colon == std::string::npos)
      throw Error(Errc::parse_error, "line " + std::to_string(line_no) + ": missing ':label'");
    RawRow row;
    row.line_no = line_no;
    row.label = trim(std::string_view(t).substr(colon + 1));
    if (row.label.empty())
      throw Error(Errc::parse_error, "line " + std::to_string(line_no) + ": empty label");
    std::string_view vals(t.data(), colon);
    std::size_t start = 0;
    while (start <= vals.size()) {
      std::size_t comma = vals.find(',', start);
      std::string_view tok = vals.substr(start, comma == std::string_view::npos
                                                    ? std::string_view::npos
                                                    : comma - start);
      row.values.push_back(parse_value(tok, line_no));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<RawRow> parse_tsv(std::istream& in) {
  std::vector<RawRow> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty() || line[0] == '#') continue;
    RawRow row;
    row.line_no = line_no;
    std::string_view rest(line);
    std::size_t tab = rest.find('\t');
    if (tab == std::string_view::npos)
      throw Error(Errc::parse_error, "line " + std::to_string(line_no) + ": no value fields");
    row.label = trim(rest.substr(0, tab));
    rest = rest.substr(tab + 1);
    std::size_t start = 0;
    while (start <= rest.size()) {
      std::size_t next = rest.find('\t', start);
      std::string_view tok = rest.substr(start, next == std::string_view::npos
                                                    ? std::string_view::npos
                                                    : next - start);
      row.values.push_back(parse_value(tok, line_no));
      if (next == std::string_view::npos) break;
      start = next + 1;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

TimeSeriesDataset load_dataset(const std::string& path, DatasetFormat format) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::io_error, "cannot open '" + path + "'");
  DatasetFormat fmt = detect_format(path, format);
  auto rows = fmt == DatasetFormat::ts ? parse_ts(in) : parse_tsv(in);
  std::string name = std::filesystem::path(path).stem().string();
  return assemble(std::move(rows), name);
}

void save_dataset(const TimeSeriesDataset& data, const std::string& path, DatasetFormat format) {
  DatasetFormat fmt = detect_format(path, format);
  std::ofstream out(path);
  if (!out) throw Error(Errc::io_error, "cannot write '" + path + "'");
  for (std::size_t i = 0; i < data.n(); ++i) {
    auto x = data.series(i);
    std::string label = data.labeled() ? data.class_names[data.labels[i]] : std::string("?");
    if (fmt == DatasetFormat::ts) {
      for (std::size_t t = 0; t < x.size(); ++t) {
        if (t) out << ',';
        out << format_double(x[t]);
      }
      out << ':' << label << '\n';
    } else {
      out << label;
      for (double v : x) out << '\t' << format_double(v);
      out << '\n';
    }
  }
  if (!out) throw Error(Errc::io_error, "write failed for '" + path + "'");
}

void normalize_per_series(TimeSeriesDataset& data) {
  const std::size_t L = data.length;
  for (std::size_t i = 0; i < data.n(); ++i) {
    auto x = data.series(i);
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(L);
    double var = 0.0;
    for (double v : x) var += (v - mean) * (v - mean);
    double sd = std::sqrt(var / static_cast<double>(L));
    if (sd < 1e-8) sd = 1e-8;
    for (double& v : x) v = (v - mean) / sd;
  }
}

std::pair<TimeSeriesDataset, TimeSeriesDataset> stratified_resample(
    const TimeSeriesDataset& train, const TimeSeriesDataset& test, const ResamplePlan& plan) {
  if (train.length != test.length)
    throw Error(Errc::length_mismatch, "train L=" + std::to_string(train.length) +
                                           " vs test L=" + std::to_string(test.length));
  if (!train.labeled() || !test.labeled())
    throw Error(Errc::degenerate_labels, "resampling requires labeled train and test");
  if (train.class_names != test.class_names)
    throw Error(Errc::degenerate_labels, "train and test class sets differ");
  if (plan.train_size != 0 && plan.train_size != train.n())
    throw Error(Errc::config_error, "plan train_size does not match the original split");
  if (plan.test_size != 0 && plan.test_size != test.n())
    throw Error(Errc::config_error, "plan test_size does not match the original split");
  if (plan.resample_id < 0) throw Error(Errc::config_error, "resample_id must be >= 0");

  if (plan.resample_id == 0) return {train, test};

  const std::size_t C = train.n_classes();
  const std::size_t L = train.length;
  const std::size_t n_train = train.n();
  const std::size_t n_pool = n_train + test.n();

  // Pooled row index: train rows first, then test rows.
  auto pooled_series = [&](std::size_t p) {
    return p < n_train ? train.series(p) : test.series(p - n_train);
  };
  auto pooled_label = [&](std::size_t p) {
    return p < n_train ? train.labels[p] : test.labels[p - n_train];
  };

  std::vector<std::size_t> train_count(C, 0);
  for (int c : train.labels) ++train_count[static_cast<std::size_t>(c)];

  // seed_seq keeps the shuffle deterministic and standard-specified.
  std::seed_seq seq{static_cast<std::uint32_t>(plan.seed), static_cast<std::uint32_t>(plan.seed >> 32),
                    static_cast<std::uint32_t>(plan.resample_id)};
  std::mt19937_64 gen(seq);

  std::vector<std::size_t> new_train, new_test;
  new_train.reserve(n_train);
  new_test.reserve(test.n());
  for (std::size_t c = 0; c < C; ++c) {
    std::vector<std::size_t> members;
    for (std::size_t p = 0; p < n_pool; ++p)
      if (static_cast<std::size_t>(pooled_label(p)) == c) members.push_back(p);
    std::shuffle(members.begin(), members.end(), gen);
    for (std::size_t i = 0; i < members.size(); ++i)
      (i < train_count[c] ? new_train : new_test).push_back(members[i]);
  }

  auto build = [&](const std::vector<std::size_t>& rows, const TimeSeriesDataset& like) {
    TimeSeriesDataset out;
    out.name = like.name;
    out.length = L;
    out.class_names = train.class_names;
    out.values.reserve(rows.size() * L);
    out.labels.reserve(rows.size());
    for (std::size_t p : rows) {
      auto x = pooled_series(p);
      out.values.insert(out.values.end(), x.begin(), x.end());
      out.labels.push_back(pooled_label(p));
    }
    return out;
  };
  return {build(new_train, train), build(new_test, test)};
}

}  // namespace hydra
