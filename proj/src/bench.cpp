#include "hydra/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "hydra/dataset.hpp"
#include "hydra/model.hpp"

namespace hydra {

namespace {

namespace fs = std::filesystem;

std::optional<std::string> find_split(const fs::path& dir, const std::string& base,
                                      const char* split) {
  for (const char* ext : {".ts", ".tsv"}) {
    fs::path p = dir / (base + "_" + split + ext);
    if (fs::exists(p)) return p.string();
  }
  return std::nullopt;
}

}  // namespace

std::vector<DatasetSpec> read_dataset_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::io_error, "cannot open dataset list '" + path + "'");
  std::vector<DatasetSpec> specs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (line.empty()) continue;
    DatasetSpec spec;
    if (line.find('\t') != std::string::npos) {
      std::istringstream ss(line);
      std::string name;
      if (!std::getline(ss, spec.train_path, '\t') || !std::getline(ss, spec.test_path, '\t'))
        throw Error(Errc::parse_error,
                    "dataset list line " + std::to_string(line_no) + ": expected train\ttest");
      if (std::getline(ss, name, '\t')) spec.name = name;
      if (spec.name.empty())
        spec.name = fs::path(spec.train_path).stem().string();
    } else {
      fs::path dir(line);
      const std::string base = dir.filename().string();
      auto train = find_split(dir, base, "TRAIN");
      auto test = find_split(dir, base, "TEST");
      if (!train || !test)
        throw Error(Errc::io_error, "dataset list line " + std::to_string(line_no) + ": no " +
                                        base + "_TRAIN/_TEST .ts/.tsv under '" + line + "'");
      spec.name = base;
      spec.train_path = *train;
      spec.test_path = *test;
    }
    specs.push_back(std::move(spec));
  }
  return specs;
}

namespace {

std::string result_key(const std::string& dataset, int resample, const std::string& variant) {
  return dataset + "\x1f" + std::to_string(resample) + "\x1f" + variant;
}

struct CsvAppender {
  std::ofstream out;
  std::mutex mu;

  CsvAppender(const std::string& path, bool fresh, const RunManifest& manifest) {
    if (path.empty()) return;
    if (fresh) {
      out.open(path);
      if (!out) throw Error(Errc::io_error, "cannot write '" + path + "'");
      out << "# schema: hydra-results v1\n";
      out << "# tool: " << manifest.tool << " " << manifest.version << "\n";
      out << "# command: " << manifest.command << "\n";
      for (const auto& [k, v] : manifest.params) out << "# " << k << ": " << v << "\n";
      out << "dataset,resample,variant,accuracy,transform_s,train_s,test_s\n";
    } else {
      out.open(path, std::ios::app);
      if (!out) throw Error(Errc::io_error, "cannot append to '" + path + "'");
    }
  }

  void append(const ExperimentResult& r) {
    if (!out.is_open()) return;
    std::scoped_lock lock(mu);
    out << r.dataset << ',' << r.resample_id << ',' << r.variant << ','
        << format_double(r.accuracy) << ',' << format_double(r.transform_seconds) << ','
        << format_double(r.train_seconds) << ',' << format_double(r.test_seconds) << '\n';
    out.flush();
  }
};

struct Job {
  std::size_t dataset_idx;
  int resample_id;  // resample for benchmark runs, run/seed index for sensitivity
  std::size_t variant_idx;
};

ExperimentResult run_one(const DatasetSpec& spec, const TimeSeriesDataset& train0,
                         const TimeSeriesDataset& test0, const Variant& variant,
                         int resample_id, bool reseed_bank_per_resample,
                         const RunOptions& options) {
  HydraConfig config = variant.config;
  TimeSeriesDataset train = train0, test = test0;
  if (reseed_bank_per_resample) {
    // Sensitivity protocol: original split, bank seed = run index.
    config.seed = static_cast<std::uint64_t>(resample_id);
  } else {
    // Each resample draws its own kernels so the averaged accuracy covers
    // both split and transform randomness; resample 0 keeps the configured
    // seed and the original split, matching a direct fit/predict.
    config.seed += static_cast<std::uint64_t>(resample_id);
    if (resample_id != 0) {
      ResamplePlan plan{options.resample_seed, resample_id, 0, 0};
      std::tie(train, test) = stratified_resample(train0, test0, plan);
    }
  }

  FitOptions fit_options;
  fit_options.classifier = options.classifier;
  fit_options.normalize_input = options.normalize_input;
  fit_options.threads = 1;  // parallelism lives at the job level
  FitReport report;
  Model model = fit_model(train, config, fit_options, &report);

  const auto t0 = std::chrono::steady_clock::now();
  if (model.normalize_input) normalize_per_series(test);
  FeatureMatrix test_features = transform(test, model.bank, config, 1);
  const auto t1 = std::chrono::steady_clock::now();
  auto predicted = model.is_ridge()
                       ? predict(std::get<RidgeModel>(model.classifier), test_features)
                       : predict(std::get<LogisticModel>(model.classifier), test_features);
  const auto t2 = std::chrono::steady_clock::now();

  ExperimentResult r;
  r.dataset = spec.name;
  r.resample_id = resample_id;
  r.variant = variant.name;
  r.accuracy = accuracy(predicted, test.labels);
  r.transform_seconds = report.transform_seconds + std::chrono::duration<double>(t1 - t0).count();
  r.train_seconds = report.train_seconds;
  r.test_seconds = std::chrono::duration<double>(t2 - t1).count();
  return r;
}

RunOutcome run_jobs(const std::vector<DatasetSpec>& datasets,
                    const std::vector<Variant>& variants, int per_dataset_runs,
                    bool reseed_bank_per_resample, const RunOptions& options) {
  if (per_dataset_runs < 1) throw Error(Errc::config_error, "need at least one run");
  for (const Variant& v : variants) v.config.validate();

  RunOutcome outcome;
  std::set<std::string> done;
  bool resuming = false;
  if (!options.results_csv.empty() && fs::exists(options.results_csv)) {
    outcome.results = read_results_csv(options.results_csv);
    for (const ExperimentResult& r : outcome.results)
      done.insert(result_key(r.dataset, r.resample_id, r.variant));
    resuming = !outcome.results.empty();
  }
  CsvAppender appender(options.results_csv, !resuming, options.manifest);

  // Load each dataset once; jobs share the immutable originals.
  std::vector<TimeSeriesDataset> trains(datasets.size()), tests(datasets.size());
  std::vector<std::string> load_errors(datasets.size());
  for (std::size_t i = 0; i < datasets.size(); ++i) {
    try {
      trains[i] = load_dataset(datasets[i].train_path);
      tests[i] = load_dataset(datasets[i].test_path);
    } catch (const Error& e) {
      load_errors[i] = e.what();
    }
  }

  std::vector<Job> jobs;
  for (std::size_t d = 0; d < datasets.size(); ++d)
    for (std::size_t v = 0; v < variants.size(); ++v)
      for (int r = 0; r < per_dataset_runs; ++r)
        if (!done.count(result_key(datasets[d].name, r, variants[v].name)))
          jobs.push_back({d, r, v});

  std::mutex outcome_mu;
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t j = next.fetch_add(1);
      if (j >= jobs.size()) break;
      const Job& job = jobs[j];
      const DatasetSpec& spec = datasets[job.dataset_idx];
      if (!load_errors[job.dataset_idx].empty()) {
        std::scoped_lock lock(outcome_mu);
        outcome.failures.push_back({spec.name, job.resample_id, variants[job.variant_idx].name,
                                    load_errors[job.dataset_idx]});
        continue;
      }
      try {
        ExperimentResult r =
            run_one(spec, trains[job.dataset_idx], tests[job.dataset_idx],
                    variants[job.variant_idx], job.resample_id, reseed_bank_per_resample,
                    options);
        appender.append(r);
        std::scoped_lock lock(outcome_mu);
        outcome.results.push_back(std::move(r));
      } catch (const Error& e) {
        std::scoped_lock lock(outcome_mu);
        outcome.failures.push_back(
            {spec.name, job.resample_id, variants[job.variant_idx].name, e.what()});
      }
    }
  };

  const int workers = std::max(1, options.threads);
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  for (const ExperimentFailure& f : outcome.failures)
    std::cerr << "warning: skipped " << f.dataset << "/" << f.resample_id << "/" << f.variant
              << ": " << f.reason << "\n";
  return outcome;
}

}  // namespace

RunOutcome run_experiment(const std::vector<DatasetSpec>& datasets,
                          const std::vector<Variant>& variants, int resamples,
                          const RunOptions& options) {
  return run_jobs(datasets, variants, resamples, false, options);
}

RunOutcome run_sensitivity(const std::vector<DatasetSpec>& datasets,
                           const std::vector<Variant>& variants, int runs,
                           const RunOptions& options) {
  return run_jobs(datasets, variants, runs, true, options);
}

std::vector<Variant> kg_lattice(const HydraConfig& base) {
  std::vector<Variant> out;
  for (int k : {1, 2, 4, 8, 16}) {
    for (int total : {16, 64, 256, 512}) {
      if (total % k != 0) continue;
      HydraConfig c = base;
      c.k = k;
      c.g = total / k;
      try {
        c.validate();
      } catch (const Error& e) {
        std::cerr << "warning: skipping lattice cell k=" << k << " g=" << c.g << ": "
                  << e.what() << "\n";
        continue;
      }
      out.push_back({c.variant_name(), c});
    }
  }
  return out;
}

std::vector<Variant> counting_variants(const HydraConfig& base) {
  // Max-only and max+min, with soft, hard, and combined counting. The
  // combined max+min allocation is the default one: soft max, hard min.
  std::vector<Variant> out;
  auto add = [&](CountMode mx, CountMode mn) {
    HydraConfig c = base;
    c.count_max = mx;
    c.count_min = mn;
    out.push_back({c.variant_name(), c});
  };
  add(CountMode::soft, CountMode::off);
  add(CountMode::hard, CountMode::off);
  add(CountMode::both, CountMode::off);
  add(CountMode::soft, CountMode::soft);
  add(CountMode::hard, CountMode::hard);
  add(CountMode::soft, CountMode::hard);
  return out;
}

std::vector<Variant> clip_variants(const HydraConfig& base) {
  std::vector<Variant> out;
  for (bool clip : {false, true}) {
    HydraConfig c = base;
    c.clip = clip;
    out.push_back({c.variant_name(), c});
  }
  return out;
}

std::vector<Variant> diff_variants(const HydraConfig& base) {
  std::vector<Variant> out;
  for (bool diff : {true, false}) {
    HydraConfig c = base;
    c.use_diff = diff;
    out.push_back({c.variant_name(), c});
  }
  return out;
}

std::vector<Variant> explicit_cells(const HydraConfig& base, const std::string& spec) {
  std::vector<Variant> out;
  std::istringstream ss(spec);
  std::string token;
  while (std::getline(ss, token, ',')) {
    if (token.empty()) continue;
    const auto x = token.find('x');
    int k = 0, g = 0;
    try {
      if (x == std::string::npos) throw std::invalid_argument(token);
      k = std::stoi(token.substr(0, x));
      g = std::stoi(token.substr(x + 1));
    } catch (const std::exception&) {
      throw Error(Errc::config_error, "bad cell '" + token + "' (expected KxG, e.g. 8x64)");
    }
    HydraConfig c = base;
    c.k = k;
    c.g = g;
    if (c.use_diff && g % 2 != 0) {
      std::cerr << "note: cell k=" << k << " g=" << g
                << " cannot take the difference half (odd g); running without it\n";
      c.use_diff = false;
    }
    c.validate();
    out.push_back({c.variant_name(), c});
  }
  if (out.empty()) throw Error(Errc::config_error, "no cells in '" + spec + "'");
  return out;
}

std::vector<Variant> full_grid(const HydraConfig& base, const std::vector<std::string>& axes) {
  std::vector<Variant> grid{{base.variant_name(), base}};
  for (const std::string& axis : axes) {
    std::vector<Variant> expanded;
    std::set<std::string> seen;
    for (const Variant& v : grid) {
      std::vector<Variant> cells;
      if (axis == "kg") cells = kg_lattice(v.config);
      else if (axis == "counting") cells = counting_variants(v.config);
      else if (axis == "clip") cells = clip_variants(v.config);
      else if (axis == "diff") cells = diff_variants(v.config);
      else
        throw Error(Errc::config_error,
                    "unknown sensitivity axis '" + axis + "' (kg|counting|clip|diff)");
      for (Variant& c : cells)
        if (seen.insert(c.name).second) expanded.push_back(std::move(c));
    }
    grid = std::move(expanded);
  }
  return grid;
}

RankTable mean_rank(const std::vector<ExperimentResult>& results) {
  if (results.empty()) throw Error(Errc::no_common_datasets, "no results to rank");

  // Mean accuracy per (variant, dataset) over resamples/runs.
  std::map<std::string, std::map<std::string, std::pair<double, int>>> acc;  // variant -> dataset
  std::set<std::string> variant_set, dataset_set;
  for (const ExperimentResult& r : results) {
    auto& cell = acc[r.variant][r.dataset];
    cell.first += r.accuracy;
    cell.second += 1;
    variant_set.insert(r.variant);
    dataset_set.insert(r.dataset);
  }

  RankTable table;
  table.variants.assign(variant_set.begin(), variant_set.end());
  for (const std::string& d : dataset_set) {
    bool complete = true;
    for (const std::string& v : table.variants)
      if (!acc[v].count(d)) complete = false;
    if (complete)
      table.datasets.push_back(d);
    else
      std::cerr << "warning: dataset '" << d << "' missing some variants, dropped from ranking\n";
  }
  if (table.datasets.empty())
    throw Error(Errc::no_common_datasets, "no dataset has results for every variant");

  const std::size_t V = table.variants.size();
  table.ranks.assign(V * table.datasets.size(), 0.0);
  table.mean_rank.assign(V, 0.0);
  for (std::size_t d = 0; d < table.datasets.size(); ++d) {
    std::vector<double> a(V);
    for (std::size_t v = 0; v < V; ++v) {
      const auto& cell = acc[table.variants[v]][table.datasets[d]];
      a[v] = cell.first / cell.second;
    }
    // Average rank for ties; rank 1 = most accurate.
    for (std::size_t v = 0; v < V; ++v) {
      std::size_t higher = 0, equal = 0;
      for (std::size_t u = 0; u < V; ++u) {
        if (a[u] > a[v]) ++higher;
        if (a[u] == a[v]) ++equal;
      }
      table.ranks[v * table.datasets.size() + d] =
          static_cast<double>(higher) + (static_cast<double>(equal) + 1.0) / 2.0;
    }
  }
  for (std::size_t v = 0; v < V; ++v) {
    double sum = 0.0;
    for (std::size_t d = 0; d < table.datasets.size(); ++d)
      sum += table.ranks[v * table.datasets.size() + d];
    table.mean_rank[v] = sum / static_cast<double>(table.datasets.size());
  }
  return table;
}

void write_results_csv(const std::string& path, const RunManifest& manifest,
                       const std::vector<ExperimentResult>& results) {
  CsvAppender appender(path, true, manifest);
  for (const ExperimentResult& r : results) appender.append(r);
}

std::vector<ExperimentResult> read_results_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::io_error, "cannot open '" + path + "'");
  std::vector<ExperimentResult> results;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    if (line.rfind("dataset,", 0) == 0) continue;  // column header
    std::istringstream ss(line);
    ExperimentResult r;
    std::string field;
    try {
      std::getline(ss, r.dataset, ',');
      std::getline(ss, field, ',');
      r.resample_id = std::stoi(field);
      std::getline(ss, r.variant, ',');
      std::getline(ss, field, ',');
      r.accuracy = std::stod(field);
      std::getline(ss, field, ',');
      r.transform_seconds = std::stod(field);
      std::getline(ss, field, ',');
      r.train_seconds = std::stod(field);
      std::getline(ss, field, ',');
      r.test_seconds = std::stod(field);
    } catch (const std::exception&) {
      throw Error(Errc::parse_error, "'" + path + "' line " + std::to_string(line_no) +
                                         ": bad results row");
    }
    results.push_back(std::move(r));
  }
  return results;
}

void write_rank_csv(const std::string& path, const RunManifest& manifest,
                    const RankTable& table) {
  std::ofstream out(path);
  if (!out) throw Error(Errc::io_error, "cannot write '" + path + "'");
  out << "# schema: hydra-ranks v1\n";
  out << "# tool: " << manifest.tool << " " << manifest.version << "\n";
  out << "# command: " << manifest.command << "\n";
  for (const auto& [k, v] : manifest.params) out << "# " << k << ": " << v << "\n";
  out << "variant,mean_rank,n_datasets\n";
  for (std::size_t v = 0; v < table.variants.size(); ++v)
    out << table.variants[v] << ',' << format_double(table.mean_rank[v]) << ','
        << table.datasets.size() << '\n';
  if (!out) throw Error(Errc::io_error, "write failed for '" + path + "'");
}

}  // namespace hydra
