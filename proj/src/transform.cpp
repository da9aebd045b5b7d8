#include "hydra/transform.hpp"

#include <algorithm>
#include <atomic>
#include <cstring>
#include <limits>
#include <thread>

#include "hydra/kernels.hpp"

namespace hydra {

FeatureLayout FeatureLayout::make(const HydraConfig& config, const KernelBank& bank) {
  FeatureLayout layout;
  layout.g = bank.g;
  layout.k = bank.k;
  layout.dilations = bank.dilations;
  if (config.count_max == CountMode::soft || config.count_max == CountMode::both)
    layout.channel_tags.emplace_back("smax");
  if (config.count_max == CountMode::hard || config.count_max == CountMode::both)
    layout.channel_tags.emplace_back("hmax");
  if (config.count_min == CountMode::soft || config.count_min == CountMode::both)
    layout.channel_tags.emplace_back("smin");
  if (config.count_min == CountMode::hard || config.count_min == CountMode::both)
    layout.channel_tags.emplace_back("hmin");
  return layout;
}

std::string FeatureLayout::feature_name(std::size_t f) const {
  const std::size_t kern = f % k;
  f /= k;
  const std::size_t chan = f % channels();
  f /= channels();
  const std::size_t group = f % g;
  const std::size_t d_idx = f / g;
  return "d" + std::to_string(dilations[d_idx]) + "_g" + std::to_string(group) + "_" +
         channel_tags[chan] + "_" + std::to_string(kern);
}

std::vector<double> first_difference(std::span<const double> x) {
  if (x.size() < 2)
    throw Error(Errc::series_too_short, "first difference needs length >= 2");
  std::vector<double> y(x.size() - 1);
  for (std::size_t t = 0; t + 1 < x.size(); ++t) y[t] = x[t + 1] - x[t];
  return y;
}

std::vector<double> convolve_dilated(std::span<const double> x, std::span<const double, 9> w,
                                     int dilation) {
  const std::size_t pad = 4 * static_cast<std::size_t>(dilation);
  std::vector<double> xpad(x.size() + 2 * pad, 0.0);
  std::copy(x.begin(), x.end(), xpad.begin() + pad);
  std::vector<double> y(x.size());
  kernels::active_backend().conv_dilated(xpad.data(), x.size(), w.data(),
                                         static_cast<std::size_t>(dilation), y.data());
  return y;
}

namespace {

// Channel slot offsets within one (dilation, group) feature block, or -1
// when the channel is absent. Matches FeatureLayout's canonical order.
struct ChannelSlots {
  int soft_max = -1;
  int hard_max = -1;
  int soft_min = -1;
  int hard_min = -1;
  int count = 0;

  explicit ChannelSlots(const HydraConfig& c) {
    if (c.count_max == CountMode::soft || c.count_max == CountMode::both) soft_max = count++;
    if (c.count_max == CountMode::hard || c.count_max == CountMode::both) hard_max = count++;
    if (c.count_min == CountMode::soft || c.count_min == CountMode::both) soft_min = count++;
    if (c.count_min == CountMode::hard || c.count_min == CountMode::both) hard_min = count++;
  }
};

// Accumulate the winners of one group at one dilation into the feature block.
// `feat` points at channels * k doubles laid out channel-major.
void count_winners(const double* max_val, const std::uint64_t* max_idx,
                   const double* min_val, const std::uint64_t* min_idx, std::size_t len,
                   const HydraConfig& config, const ChannelSlots& slots, int k, double* feat) {
  const bool clip = config.clip;
  const bool want_max = config.count_max != CountMode::off;
  const bool want_min = config.count_min != CountMode::off;
  for (std::size_t t = 0; t < len; ++t) {
    if (want_max) {
      const double v = max_val[t];
      if (!clip || v > 0.0) {
        const auto idx = static_cast<std::size_t>(max_idx[t]);
        if (slots.soft_max >= 0) feat[slots.soft_max * k + idx] += v;
        if (slots.hard_max >= 0) feat[slots.hard_max * k + idx] += 1.0;
      }
    }
    if (want_min) {
      const double v = min_val[t];
      if (!clip || v < 0.0) {
        const auto idx = static_cast<std::size_t>(min_idx[t]);
        if (slots.soft_min >= 0) feat[slots.soft_min * k + idx] += v;
        if (slots.hard_min >= 0) feat[slots.hard_min * k + idx] += 1.0;
      }
    }
  }
}

struct Workspace {
  std::vector<double> pad_orig, pad_diff, response;
  std::vector<double> max_val, min_val;
  std::vector<std::uint64_t> max_idx, min_idx;

  Workspace(std::size_t len, int max_dilation) {
    pad_orig.resize(len + 8 * static_cast<std::size_t>(max_dilation));
    pad_diff.resize(pad_orig.size());
    response.resize(len);
    max_val.resize(len);
    min_val.resize(len);
    max_idx.resize(len);
    min_idx.resize(len);
  }
};

void transform_one(std::span<const double> x, const KernelBank& bank,
                   const HydraConfig& config, const ChannelSlots& slots, Workspace& ws,
                   double* out_row) {
  const auto& backend = kernels::active_backend();
  const std::size_t L = x.size();
  const bool diff_used = bank.diff_group_cutoff < bank.g;

  std::vector<double> diff;
  if (diff_used) {
    diff.resize(L - 1);
    for (std::size_t t = 0; t + 1 < L; ++t) diff[t] = x[t + 1] - x[t];
  }

  const int k = bank.k;
  const std::size_t block = static_cast<std::size_t>(slots.count) * k;
  for (int d_idx = 0; d_idx < bank.n_dilations(); ++d_idx) {
    const std::size_t dilation = static_cast<std::size_t>(bank.dilations[d_idx]);
    const std::size_t pad = 4 * dilation;

    std::fill(ws.pad_orig.begin(), ws.pad_orig.begin() + pad, 0.0);
    std::copy(x.begin(), x.end(), ws.pad_orig.begin() + pad);
    std::fill(ws.pad_orig.begin() + pad + L, ws.pad_orig.begin() + L + 2 * pad, 0.0);
    if (diff_used) {
      std::fill(ws.pad_diff.begin(), ws.pad_diff.begin() + pad, 0.0);
      std::copy(diff.begin(), diff.end(), ws.pad_diff.begin() + pad);
      std::fill(ws.pad_diff.begin() + pad + diff.size(),
                ws.pad_diff.begin() + diff.size() + 2 * pad, 0.0);
    }

    for (int group = 0; group < bank.g; ++group) {
      const bool on_diff = group >= bank.diff_group_cutoff;
      const double* src = on_diff ? ws.pad_diff.data() : ws.pad_orig.data();
      const std::size_t out_len = on_diff ? L - 1 : L;

      std::fill_n(ws.max_val.begin(), out_len, -std::numeric_limits<double>::infinity());
      std::fill_n(ws.min_val.begin(), out_len, std::numeric_limits<double>::infinity());
      std::fill_n(ws.max_idx.begin(), out_len, 0);
      std::fill_n(ws.min_idx.begin(), out_len, 0);

      for (int kern = 0; kern < k; ++kern) {
        backend.conv_dilated(src, out_len, bank.kernel(d_idx, group, kern), dilation,
                             ws.response.data());
        backend.argminmax_update(ws.response.data(), out_len,
                                 static_cast<std::uint64_t>(kern), ws.max_val.data(),
                                 ws.max_idx.data(), ws.min_val.data(), ws.min_idx.data());
      }

      double* feat = out_row + (static_cast<std::size_t>(d_idx) * bank.g + group) * block;
      count_winners(ws.max_val.data(), ws.max_idx.data(), ws.min_val.data(),
                    ws.min_idx.data(), out_len, config, slots, k, feat);
    }
  }
}

}  // namespace

std::vector<double> count_group(std::span<const double> responses, std::size_t k,
                                std::size_t len, const HydraConfig& config) {
  if (responses.size() != k * len)
    throw Error(Errc::length_mismatch, "responses must be k x len");
  const ChannelSlots slots(config);
  std::vector<double> max_val(len, -std::numeric_limits<double>::infinity());
  std::vector<double> min_val(len, std::numeric_limits<double>::infinity());
  std::vector<std::uint64_t> max_idx(len, 0), min_idx(len, 0);
  const auto& backend = kernels::active_backend();
  for (std::size_t kern = 0; kern < k; ++kern)
    backend.argminmax_update(responses.data() + kern * len, len, kern, max_val.data(),
                             max_idx.data(), min_val.data(), min_idx.data());
  std::vector<double> feat(static_cast<std::size_t>(slots.count) * k, 0.0);
  count_winners(max_val.data(), max_idx.data(), min_val.data(), min_idx.data(), len, config,
                slots, static_cast<int>(k), feat.data());
  return feat;
}

FeatureMatrix transform(const TimeSeriesDataset& data, const KernelBank& bank,
                        const HydraConfig& config, int n_threads) {
  config.validate();
  if (static_cast<int>(data.length) != bank.input_len)
    throw Error(Errc::bank_mismatch, "series length " + std::to_string(data.length) +
                                         " does not match bank input length " +
                                         std::to_string(bank.input_len));
  if (bank.g != config.g || bank.k != config.k ||
      bank.diff_group_cutoff != config.diff_group_cutoff())
    throw Error(Errc::bank_mismatch, "bank geometry does not match the configuration");
  if (bank.diff_group_cutoff < bank.g && data.length < 2)
    throw Error(Errc::series_too_short, "difference groups need length >= 2");

  FeatureMatrix out;
  out.layout = FeatureLayout::make(config, bank);
  out.rows = data.n();
  out.cols = out.layout.n_features();
  out.values.assign(out.rows * out.cols, 0.0);

  const ChannelSlots slots(config);
  const int max_dilation = bank.dilations.empty() ? 1 : bank.dilations.back();
  const std::size_t n = data.n();
  const std::size_t batch = static_cast<std::size_t>(config.batch_size);
  const int workers = std::max(1, n_threads);

  // Rows are independent; batch size and thread count cannot change the result.
  for (std::size_t begin = 0; begin < n; begin += batch) {
    const std::size_t end = std::min(n, begin + batch);
    if (workers == 1 || end - begin == 1) {
      Workspace ws(data.length, max_dilation);
      for (std::size_t i = begin; i < end; ++i)
        transform_one(data.series(i), bank, config, slots, ws, out.row(i));
    } else {
      std::vector<std::thread> pool;
      std::atomic<std::size_t> next{begin};
      for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
          Workspace ws(data.length, max_dilation);
          for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= end) break;
            transform_one(data.series(i), bank, config, slots, ws, out.row(i));
          }
        });
      }
      for (auto& t : pool) t.join();
    }
  }
  return out;
}

}  // namespace hydra
