#include <atomic>
#include <cstdlib>

#include "hydra/errors.hpp"
#include "hydra/kernels.hpp"

namespace hydra::kernels {

namespace {

const Backend* resolve(std::string_view name) {
  if (name == "auto" || name.empty()) {
    if (const Backend* b = avx2_backend()) return b;
    return &scalar_backend();
  }
  if (name == "scalar") return &scalar_backend();
  if (name == "avx2") {
    if (const Backend* b = avx2_backend()) return b;
    throw Error(Errc::config_error, "backend 'avx2' is not available on this CPU");
  }
  throw Error(Errc::config_error, "unknown backend '" + std::string(name) + "'");
}

std::atomic<const Backend*> g_active{nullptr};

}  // namespace

std::vector<std::string> available_backends() {
  std::vector<std::string> names{"scalar"};
  if (avx2_backend()) names.emplace_back("avx2");
  return names;
}

const Backend& active_backend() {
  const Backend* b = g_active.load(std::memory_order_acquire);
  if (!b) {
    const char* env = std::getenv("HYDRA_BACKEND");
    b = resolve(env ? env : "auto");
    g_active.store(b, std::memory_order_release);
  }
  return *b;
}

void set_active_backend(std::string_view name) {
  g_active.store(resolve(name), std::memory_order_release);
}

}  // namespace hydra::kernels
