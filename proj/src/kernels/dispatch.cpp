#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <string_view>

#include "lane_impl.hpp"

namespace ctxproj::kernels {
namespace {

bool host_has_avx2() {
#if defined(CTXPROJ_HAVE_AVX2)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Lane initial_lane() {
  if (const char* env = std::getenv("CTXPROJ_LANE")) {
    std::string_view value(env);
    if (value == "scalar") return Lane::scalar;
    if (value == "avx2" && host_has_avx2()) return Lane::avx2;
  }
  return host_has_avx2() ? Lane::avx2 : Lane::scalar;
}

std::atomic<Lane>& lane_slot() {
  static std::atomic<Lane> lane{initial_lane()};
  return lane;
}

}  // namespace

std::string_view lane_name(Lane lane) {
  switch (lane) {
    case Lane::scalar:
      return "scalar";
    case Lane::avx2:
      return "avx2";
  }
  return "unknown";
}

bool lane_available(Lane lane) {
  switch (lane) {
    case Lane::scalar:
      return true;
    case Lane::avx2:
      return host_has_avx2();
  }
  return false;
}

const Ops& ops_for(Lane lane) {
  if (!lane_available(lane)) {
    throw std::invalid_argument("kernel lane \"" + std::string(lane_name(lane)) +
                                "\" is not available on this host");
  }
#if defined(CTXPROJ_HAVE_AVX2)
  if (lane == Lane::avx2) return avx2_ops();
#endif
  return scalar_ops();
}

Lane active_lane() { return lane_slot().load(std::memory_order_relaxed); }

const Ops& active() { return ops_for(active_lane()); }

void force_lane(Lane lane) {
  if (!lane_available(lane)) {
    throw std::invalid_argument("kernel lane \"" + std::string(lane_name(lane)) +
                                "\" is not available on this host");
  }
  lane_slot().store(lane, std::memory_order_relaxed);
}

}  // namespace ctxproj::kernels
