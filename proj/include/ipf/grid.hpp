#pragma once

#include <algorithm>
#include <future>
#include <thread>
#include <type_traits>
#include <vector>

#include "ipf/constants.hpp"
#include "ipf/errors.hpp"

namespace ipf {

/// Strictly increasing set of angular frequencies [rad/s].
struct FrequencyGrid {
  std::vector<double> omega;

  static FrequencyGrid linear_omega(double w_min, double w_max, std::size_t n) {
    if (n < 2 || !(w_min > 0.0) || !(w_max > w_min))
      throw Error("frequency grid requires 0 < w_min < w_max and n >= 2");
    FrequencyGrid g;
    g.omega.resize(n);
    const double step = (w_max - w_min) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i)
      g.omega[i] = w_min + step * static_cast<double>(i);
    g.omega.back() = w_max;
    return g;
  }

  static FrequencyGrid linear_hz(double f_min_hz, double f_max_hz, std::size_t n) {
    return linear_omega(hz_to_rad(f_min_hz), hz_to_rad(f_max_hz), n);
  }

  void validate() const {
    if (omega.empty()) throw Error("empty frequency grid");
    double prev = 0.0;
    for (double w : omega) {
      if (!(w > prev)) throw Error("frequency grid must be strictly increasing and positive");
      prev = w;
    }
  }
};

/// Apply `f` to every entry of `xs`. Evaluations are independent and pure,
/// so chunks may run on separate threads; results land in input order and
/// are bit-identical to a sequential run.
template <typename F>
auto parallel_map(const std::vector<double>& xs, F&& f, unsigned threads = 0)
    -> std::vector<std::invoke_result_t<F&, double>> {
  using R = std::invoke_result_t<F&, double>;
  std::vector<R> out(xs.size());
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(xs.size(), 1)));

  if (threads <= 1 || xs.size() < 8) {
    for (std::size_t i = 0; i < xs.size(); ++i) out[i] = f(xs[i]);
    return out;
  }

  const std::size_t chunk = (xs.size() + threads - 1) / threads;
  std::vector<std::future<void>> futures;
  for (unsigned t = 0; t < threads; ++t) {
    const std::size_t lo = static_cast<std::size_t>(t) * chunk;
    if (lo >= xs.size()) break;
    const std::size_t hi = std::min(xs.size(), lo + chunk);
    futures.push_back(std::async(std::launch::async, [&, lo, hi]() {
      for (std::size_t i = lo; i < hi; ++i) out[i] = f(xs[i]);
    }));
  }
  for (auto& fut : futures) fut.get();
  return out;
}

}  // namespace ipf
