#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace tsde {

inline constexpr const char* kToolVersion = "tsde 0.1.0";

/// splitmix64 step; used to derive independent child seeds from a master seed.
/// Child seed for stream index i is split_seed(master, i).
std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t split_seed(std::uint64_t master, std::uint64_t stream);

/// Standard normal quantile (inverse CDF). p in (0, 1).
double normal_quantile(double p);

/// Trapezoidal integral of y over grid x (both ascending, equal length).
double trapezoid(const std::vector<double>& x, const std::vector<double>& y);

/// Runs fn(i) for i in [0, n) on up to `threads` workers (0 = hardware).
/// Tasks must write only to their own slots; results are order-independent.
void parallel_for(int n, int threads, const std::function<void(int)>& fn);

/// Formats a double with round-trip precision (used by all text outputs).
std::string format_double(double v);

}  // namespace tsde
