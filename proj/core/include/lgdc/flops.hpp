#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace lgdc {

__extension__ typedef __int128 Int128;

/// Work counts in units of one node-pair slot per network call. `multiplier`
/// (e.g. d * L) scales all three estimators alike.

/// T n^2.
std::int64_t flops_oneshot(std::int64_t n, std::int64_t steps, std::int64_t multiplier = 1);

/// n^2 for the one-shot expansion plus T n_c^2 for latent diffusion.
std::int64_t flops_lgdc(std::int64_t n, std::int64_t n_c, std::int64_t steps, std::int64_t multiplier = 1);

/// S = (T+1)/(6T) (6Tn + (2T+1)(n-1)^2): the sum over t = 0..T of the squared
/// graph size 1 + t (n-1)/T when T steps grow the graph from 1 to n nodes.
double flops_autoregressive(std::int64_t n, std::int64_t steps, double multiplier = 1.0);

/// 6T S as an exact integer, (T+1)(6Tn + (2T+1)(n-1)^2).
Int128 flops_autoregressive_times_6t(std::int64_t n, std::int64_t steps);

struct FlopsRow {
  std::string method;
  double work = 0.0;
  double speedup = 0.0;
};

/// One-shot, autoregressive and latent rows; speedup is one-shot / row.
std::vector<FlopsRow> flops_table(std::int64_t n, std::int64_t n_c, std::int64_t steps, std::int64_t multiplier = 1);
std::string format_flops_table(const std::vector<FlopsRow>& rows, std::int64_t n, std::int64_t n_c, std::int64_t steps);

}  // namespace lgdc
