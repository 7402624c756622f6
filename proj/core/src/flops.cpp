#include "lgdc/flops.hpp"

#include "lgdc/error.hpp"

#include <iomanip>
#include <sstream>

namespace lgdc {

namespace {

void require_positive(std::int64_t v, const char* what) {
  if (v < 1) throw Error(std::string("flops: ") + what + " must be at least 1");
}

}  // namespace

std::int64_t flops_oneshot(std::int64_t n, std::int64_t steps, std::int64_t multiplier) {
  require_positive(n, "n");
  require_positive(steps, "T");
  return steps * n * n * multiplier;
}

std::int64_t flops_lgdc(std::int64_t n, std::int64_t n_c, std::int64_t steps, std::int64_t multiplier) {
  require_positive(n, "n");
  require_positive(n_c, "n_c");
  require_positive(steps, "T");
  if (n_c > n) throw Error("flops: n_c exceeds n");
  return (n * n + steps * n_c * n_c) * multiplier;
}

double flops_autoregressive(std::int64_t n, std::int64_t steps, double multiplier) {
  require_positive(n, "n");
  require_positive(steps, "T");
  const double t = static_cast<double>(steps);
  const double m = static_cast<double>(n - 1);
  return (t + 1.0) / (6.0 * t) * (6.0 * t * static_cast<double>(n) + (2.0 * t + 1.0) * m * m) * multiplier;
}

Int128 flops_autoregressive_times_6t(std::int64_t n, std::int64_t steps) {
  require_positive(n, "n");
  require_positive(steps, "T");
  const Int128 t = steps;
  const Int128 m = n - 1;
  return (t + 1) * (6 * t * n + (2 * t + 1) * m * m);
}

std::vector<FlopsRow> flops_table(std::int64_t n, std::int64_t n_c, std::int64_t steps, std::int64_t multiplier) {
  const double oneshot = static_cast<double>(flops_oneshot(n, steps, multiplier));
  const double autoregressive = flops_autoregressive(n, steps, static_cast<double>(multiplier));
  const double latent = static_cast<double>(flops_lgdc(n, n_c, steps, multiplier));
  return {{"one-shot", oneshot, 1.0},
          {"autoregressive", autoregressive, oneshot / autoregressive},
          {"lgdc", latent, oneshot / latent}};
}

std::string format_flops_table(const std::vector<FlopsRow>& rows, std::int64_t n, std::int64_t n_c, std::int64_t steps) {
  std::ostringstream out;
  out << "n=" << n << " n_c=" << n_c << " T=" << steps << '\n';
  out << std::left << std::setw(16) << "method" << std::right << std::setw(16) << "work" << std::setw(12) << "speedup"
      << '\n';
  for (const auto& r : rows) {
    out << std::left << std::setw(16) << r.method << std::right << std::setw(16) << std::fixed << std::setprecision(1)
        << r.work << std::setw(11) << std::setprecision(2) << r.speedup << "x\n";
  }
  return out.str();
}

}  // namespace lgdc
