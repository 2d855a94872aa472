#include "qswitch/statistics.hpp"

#include "qswitch/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>
#include <thread>
#include <vector>

namespace qswitch {

namespace {

using Cdf = std::array<double, 16>;

Cdf cumulative(const std::array<double, 16>& p) {
  Cdf c{};
  double acc = 0.0;
  for (int i = 0; i < 16; ++i) {
    acc += std::max(0.0, p[i]);
    c[i] = acc;
  }
  return c;
}

// Inverse-CDF draw; rounding slack at the top goes to the last nonzero cell.
int draw(const Cdf& cdf, double u) {
  const double x = u * cdf[15];
  for (int i = 0; i < 16; ++i)
    if (x < cdf[i]) return i;
  for (int i = 15; i > 0; --i)
    if (cdf[i] > cdf[i - 1]) return i;
  return 0;
}

// Event frequencies within one setting.
struct SettingEvents {
  double e1 = 0, e2 = 0, e3 = 0;
  double e13 = 0, e23 = 0;  // joint with the term-3 event
  double n = 0;
};

}  // namespace

SettingWeights uniform_weights() {
  SettingWeights w;
  w.fill(1.0 / kNumSettings);
  return w;
}

void validate_weights(const SettingWeights& weights) {
  double sum = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw std::invalid_argument("setting weights must be >= 0");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw std::invalid_argument("setting weights must sum to 1");
}

std::uint64_t CountsTable::setting_total(int setting_index) const {
  const auto& row = counts.at(setting_index);
  return std::accumulate(row.begin(), row.end(), std::uint64_t{0});
}

CountsTable sample_counts(const CorrelationTable& table, std::uint64_t n_trials, std::uint64_t seed,
                          const SettingWeights& weights, unsigned threads) {
  validate_weights(weights);
  CountsTable out;
  out.n_trials = n_trials;
  out.seed = seed;
  out.setting_weights = weights;

  const Cdf setting_cdf = cumulative(weights);
  std::array<Cdf, kNumSettings> outcome_cdf;
  for (int s = 0; s < kNumSettings; ++s) outcome_cdf[s] = cumulative(table.row(s));

  const std::uint64_t blocks = (n_trials + kSampleBlock - 1) / kSampleBlock;
  auto run_block = [&](std::uint64_t block, CountsTable& acc) {
    CounterRng rng(seed, block);
    const std::uint64_t begin = block * kSampleBlock;
    const std::uint64_t end = std::min(n_trials, begin + kSampleBlock);
    for (std::uint64_t t = begin; t < end; ++t) {
      const int s = draw(setting_cdf, rng.uniform());
      const int o = draw(outcome_cdf[s], rng.uniform());
      ++acc.counts[s][o];
    }
  };

  threads = static_cast<unsigned>(std::clamp<std::uint64_t>(threads, 1, std::max<std::uint64_t>(blocks, 1)));
  std::vector<CountsTable> partial(threads);
  {
    std::vector<std::jthread> workers;
    for (unsigned t = 1; t < threads; ++t) {
      workers.emplace_back([&, t] {
        for (std::uint64_t b = t; b < blocks; b += threads) run_block(b, partial[t]);
      });
    }
    for (std::uint64_t b = 0; b < blocks; b += threads) run_block(b, partial[0]);
  }
  for (const auto& p : partial)
    for (int s = 0; s < kNumSettings; ++s)
      for (int o = 0; o < kNumOutcomes; ++o) out.counts[s][o] += p.counts[s][o];
  return out;
}

VbcEstimate estimate_vbc(const CountsTable& counts) {
  std::array<SettingEvents, kNumSettings> ev{};
  for (int s = 0; s < kNumSettings; ++s) {
    const Setting set = Setting::from_index(s);
    const bool used_12 = set.y == 0;
    const bool used_3 = set.x1 == 0 && set.x2 == 0;
    if (!used_12 && !used_3) continue;
    const double n = static_cast<double>(counts.setting_total(s));
    if (n == 0) {
      throw EstimationError(used_12 ? "term1/term2" : "term3", set.key());
    }
    SettingEvents& e = ev[s];
    e.n = n;
    for (int o = 0; o < kNumOutcomes; ++o) {
      const Outcome res = Outcome::from_index(o);
      const double f = static_cast<double>(counts.counts[s][o]) / n;
      const bool in1 = res.b == 0 && res.a2 == set.x1;
      const bool in2 = res.b == 1 && res.a1 == set.x2;
      const bool in3 = (res.b ^ res.c) == (set.y & set.z);
      if (in1) e.e1 += f;
      if (in2) e.e2 += f;
      if (in3) e.e3 += f;
      if (in1 && in3) e.e13 += f;
      if (in2 && in3) e.e23 += f;
    }
  }

  // Multinomial (co)variances of the per-setting event frequencies:
  // Var = p(1-p)/n, Cov(A, B) = (p(A and B) - p(A) p(B))/n.
  VbcEstimate r;
  double var1 = 0, var2 = 0, var3 = 0, cov12 = 0, cov13 = 0, cov23 = 0;
  for (int s = 0; s < kNumSettings; ++s) {
    const Setting set = Setting::from_index(s);
    const SettingEvents& e = ev[s];
    const bool used_12 = set.y == 0;
    const bool used_3 = set.x1 == 0 && set.x2 == 0;
    if (used_12) {
      r.term1.value += e.e1 / 8.0;
      r.term2.value += e.e2 / 8.0;
      var1 += e.e1 * (1 - e.e1) / e.n / 64.0;
      var2 += e.e2 * (1 - e.e2) / e.n / 64.0;
      cov12 += (0.0 - e.e1 * e.e2) / e.n / 64.0;  // events 1 and 2 are disjoint
    }
    if (used_3) {
      r.term3.value += e.e3 / 4.0;
      var3 += e.e3 * (1 - e.e3) / e.n / 16.0;
    }
    if (used_12 && used_3) {
      cov13 += (e.e13 - e.e1 * e.e3) / e.n / 32.0;
      cov23 += (e.e23 - e.e2 * e.e3) / e.n / 32.0;
    }
  }
  r.term1.std_error = std::sqrt(std::max(0.0, var1));
  r.term2.std_error = std::sqrt(std::max(0.0, var2));
  r.term3.std_error = std::sqrt(std::max(0.0, var3));
  r.cov12 = cov12;
  r.total.value = r.term1.value + r.term2.value + r.term3.value;
  const double var_total = var1 + var2 + var3 + 2 * (cov12 + cov13 + cov23);
  r.total.std_error = std::sqrt(std::max(0.0, var_total));
  return r;
}

double significance(const Estimate& estimate, double bound) {
  if (!(estimate.std_error > 0.0)) {
    throw std::invalid_argument("significance: standard error must be positive");
  }
  return (estimate.value - bound) / estimate.std_error;
}

double combine_in_quadrature(std::initializer_list<double> errors) {
  double acc = 0.0;
  for (double e : errors) acc += e * e;
  return std::sqrt(acc);
}

std::string counts_to_csv(const CountsTable& counts) {
  std::ostringstream os;
  os << "x1,x2,y,z,a1,a2,b,c,count\n";
  for (int s = 0; s < kNumSettings; ++s) {
    const Setting set = Setting::from_index(s);
    for (int o = 0; o < kNumOutcomes; ++o) {
      const Outcome res = Outcome::from_index(o);
      os << set.x1 << ',' << set.x2 << ',' << set.y << ',' << set.z << ',' << res.a1 << ','
         << res.a2 << ',' << res.b << ',' << res.c << ',' << counts.counts[s][o] << '\n';
    }
  }
  return os.str();
}

nlohmann::json counts_header(const CountsTable& counts) {
  nlohmann::json w = nlohmann::json::array();
  for (double x : counts.setting_weights) w.push_back(round_sig12(x));
  return {{"n_trials", counts.n_trials}, {"seed", counts.seed}, {"weights", std::move(w)}};
}

CountsTable counts_from_csv(const std::string& csv, const nlohmann::json& header) {
  CountsTable out;
  out.n_trials = header.at("n_trials").get<std::uint64_t>();
  out.seed = header.at("seed").get<std::uint64_t>();
  const auto& w = header.at("weights");
  if (!w.is_array() || w.size() != kNumSettings) throw std::invalid_argument("weights need 16 entries");
  for (int s = 0; s < kNumSettings; ++s) out.setting_weights[s] = w[s].get<double>();

  std::istringstream is(csv);
  std::string line;
  if (!std::getline(is, line) || line != "x1,x2,y,z,a1,a2,b,c,count") {
    throw std::invalid_argument("counts_from_csv: unexpected header");
  }
  std::uint64_t total = 0;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    int v[8];
    unsigned long long n = 0;
    if (std::sscanf(line.c_str(), "%d,%d,%d,%d,%d,%d,%d,%d,%llu", &v[0], &v[1], &v[2], &v[3], &v[4],
                    &v[5], &v[6], &v[7], &n) != 9) {
      throw std::invalid_argument("counts_from_csv: malformed row '" + line + "'");
    }
    const Setting s{v[0], v[1], v[2], v[3]};
    const Outcome o{v[4], v[5], v[6], v[7]};
    s.validate();
    o.validate();
    out.counts[s.index()][o.index()] = n;
    total += n;
  }
  if (total != out.n_trials) throw std::invalid_argument("counts_from_csv: counts do not sum to n_trials");
  return out;
}

}  // namespace qswitch
