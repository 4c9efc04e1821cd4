#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

namespace glimm {

double van_der_corput(std::uint64_t i);  // i >= 1, base-2 bit reversal

enum class SequenceKind { VanDerCorput, Pseudorandom, Explicit };

// Index-addressable sampling values theta_1, theta_2, ... in [0, 1).
class SamplingSequence {
 public:
  static SamplingSequence vdc();
  static SamplingSequence pseudorandom(std::uint64_t seed);
  static SamplingSequence explicit_values(std::vector<double> values);  // cycled
  // "vdc", "seed:<n>", "list:a,b,c"
  static SamplingSequence parse(const std::string& spec);

  SequenceKind kind() const { return kind_; }
  std::uint64_t seed() const { return seed_; }
  std::string describe() const;

  double operator()(std::uint64_t i) const;  // i >= 1
  std::vector<double> range(std::uint64_t first, std::uint64_t last) const;  // theta_first .. theta_{last-1}

 private:
  SequenceKind kind_ = SequenceKind::VanDerCorput;
  std::uint64_t seed_ = 0;
  std::vector<double> values_;
  struct Cache {
    std::mutex mu;
    std::vector<double> values;
  };
  std::shared_ptr<Cache> cache_;
};

struct DiscrepancyReport {
  std::uint64_t m = 0, n = 0;
  double value = 0;
  double argmax = 0;  // lambda where the supremum is attained (possibly as a one-sided limit)
  double ratio = 0;   // value * (n - m) / (2 + log2(n - m))
};

double discrepancy_ratio(double d, std::uint64_t count);

// Exact supremum over lambda in [0, 1] for a finite point set.
DiscrepancyReport discrepancy_of(std::vector<double> points);
// Points theta_l with m <= l < n. Throws EmptyRange.
DiscrepancyReport discrepancy(const SamplingSequence& seq, std::uint64_t m, std::uint64_t n);

struct BoundReport {
  DiscrepancyReport worst;
  std::uint64_t n_max = 0;
  std::uint64_t pairs = 0;
  std::uint64_t exact_evaluations = 0;
  bool sampled = false;
  std::vector<DiscrepancyReport> first_rows;  // m = 1, every n
  std::vector<DiscrepancyReport> all_rows;    // only when requested
};

// sup of D_{m,n} (n-m)/(2 + log2(n-m)) over 1 <= m < n <= n_max.
// Exhaustive up to 4096; above that a seeded sample of pairs.
BoundReport verify_discrepancy_bound(const SamplingSequence& seq, std::uint64_t n_max, bool keep_all = false,
                                     std::uint64_t sample_pairs = 200000, std::uint64_t sample_seed = 1);

}  // namespace glimm
