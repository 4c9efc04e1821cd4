#include "glimm/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "glimm/errors.hpp"

namespace glimm {

double van_der_corput(std::uint64_t i) {
  double r = 0, f = 0.5;
  while (i) {
    if (i & 1u) r += f;
    i >>= 1;
    f *= 0.5;
  }
  return r;
}

SamplingSequence SamplingSequence::vdc() { return SamplingSequence{}; }

SamplingSequence SamplingSequence::pseudorandom(std::uint64_t seed) {
  SamplingSequence s;
  s.kind_ = SequenceKind::Pseudorandom;
  s.seed_ = seed;
  s.cache_ = std::make_shared<Cache>();
  return s;
}

SamplingSequence SamplingSequence::explicit_values(std::vector<double> values) {
  if (values.empty()) fail(ErrorKind::InvalidArgument, "explicit sequence needs at least one value");
  for (double v : values)
    if (!(v >= 0 && v < 1)) fail(ErrorKind::InvalidArgument, "sampling values must lie in [0, 1)");
  SamplingSequence s;
  s.kind_ = SequenceKind::Explicit;
  s.values_ = std::move(values);
  return s;
}

SamplingSequence SamplingSequence::parse(const std::string& spec) {
  if (spec == "vdc") return vdc();
  if (spec.rfind("seed:", 0) == 0) return pseudorandom(std::stoull(spec.substr(5)));
  if (spec.rfind("list:", 0) == 0) {
    std::vector<double> v;
    std::stringstream ss(spec.substr(5));
    std::string item;
    while (std::getline(ss, item, ',')) v.push_back(std::stod(item));
    return explicit_values(std::move(v));
  }
  fail(ErrorKind::ConfigError, "unknown sequence '" + spec + "' (vdc | seed:<n> | list:a,b,...)");
}

std::string SamplingSequence::describe() const {
  switch (kind_) {
    case SequenceKind::VanDerCorput: return "vdc";
    case SequenceKind::Pseudorandom: return "seed:" + std::to_string(seed_);
    case SequenceKind::Explicit: {
      std::ostringstream os;
      os << "list:";
      for (std::size_t i = 0; i < values_.size(); ++i) os << (i ? "," : "") << values_[i];
      return os.str();
    }
  }
  return "?";
}

double SamplingSequence::operator()(std::uint64_t i) const {
  if (i == 0) fail(ErrorKind::InvalidArgument, "sampling index starts at 1");
  switch (kind_) {
    case SequenceKind::VanDerCorput: return van_der_corput(i);
    case SequenceKind::Explicit: return values_[(i - 1) % values_.size()];
    case SequenceKind::Pseudorandom: {
      std::lock_guard<std::mutex> lock(cache_->mu);
      auto& v = cache_->values;
      if (v.size() < i) {
        // regenerate deterministically from the start; 53 random bits per value
        std::mt19937_64 eng(seed_);
        const std::size_t want = std::max<std::size_t>(i, 2 * v.size());
        v.clear();
        v.reserve(want);
        for (std::size_t j = 0; j < want; ++j) v.push_back(static_cast<double>(eng() >> 11) * 0x1.0p-53);
      }
      return v[i - 1];
    }
  }
  return 0;
}

std::vector<double> SamplingSequence::range(std::uint64_t first, std::uint64_t last) const {
  std::vector<double> out;
  if (last > first) out.reserve(last - first);
  for (std::uint64_t i = first; i < last; ++i) out.push_back((*this)(i));
  return out;
}

double discrepancy_ratio(double d, std::uint64_t count) {
  const double k = static_cast<double>(count);
  return d * k / (2.0 + std::log2(k));
}

namespace {

// max over sorted points of k * |lambda - F(lambda)| and its argmax
double scaled_sup(const std::vector<double>& x, double& arg) {
  const double k = static_cast<double>(x.size());
  double best = -1;
  std::size_t at = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double kx = k * x[i];
    const double below = kx - static_cast<double>(i);      // lambda -> x_(i) from below
    const double above = static_cast<double>(i + 1) - kx;  // lambda = x_(i)
    const double v = std::max(below, above);
    if (v > best) {
      best = v;
      at = i;
    }
  }
  arg = x.empty() ? 0.0 : x[at];
  return best;
}

}  // namespace

DiscrepancyReport discrepancy_of(std::vector<double> points) {
  if (points.empty()) fail(ErrorKind::EmptyRange, "no points");
  std::sort(points.begin(), points.end());
  DiscrepancyReport r;
  r.m = 0;
  r.n = points.size();
  // the sorted formula itself, so that it agrees bit for bit with a direct sup
  const double k = static_cast<double>(points.size());
  r.value = -1;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double x = points[i];
    const double below = std::fabs(x - static_cast<double>(i) / k);     // lambda -> x from the left
    const double above = std::fabs(x - static_cast<double>(i + 1) / k);  // lambda = x
    if (below > r.value) r.value = below, r.argmax = x;
    if (above > r.value) r.value = above, r.argmax = x;
  }
  r.ratio = discrepancy_ratio(r.value, points.size());
  return r;
}

DiscrepancyReport discrepancy(const SamplingSequence& seq, std::uint64_t m, std::uint64_t n) {
  if (!(n > m)) fail(ErrorKind::EmptyRange, "need m < n");
  if (m == 0) fail(ErrorKind::EmptyRange, "sampling indices start at 1");
  DiscrepancyReport r = discrepancy_of(seq.range(m, n));
  r.m = m;
  r.n = n;
  return r;
}

BoundReport verify_discrepancy_bound(const SamplingSequence& seq, std::uint64_t n_max, bool keep_all,
                                     std::uint64_t sample_pairs, std::uint64_t sample_seed) {
  if (n_max < 2) fail(ErrorKind::EmptyRange, "n_max must be at least 2");
  BoundReport rep;
  rep.n_max = n_max;
  rep.worst.ratio = -1;
  const std::vector<double> theta = seq.range(1, n_max);  // theta[l - 1]

  auto consider = [&](std::uint64_t m, std::uint64_t n, double kd, double arg) {
    DiscrepancyReport d;
    d.m = m;
    d.n = n;
    d.value = kd / static_cast<double>(n - m);
    d.argmax = arg;
    d.ratio = discrepancy_ratio(d.value, n - m);
    if (d.ratio > rep.worst.ratio) rep.worst = d;
    return d;
  };

  if (n_max > 4096) {
    rep.sampled = true;
    std::mt19937_64 eng(sample_seed);
    std::uniform_int_distribution<std::uint64_t> pick(1, n_max);
    for (std::uint64_t p = 0; p < sample_pairs; ++p) {
      std::uint64_t a = pick(eng), b = pick(eng);
      if (a == b) continue;
      if (a > b) std::swap(a, b);
      std::vector<double> pts(theta.begin() + static_cast<std::ptrdiff_t>(a - 1),
                              theta.begin() + static_cast<std::ptrdiff_t>(b - 1));
      std::sort(pts.begin(), pts.end());
      double arg;
      const double kd = scaled_sup(pts, arg);
      consider(a, b, kd, arg);
      ++rep.pairs;
      ++rep.exact_evaluations;
    }
    return rep;
  }

  std::vector<double> sorted;
  sorted.reserve(n_max);
  for (std::uint64_t m = 1; m < n_max; ++m) {
    sorted.clear();
    double last_kd = 0;
    std::uint64_t last_k = 0;
    for (std::uint64_t n = m + 1; n <= n_max; ++n) {
      const double x = theta[n - 2];  // theta_{n-1}
      sorted.insert(std::upper_bound(sorted.begin(), sorted.end(), x), x);
      const std::uint64_t k = n - m;
      ++rep.pairs;
      // k D_k grows by at most one per added point
      const double bound = last_kd + static_cast<double>(k - last_k);
      const bool need = keep_all || m == 1 || last_k == 0 ||
                        bound / (2.0 + std::log2(static_cast<double>(k))) > rep.worst.ratio;
      if (!need) continue;
      double arg;
      const double kd = scaled_sup(sorted, arg);
      ++rep.exact_evaluations;
      last_kd = kd;
      last_k = k;
      DiscrepancyReport d = consider(m, n, kd, arg);
      if (m == 1) rep.first_rows.push_back(d);
      if (keep_all) rep.all_rows.push_back(d);
    }
  }
  return rep;
}

}  // namespace glimm
