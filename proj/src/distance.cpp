#include "tsd/distance.hpp"

#include "tsd/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace tsd {

std::string to_string(Metric metric) {
  switch (metric) {
    case Metric::kolmogorov: return "kolmogorov";
    case Metric::wasserstein1: return "wasserstein1";
    case Metric::smooth_h3_lower: return "smooth_h3_lower";
  }
  return "kolmogorov";
}

double dkw_band(std::size_t n, double delta) {
  return std::sqrt(std::log(2.0 / delta) / (2.0 * static_cast<double>(n)));
}

namespace {

// A CDF that can be evaluated in batches; `left` gives F(x-), which only differs
// from F at the listed atoms (or anywhere, for empirical laws).
struct CdfSource {
  std::function<std::vector<double>(const std::vector<double>&)> right;
  std::function<std::vector<double>(const std::vector<double>&)> left;
  std::vector<double> atoms;
  bool jumps_everywhere = false;
  double tol = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  double scale = 1.0;
};

CdfSource source_of(const NumericLaw& law) {
  CdfSource s;
  s.right = [&law](const std::vector<double>& xs) { return cdf_on_grid(law, xs); };
  s.left = [&law](const std::vector<double>& xs) { return cdf_left_on_grid(law, xs); };
  for (const auto& a : law.atoms()) s.atoms.push_back(a.location);
  s.tol = law.controls().abs_tol;
  s.lo = law.lo();
  s.hi = law.hi();
  s.scale = law.scale();
  return s;
}

CdfSource source_of(const std::vector<double>& sorted) {
  CdfSource s;
  const double n = static_cast<double>(sorted.size());
  s.right = [&sorted, n](const std::vector<double>& xs) {
    std::vector<double> out(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i)
      out[i] = static_cast<double>(std::upper_bound(sorted.begin(), sorted.end(), xs[i]) - sorted.begin()) / n;
    return out;
  };
  s.left = [&sorted, n](const std::vector<double>& xs) {
    std::vector<double> out(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i)
      out[i] = static_cast<double>(std::lower_bound(sorted.begin(), sorted.end(), xs[i]) - sorted.begin()) / n;
    return out;
  };
  s.jumps_everywhere = true;
  return s;
}

struct GridPoint {
  double x;
  double fa, fb;    // right values
  double fal, fbl;  // left limits
  double gap() const { return std::max(std::abs(fa - fb), std::abs(fal - fbl)); }
};

bool is_atom(const CdfSource& s, double x) {
  return s.jumps_everywhere || std::find(s.atoms.begin(), s.atoms.end(), x) != s.atoms.end();
}

std::vector<GridPoint> evaluate(const CdfSource& a, const CdfSource& b, const std::vector<double>& xs) {
  const auto fa = a.right(xs);
  const auto fb = b.right(xs);
  std::vector<GridPoint> pts(xs.size());
  std::vector<double> left_a;
  std::vector<double> left_b;
  std::vector<std::size_t> jump_idx;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    pts[i] = {xs[i], fa[i], fb[i], fa[i], fb[i]};
    if (is_atom(a, xs[i]) || is_atom(b, xs[i])) jump_idx.push_back(i);
  }
  if (!jump_idx.empty()) {
    std::vector<double> jx;
    for (auto i : jump_idx) jx.push_back(xs[i]);
    const auto la = a.left(jx);
    const auto lb = b.left(jx);
    for (std::size_t k = 0; k < jump_idx.size(); ++k) {
      pts[jump_idx[k]].fal = la[k];
      pts[jump_idx[k]].fbl = lb[k];
    }
  }
  return pts;
}

DistanceEstimate sup_distance(const CdfSource& a, const CdfSource& b, const KolmogorovOptions& opts,
                              std::string method) {
  const double lo = std::min(a.lo, b.lo);
  const double hi = std::max(a.hi, b.hi);
  const double centre = 0.5 * (lo + hi);
  const double s = std::min(a.scale, b.scale);
  // sinh spacing: uniform near the centre, geometric in heavy tails.
  const double u0 = std::asinh((lo - centre) / s);
  const double u1 = std::asinh((hi - centre) / s);
  std::vector<double> xs;
  const int n = std::max(opts.grid, 2);
  for (int i = 0; i < n; ++i) xs.push_back(centre + s * std::sinh(u0 + (u1 - u0) * i / (n - 1)));
  for (double atom : a.atoms) xs.push_back(atom);
  for (double atom : b.atoms) xs.push_back(atom);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  auto pts = evaluate(a, b, xs);

  for (int round = 0; round < opts.refinements; ++round) {
    std::vector<std::size_t> peaks;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const double g = pts[i].gap();
      if ((i == 0 || g >= pts[i - 1].gap()) && (i + 1 == pts.size() || g >= pts[i + 1].gap()))
        peaks.push_back(i);
    }
    std::sort(peaks.begin(), peaks.end(),
              [&](std::size_t p, std::size_t q) { return pts[p].gap() > pts[q].gap(); });
    peaks.resize(std::min<std::size_t>(peaks.size(), static_cast<std::size_t>(opts.peaks)));
    std::vector<double> extra;
    for (auto i : peaks) {
      for (int side = -1; side <= 1; side += 2) {
        const long j = static_cast<long>(i) + side;
        if (j < 0 || j >= static_cast<long>(pts.size())) continue;
        const double x0 = pts[i].x;
        const double x1 = pts[static_cast<std::size_t>(j)].x;
        for (int k = 1; k <= opts.inserts; ++k) extra.push_back(x0 + (x1 - x0) * k / (opts.inserts + 1));
      }
    }
    if (extra.empty()) break;
    auto more = evaluate(a, b, extra);
    pts.insert(pts.end(), more.begin(), more.end());
    std::sort(pts.begin(), pts.end(), [](const GridPoint& p, const GridPoint& q) { return p.x < q.x; });
  }

  std::size_t best = 0;
  for (std::size_t i = 1; i < pts.size(); ++i)
    if (pts[i].gap() > pts[best].gap()) best = i;
  const double value = pts[best].gap();
  // Resolution: how much F_A - F_B still moves across the cells next to the argmax.
  double modulus = 0.0;
  const double d_best = pts[best].fa - pts[best].fb;
  const double dl_best = pts[best].fal - pts[best].fbl;
  if (best > 0) modulus = std::max(modulus, std::abs((pts[best - 1].fa - pts[best - 1].fb) - dl_best));
  if (best + 1 < pts.size()) modulus = std::max(modulus, std::abs((pts[best + 1].fal - pts[best + 1].fbl) - d_best));
  // Beyond the grid |F_A - F_B| is at most the larger tail mass.
  const auto& first = pts.front();
  const auto& last = pts.back();
  const double outside = std::max({first.fal, first.fbl, 1.0 - last.fa, 1.0 - last.fb});
  double error = modulus + a.tol + b.tol;
  if (outside > value) error += outside - value;

  DistanceEstimate est;
  est.metric = Metric::kolmogorov;
  est.value = value;
  est.error = error;
  est.location = pts[best].x;
  est.method = std::move(method) + ", " + std::to_string(pts.size()) + " grid points";
  return est;
}

std::vector<double> sorted_copy(const SampleBatch& batch) {
  std::vector<double> v = batch.values;
  std::sort(v.begin(), v.end());
  return v;
}

double w1_sorted(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() == b.size()) {
    double total = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) total += std::abs(a[i] - b[i]);
    return total / static_cast<double>(a.size());
  }
  // ∫ |F_a - F_b| dx by sweeping the merged order statistics.
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double total = 0.0;
  double x = std::min(a.front(), b.front());
  while (i < a.size() || j < b.size()) {
    const double next = (j >= b.size() || (i < a.size() && a[i] <= b[j])) ? a[i] : b[j];
    total += std::abs(i / na - j / nb) * (next - x);
    x = next;
    while (i < a.size() && a[i] == x) ++i;
    while (j < b.size() && b[j] == x) ++j;
  }
  return total;
}

void check_dictionary(const std::vector<TestFunction>& dict) {
  if (dict.empty()) throw std::invalid_argument("smooth_h3_lower needs a non-empty dictionary");
  for (const auto& h : dict)
    for (int k = 0; k <= 3; ++k)
      if (!(h.sup_norm(k) <= 1.0 + 1e-12))
        throw std::invalid_argument("dictionary member " + h.id() + " has a derivative norm above 1");
}

}  // namespace

DistanceEstimate kolmogorov(const NumericLaw& a, const NumericLaw& b, const KolmogorovOptions& opts) {
  return sup_distance(source_of(a), source_of(b), opts, "inversion");
}

DistanceEstimate kolmogorov(const NumericLaw& law, const SampleBatch& batch, const KolmogorovOptions& opts) {
  if (batch.values.empty()) throw std::invalid_argument("empty sample batch");
  const auto sorted = sorted_copy(batch);
  CdfSource emp = source_of(sorted);
  emp.lo = sorted.front();
  emp.hi = sorted.back();
  emp.scale = law.scale();
  return sup_distance(source_of(law), emp, opts, "inversion vs empirical");
}

DistanceEstimate kolmogorov(const SampleBatch& a, const SampleBatch& b) {
  if (a.values.empty() || b.values.empty()) throw std::invalid_argument("empty sample batch");
  const auto x = sorted_copy(a);
  const auto y = sorted_copy(b);
  const double na = static_cast<double>(x.size());
  const double nb = static_cast<double>(y.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double best = 0.0;
  double where = x.front();
  while (i < x.size() || j < y.size()) {
    const double t = (j >= y.size() || (i < x.size() && x[i] <= y[j])) ? x[i] : y[j];
    while (i < x.size() && x[i] == t) ++i;
    while (j < y.size() && y[j] == t) ++j;
    const double gap = std::abs(i / na - j / nb);
    if (gap > best) {
      best = gap;
      where = t;
    }
  }
  DistanceEstimate est;
  est.metric = Metric::kolmogorov;
  est.value = best;
  est.location = where;
  est.method = "two-sample empirical";
  return est;
}

DistanceEstimate wasserstein1_empirical(const SampleBatch& a, const SampleBatch& b, int splits) {
  if (a.values.empty() || b.values.empty()) throw std::invalid_argument("empty sample batch");
  DistanceEstimate est;
  est.metric = Metric::wasserstein1;
  est.value = w1_sorted(sorted_copy(a), sorted_copy(b));
  est.method = "sorted samples";
  const auto k = static_cast<std::size_t>(std::max(splits, 2));
  if (a.values.size() >= 2 * k && b.values.size() >= 2 * k) {
    std::vector<double> parts;
    for (std::size_t s = 0; s < k; ++s) {
      auto block = [&](const std::vector<double>& v) {
        const std::size_t len = v.size() / k;
        std::vector<double> out(v.begin() + static_cast<long>(s * len), v.begin() + static_cast<long>((s + 1) * len));
        std::sort(out.begin(), out.end());
        return out;
      };
      parts.push_back(w1_sorted(block(a.values), block(b.values)));
    }
    const double mean = std::accumulate(parts.begin(), parts.end(), 0.0) / static_cast<double>(k);
    double var = 0.0;
    for (double p : parts) var += (p - mean) * (p - mean);
    var /= static_cast<double>(k - 1);
    // A sub-batch estimate has k times the variance of the full-size one.
    est.error = std::sqrt(var / static_cast<double>(k));
    est.method += ", " + std::to_string(k) + "-way batch split";
  }
  return est;
}

QuadResult expectation(const NumericLaw& law, const TestFunction& h) {
  const auto& spec = h.spectrum();
  if (spec && !spec->has_density()) {
    double mass = 0.0;
    for (const auto& atom : spec->atoms) mass += std::abs(atom.second);
    const auto r = spectral_expectation(*spec, [&law](double z) { return law.cf()(z); }, 0.0, 0.0);
    return {r.value, 1e-15 * mass};
  }
  const auto r = law.expectation(h.fn(0), h.fn(1));
  const double width = law.hi() - law.lo();
  return {r.value, r.error + law.controls().abs_tol * h.sup_norm(1) * width};
}

DistanceEstimate smooth_h3_lower(const NumericLaw& a, const NumericLaw& b, const std::vector<TestFunction>& dict) {
  check_dictionary(dict);
  const auto ea = expectations(a, dict);
  const auto eb = expectations(b, dict);
  DistanceEstimate est;
  est.metric = Metric::smooth_h3_lower;
  est.value = -1.0;
  for (std::size_t i = 0; i < dict.size(); ++i) {
    const double gap = std::abs(ea[i].value - eb[i].value);
    if (gap > est.value) {
      est.value = gap;
      est.error = ea[i].error + eb[i].error;
      est.location = static_cast<double>(i);
      est.method = "expectations, best member " + dict[i].id();
    }
  }
  return est;
}

DistanceEstimate smooth_h3_lower(const SampleBatch& a, const SampleBatch& b, const std::vector<TestFunction>& dict) {
  check_dictionary(dict);
  if (a.values.size() < 2 || b.values.size() < 2) throw std::invalid_argument("sample batches too small");
  auto moments = [](const TestFunction& h, const std::vector<double>& v) {
    double mean = 0.0;
    for (double x : v) mean += h(x);
    mean /= static_cast<double>(v.size());
    double var = 0.0;
    for (double x : v) var += (h(x) - mean) * (h(x) - mean);
    var /= static_cast<double>(v.size() - 1);
    return std::pair{mean, var / static_cast<double>(v.size())};
  };
  std::vector<DistanceEstimate> per(dict.size());
  for_each_index(
      dict.size(),
      [&](std::size_t i) {
        const auto [ma, va] = moments(dict[i], a.values);
        const auto [mb, vb] = moments(dict[i], b.values);
        per[i].value = std::abs(ma - mb);
        per[i].error = 3.0 * std::sqrt(va + vb);
      },
      Exec::parallel);
  std::size_t best = 0;
  for (std::size_t i = 1; i < per.size(); ++i)
    if (per[i].value > per[best].value) best = i;
  DistanceEstimate est = per[best];
  est.metric = Metric::smooth_h3_lower;
  est.location = static_cast<double>(best);
  est.method = "sample means, best member " + dict[best].id();
  return est;
}

}  // namespace tsd
