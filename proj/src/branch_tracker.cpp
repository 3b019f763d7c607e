#include "kreinspec/branch_tracker.hpp"

#include "kreinspec/assignment.hpp"
#include "kreinspec/error.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <numeric>
#include <string>
#include <thread>

namespace kreinspec {

namespace {

template <class Fn>
void parallel_for(std::size_t n, int threads, Fn&& fn) {
  const auto workers = static_cast<std::size_t>(std::max(1, threads));
  if (workers <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  const auto count = std::min(workers, n);
  pool.reserve(count);
  for (std::size_t w = 0; w < count; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

std::size_t candidate_count(std::size_t tracked, std::size_t available, const SpectrumWindow& w) {
  if (w.keep == 0) return available;
  return std::min(available, 2 * tracked);
}

// Continues `previous` into `spectrum` (sorted in window order) by
// minimum-total-distance assignment. Distances to the linear prediction, if
// given, enter with a tiny weight so that ties (exact crossings) follow the
// branch slope.
std::vector<cplx> continue_values(const std::vector<cplx>& previous,
                                  const std::vector<cplx>& spectrum, const SpectrumWindow& window,
                                  const TrackerConfig& cfg,
                                  const std::vector<cplx>* predicted = nullptr) {
  constexpr double tie_weight = 1e-6;
  const auto m = candidate_count(previous.size(), spectrum.size(), window);
  if (m < previous.size()) throw InvalidInput("family dimension changed during a sweep");
  Eigen::MatrixXd cost(static_cast<Eigen::Index>(previous.size()), static_cast<Eigen::Index>(m));
  for (std::size_t i = 0; i < previous.size(); ++i)
    for (std::size_t j = 0; j < m; ++j)
      cost(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          std::abs(previous[i] - spectrum[j]) +
          (predicted ? tie_weight * std::abs((*predicted)[i] - spectrum[j]) : 0.0);
  const auto assign = previous.size() <= cfg.exact_assignment_limit ? optimal_assignment(cost)
                                                                    : greedy_assignment(cost);
  std::vector<cplx> out(previous.size());
  for (std::size_t i = 0; i < previous.size(); ++i) out[i] = spectrum[static_cast<std::size_t>(assign[i])];
  return out;
}

// a + (a - before) * ratio, elementwise.
std::vector<cplx> extrapolate(const std::vector<cplx>& before, const std::vector<cplx>& a, double ratio) {
  std::vector<cplx> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + (a[i] - before[i]) * ratio;
  return out;
}

double max_motion(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

bool pair_complex(cplx a, cplx b, const TrackerConfig& cfg) { return !cfg.is_real(a) || !cfg.is_real(b); }

// Per-sample view of a set of branches.
struct Track {
  std::vector<double> params;
  std::vector<std::vector<cplx>> values;  // [sample][branch]
  std::vector<std::vector<bool>> real;    // [sample][branch]
};

Track to_track(const std::vector<SpectralBranch>& branches) {
  Track t;
  if (branches.empty()) return t;
  const auto samples = branches.front().samples.size();
  for (const auto& b : branches) {
    if (b.samples.size() != samples) throw InvalidInput("branches do not share a parameter grid");
  }
  t.params.resize(samples);
  t.values.assign(samples, std::vector<cplx>(branches.size()));
  t.real.assign(samples, std::vector<bool>(branches.size()));
  for (std::size_t s = 0; s < samples; ++s) {
    t.params[s] = branches.front().samples[s].parameter;
    for (std::size_t b = 0; b < branches.size(); ++b) {
      t.values[s][b] = branches[b].samples[s].value;
      t.real[s][b] = branches[b].samples[s].is_real;
    }
  }
  return t;
}

// Two entries of `values` nearest `target`.
std::array<std::size_t, 2> nearest_two(const std::vector<cplx>& values, cplx target) {
  std::vector<std::size_t> idx(values.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::partial_sort(idx.begin(), idx.begin() + 2, idx.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(values[a] - target) < std::abs(values[b] - target);
  });
  return {idx[0], idx[1]};
}

int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

}  // namespace

int resolve_thread_count(const TrackerConfig& cfg) {
  if (cfg.threads > 0) return cfg.threads;
  if (const char* env = std::getenv("KREINSPEC_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

std::vector<SpectralBranch> sweep(const MatrixFamily& family, double lo, double hi, int steps,
                                  const TrackerConfig& cfg) {
  if (!(lo < hi)) throw InvalidInput("sweep: range must satisfy lo < hi");
  if (steps < 2) throw InvalidInput("sweep: at least two steps are required");

  std::vector<double> grid(static_cast<std::size_t>(steps));
  for (int k = 0; k < steps; ++k) grid[static_cast<std::size_t>(k)] = lo + (hi - lo) * k / (steps - 1);
  grid.back() = hi;

  std::vector<std::vector<cplx>> spectra(grid.size());
  parallel_for(grid.size(), resolve_thread_count(cfg),
               [&](std::size_t k) { spectra[k] = family.spectrum(grid[k]); });

  const auto n = spectra.front().size();
  for (const auto& s : spectra) {
    if (s.size() != n) throw InvalidInput("sweep: family must have a fixed dimension");
  }
  const auto& window = family.window();
  const auto keep = window.keep == 0 ? n : std::min(window.keep, n);

  // first pass: plain continuation on the uniform grid sets the jump bound
  std::vector<cplx> current(spectra.front().begin(), spectra.front().begin() + static_cast<std::ptrdiff_t>(keep));
  double scale = 0.0;
  for (const cplx v : current) scale = std::max(scale, std::abs(v));
  std::vector<double> motions;
  motions.reserve(keep * (grid.size() - 1));
  {
    auto prev = current;
    std::vector<cplx> before;
    for (std::size_t k = 1; k < grid.size(); ++k) {
      const auto pred = before.empty() ? std::vector<cplx>{} : extrapolate(before, prev, 1.0);
      auto next = continue_values(prev, spectra[k], window, cfg, before.empty() ? nullptr : &pred);
      for (std::size_t b = 0; b < keep; ++b) motions.push_back(std::abs(next[b] - prev[b]));
      before = std::move(prev);
      prev = std::move(next);
    }
  }
  auto mid_it = motions.begin() + static_cast<std::ptrdiff_t>(motions.size() / 2);
  std::nth_element(motions.begin(), mid_it, motions.end());
  const double bound = std::max(cfg.jump_factor * *mid_it, cfg.jump_floor * (1.0 + scale));

  // second pass: continuation with local interval halving
  std::vector<double> params{grid.front()};
  std::vector<std::vector<cplx>> values{current};

  auto segment = [&](auto&& self, double pa, const std::vector<cplx>& va, double pb,
                     const std::vector<cplx>& spectrum_b, int depth) -> std::vector<cplx> {
    // values.back() is va at pa; the sample before it drives the predictor
    std::vector<cplx> pred;
    if (values.size() >= 2) {
      const double ratio = (pb - pa) / (pa - params[params.size() - 2]);
      pred = extrapolate(values[values.size() - 2], va, ratio);
    }
    auto vb = continue_values(va, spectrum_b, window, cfg, pred.empty() ? nullptr : &pred);
    if (max_motion(va, vb) <= bound) {
      params.push_back(pb);
      values.push_back(vb);
      return vb;
    }
    if (depth >= cfg.max_refinements) {
      throw StepRefinementRequired("sweep: eigenvalue jump exceeds the continuation bound on [" +
                                       std::to_string(pa) + ", " + std::to_string(pb) + "]",
                                   pa, pb);
    }
    const double pm = 0.5 * (pa + pb);
    const auto vm = self(self, pa, va, pm, family.spectrum(pm), depth + 1);
    return self(self, pm, vm, pb, spectrum_b, depth + 1);
  };

  for (std::size_t k = 1; k < grid.size(); ++k) {
    current = segment(segment, grid[k - 1], current, grid[k], spectra[k], 0);
  }

  std::vector<SpectralBranch> branches(keep);
  for (std::size_t b = 0; b < keep; ++b) {
    branches[b].branch_id = static_cast<int>(b);
    branches[b].samples.reserve(params.size());
    for (std::size_t s = 0; s < params.size(); ++s) {
      const cplx v = values[s][b];
      branches[b].samples.push_back({params[s], v, cfg.is_real(v)});
    }
  }
  return branches;
}

std::vector<ExceptionalPoint> find_eps(const std::vector<SpectralBranch>& branches,
                                       const MatrixFamily& family, double precision,
                                       const TrackerConfig& cfg) {
  if (!(precision > 0.0)) throw InvalidInput("find_eps: precision must be positive");
  const Track track = to_track(branches);
  const auto nb = branches.size();
  const auto& window = family.window();
  std::vector<ExceptionalPoint> eps;

  for (std::size_t k = 0; k + 1 < track.params.size(); ++k) {
    std::vector<std::size_t> flipped;
    for (std::size_t b = 0; b < nb; ++b) {
      if (track.real[k][b] != track.real[k + 1][b]) flipped.push_back(b);
    }
    if (flipped.empty()) continue;

    const double a = track.params[k];
    const double c = track.params[k + 1];

    // link each flipped branch to its conjugate partner on the side where it
    // is complex; connected components are the coalescing groups
    std::vector<std::size_t> parent(nb);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    std::vector<bool> involved(nb, false);
    for (const auto bi : flipped) {
      const auto side = track.real[k][bi] ? k + 1 : k;
      const cplx target = std::conj(track.values[side][bi]);
      std::size_t best = nb;
      for (std::size_t bj = 0; bj < nb; ++bj) {
        if (bj == bi || track.real[side][bj]) continue;
        if (best == nb || std::abs(track.values[side][bj] - target) < std::abs(track.values[side][best] - target))
          best = bj;
      }
      if (best == nb) throw AmbiguousBracket("find_eps: reality flip without a conjugate partner", a, c);
      involved[bi] = involved[best] = true;
      parent[find(bi)] = find(best);
    }
    std::vector<std::vector<std::size_t>> groups;
    {
      std::vector<std::size_t> root_slot(nb, nb);
      for (std::size_t b = 0; b < nb; ++b) {
        if (!involved[b]) continue;
        const auto r = find(b);
        if (root_slot[r] == nb) {
          root_slot[r] = groups.size();
          groups.emplace_back();
        }
        groups[root_slot[r]].push_back(b);
      }
    }

    for (const auto& group : groups) {
      if (group.size() > 3) {
        throw AmbiguousBracket("find_eps: more than three branches change reality in one interval", a, c);
      }
      auto state = [&](const std::vector<cplx>& v) {
        unsigned bits = 0;
        for (std::size_t i = 0; i < group.size(); ++i)
          if (!cfg.is_real(v[group[i]])) bits |= 1u << i;
        return bits;
      };
      auto check_conjugate = [&](const std::vector<cplx>& v, double lo_p, double hi_p) {
        for (const auto bi : group) {
          if (cfg.is_real(v[bi])) continue;
          double best = std::numeric_limits<double>::infinity();
          for (const auto bj : group)
            if (bj != bi) best = std::min(best, std::abs(v[bj] - std::conj(v[bi])));
          if (best > 1e-6 * (1.0 + std::abs(v[bi]))) {
            throw AmbiguousBracket("find_eps: complex branch without conjugate partner inside bracket", lo_p, hi_p);
          }
        }
      };
      const unsigned state_a = state(track.values[k]);
      const unsigned state_c = state(track.values[k + 1]);
      if (state_a == state_c) continue;

      // quarter-point scan: more than one change means the bracket hides
      // several transitions
      {
        auto v = track.values[k];
        unsigned last = state_a;
        int changes = 0;
        for (int q = 1; q <= 3; ++q) {
          const double p = a + (c - a) * q / 4.0;
          v = continue_values(v, family.spectrum(p), window, cfg);
          check_conjugate(v, a, c);
          const unsigned now = state(v);
          changes += now != last;
          last = now;
        }
        changes += state_c != last;
        if (changes != 1) {
          throw AmbiguousBracket("find_eps: reality pattern is not monotone on [" + std::to_string(a) + ", " +
                                     std::to_string(c) + "]",
                                 a, c);
        }
      }

      double lo = a, hi = c;
      auto v_lo = track.values[k];
      int iterations = 0;
      while (hi - lo > precision) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        auto vm = continue_values(v_lo, family.spectrum(mid), window, cfg);
        check_conjugate(vm, lo, hi);
        if (state(vm) == state_a) {
          lo = mid;
          v_lo = std::move(vm);
        } else {
          hi = mid;
        }
        ++iterations;
      }
      const double at = 0.5 * (lo + hi);
      const auto vm = continue_values(v_lo, family.spectrum(at), window, cfg);

      ExceptionalPoint ep;
      ep.parameter = at;
      ep.order = static_cast<int>(group.size());
      cplx sum{};
      double gap = 0.0;
      for (const auto bi : group) {
        sum += vm[bi];
        for (const auto bj : group) gap = std::max(gap, std::abs(vm[bi] - vm[bj]));
      }
      ep.eigenvalue = sum / static_cast<double>(group.size());
      ep.branch_ids = {static_cast<int>(group.front()), static_cast<int>(group.back())};
      ep.gap_residual = gap;
      ep.bracket_width = hi - lo;
      ep.iterations = iterations;
      if (ep.order == 3) {
        std::vector<cplx> members;
        for (const auto bi : group) members.push_back(vm[bi]);
        try {
          ep.jordan_type = jordan_structure(family.matrix(at), make_cluster(members), {}).jordan_type;
        } catch (const DegenerateThreshold&) {
          ep.jordan_type = JordanType::Higher;
        }
      }
      eps.push_back(ep);
    }
  }
  std::sort(eps.begin(), eps.end(),
            [](const ExceptionalPoint& x, const ExceptionalPoint& y) { return x.parameter < y.parameter; });
  return eps;
}

ExponentFit ep_exponent_check(const ExceptionalPoint& ep, const MatrixFamily& family,
                              const ExponentFitOptions& opts) {
  if (!(opts.window_hi > 0.0) || !(opts.decades > 0.0)) {
    throw InvalidInput("exponent fit window: window_hi and decades must be positive");
  }
  if (opts.points < 3) throw InvalidInput("exponent fit window: at least three points are required");
  const double w_hi = opts.window_hi;
  const double w_lo = w_hi * std::pow(10.0, -opts.decades);
  if (w_lo <= 4.0 * ep.bracket_width) {
    throw InvalidInput("exponent fit window: lower end is within the EP bracket resolution");
  }

  auto pair_at = [&](double p) {
    const auto spec = family.spectrum(p);
    const auto [i, j] = nearest_two(spec, ep.eigenvalue);
    return std::pair{spec[i], spec[j]};
  };

  ExponentFit fit;
  fit.side = opts.side;
  if (fit.side == 0) {
    const TrackerConfig reality;
    const auto [pa, pb] = pair_at(ep.parameter + w_hi);
    const auto [ma, mb] = pair_at(ep.parameter - w_hi);
    const bool plus_complex = pair_complex(pa, pb, reality);
    const bool minus_complex = pair_complex(ma, mb, reality);
    fit.side = (minus_complex && !plus_complex) ? -1 : 1;
  }

  std::vector<double> xs, ys;
  for (int k = 0; k < opts.points; ++k) {
    const double delta = w_lo * std::pow(w_hi / w_lo, static_cast<double>(k) / (opts.points - 1));
    const auto [a, b] = pair_at(ep.parameter + fit.side * delta);
    const double gap = std::abs(a - b);
    if (gap > 0.0 && std::isfinite(gap)) {
      xs.push_back(std::log(delta));
      ys.push_back(std::log(gap));
    }
  }
  if (xs.size() < 3) throw InvalidInput("exponent fit window yields fewer than three usable points");

  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  fit.exponent = sxy / sxx;
  fit.intercept = my - fit.exponent * mx;
  fit.points = static_cast<int>(xs.size());
  fit.square_root = std::abs(fit.exponent - 0.5) <= opts.square_root_tol;
  return fit;
}

std::vector<cplx> local_cluster(std::span<const cplx> spectrum, cplx reference, int cluster_size,
                                const TrackerConfig& cfg) {
  if (cluster_size < 1) throw InvalidInput("local_cluster: size must be positive");
  std::vector<std::size_t> idx(spectrum.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(spectrum[a] - reference) < std::abs(spectrum[b] - reference);
  });
  std::vector<bool> used(spectrum.size(), false);
  std::vector<cplx> out;
  for (const auto i : idx) {
    if (static_cast<int>(out.size()) >= cluster_size) break;
    if (used[i]) continue;
    used[i] = true;
    out.push_back(spectrum[i]);
    if (cfg.is_real(spectrum[i])) continue;
    std::size_t partner = spectrum.size();
    for (const auto j : idx) {
      if (used[j]) continue;
      if (partner == spectrum.size() ||
          std::abs(spectrum[j] - std::conj(spectrum[i])) < std::abs(spectrum[partner] - std::conj(spectrum[i]))) {
        partner = j;
      }
    }
    if (partner != spectrum.size()) {
      used[partner] = true;
      out.push_back(spectrum[partner]);
    }
  }
  return out;
}

double local_discriminant(std::span<const cplx> spectrum, cplx reference, int cluster_size,
                          const TrackerConfig& cfg) {
  const auto cluster = local_cluster(spectrum, reference, cluster_size, cfg);
  const auto n = cluster.size();
  if (n < 2) return 1.0;
  const cplx mean = std::accumulate(cluster.begin(), cluster.end(), cplx{}) / static_cast<double>(n);

  // monic coefficients of prod (x - (l_k - mean)), descending
  std::vector<cplx> c{1.0};
  for (const cplx l : cluster) {
    const cplx mu = l - mean;
    c.push_back(0.0);
    for (std::size_t i = c.size() - 1; i > 0; --i) c[i] -= mu * c[i - 1];
  }
  switch (n) {
    case 2:
      return (c[1] * c[1] - 4.0 * c[2]).real();
    case 3: {
      const double a = c[1].real(), b = c[2].real(), d = c[3].real();
      return 18.0 * a * b * d - 4.0 * a * a * a * d + a * a * b * b - 4.0 * b * b * b - 27.0 * d * d;
    }
    case 4:
      return quartic_discriminant({c[1].real(), c[2].real(), c[3].real(), c[4].real()});
    default: {
      cplx prod = 1.0;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) prod *= (cluster[i] - cluster[j]) * (cluster[i] - cluster[j]);
      return prod.real();
    }
  }
}

namespace {

// EP record at a zero of the local discriminant bracketed by [lo, hi].
ExceptionalPoint ep_from_bracket(const MatrixFamily& family, double lo, double hi, cplx reference,
                                 int iterations, const TrackerConfig& cfg) {
  const double at = 0.5 * (lo + hi);
  const auto spec = family.spectrum(at);
  const auto cluster = local_cluster(spec, reference, 3, cfg);
  // the coalescing pair is the closest pair inside the cluster
  std::size_t bi = 0, bj = 1;
  for (std::size_t i = 0; i < cluster.size(); ++i)
    for (std::size_t j = i + 1; j < cluster.size(); ++j)
      if (std::abs(cluster[i] - cluster[j]) < std::abs(cluster[bi] - cluster[bj])) {
        bi = i;
        bj = j;
      }
  auto index_of = [&](cplx v) {
    return static_cast<int>(std::find(spec.begin(), spec.end(), v) - spec.begin());
  };
  ExceptionalPoint ep;
  ep.parameter = at;
  ep.eigenvalue = 0.5 * (cluster[bi] + cluster[bj]);
  const int ia = index_of(cluster[bi]), ib = index_of(cluster[bj]);
  ep.branch_ids = {std::min(ia, ib), std::max(ia, ib)};
  ep.gap_residual = std::abs(cluster[bi] - cluster[bj]);
  ep.bracket_width = hi - lo;
  ep.iterations = iterations;
  return ep;
}

}  // namespace

PairSearch locate_ep_pair(const MatrixFamily& family, double lo, double hi, cplx reference,
                          double precision, const TrackerConfig& cfg, int samples) {
  if (!(lo < hi)) throw InvalidInput("locate_ep_pair: window must satisfy lo < hi");
  if (samples < 5) throw InvalidInput("locate_ep_pair: at least five samples are required");
  auto disc = [&](double p) { return local_discriminant(family.spectrum(p), reference, 3, cfg); };

  std::vector<double> ps(static_cast<std::size_t>(samples)), ds(ps.size());
  for (int k = 0; k < samples; ++k) ps[static_cast<std::size_t>(k)] = lo + (hi - lo) * k / (samples - 1);
  ps.back() = hi;
  parallel_for(ps.size(), resolve_thread_count(cfg), [&](std::size_t k) { ds[k] = disc(ps[k]); });

  const int end_sign = sign_of(ds.front());
  if (end_sign == 0 || sign_of(ds.back()) != end_sign) return {PairSearchStatus::EdgeMismatch, std::nullopt};

  // runs of samples with the opposite sign
  std::vector<std::pair<std::size_t, std::size_t>> runs;
  for (std::size_t k = 1; k + 1 < ps.size(); ++k) {
    if (sign_of(ds[k]) * end_sign >= 0) continue;
    if (!runs.empty() && runs.back().second + 1 == k) {
      runs.back().second = k;
    } else {
      runs.emplace_back(k, k);
    }
  }
  if (runs.size() > 1) {
    std::vector<double> where;
    for (const auto& [a, b] : runs) {
      where.push_back(ps[a]);
      where.push_back(ps[b]);
    }
    throw Ambiguity("locate_ep_pair: several EP pairs inside the search window", where);
  }

  std::array<double, 2> left{}, right{};
  if (runs.size() == 1) {
    left = {ps[runs[0].first - 1], ps[runs[0].first]};
    right = {ps[runs[0].second], ps[runs[0].second + 1]};
  } else {
    // no sign change on the grid: minimize end_sign * D around its extremum
    std::size_t k = 1;
    for (std::size_t i = 1; i + 1 < ps.size(); ++i)
      if (end_sign * ds[i] < end_sign * ds[k]) k = i;
    double a = ps[k - 1], b = ps[k + 1];
    const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - ratio * (b - a), x2 = a + ratio * (b - a);
    double f1 = end_sign * disc(x1), f2 = end_sign * disc(x2);
    while (b - a > precision) {
      if (f1 < f2) {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - ratio * (b - a);
        f1 = end_sign * disc(x1);
      } else {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + ratio * (b - a);
        f2 = end_sign * disc(x2);
      }
      if (f1 < 0.0 || f2 < 0.0) break;
    }
    const double xm = f1 < f2 ? x1 : x2;
    if (std::min(f1, f2) >= 0.0) return {PairSearchStatus::Absent, std::nullopt};
    left = {ps[k - 1], xm};
    right = {xm, ps[k + 1]};
  }

  // bisect each zero of the discriminant on its sign
  auto refine = [&](std::array<double, 2> br, int* iterations) {
    const int s_lo = sign_of(disc(br[0]));
    int it = 0;
    while (br[1] - br[0] > precision) {
      const double mid = 0.5 * (br[0] + br[1]);
      if (mid <= br[0] || mid >= br[1]) break;
      if (sign_of(disc(mid)) == s_lo) {
        br[0] = mid;
      } else {
        br[1] = mid;
      }
      ++it;
    }
    *iterations = it;
    return br;
  };
  int it_left = 0, it_right = 0;
  left = refine(left, &it_left);
  right = refine(right, &it_right);

  EpPair pair;
  pair.first = ep_from_bracket(family, left[0], left[1], reference, it_left, cfg);
  pair.second = ep_from_bracket(family, right[0], right[1], reference, it_right, cfg);
  const auto mid_cluster = local_cluster(family.spectrum(pair.center()), reference, 3, cfg);
  pair.reference = std::accumulate(mid_cluster.begin(), mid_cluster.end(), cplx{}) /
                   static_cast<double>(mid_cluster.size());
  return {PairSearchStatus::Found, pair};
}

namespace {

// Follows one EP pair across secondary values with an extrapolated window.
class PairFollower {
 public:
  PairFollower(const TwoParameterFamily& family, std::array<double, 2> range, double precision,
               const TrackerConfig& cfg, const TriplePointOptions& opts)
      : family_(family), range_(range), precision_(precision), cfg_(cfg), opts_(opts) {}

  // Full sweep at the first secondary value; picks the closest adjacent pair.
  EpPair start(double secondary, std::vector<ExceptionalPoint>* all_eps) {
    const auto fam = family_(secondary);
    const auto branches = sweep(fam, range_[0], range_[1], opts_.primary_steps, cfg_);
    auto eps = find_eps(branches, fam, precision_, cfg_);
    if (all_eps) *all_eps = eps;
    if (eps.size() < 2) {
      throw InvalidInput("triple-point search needs at least two EPs at the secondary-range start, found " +
                         std::to_string(eps.size()));
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i + 1 < eps.size(); ++i) {
      if (eps[i + 1].parameter - eps[i].parameter < eps[best + 1].parameter - eps[best].parameter) best = i;
    }
    const double best_sep = eps[best + 1].parameter - eps[best].parameter;
    for (std::size_t i = 0; i + 1 < eps.size(); ++i) {
      if (i == best) continue;
      const double sep = eps[i + 1].parameter - eps[i].parameter;
      if (sep <= 1.1 * best_sep) {
        std::vector<double> where;
        for (const auto& e : eps) where.push_back(e.parameter);
        throw Ambiguity("triple-point search: closest EP pair is not unique", where);
      }
    }
    const auto& a = eps[best];
    const auto& b = eps[best + 1];
    const auto fam_spec = fam.spectrum(0.5 * (a.parameter + b.parameter));
    const auto cluster = local_cluster(fam_spec, 0.5 * (a.eigenvalue + b.eigenvalue), 3, cfg_);
    const cplx ref = std::accumulate(cluster.begin(), cluster.end(), cplx{}) / static_cast<double>(cluster.size());

    EpPair pair{a, b, ref};
    const double sep = b.parameter - a.parameter;
    const auto found = search(fam, a.parameter - sep, b.parameter + sep, ref);
    if (found) pair = *found;
    commit(secondary, pair);
    return pair;
  }

  // Searches at `secondary` without committing.
  std::optional<EpPair> probe(double secondary) const {
    const auto fam = family_(secondary);
    const auto& last = pairs_.back();
    double center = last.center();
    double shift = 0.0;
    if (pairs_.size() >= 2) {
      const auto& prev = pairs_[pairs_.size() - 2];
      const double ds = secondaries_.back() - secondaries_[secondaries_.size() - 2];
      if (ds != 0.0) {
        shift = (last.center() - prev.center()) / ds * (secondary - secondaries_.back());
        center += shift;
      }
    }
    const double margin = std::max(64.0 * precision_, 1e-3 * last.separation());
    const double half = 2.0 * last.separation() + std::abs(shift) + margin;
    if (auto p = search(fam, center - half, center + half, last.reference)) return p;
    // one wider retry before declaring the pair gone
    return search(fam, center - 4.0 * half, center + 4.0 * half, last.reference);
  }

  void commit(double secondary, const EpPair& pair) {
    secondaries_.push_back(secondary);
    pairs_.push_back(pair);
  }

  const EpPair& last() const { return pairs_.back(); }
  const std::vector<double>& secondaries() const { return secondaries_; }
  const std::vector<EpPair>& pairs() const { return pairs_; }

 private:
  std::optional<EpPair> search(const MatrixFamily& fam, double lo, double hi, cplx ref) const {
    lo = std::max(lo, range_[0]);
    hi = std::min(hi, range_[1]);
    for (int widen = 0; widen < 4 && lo < hi; ++widen) {
      const auto res = locate_ep_pair(fam, lo, hi, ref, precision_, cfg_, opts_.window_samples);
      if (res.status == PairSearchStatus::Found) return res.pair;
      if (res.status == PairSearchStatus::Absent) return std::nullopt;
      const double half = hi - lo;
      lo = std::max(range_[0], lo - half / 2.0);
      hi = std::min(range_[1], hi + half / 2.0);
    }
    return std::nullopt;
  }

  const TwoParameterFamily& family_;
  std::array<double, 2> range_;
  double precision_;
  TrackerConfig cfg_;
  TriplePointOptions opts_;
  std::vector<double> secondaries_;
  std::vector<EpPair> pairs_;
};

}  // namespace

std::vector<EpPairTrack> track_ep_pair(const TwoParameterFamily& family,
                                       std::span<const double> secondaries,
                                       std::array<double, 2> primary_range, double precision,
                                       const TrackerConfig& cfg, const TriplePointOptions& opts) {
  std::vector<EpPairTrack> out;
  if (secondaries.empty()) return out;
  PairFollower follower(family, primary_range, precision, cfg, opts);
  out.push_back({secondaries[0], follower.start(secondaries[0], nullptr)});
  bool alive = true;
  for (std::size_t k = 1; k < secondaries.size(); ++k) {
    std::optional<EpPair> pair;
    if (alive) pair = follower.probe(secondaries[k]);
    if (pair) {
      follower.commit(secondaries[k], *pair);
    } else {
      alive = false;
    }
    out.push_back({secondaries[k], pair});
  }
  return out;
}

TriplePointCandidate find_triple_point(const TwoParameterFamily& family,
                                       std::array<double, 2> primary_range,
                                       std::array<double, 2> secondary_range, double precision,
                                       const TrackerConfig& cfg, const TriplePointOptions& opts) {
  if (!(primary_range[0] < primary_range[1])) throw InvalidInput("find_triple_point: empty primary range");
  if (secondary_range[0] == secondary_range[1]) throw InvalidInput("find_triple_point: empty secondary range");
  if (!(precision > 0.0)) throw InvalidInput("find_triple_point: precision must be positive");
  if (opts.secondary_steps < 1) throw InvalidInput("find_triple_point: secondary_steps must be positive");

  TriplePointCandidate out;
  PairFollower follower(family, primary_range, precision, cfg, opts);
  follower.start(secondary_range[0], &out.initial_eps);

  const double span = secondary_range[1] - secondary_range[0];
  double s_alive = secondary_range[0];
  std::optional<double> s_gone;
  for (int k = 1; k <= opts.secondary_steps; ++k) {
    const double s = secondary_range[0] + span * k / opts.secondary_steps;
    if (auto pair = follower.probe(s)) {
      follower.commit(s, *pair);
      s_alive = s;
    } else {
      s_gone = s;
      break;
    }
  }

  if (s_gone) {
    double alive = s_alive, gone = *s_gone;
    while (std::abs(gone - alive) > precision) {
      const double mid = 0.5 * (alive + gone);
      if (mid == alive || mid == gone) break;
      if (auto pair = follower.probe(mid)) {
        follower.commit(mid, *pair);
        alive = mid;
      } else {
        gone = mid;
      }
    }
    out.coalesced = true;
    out.secondary_parameter = 0.5 * (alive + gone);
  } else {
    out.secondary_parameter = follower.secondaries().back();
  }

  for (std::size_t i = 0; i < follower.pairs().size(); ++i) {
    out.ep_separation_history.emplace_back(follower.secondaries()[i], follower.pairs()[i].separation());
  }

  const auto& last = follower.last();
  out.primary_parameter = last.center();
  out.eigenvalue = last.reference;
  if (out.coalesced) {
    const auto fam = family(out.secondary_parameter);
    const auto spec = fam.spectrum(out.primary_parameter);
    const auto cluster = make_cluster(local_cluster(spec, last.reference, 3, cfg));
    out.eigenvalue = cluster.center;
    out.multiplicity = jordan_structure(fam.matrix(out.primary_parameter), cluster, opts.numkit);
    out.jordan_type = out.multiplicity->jordan_type;
  }
  return out;
}

}  // namespace kreinspec
