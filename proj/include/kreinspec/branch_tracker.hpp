#pragma once

// Parameter sweeps with eigenvalue-branch continuation, exceptional-point
// (EP) detection and refinement, and the search for coalescing EP pairs
// (spectral triple points).

#include "kreinspec/family.hpp"
#include "kreinspec/numkit.hpp"

#include <array>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace kreinspec {

struct TrackerConfig {
  /// A sample counts as real when |Im l| < reality_rel * (1 + |l|).
  double reality_rel = 1e-8;
  /// Jump bound = max(jump_factor * median step motion, jump_floor * (1 + spectral scale)).
  double jump_factor = 10.0;
  double jump_floor = 1e-10;
  /// Interval halvings allowed before a jump-bound violation is reported.
  int max_refinements = 16;
  /// Tracked-branch count up to which the exact assignment is used.
  std::size_t exact_assignment_limit = 64;
  /// Worker threads for spectrum evaluation; 0 reads KREINSPEC_THREADS and
  /// falls back to the hardware concurrency.
  int threads = 0;

  bool is_real(cplx v) const { return std::abs(v.imag()) < reality_rel * (1.0 + std::abs(v)); }
};

struct BranchSample {
  double parameter = 0.0;
  cplx value;
  bool is_real = false;
};

struct SpectralBranch {
  int branch_id = 0;
  std::vector<BranchSample> samples;  // strictly increasing parameter
};

/// Spectra on a uniform grid of `steps` points over [lo, hi], continued by
/// minimum-total-distance assignment between consecutive samples. Intervals
/// where a branch moves further than the jump bound are halved up to
/// max_refinements times (all branches share the refined grid); a remaining
/// violation raises StepRefinementRequired.
std::vector<SpectralBranch> sweep(const MatrixFamily& family, double lo, double hi, int steps,
                                  const TrackerConfig& cfg = {});

struct ExceptionalPoint {
  double parameter = 0.0;
  cplx eigenvalue;
  std::array<int, 2> branch_ids{-1, -1};
  int order = 2;
  JordanType jordan_type = JordanType::DoubleDefective;
  double gap_residual = 0.0;   // |l_i - l_j| at the refined parameter
  double bracket_width = 0.0;  // final bisection bracket
  int iterations = 0;
};

/// Every sample interval in which a branch pair switches between a real pair
/// and a conjugate pair is bisected on "the pair is complex" down to
/// `precision`. Flipped branches are grouped with their conjugate partners;
/// a group of three (a real branch trading places with a conjugate pair) is
/// reported with order 3 and a jordan_structure classification. Raises
/// AmbiguousBracket when the reality pattern changes more than once inside
/// the interval, a flip has no conjugate partner, or more than three
/// branches are involved.
std::vector<ExceptionalPoint> find_eps(const std::vector<SpectralBranch>& branches,
                                       const MatrixFamily& family, double precision,
                                       const TrackerConfig& cfg = {});

struct ExponentFitOptions {
  double window_hi = 1e-3;  // largest |p - p*| in the fit
  double decades = 1.0;     // fit over [window_hi * 10^-decades, window_hi]
  int points = 9;
  int side = 0;             // +1 / -1, or 0 to prefer the side where the pair is complex
  double square_root_tol = 0.1;
};

struct ExponentFit {
  double exponent = 0.0;
  double intercept = 0.0;  // log|gap| at |p - p*| = 1
  int points = 0;
  int side = 1;
  bool square_root = false;  // |exponent - 1/2| <= square_root_tol
};

/// Least-squares slope of log|l_i - l_j| against log|p - p*| for the two
/// eigenvalues nearest the EP eigenvalue. Raises InvalidInput when the
/// window is too close to the EP bracket or yields fewer than three points.
ExponentFit ep_exponent_check(const ExceptionalPoint& ep, const MatrixFamily& family,
                              const ExponentFitOptions& opts = {});

/// Smallest conjugation-closed set of at least `cluster_size` eigenvalues
/// nearest `reference`.
std::vector<cplx> local_cluster(std::span<const cplx> spectrum, cplx reference,
                                int cluster_size, const TrackerConfig& cfg = {});

/// Discriminant of prod (x - l_k) over local_cluster(...), evaluated from
/// the cluster's symmetric functions about its mean. Real for conjugation
/// closed clusters; negative when the cluster holds an odd number of
/// conjugate pairs, zero at a coalescence.
double local_discriminant(std::span<const cplx> spectrum, cplx reference, int cluster_size = 3,
                          const TrackerConfig& cfg = {});

struct EpPair {
  ExceptionalPoint first;   // smaller primary parameter
  ExceptionalPoint second;
  cplx reference;           // cluster mean between the two EPs
  double separation() const { return second.parameter - first.parameter; }
  double center() const { return 0.5 * (first.parameter + second.parameter); }
};

enum class PairSearchStatus { Found, Absent, EdgeMismatch };

struct PairSearch {
  PairSearchStatus status = PairSearchStatus::Absent;
  std::optional<EpPair> pair;
};

/// Looks for two EPs of the eigenvalue cluster near `reference` inside
/// [lo, hi]: samples the local discriminant, and if no sign change shows up
/// minimizes it around its extremum, so pairs closer than the sample spacing
/// are still found. EdgeMismatch means the window ends disagree in sign (an
/// odd number of EPs inside).
PairSearch locate_ep_pair(const MatrixFamily& family, double lo, double hi, cplx reference,
                          double precision, const TrackerConfig& cfg = {}, int samples = 41);

struct TriplePointOptions {
  int primary_steps = 201;
  int secondary_steps = 16;
  int window_samples = 41;
  NumkitTolerances numkit;
};

struct EpPairTrack {
  double secondary = 0.0;
  std::optional<EpPair> pair;
};

/// Follows the closest adjacent EP pair found at secondaries[0] (full sweep
/// over primary_range) through the remaining secondary values, each time
/// searching a window extrapolated from the previous pair.
std::vector<EpPairTrack> track_ep_pair(const TwoParameterFamily& family,
                                       std::span<const double> secondaries,
                                       std::array<double, 2> primary_range, double precision,
                                       const TrackerConfig& cfg = {},
                                       const TriplePointOptions& opts = {});

struct TriplePointCandidate {
  bool coalesced = false;
  double primary_parameter = 0.0;
  double secondary_parameter = 0.0;
  cplx eigenvalue;
  JordanType jordan_type = JordanType::Simple;
  std::optional<MultiplicityReport> multiplicity;
  std::vector<std::pair<double, double>> ep_separation_history;  // (secondary, EP separation)
  std::vector<ExceptionalPoint> initial_eps;  // all EPs at the secondary-range start
};

/// Scans the secondary parameter from secondary_range[0] toward
/// secondary_range[1] (either direction), following the closest EP pair in
/// the primary parameter until it disappears, then bisects the secondary
/// parameter on "the pair still exists". At the candidate the three nearby
/// eigenvalues are clustered and classified with jordan_structure. Returns
/// coalesced == false when the pair survives the whole range. Requires at
/// least two EPs at the range start (InvalidInput otherwise); raises
/// Ambiguity when the closest pair is not well defined.
TriplePointCandidate find_triple_point(const TwoParameterFamily& family,
                                       std::array<double, 2> primary_range,
                                       std::array<double, 2> secondary_range, double precision,
                                       const TrackerConfig& cfg = {},
                                       const TriplePointOptions& opts = {});

/// Worker count implied by cfg.threads and the KREINSPEC_THREADS variable.
int resolve_thread_count(const TrackerConfig& cfg);

}  // namespace kreinspec
