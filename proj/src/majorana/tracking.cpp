#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <numeric>

#include "npulse/error.hpp"
#include "npulse/majorana.hpp"

namespace npulse {

namespace {

// Small bias against moving a point to a different index, so exact ties keep
// the previous labelling.
constexpr double kReassignPenalty = 1e-12;
constexpr int kExactMatchLimit = 8;

using CostMatrix = std::vector<std::vector<double>>;

CostMatrix costs(const std::vector<SpherePoint>& previous, const std::vector<SpherePoint>& next) {
  const std::size_t n = previous.size();
  CostMatrix c(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      c[i][j] = angular_distance(previous[i], next[j]) + (i == j ? 0.0 : kReassignPenalty);
    }
  }
  return c;
}

std::vector<int> exact_assignment(const CostMatrix& c) {
  const int n = static_cast<int>(c.size());
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<int> best = perm;
  double best_cost = std::numeric_limits<double>::infinity();
  do {
    double total = 0.0;
    for (int i = 0; i < n && total < best_cost; ++i) total += c[i][perm[i]];
    if (total < best_cost) {
      best_cost = total;
      best = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

// Shortest augmenting path Hungarian algorithm, O(n^3).
std::vector<int> hungarian(const CostMatrix& c) {
  const int n = static_cast<int>(c.size());
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = c[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> out(n);
  for (int j = 1; j <= n; ++j) out[p[j] - 1] = j - 1;
  return out;
}

PointTracks assemble(const Trajectory& trajectory, std::vector<MajoranaConstellation>& snapshots) {
  PointTracks out;
  out.times = trajectory.times;
  if (snapshots.empty()) return out;
  const std::size_t points = snapshots.front().points.size();
  out.tracks.assign(points, std::vector<SpherePoint>(snapshots.size()));
  std::vector<SpherePoint> current = snapshots.front().points;
  for (std::size_t s = 0; s < snapshots.size(); ++s) {
    if (s > 0) {
      const auto& next = snapshots[s].points;
      const auto assignment = match_points(current, next);
      for (std::size_t p = 0; p < points; ++p) current[p] = next[assignment[p]];
    }
    for (std::size_t p = 0; p < points; ++p) out.tracks[p][s] = current[p];
  }
  return out;
}

void check_trajectory(const Trajectory& trajectory) {
  if (trajectory.states.empty()) throw InvalidInput("trajectory", "trajectory has no samples");
  if (trajectory.states.size() != trajectory.times.size()) {
    throw InvalidInput("trajectory", "times and states differ in length");
  }
}

}  // namespace

std::vector<int> match_points(const std::vector<SpherePoint>& previous,
                              const std::vector<SpherePoint>& next) {
  if (previous.size() != next.size()) {
    throw InvalidInput("points", "constellations differ in size");
  }
  if (previous.empty()) return {};
  const CostMatrix c = costs(previous, next);
  if (static_cast<int>(c.size()) <= kExactMatchLimit) return exact_assignment(c);
  return hungarian(c);
}

PointTracks track_trajectory(const Trajectory& trajectory) {
  check_trajectory(trajectory);
  const auto n = static_cast<std::ptrdiff_t>(trajectory.states.size());
  std::vector<MajoranaConstellation> snapshots(n);
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 8)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      snapshots[i] = constellation(trajectory.states[i]);
    } catch (...) {
#pragma omp critical(npulse_track_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return assemble(trajectory, snapshots);
}

PointTracks track_trajectory_serial(const Trajectory& trajectory) {
  check_trajectory(trajectory);
  std::vector<MajoranaConstellation> snapshots;
  snapshots.reserve(trajectory.states.size());
  for (const auto& state : trajectory.states) snapshots.push_back(constellation(state));
  return assemble(trajectory, snapshots);
}

double rigid_rotation_deviation(const PointTracks& tracks) {
  const std::size_t points = tracks.tracks.size();
  if (points < 2) return 0.0;
  const std::size_t samples = tracks.tracks.front().size();
  double worst = 0.0;
  for (std::size_t a = 0; a < points; ++a) {
    for (std::size_t b = a + 1; b < points; ++b) {
      const double d0 = angular_distance(tracks.tracks[a][0], tracks.tracks[b][0]);
      for (std::size_t s = 1; s < samples; ++s) {
        const double d = angular_distance(tracks.tracks[a][s], tracks.tracks[b][s]);
        worst = std::max(worst, std::abs(d - d0));
      }
    }
  }
  return worst;
}

}  // namespace npulse
