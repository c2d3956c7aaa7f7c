#include "imdd/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>

namespace imdd::lattice {
namespace {

constexpr double kConeTol = 1e-9;
constexpr double kCoordTol = 1e-12;
constexpr double kObjectiveRelTol = 1e-10;

bool coord_less(const Vec3& a, const Vec3& b) {
  for (int k = 0; k < 3; ++k) {
    if (std::abs(a[k] - b[k]) > kCoordTol) return a[k] < b[k];
  }
  return false;
}

// -1, 0, +1 with relative tolerance.
int compare_objective(double a, double b) {
  const double tol = kObjectiveRelTol * std::max({1.0, std::abs(a), std::abs(b)});
  if (a < b - tol) return -1;
  if (a > b + tol) return 1;
  return 0;
}

Objective other(Objective o) {
  return o == Objective::electrical ? Objective::optical : Objective::electrical;
}

struct SubsetKey {
  double primary = std::numeric_limits<double>::infinity();
  double secondary = std::numeric_limits<double>::infinity();
  std::vector<Vec3> sorted;
};

bool key_less(const SubsetKey& a, const SubsetKey& b) {
  if (int c = compare_objective(a.primary, b.primary); c != 0) return c < 0;
  if (int c = compare_objective(a.secondary, b.secondary); c != 0) return c < 0;
  return std::lexicographical_compare(a.sorted.begin(), a.sorted.end(), b.sorted.begin(), b.sorted.end(),
                                      coord_less);
}

SubsetKey make_key(const std::vector<Vec3>& pts, const std::vector<std::size_t>& idx, Objective objective) {
  SubsetKey key;
  key.sorted.reserve(idx.size());
  for (auto i : idx) key.sorted.push_back(pts[i]);
  std::sort(key.sorted.begin(), key.sorted.end(), coord_less);
  key.primary = objective_value(key.sorted, objective);
  key.secondary = objective_value(key.sorted, other(objective));
  return key;
}

// C(n, k) saturating at `limit + 1`.
std::uint64_t binomial_capped(std::size_t n, std::size_t k, std::uint64_t limit) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  long double acc = 1.0L;
  for (std::size_t i = 1; i <= k; ++i) {
    acc = acc * static_cast<long double>(n - k + i) / static_cast<long double>(i);
    if (acc > static_cast<long double>(limit)) return limit + 1;
  }
  return static_cast<std::uint64_t>(std::llround(acc));
}

SubsetKey exhaustive_search(const std::vector<Vec3>& pts, std::size_t m, Objective objective,
                            std::uint64_t& visited) {
  const std::size_t n = pts.size();
  std::vector<std::size_t> idx(m);
  for (std::size_t i = 0; i < m; ++i) idx[i] = i;
  SubsetKey best;
  while (true) {
    ++visited;
    SubsetKey key = make_key(pts, idx, objective);
    if (best.sorted.empty() || key_less(key, best)) best = std::move(key);
    // next combination in lexicographic index order
    std::size_t i = m;
    while (i > 0 && idx[i - 1] == n - m + (i - 1)) --i;
    if (i == 0) break;
    ++idx[i - 1];
    for (std::size_t j = i; j < m; ++j) idx[j] = idx[j - 1] + 1;
  }
  return best;
}

class BranchAndBound {
 public:
  BranchAndBound(const std::vector<Vec3>& pts, std::size_t m, Objective objective)
      : m_(m), objective_(objective) {
    // Sorted by contribution so the cheapest completion of a partial subset
    // is always the next few candidates.
    order_.resize(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) order_[i] = i;
    std::stable_sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t b) {
      return objective_contribution(pts[a], objective) < objective_contribution(pts[b], objective);
    });
    for (auto i : order_) {
      sorted_pts_.push_back(pts[i]);
      cost_.push_back(objective_contribution(pts[i], objective));
    }
    prefix_.assign(cost_.size() + 1, 0.0);
    for (std::size_t i = 0; i < cost_.size(); ++i) prefix_[i + 1] = prefix_[i] + cost_[i];
  }

  SubsetKey run(std::uint64_t& visited) {
    chosen_.clear();
    descend(0, 0.0, visited);
    return best_;
  }

 private:
  void descend(std::size_t next, double partial, std::uint64_t& visited) {
    ++visited;
    const std::size_t need = m_ - chosen_.size();
    if (need == 0) {
      SubsetKey key = make_key(sorted_pts_, chosen_, objective_);
      if (best_.sorted.empty() || key_less(key, best_)) best_ = std::move(key);
      return;
    }
    for (std::size_t i = next; i + need <= sorted_pts_.size(); ++i) {
      const double bound = (partial + prefix_[i + need] - prefix_[i]) / static_cast<double>(m_);
      if (!best_.sorted.empty() && compare_objective(bound, best_.primary) > 0) break;
      chosen_.push_back(i);
      descend(i + 1, partial + cost_[i], visited);
      chosen_.pop_back();
    }
  }

  std::size_t m_;
  Objective objective_;
  std::vector<std::size_t> order_;
  std::vector<Vec3> sorted_pts_;
  std::vector<double> cost_;
  std::vector<double> prefix_;
  std::vector<std::size_t> chosen_;
  SubsetKey best_;
};

}  // namespace

LatticeFrame LatticeFrame::aligned() {
  const double r2 = std::numbers::sqrt2;
  const double r3 = std::numbers::sqrt3;
  const double r6 = std::sqrt(6.0);
  LatticeFrame f;
  f.generator = {Vec3{1.0 / r2, 1.0 / r2, 0.0}, Vec3{1.0 / r2, 0.0, 1.0 / r2}, Vec3{0.0, 1.0 / r2, 1.0 / r2}};
  // Rows: cone axis along (1,1,1), then two transverse directions chosen so
  // that (0,1,1)/sqrt2 lands at (sqrt(2/3), 0, 1/sqrt3).
  f.rotation = {Vec3{1.0 / r3, 1.0 / r3, 1.0 / r3}, Vec3{0.0, 1.0 / r2, -1.0 / r2},
                Vec3{-2.0 / r6, 1.0 / r6, 1.0 / r6}};
  f.offset = {0.0, 0.0, 0.0};
  return f;
}

Vec3 LatticeFrame::map(const std::array<int, 3>& fcc) const noexcept {
  const double s = 1.0 / std::numbers::sqrt2;
  const Vec3 q{fcc[0] * s, fcc[1] * s, fcc[2] * s};
  Vec3 p = rotation * q;
  for (int k = 0; k < 3; ++k) p[k] += offset[k];
  return p;
}

LatticeCandidateSet enumerate_cone_lattice(const LatticeFrame& frame, double h_max, std::size_t cap) {
  if (!(h_max >= 0.0) || !std::isfinite(h_max)) {
    throw Error(ErrorKind::invalid_argument, "h_max must be a finite nonnegative number");
  }
  // Any cone point with s1 <= h_max has norm <= h_max * sqrt(3/2).
  const double radius = h_max * std::sqrt(1.5) + norm(frame.offset) + 1e-9;
  const int box = static_cast<int>(std::ceil(radius * std::numbers::sqrt2)) + 1;
  const double box_volume = std::pow(2.0 * box + 1.0, 3);
  if (box_volume > 64.0 * static_cast<double>(cap) + 1e6) {
    throw Error(ErrorKind::resource_cap, "h_max " + std::to_string(h_max) + " needs a search box of " +
                                             std::to_string(static_cast<long long>(box_volume)) + " cells");
  }
  const double h_limit = h_max + kConeTol * std::max(1.0, h_max);
  AdmissibleCone cone{kConeTol};

  LatticeCandidateSet out;
  out.frame = frame;
  for (int x = -box; x <= box; ++x) {
    for (int y = -box; y <= box; ++y) {
      for (int z = -box; z <= box; ++z) {
        if (((x + y + z) & 1) != 0) continue;
        const Vec3 p = frame.map({x, y, z});
        if (p[0] > h_limit || !cone.contains(p)) continue;
        out.points.push_back(p);
        if (out.points.size() > cap) {
          throw Error(ErrorKind::resource_cap, "more than " + std::to_string(cap) +
                                                   " lattice points below h_max " + std::to_string(h_max));
        }
      }
    }
  }
  std::sort(out.points.begin(), out.points.end(), coord_less);
  return out;
}

Constellation search_lattice_constellation(const LatticeCandidateSet& candidates, std::size_t m,
                                           Objective objective, SearchOptions options, SearchStats* stats) {
  const auto& pts = candidates.points;
  if (m < 2) throw Error(ErrorKind::invalid_argument, "M must be at least 2");
  if (pts.size() < m) {
    throw Error(ErrorKind::infeasible, "only " + std::to_string(pts.size()) + " lattice candidates for M = " +
                                           std::to_string(m) + "; raise h_max");
  }
  SearchStats local;
  local.exhaustive = binomial_capped(pts.size(), m, options.exhaustive_cap) <= options.exhaustive_cap;
  SubsetKey best = local.exhaustive ? exhaustive_search(pts, m, objective, local.nodes)
                                    : BranchAndBound(pts, m, objective).run(local.nodes);
  if (stats != nullptr) *stats = local;
  std::string name = "lattice-" + std::string(to_string(objective)) + "-" + std::to_string(m);
  return Constellation(std::move(name), BandwidthModel::subcarrier, 3, std::move(best.sorted));
}

std::vector<LatticeFrame> frame_grid(FrameGrid grid) {
  const LatticeFrame base = LatticeFrame::aligned();
  std::vector<LatticeFrame> frames{base};
  if (grid == FrameGrid::aligned_only) return frames;

  std::vector<Mat3> tilts;
  for (int t = 1; t <= 6; ++t) {
    const double theta = t * std::numbers::pi / 36.0;  // 5 degree steps
    for (int a = 0; a < 4; ++a) {
      const double phi = a * std::numbers::pi / 2.0;
      tilts.push_back(axis_rotation({0.0, std::cos(phi), std::sin(phi)}, theta));
    }
  }
  std::vector<Mat3> rotations{base.rotation};
  for (const auto& t : tilts) rotations.push_back(t * base.rotation);

  frames.clear();
  for (const auto& rot : rotations) {
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        for (int k = 0; k < 3; ++k) {
          LatticeFrame f = base;
          f.rotation = rot;
          Vec3 shift{0.0, 0.0, 0.0};
          for (int c = 0; c < 3; ++c) {
            shift[c] = (i * base.generator[0][c] + j * base.generator[1][c] + k * base.generator[2][c]) / 3.0;
          }
          f.offset = rot * shift;
          frames.push_back(f);
        }
      }
    }
  }
  return frames;
}

FrameSearchResult optimize_frame(std::size_t m, Objective objective, FrameGrid grid, double h_max,
                                 SearchOptions options) {
  if (m < 2) throw Error(ErrorKind::invalid_argument, "M must be at least 2");
  const auto frames = frame_grid(grid);
  std::optional<FrameSearchResult> best;
  for (std::size_t i = 0; i < frames.size(); ++i) {
    const auto candidates = enumerate_cone_lattice(frames[i], h_max);
    if (candidates.points.size() < m) continue;
    Constellation c = search_lattice_constellation(candidates, m, objective, options);
    const double value = objective_value(c, objective);
    if (!best || compare_objective(value, best->objective) < 0 ||
        (compare_objective(value, best->objective) == 0 &&
         compare_objective(objective_value(c, other(objective)),
                           objective_value(best->constellation, other(objective))) < 0)) {
      best = FrameSearchResult{frames[i], std::move(c), i, frames.size(), value};
    }
  }
  if (!best) {
    throw Error(ErrorKind::infeasible,
                "no frame yields " + std::to_string(m) + " lattice points below h_max " + std::to_string(h_max));
  }
  return *best;
}

}  // namespace imdd::lattice
