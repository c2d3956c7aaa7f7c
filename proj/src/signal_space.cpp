#include "imdd/signal_space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

namespace imdd {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::invalid_constellation: return "invalid-constellation";
    case ErrorKind::not_admissible: return "not-admissible";
    case ErrorKind::catalog_miss: return "catalog-miss";
    case ErrorKind::infeasible: return "infeasible";
    case ErrorKind::resource_cap: return "resource-cap";
    case ErrorKind::bracketing: return "bracketing";
    case ErrorKind::dimension_mismatch: return "dimension-mismatch";
    case ErrorKind::invalid_argument: return "invalid-argument";
  }
  return "unknown";
}

std::string_view to_string(BandwidthModel model) noexcept {
  return model == BandwidthModel::baseband ? "baseband" : "subcarrier";
}

std::string_view to_string(Objective objective) noexcept {
  return objective == Objective::electrical ? "electrical" : "optical";
}

BandwidthModel parse_bandwidth_model(std::string_view text) {
  if (text == "baseband") return BandwidthModel::baseband;
  if (text == "subcarrier") return BandwidthModel::subcarrier;
  throw Error(ErrorKind::invalid_argument,
              "bandwidth model must be 'baseband' or 'subcarrier', got '" +
                  std::string(text) + "'");
}

Objective parse_objective(std::string_view text) {
  if (text == "electrical") return Objective::electrical;
  if (text == "optical") return Objective::optical;
  throw Error(ErrorKind::invalid_argument,
              "objective must be 'electrical' or 'optical', got '" +
                  std::string(text) + "'");
}

Constellation::Constellation(std::string name, BandwidthModel model,
                             std::size_t dim, std::vector<Vec3> points)
    : name_(std::move(name)), model_(model), dim_(dim), points_(std::move(points)) {
  if (dim_ < 1 || dim_ > 3) {
    throw Error(ErrorKind::invalid_constellation,
                "dimension must be 1, 2 or 3, got " + std::to_string(dim_));
  }
  if (points_.size() < 2) {
    throw Error(ErrorKind::invalid_constellation,
                "a constellation needs at least two points, got " +
                    std::to_string(points_.size()));
  }
  if (model_ == BandwidthModel::subcarrier) dim_ = 3;
  for (std::size_t i = 0; i < points_.size(); ++i) {
    for (std::size_t k = 0; k < 3; ++k) {
      if (!std::isfinite(points_[i][k])) {
        throw Error(ErrorKind::invalid_constellation,
                    "point " + std::to_string(i) + " has a non-finite coordinate");
      }
      if (k >= dim_ && points_[i][k] != 0.0) {
        throw Error(ErrorKind::invalid_constellation,
                    "point " + std::to_string(i) + " has a nonzero coordinate beyond dimension " +
                        std::to_string(dim_));
      }
    }
  }
  for (std::size_t i = 0; i < points_.size(); ++i) {
    for (std::size_t j = i + 1; j < points_.size(); ++j) {
      if (points_[i] == points_[j]) {
        throw Error(ErrorKind::invalid_constellation,
                    "points " + std::to_string(i) + " and " + std::to_string(j) +
                        " coincide (zero distance)");
      }
    }
  }
}

Constellation Constellation::from_rows(std::string name, BandwidthModel model,
                                       const std::vector<std::vector<double>>& rows) {
  std::size_t dim = 0;
  std::vector<Vec3> points;
  points.reserve(rows.size());
  for (const auto& row : rows) {
    if (row.empty() || row.size() > 3) {
      throw Error(ErrorKind::invalid_constellation,
                  "each point needs 1 to 3 coordinates, got " + std::to_string(row.size()));
    }
    dim = std::max(dim, row.size());
    Vec3 p{0.0, 0.0, 0.0};
    std::copy(row.begin(), row.end(), p.begin());
    points.push_back(p);
  }
  return Constellation(std::move(name), model, std::max<std::size_t>(dim, 1), std::move(points));
}

Constellation Constellation::renamed(std::string name) const {
  Constellation out = *this;
  out.name_ = std::move(name);
  return out;
}

Constellation Constellation::scaled(double factor) const {
  std::vector<Vec3> pts = points_;
  for (auto& p : pts) {
    for (auto& x : p) x *= factor;
  }
  return Constellation(name_, model_, dim_, std::move(pts));
}

Constellation Constellation::rotated_about_axis(double angle) const {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  std::vector<Vec3> pts = points_;
  for (auto& p : pts) {
    const double y = p[1];
    const double z = p[2];
    p[1] = c * y - s * z;
    p[2] = s * y + c * z;
  }
  return Constellation(name_, model_, dim_ >= 2 ? 3 : dim_, std::move(pts));
}

Constellation Constellation::reflected() const {
  std::vector<Vec3> pts = points_;
  for (auto& p : pts) p[2] = -p[2];
  return Constellation(name_, model_, dim_, std::move(pts));
}

double AdmissibleCone::violation(const Vec3& p) noexcept {
  const double s1sq = p[0] * p[0];
  const double radial = 2.0 * (p[1] * p[1] + p[2] * p[2]) - s1sq;
  return std::max(radial / std::max(1.0, s1sq), -p[0]);
}

bool AdmissibleCone::contains(const Vec3& p) const noexcept {
  return violation(p) <= tolerance;
}

double min_distance(const Constellation& c) {
  if (c.size() < 2) {
    throw Error(ErrorKind::invalid_constellation, "min_distance needs at least two points");
  }
  double best = std::numeric_limits<double>::infinity();
  const auto pts = c.points();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      best = std::min(best, squared_distance(pts[i], pts[j]));
    }
  }
  return std::sqrt(best);
}

std::size_t kissing_count(const Constellation& c, double rel_tol) {
  if (!(rel_tol > 0.0)) {
    throw Error(ErrorKind::invalid_argument, "kissing_count needs rel_tol > 0");
  }
  const double limit = min_distance(c) * (1.0 + rel_tol);
  const double limit_sq = limit * limit;
  const auto pts = c.points();
  std::size_t count = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      if (squared_distance(pts[i], pts[j]) <= limit_sq) ++count;
    }
  }
  return count;
}

double avg_electrical_energy(const Constellation& c) {
  return objective_value(c, Objective::electrical);
}

double avg_optical_amplitude(const Constellation& c, double tol) {
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[i][0] < -tol) {
      std::ostringstream msg;
      msg << "point " << i << " has negative DC coordinate " << c[i][0];
      throw Error(ErrorKind::not_admissible, msg.str());
    }
  }
  return objective_value(c, Objective::optical);
}

double mean_dc_energy(const Constellation& c) {
  double sum = 0.0;
  for (const auto& p : c.points()) sum += p[0] * p[0];
  return sum / static_cast<double>(c.size());
}

ConeReport cone_contains(const Constellation& c, double tol) {
  ConeReport report;
  for (std::size_t i = 0; i < c.size(); ++i) {
    const double v = AdmissibleCone::violation(c[i]);
    if (v > tol) {
      report.admissible = false;
      report.violations.push_back({i, v});
    }
  }
  return report;
}

SpectralEfficiency spectral_efficiency(const Constellation& c) {
  const std::size_t m = c.size();
  const double bits = std::log2(static_cast<double>(m));
  const bool pow2 = (m & (m - 1)) == 0;
  const double eta = c.bandwidth_model() == BandwidthModel::subcarrier ? bits / 2.0 : bits;
  return {eta, pow2};
}

Constellation normalize_to_unit_dmin(const Constellation& c) {
  const double d = min_distance(c);
  if (!(d > 0.0)) {
    throw Error(ErrorKind::invalid_constellation, "cannot normalize: zero minimum distance");
  }
  std::vector<Vec3> pts(c.points().begin(), c.points().end());
  for (auto& p : pts) {
    for (auto& x : p) x /= d;
  }
  return Constellation(c.name(), c.bandwidth_model(), c.dim(), std::move(pts));
}

double objective_contribution(const Vec3& p, Objective objective) noexcept {
  return objective == Objective::electrical ? dot(p, p) : p[0];
}

double objective_value(std::span<const Vec3> points, Objective objective) {
  double sum = 0.0;
  for (const auto& p : points) sum += objective_contribution(p, objective);
  return sum / static_cast<double>(points.size());
}

double objective_value(const Constellation& c, Objective objective) {
  return objective_value(c.points(), objective);
}

std::vector<double> pairwise_distances(std::span<const Vec3> points) {
  std::vector<double> out;
  out.reserve(points.size() * (points.size() - 1) / 2);
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      out.push_back(std::sqrt(squared_distance(points[i], points[j])));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace imdd
