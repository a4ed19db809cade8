#include <algorithm>
#include <cmath>
#include <limits>

#include "mmgesture/classifier.hpp"

namespace mmg {
namespace {

TrajectoryProfile aligned(const TrajectoryProfile& p, ProfileAlignment alignment) {
  if (alignment == ProfileAlignment::kNone) return p;
  double cx = 0.0, cy = 0.0;
  for (const auto& q : p.points) {
    cx += q.x;
    cy += q.y;
  }
  cx /= static_cast<double>(p.size());
  cy /= static_cast<double>(p.size());
  TrajectoryProfile out = p;
  for (auto& q : out.points) {
    q.x -= cx;
    q.y -= cy;
  }
  return out;
}

}  // namespace

double dtw_distance(const TrajectoryProfile& a0, const TrajectoryProfile& b0,
                    ProfileAlignment alignment) {
  if (a0.points.empty() || b0.points.empty()) throw ValidationError("empty trajectory profile");
  const auto a = aligned(a0, alignment);
  const auto b = aligned(b0, alignment);
  const std::size_t n = a.size(), m = b.size();
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> prev(m + 1, kInf), cur(m + 1, kInf);
  prev[0] = 0.0;
  for (std::size_t i = 1; i <= n; ++i) {
    cur[0] = kInf;
    for (std::size_t j = 1; j <= m; ++j) {
      const double cost = std::hypot(a.points[i - 1].x - b.points[j - 1].x,
                                     a.points[i - 1].y - b.points[j - 1].y);
      cur[j] = cost + std::min({prev[j], cur[j - 1], prev[j - 1]});
    }
    std::swap(prev, cur);
  }
  return prev[m];
}

GestureKind dtw_nearest_neighbor(const TrajectoryProfile& query,
                                 std::span<const LabeledProfile> templates,
                                 ProfileAlignment alignment) {
  if (templates.empty()) throw ValidationError("no templates");
  double best = std::numeric_limits<double>::infinity();
  GestureKind label = templates.front().label;
  for (const auto& t : templates) {
    const double d = dtw_distance(query, t.profile, alignment);
    if (d < best) {
      best = d;
      label = t.label;
    }
  }
  return label;
}

}  // namespace mmg
