// Test-only reference implementations, kept independent of the library code
// paths they are used to check.
#pragma once

#include <cmath>
#include <map>
#include <numbers>
#include <set>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

/// Breadth-first ball of radius K on an undirected edge list (self included).
inline std::set<int> bfs_ball(const std::vector<std::pair<int, int>>& edges,
                              int node_count, int src, int radius) {
  std::map<int, std::set<int>> adj;
  for (auto [u, v] : edges) {
    adj[u].insert(v);
    adj[v].insert(u);
  }
  (void)node_count;
  std::set<int> ball = {src};
  std::set<int> frontier = {src};
  for (int step = 0; step < radius; ++step) {
    std::set<int> next;
    for (int u : frontier)
      for (int v : adj[u])
        if (!ball.count(v)) next.insert(v);
    ball.insert(next.begin(), next.end());
    frontier = std::move(next);
  }
  return ball;
}

/// The textbook golden-rectangle icosahedron (not pole-oriented), normalized.
inline std::vector<Eigen::Vector3d> golden_rectangle_icosahedron() {
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Eigen::Vector3d> v = {
      {-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0},
      {0, -1, t}, {0, 1, t}, {0, -1, -t}, {0, 1, -t},
      {t, 0, -1}, {t, 0, 1}, {-t, 0, -1}, {-t, 0, 1},
  };
  for (auto& p : v) p.normalize();
  return v;
}

/// Rotation taking unit vector `from` to unit vector `to` (Rodrigues).
inline Eigen::Matrix3d rotation_between(const Eigen::Vector3d& from,
                                        const Eigen::Vector3d& to) {
  Eigen::Vector3d axis = from.cross(to);
  double s = axis.norm(), c = from.dot(to);
  if (s < 1e-15) {
    if (c > 0) return Eigen::Matrix3d::Identity();
    // Antipodal: rotate pi about any perpendicular axis.
    Eigen::Vector3d perp = from.unitOrthogonal();
    return Eigen::AngleAxisd(std::numbers::pi, perp).toRotationMatrix();
  }
  axis /= s;
  return Eigen::AngleAxisd(std::atan2(s, c), axis).toRotationMatrix();
}

/// Relative spherical offsets via navigation formulas: great-circle distance
/// (haversine) plus initial bearing, then the offsets of the point at that
/// distance/bearing from the canonical center (theta=pi, phi=pi/2).
/// Returns {dtheta, dphi}.
inline std::pair<double, double> relative_offsets_trig(double theta_i, double phi_i,
                                                       double theta_j, double phi_j) {
  const double dlon = theta_j - theta_i;
  // Haversine in polar-angle form (lat = pi/2 - phi).
  const double sdphi = std::sin((phi_j - phi_i) / 2.0);
  const double sdlon = std::sin(dlon / 2.0);
  const double h = sdphi * sdphi + std::sin(phi_i) * std::sin(phi_j) * sdlon * sdlon;
  const double dist = 2.0 * std::asin(std::min(1.0, std::sqrt(h)));
  // Initial bearing at i, measured east of north.
  const double y = std::sin(dlon) * std::sin(phi_j);
  const double x = std::sin(phi_i) * std::cos(phi_j) -
                   std::cos(phi_i) * std::sin(phi_j) * std::cos(dlon);
  const double bearing = std::atan2(y, x);
  // Walk from the canonical center c = (-1, 0, 0); north there is +z and
  // east is -y.
  Eigen::Vector3d c(-1, 0, 0), north(0, 0, 1), east(0, -1, 0);
  Eigen::Vector3d p = std::cos(dist) * c +
                      std::sin(dist) * (std::cos(bearing) * north + std::sin(bearing) * east);
  double dtheta = std::atan2(-p.y(), -p.x());  // atan2(y,x) - pi, wrapped
  double dphi = std::acos(std::clamp(p.z(), -1.0, 1.0)) - std::numbers::pi / 2.0;
  return {dtheta, dphi};
}

}  // namespace oracle
