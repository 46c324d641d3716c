#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "sufm/types.hpp"

namespace sufm {

/// Spherical angles with theta = atan2(y, x) in [0, 2*pi) and phi = acos(z)
/// in [0, pi], so phi = 0 is the +z pole.
struct SphereCoord {
  double theta = 0.0;
  double phi = 0.0;
};

SphereCoord to_spherical(const Eigen::Vector3d& p);
Eigen::Vector3d to_cartesian(const SphereCoord& c);

/// Icosphere at a given subdivision rank, pole-oriented: two vertices sit
/// exactly on the z axis, which gives the mesh an exact C5 rotation symmetry
/// about z (plus the theta -> -theta reflection).
struct SphereGraph {
  int rank = 0;
  std::vector<Eigen::Vector3d> vertices;      // unit vectors
  std::vector<std::array<int, 3>> faces;      // CCW seen from outside
  std::vector<std::vector<int>> vertex_adj;   // sorted, self excluded
  std::vector<std::array<int, 3>> face_adj;   // edge-adjacent faces, sorted

  // Provenance from the previous rank; empty arrays at rank 0.
  // vertex_parents[v] = {v, v} for inherited vertices, else the two endpoints
  // of the edge whose midpoint created v.
  std::vector<std::array<int, 2>> vertex_parents;
  std::vector<int> face_parent;
  std::vector<std::uint8_t> face_is_central;

  int vertex_count() const { return int(vertices.size()); }
  int face_count() const { return int(faces.size()); }
  Index edge_count() const;
  int node_count(NodeType t) const {
    return t == NodeType::Vertex ? vertex_count() : face_count();
  }

  /// Unique sorted (u < v) vertex pairs.
  std::vector<std::pair<int, int>> edges() const;
};

SphereGraph build_base_icosahedron();
SphereGraph subdivide(const SphereGraph& g);
/// Subdivision chain [rank 0 .. max_rank].
std::vector<SphereGraph> build_icosphere_chain(int max_rank);

/// Node positions for the given node type (vertices, or normalized face
/// centroids).
std::vector<Eigen::Vector3d> node_positions(const SphereGraph& g, NodeType t);
std::vector<SphereCoord> node_coords(const SphereGraph& g, NodeType t);

/// K-order neighborhoods E^K: all nodes within graph distance <= K, self
/// included, each row sorted ascending by node id. `padded` is rows*width
/// with -1 entries where `mask` is 0.
struct NeighborTable {
  NodeType node_type = NodeType::Vertex;
  int order = 0;
  int width = 0;
  std::vector<std::vector<int>> rows;
  std::vector<int> padded;
  std::vector<std::uint8_t> mask;

  Index node_count() const { return Index(rows.size()); }
};

NeighborTable neighbor_table(const SphereGraph& g, NodeType t, int order);

enum class PoolMode { Center, Max, Average };

PoolMode pool_mode_from_string(const std::string& s);

/// Index maps between consecutive ranks. pool_src lists the fine nodes that
/// feed each coarse node; unpool rows are (coarse source, weight) pairs that
/// always sum to 1.
struct PoolMap {
  NodeType node_type = NodeType::Vertex;
  PoolMode mode = PoolMode::Center;
  Index fine_nodes = 0;
  Index coarse_nodes = 0;
  std::vector<std::vector<int>> pool_src;
  std::vector<std::vector<std::pair<int, double>>> unpool;
};

PoolMap pool_map(const SphereGraph& fine, const SphereGraph& coarse,
                 NodeType t, PoolMode mode);

/// Node permutation realized by rotating k*72 degrees about z, optionally
/// composed with the reflection theta -> -theta (applied first).
struct SymmetryPermutation {
  std::vector<int> perm;
  int k = 0;
  bool reflect = false;
};

/// Throws if some rotated node has no positional match within 1e-6 (that
/// would mean the graph is not pole-oriented).
SymmetryPermutation z_symmetry_permutation(const SphereGraph& g, NodeType t,
                                           int k, bool reflect);

/// JSON description of the graph, for external viewers. Ranks <= 3 only.
std::string graph_to_json(const SphereGraph& g);
void write_obj(const SphereGraph& g, const std::string& path);

}  // namespace sufm
