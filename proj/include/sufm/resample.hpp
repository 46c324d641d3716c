#pragma once

#include <vector>

#include "sufm/image_io.hpp"
#include "sufm/sphere_graph.hpp"
#include "sufm/types.hpp"

namespace sufm {

/// Per-node values on a sphere graph, row-major [N, C].
struct SphereSignal {
  int rank = 0;
  NodeType node_type = NodeType::Vertex;
  Index nodes = 0;
  int channels = 0;
  std::vector<float> values;

  static SphereSignal make(const SphereGraph& g, NodeType t, int channels);

  float at(Index node, int c) const { return values[std::size_t(node) * channels + c]; }
  float& at(Index node, int c) { return values[std::size_t(node) * channels + c]; }
};

/// Bilinear sample with horizontal wraparound and vertical clamping.
/// Weights are nonnegative and sum to 1.
float sample_bilinear(const ErpImage& img, double theta, double phi, int channel);
/// Nearest pixel-center sample (used for labels).
float sample_nearest(const ErpImage& img, double theta, double phi, int channel);

/// Rgb/Depth: bilinear per channel; Label: nearest pixel.
SphereSignal erp_to_sphere(const ErpImage& img, const SphereGraph& g, NodeType t);

enum class RenderMode { Nearest, Barycentric };

/// Nearest assigns each pixel the angularly closest node's value;
/// Barycentric (vertex signals only) interpolates inside the containing face
/// with plane-projected barycentric weights that sum to 1.
ErpImage sphere_to_erp(const SphereSignal& sig, const SphereGraph& g, int width,
                       int height, RenderMode mode);

/// Exact nearest neighbor among unit vectors (chord metric).
class PointKdTree {
 public:
  explicit PointKdTree(std::vector<Eigen::Vector3d> points);
  int nearest(const Eigen::Vector3d& query) const;
  Index size() const { return Index(points_.size()); }

 private:
  struct Node {
    int point = -1;
    int axis = 0;
    int left = -1;
    int right = -1;
  };
  int build(std::vector<int>& ids, int lo, int hi, int depth);
  void search(int node, const Eigen::Vector3d& q, int& best, double& best_d2) const;

  std::vector<Eigen::Vector3d> points_;
  std::vector<Node> nodes_;
  int root_ = -1;
};

}  // namespace sufm
