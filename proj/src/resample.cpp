#include "sufm/resample.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace sufm {

namespace {
constexpr double kPi = std::numbers::pi;

double wrap_theta(double theta) {
  theta = std::fmod(theta, 2.0 * kPi);
  if (theta < 0) theta += 2.0 * kPi;
  return theta;
}
}  // namespace

SphereSignal SphereSignal::make(const SphereGraph& g, NodeType t, int channels) {
  if (channels <= 0) throw std::invalid_argument("channels must be positive");
  SphereSignal s;
  s.rank = g.rank;
  s.node_type = t;
  s.nodes = g.node_count(t);
  s.channels = channels;
  s.values.assign(std::size_t(s.nodes) * channels, 0.0f);
  return s;
}

float sample_bilinear(const ErpImage& img, double theta, double phi, int channel) {
  const int W = img.width, H = img.height;
  const double x = wrap_theta(theta) / (2.0 * kPi) * W - 0.5;
  const double y = std::clamp(phi, 0.0, kPi) / kPi * H - 0.5;

  const double xf = std::floor(x), yf = std::floor(y);
  const double tx = x - xf, ty = y - yf;
  int j0 = int(xf), i0 = int(yf);
  int j1 = j0 + 1, i1 = i0 + 1;
  j0 = ((j0 % W) + W) % W;
  j1 = ((j1 % W) + W) % W;
  i0 = std::clamp(i0, 0, H - 1);
  i1 = std::clamp(i1, 0, H - 1);

  return float((1 - tx) * (1 - ty) * img.at(i0, j0, channel) +
               tx * (1 - ty) * img.at(i0, j1, channel) +
               (1 - tx) * ty * img.at(i1, j0, channel) +
               tx * ty * img.at(i1, j1, channel));
}

float sample_nearest(const ErpImage& img, double theta, double phi, int channel) {
  const int W = img.width, H = img.height;
  const double x = wrap_theta(theta) / (2.0 * kPi) * W - 0.5;
  const double y = std::clamp(phi, 0.0, kPi) / kPi * H - 0.5;
  int j = int(std::floor(x + 0.5));
  int i = int(std::floor(y + 0.5));
  j = ((j % W) + W) % W;
  i = std::clamp(i, 0, H - 1);
  return img.at(i, j, channel);
}

SphereSignal erp_to_sphere(const ErpImage& img, const SphereGraph& g, NodeType t) {
  img.validate();
  auto coords = node_coords(g, t);
  SphereSignal sig = SphereSignal::make(g, t, img.channels);
  const bool nearest = img.kind == ImageKind::Label;
  for (Index n = 0; n < sig.nodes; ++n)
    for (int c = 0; c < img.channels; ++c)
      sig.at(n, c) = nearest ? sample_nearest(img, coords[n].theta, coords[n].phi, c)
                             : sample_bilinear(img, coords[n].theta, coords[n].phi, c);
  return sig;
}

PointKdTree::PointKdTree(std::vector<Eigen::Vector3d> points)
    : points_(std::move(points)) {
  if (points_.empty()) throw std::invalid_argument("empty point set");
  std::vector<int> ids(points_.size());
  std::iota(ids.begin(), ids.end(), 0);
  nodes_.reserve(points_.size());
  root_ = build(ids, 0, int(ids.size()), 0);
}

int PointKdTree::build(std::vector<int>& ids, int lo, int hi, int depth) {
  if (lo >= hi) return -1;
  const int axis = depth % 3;
  const int mid = (lo + hi) / 2;
  std::nth_element(ids.begin() + lo, ids.begin() + mid, ids.begin() + hi,
                   [&](int a, int b) { return points_[a][axis] < points_[b][axis]; });
  Node node;
  node.point = ids[mid];
  node.axis = axis;
  const int self = int(nodes_.size());
  nodes_.push_back(node);
  nodes_[self].left = build(ids, lo, mid, depth + 1);
  nodes_[self].right = build(ids, mid + 1, hi, depth + 1);
  return self;
}

void PointKdTree::search(int ni, const Eigen::Vector3d& q, int& best,
                         double& best_d2) const {
  if (ni < 0) return;
  const Node& node = nodes_[ni];
  const Eigen::Vector3d& p = points_[node.point];
  const double d2 = (p - q).squaredNorm();
  if (d2 < best_d2 || (d2 == best_d2 && node.point < best)) {
    best_d2 = d2;
    best = node.point;
  }
  const double delta = q[node.axis] - p[node.axis];
  const int near = delta < 0 ? node.left : node.right;
  const int far = delta < 0 ? node.right : node.left;
  search(near, q, best, best_d2);
  if (delta * delta <= best_d2) search(far, q, best, best_d2);
}

int PointKdTree::nearest(const Eigen::Vector3d& q) const {
  int best = -1;
  double best_d2 = std::numeric_limits<double>::infinity();
  search(root_, q, best, best_d2);
  return best;
}

namespace {

/// Barycentric coordinates of direction q against face (a,b,c) by solving
/// [a b c] w = q; all-nonnegative w means the ray through q pierces the face.
bool gnomonic_barycentric(const Eigen::Vector3d& a, const Eigen::Vector3d& b,
                          const Eigen::Vector3d& c, const Eigen::Vector3d& q,
                          Eigen::Vector3d& w) {
  Eigen::Matrix3d m;
  m.col(0) = a;
  m.col(1) = b;
  m.col(2) = c;
  w = m.partialPivLu().solve(q);
  const double eps = -1e-10;
  if (w.x() < eps || w.y() < eps || w.z() < eps) return false;
  const double s = w.sum();
  if (s <= 0) return false;
  w /= s;
  return true;
}

}  // namespace

ErpImage sphere_to_erp(const SphereSignal& sig, const SphereGraph& g, int width,
                       int height, RenderMode mode) {
  if (width <= 0 || height <= 0) throw std::invalid_argument("zero-sized output image");
  if (sig.nodes != g.node_count(sig.node_type))
    throw std::invalid_argument("signal does not match the graph");
  if (mode == RenderMode::Barycentric && sig.node_type != NodeType::Face) {
    // allowed: vertex signals interpolate inside faces
  } else if (mode == RenderMode::Barycentric) {
    throw std::invalid_argument("barycentric rendering requires vertex signals");
  }

  ImageKind kind = sig.channels == 3 ? ImageKind::Rgb : ImageKind::Depth;
  ErpImage img = ErpImage::make(width, height, sig.channels, kind);

  PointKdTree tree(node_positions(g, sig.node_type));

  // Faces incident to each vertex; the containing face of a direction is
  // always incident to its nearest vertex.
  std::vector<std::vector<int>> incident;
  if (mode == RenderMode::Barycentric) {
    incident.resize(g.vertex_count());
    for (int f = 0; f < g.face_count(); ++f)
      for (int v : g.faces[f]) incident[v].push_back(f);
  }

  for (int i = 0; i < height; ++i) {
    const double phi = kPi * (i + 0.5) / height;
    for (int j = 0; j < width; ++j) {
      const double theta = 2.0 * kPi * (j + 0.5) / width;
      const Eigen::Vector3d dir = to_cartesian({theta, phi});
      const int nearest = tree.nearest(dir);
      if (mode == RenderMode::Nearest) {
        for (int c = 0; c < sig.channels; ++c) img.at(i, j, c) = sig.at(nearest, c);
        continue;
      }
      Eigen::Vector3d w;
      int face = -1;
      Eigen::Vector3d best_w = Eigen::Vector3d::Zero();
      double best_min = -1e30;
      for (int f : incident[nearest]) {
        const auto& [a, b, c] = g.faces[f];
        if (gnomonic_barycentric(g.vertices[a], g.vertices[b], g.vertices[c], dir, w)) {
          face = f;
          best_w = w;
          break;
        }
        if (w.minCoeff() > best_min) {
          best_min = w.minCoeff();
          face = f;
          best_w = w.cwiseMax(0.0);
          best_w /= best_w.sum();
        }
      }
      const auto& [a, b, c] = g.faces[face];
      for (int ch = 0; ch < sig.channels; ++ch)
        img.at(i, j, ch) = float(best_w.x() * sig.at(a, ch) +
                                 best_w.y() * sig.at(b, ch) +
                                 best_w.z() * sig.at(c, ch));
    }
  }

  // Rendering interpolates, so Rgb outputs can pick up tiny excursions.
  if (kind == ImageKind::Rgb)
    for (auto& v : img.values) v = std::clamp(v, 0.0f, 1.0f);
  return img;
}

}  // namespace sufm
