#include "sufm/sphere_graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <fstream>
#include <numbers>
#include <unordered_map>

#include <nlohmann/json.hpp>

namespace sufm {

namespace {

constexpr double kPi = std::numbers::pi;

std::uint64_t edge_key(int a, int b) {
  if (a > b) std::swap(a, b);
  return (std::uint64_t(std::uint32_t(a)) << 32) | std::uint32_t(b);
}

/// Hash grid over unit vectors for tolerance-based point lookup.
class PointIndex {
 public:
  explicit PointIndex(const std::vector<Eigen::Vector3d>& pts, double cell = 1e-4)
      : pts_(pts), cell_(cell) {
    map_.reserve(pts.size() * 2);
    for (int i = 0; i < int(pts.size()); ++i) map_.emplace(key(pts[i]), i);
  }

  /// Index of a point within `tol` of p, or -1.
  int find(const Eigen::Vector3d& p, double tol) const {
    const auto [cx, cy, cz] = cell_of(p);
    int best = -1;
    double best_d = tol;
    for (int dx = -1; dx <= 1; ++dx)
      for (int dy = -1; dy <= 1; ++dy)
        for (int dz = -1; dz <= 1; ++dz) {
          auto range = map_.equal_range(pack(cx + dx, cy + dy, cz + dz));
          for (auto it = range.first; it != range.second; ++it) {
            double d = (pts_[it->second] - p).norm();
            if (d <= best_d) {
              best_d = d;
              best = it->second;
            }
          }
        }
    return best;
  }

 private:
  std::tuple<std::int64_t, std::int64_t, std::int64_t> cell_of(
      const Eigen::Vector3d& p) const {
    return {std::llround(p.x() / cell_), std::llround(p.y() / cell_),
            std::llround(p.z() / cell_)};
  }
  static std::uint64_t pack(std::int64_t x, std::int64_t y, std::int64_t z) {
    auto h = std::uint64_t(x) * 0x9e3779b185ebca87ull;
    h ^= std::uint64_t(y) + 0x9e3779b185ebca87ull + (h << 6) + (h >> 2);
    h ^= std::uint64_t(z) + 0xc2b2ae3d27d4eb4full + (h << 6) + (h >> 2);
    return h;
  }
  std::uint64_t key(const Eigen::Vector3d& p) const {
    const auto [x, y, z] = cell_of(p);
    return pack(x, y, z);
  }

  const std::vector<Eigen::Vector3d>& pts_;
  double cell_;
  std::unordered_multimap<std::uint64_t, int> map_;
};

void finalize_adjacency(SphereGraph& g) {
  const int nv = g.vertex_count();
  const int nf = g.face_count();
  g.vertex_adj.assign(nv, {});
  for (const auto& f : g.faces)
    for (int e = 0; e < 3; ++e) {
      int a = f[e], b = f[(e + 1) % 3];
      g.vertex_adj[a].push_back(b);
      g.vertex_adj[b].push_back(a);
    }
  for (auto& adj : g.vertex_adj) {
    std::sort(adj.begin(), adj.end());
    adj.erase(std::unique(adj.begin(), adj.end()), adj.end());
  }

  g.face_adj.assign(nf, {-1, -1, -1});
  std::unordered_map<std::uint64_t, int> first_face;
  first_face.reserve(nf * 2);
  std::vector<int> filled(nf, 0);
  for (int fi = 0; fi < nf; ++fi)
    for (int e = 0; e < 3; ++e) {
      auto k = edge_key(g.faces[fi][e], g.faces[fi][(e + 1) % 3]);
      auto it = first_face.find(k);
      if (it == first_face.end()) {
        first_face.emplace(k, fi);
      } else {
        int fj = it->second;
        g.face_adj[fi][filled[fi]++] = fj;
        g.face_adj[fj][filled[fj]++] = fi;
      }
    }
  for (auto& a : g.face_adj) std::sort(a.begin(), a.end());
}

}  // namespace

SphereCoord to_spherical(const Eigen::Vector3d& p) {
  SphereCoord c;
  c.theta = std::atan2(p.y(), p.x());
  if (c.theta < 0.0) c.theta += 2.0 * kPi;
  if (c.theta >= 2.0 * kPi) c.theta = 0.0;
  c.phi = std::acos(std::clamp(p.z(), -1.0, 1.0));
  return c;
}

Eigen::Vector3d to_cartesian(const SphereCoord& c) {
  const double s = std::sin(c.phi);
  return {s * std::cos(c.theta), s * std::sin(c.theta), std::cos(c.phi)};
}

Index SphereGraph::edge_count() const {
  Index twice = 0;
  for (const auto& adj : vertex_adj) twice += Index(adj.size());
  return twice / 2;
}

std::vector<std::pair<int, int>> SphereGraph::edges() const {
  std::vector<std::pair<int, int>> out;
  out.reserve(std::size_t(edge_count()));
  for (int u = 0; u < vertex_count(); ++u)
    for (int v : vertex_adj[u])
      if (u < v) out.emplace_back(u, v);
  return out;
}

SphereGraph build_base_icosahedron() {
  SphereGraph g;
  g.rank = 0;
  const double zr = 1.0 / std::sqrt(5.0);   // ring height
  const double rr = 2.0 / std::sqrt(5.0);   // ring radius
  g.vertices.reserve(12);
  g.vertices.emplace_back(0.0, 0.0, 1.0);
  for (int k = 0; k < 5; ++k) {
    double t = 2.0 * kPi * k / 5.0;
    g.vertices.emplace_back(rr * std::cos(t), rr * std::sin(t), zr);
  }
  for (int k = 0; k < 5; ++k) {
    double t = 2.0 * kPi * (k + 0.5) / 5.0;
    g.vertices.emplace_back(rr * std::cos(t), rr * std::sin(t), -zr);
  }
  g.vertices.emplace_back(0.0, 0.0, -1.0);

  auto u = [](int k) { return 1 + (k % 5); };
  auto l = [](int k) { return 6 + ((k + 5) % 5); };
  g.faces.reserve(20);
  for (int k = 0; k < 5; ++k) g.faces.push_back({0, u(k), u(k + 1)});
  for (int k = 0; k < 5; ++k) g.faces.push_back({u(k), l(k), u(k + 1)});
  for (int k = 0; k < 5; ++k) g.faces.push_back({u(k), l(k - 1), l(k)});
  for (int k = 0; k < 5; ++k) g.faces.push_back({11, l(k + 1), l(k)});

  finalize_adjacency(g);
  return g;
}

SphereGraph subdivide(const SphereGraph& g) {
  SphereGraph f;
  f.rank = g.rank + 1;
  f.vertices = g.vertices;
  f.vertices.reserve(g.vertex_count() + 3 * g.face_count() / 2);
  f.vertex_parents.resize(g.vertex_count());
  for (int v = 0; v < g.vertex_count(); ++v) f.vertex_parents[v] = {v, v};

  std::unordered_map<std::uint64_t, int> midpoint;
  midpoint.reserve(2 * g.face_count());
  auto mid = [&](int a, int b) {
    auto k = edge_key(a, b);
    auto it = midpoint.find(k);
    if (it != midpoint.end()) return it->second;
    int id = int(f.vertices.size());
    f.vertices.push_back((g.vertices[a] + g.vertices[b]).normalized());
    f.vertex_parents.push_back({std::min(a, b), std::max(a, b)});
    midpoint.emplace(k, id);
    return id;
  };

  f.faces.reserve(4 * g.face_count());
  f.face_parent.reserve(4 * g.face_count());
  f.face_is_central.reserve(4 * g.face_count());
  for (int fi = 0; fi < g.face_count(); ++fi) {
    const auto [a, b, c] = g.faces[fi];
    int ab = mid(a, b), bc = mid(b, c), ca = mid(c, a);
    const std::array<std::array<int, 3>, 4> children = {
        {{a, ab, ca}, {ab, b, bc}, {ca, bc, c}, {ab, bc, ca}}};
    for (int ci = 0; ci < 4; ++ci) {
      f.faces.push_back(children[ci]);
      f.face_parent.push_back(fi);
      f.face_is_central.push_back(ci == 3);
    }
  }

  finalize_adjacency(f);
  return f;
}

std::vector<SphereGraph> build_icosphere_chain(int max_rank) {
  if (max_rank < 0) throw std::invalid_argument("negative rank");
  std::vector<SphereGraph> chain;
  chain.reserve(max_rank + 1);
  chain.push_back(build_base_icosahedron());
  for (int r = 1; r <= max_rank; ++r) chain.push_back(subdivide(chain.back()));
  return chain;
}

std::vector<Eigen::Vector3d> node_positions(const SphereGraph& g, NodeType t) {
  if (t == NodeType::Vertex) return g.vertices;
  std::vector<Eigen::Vector3d> out;
  out.reserve(g.face_count());
  for (const auto& [a, b, c] : g.faces)
    out.push_back((g.vertices[a] + g.vertices[b] + g.vertices[c]).normalized());
  return out;
}

std::vector<SphereCoord> node_coords(const SphereGraph& g, NodeType t) {
  auto pos = node_positions(g, t);
  std::vector<SphereCoord> out(pos.size());
  for (std::size_t i = 0; i < pos.size(); ++i) out[i] = to_spherical(pos[i]);
  return out;
}

NeighborTable neighbor_table(const SphereGraph& g, NodeType t, int order) {
  if (order < 0) throw std::invalid_argument("neighbor order must be >= 0");
  const int n = g.node_count(t);
  NeighborTable table;
  table.node_type = t;
  table.order = order;
  table.rows.resize(n);

  // dist: -1 unvisited; reused across sources with a touched list.
  std::vector<int> dist(n, -1);
  std::vector<int> touched;
  std::deque<int> queue;
  auto neighbors_of = [&](int u) -> const int* {
    return t == NodeType::Vertex ? g.vertex_adj[u].data() : g.face_adj[u].data();
  };
  auto degree_of = [&](int u) {
    return t == NodeType::Vertex ? int(g.vertex_adj[u].size()) : 3;
  };

  for (int src = 0; src < n; ++src) {
    auto& row = table.rows[src];
    row.push_back(src);
    dist[src] = 0;
    touched.push_back(src);
    queue.push_back(src);
    while (!queue.empty()) {
      int u = queue.front();
      queue.pop_front();
      if (dist[u] == order) continue;
      const int* adj = neighbors_of(u);
      for (int e = 0; e < degree_of(u); ++e) {
        int v = adj[e];
        if (dist[v] >= 0) continue;
        dist[v] = dist[u] + 1;
        touched.push_back(v);
        row.push_back(v);
        queue.push_back(v);
      }
    }
    std::sort(row.begin(), row.end());
    for (int v : touched) dist[v] = -1;
    touched.clear();
    table.width = std::max(table.width, int(row.size()));
  }

  table.padded.assign(std::size_t(n) * table.width, -1);
  table.mask.assign(std::size_t(n) * table.width, 0);
  for (int i = 0; i < n; ++i)
    for (std::size_t j = 0; j < table.rows[i].size(); ++j) {
      table.padded[std::size_t(i) * table.width + j] = table.rows[i][j];
      table.mask[std::size_t(i) * table.width + j] = 1;
    }
  return table;
}

PoolMode pool_mode_from_string(const std::string& s) {
  if (s == "center") return PoolMode::Center;
  if (s == "max") return PoolMode::Max;
  if (s == "average") return PoolMode::Average;
  throw std::invalid_argument("unknown pool mode: " + s);
}

PoolMap pool_map(const SphereGraph& fine, const SphereGraph& coarse,
                 NodeType t, PoolMode mode) {
  if (fine.rank != coarse.rank + 1)
    throw std::invalid_argument("pool_map requires fine.rank == coarse.rank + 1");
  if (t == NodeType::Vertex && mode != PoolMode::Center)
    throw std::invalid_argument("vertex pooling supports center mode only");
  if (fine.vertex_parents.empty())
    throw std::invalid_argument("fine graph lacks subdivision provenance");

  PoolMap map;
  map.node_type = t;
  map.mode = mode;
  map.fine_nodes = fine.node_count(t);
  map.coarse_nodes = coarse.node_count(t);

  if (t == NodeType::Vertex) {
    // Coarse vertices are the id-coincident prefix of the fine vertex set.
    map.pool_src.resize(map.coarse_nodes);
    for (int i = 0; i < map.coarse_nodes; ++i) {
      if ((fine.vertices[i] - coarse.vertices[i]).norm() > 1e-12)
        throw std::runtime_error("coarse vertex does not coincide with fine vertex");
      map.pool_src[i] = {i};
    }
    map.unpool.resize(map.fine_nodes);
    for (int v = 0; v < map.fine_nodes; ++v) {
      const auto [a, b] = fine.vertex_parents[v];
      if (a == b)
        map.unpool[v] = {{a, 1.0}};
      else
        map.unpool[v] = {{a, 0.5}, {b, 0.5}};
    }
  } else {
    map.pool_src.resize(map.coarse_nodes);
    map.unpool.resize(map.fine_nodes);
    for (int fface = 0; fface < map.fine_nodes; ++fface) {
      int parent = fine.face_parent[fface];
      if (mode == PoolMode::Center) {
        if (fine.face_is_central[fface]) map.pool_src[parent] = {fface};
      } else {
        map.pool_src[parent].push_back(fface);
      }
      map.unpool[fface] = {{parent, 1.0}};
    }
  }
  return map;
}

SymmetryPermutation z_symmetry_permutation(const SphereGraph& g, NodeType t,
                                           int k, bool reflect) {
  if (k < 0 || k > 4) throw std::invalid_argument("rotation index k must be in 0..4");
  auto pos = node_positions(g, t);
  const double angle = 2.0 * kPi * k / 5.0;
  const double ca = std::cos(angle), sa = std::sin(angle);

  PointIndex index(pos);
  SymmetryPermutation sym;
  sym.k = k;
  sym.reflect = reflect;
  sym.perm.resize(pos.size());
  for (std::size_t i = 0; i < pos.size(); ++i) {
    Eigen::Vector3d p = pos[i];
    if (reflect) p.y() = -p.y();
    Eigen::Vector3d q(ca * p.x() - sa * p.y(), sa * p.x() + ca * p.y(), p.z());
    int j = index.find(q, 1e-6);
    if (j < 0)
      throw std::runtime_error(
          "no node matches the rotated position; graph is not pole-oriented");
    sym.perm[i] = j;
  }
  return sym;
}

std::string graph_to_json(const SphereGraph& g) {
  if (g.rank > 3)
    throw std::invalid_argument("JSON export is limited to ranks <= 3");
  nlohmann::json j;
  j["rank"] = g.rank;
  j["vertex_count"] = g.vertex_count();
  j["face_count"] = g.face_count();
  j["edge_count"] = g.edge_count();
  auto& verts = j["vertices"] = nlohmann::json::array();
  for (const auto& v : g.vertices) verts.push_back({v.x(), v.y(), v.z()});
  j["faces"] = g.faces;
  j["vertex_adj"] = g.vertex_adj;
  return j.dump();
}

void write_obj(const SphereGraph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << "# icosphere rank " << g.rank << "\n";
  char line[128];
  for (const auto& v : g.vertices) {
    std::snprintf(line, sizeof(line), "v %.17g %.17g %.17g\n", v.x(), v.y(), v.z());
    out << line;
  }
  for (const auto& [a, b, c] : g.faces)
    out << "f " << a + 1 << ' ' << b + 1 << ' ' << c + 1 << "\n";
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace sufm
