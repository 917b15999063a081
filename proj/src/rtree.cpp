#include "catbranch/rtree.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "catbranch/contour.hpp"

namespace catbranch {

namespace {

void check_node(const FamilyForest& f, int id) {
  if (id < 0 || static_cast<std::size_t>(id) >= f.nodes.size())
    throw InputError("node id " + std::to_string(id) + " out of range");
}

void check_point(const FamilyForest& f, const TreePoint& p) {
  check_node(f, p.node);
  const Node& n = f.nodes[p.node];
  if (!(p.offset >= 0.0) || n.birth + p.offset > n.death)
    throw InputError("offset outside the lifetime of node " + std::to_string(p.node));
}

// Highest point of each subtree (max death over descendants).
std::vector<double> subtree_heights(const FamilyForest& f) {
  std::vector<double> h(f.nodes.size(), 0.0);
  auto order = preorder(f);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const Node& n = f.nodes[*it];
    double m = n.death;
    for (int c : n.children) m = std::max(m, h[c]);
    h[*it] = m;
  }
  return h;
}

double diameter(const FamilyForest& f) {
  auto H = subtree_heights(f);
  double best = 0.0, top1 = 0.0, top2 = 0.0;
  for (int r : f.roots) {
    double v = H[r];
    if (v > top1) { top2 = top1; top1 = v; }
    else if (v > top2) top2 = v;
  }
  best = std::max(top1, top1 + top2);
  for (const Node& n : f.nodes) {
    if (n.children.size() < 2) continue;
    double a = 0.0, b = 0.0;
    for (int c : n.children) {
      double v = H[c] - n.death;
      if (v > a) { b = a; a = v; }
      else if (v > b) b = v;
    }
    best = std::max(best, a + b);
  }
  return best;
}

// Largest distance inside each subtree between two points below the subtree's own edge:
// max over its branch points of the two deepest child excursions.
std::vector<double> branch_diameters(const FamilyForest& f, const std::vector<double>& H) {
  std::vector<double> D(f.nodes.size(), 0.0);
  auto order = preorder(f);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const Node& n = f.nodes[*it];
    double a = 0.0, b = 0.0, m = 0.0;
    for (int c : n.children) {
      m = std::max(m, D[c]);
      double v = H[c] - n.death;
      if (v > a) { b = a; a = v; }
      else if (v > b) b = v;
    }
    D[*it] = std::max(m, n.children.size() >= 2 ? a + b : 0.0);
  }
  return D;
}

// `small` sits inside `big` as a root-preserving ordered sub-forest obtained by clipping.
// Returns half the distortion of the correspondence that sends each clipped-away point to
// its clip point; nullopt if the shapes do not line up.
std::optional<double> embedded_correspondence(const FamilyForest& big, const FamilyForest& small) {
  if (big.roots.size() != small.roots.size()) return std::nullopt;
  auto H = subtree_heights(big);
  auto D = branch_diameters(big, H);
  double e1 = 0.0, e2 = 0.0, diam = 0.0;
  auto clipped = [&](int vb, double p) {
    double e = H[vb] - p;
    diam = std::max({diam, e, D[vb]});
    if (e > e1) { e2 = e1; e1 = e; }
    else if (e > e2) e2 = e;
  };
  std::function<bool(int, int)> match = [&](int vb, int vs) -> bool {
    const Node& b = big.nodes[vb];
    const Node& s = small.nodes[vs];
    if (b.birth != s.birth || s.death > b.death) return false;
    if (s.death < b.death) {
      if (!s.children.empty()) return false;
      clipped(vb, s.death);
      return true;
    }
    if (s.children.empty()) {
      if (!b.children.empty()) clipped(vb, b.death);
      return true;
    }
    if (s.children.size() != b.children.size()) return false;
    for (std::size_t i = 0; i < s.children.size(); ++i)
      if (!match(b.children[i], s.children[i])) return false;
    return true;
  };
  for (std::size_t i = 0; i < big.roots.size(); ++i)
    if (!match(big.roots[i], small.roots[i])) return std::nullopt;
  return 0.5 * std::max(diam, e1 + e2);
}

// Sup-norm between two excursions after rescaling both to unit duration.
double rescaled_sup_distance(const Excursion& a, const Excursion& b) {
  double ua = a.duration(), ub = b.duration();
  std::vector<double> grid;
  for (const auto& p : a.points) grid.push_back(ua > 0 ? p.u / ua : 0.0);
  for (const auto& p : b.points) grid.push_back(ub > 0 ? p.u / ub : 0.0);
  std::sort(grid.begin(), grid.end());
  double m = 0.0;
  for (double g : grid) {
    double va = ua > 0 ? a.value_at(g * ua) : 0.0;
    double vb = ub > 0 ? b.value_at(g * ub) : 0.0;
    m = std::max(m, std::abs(va - vb));
  }
  return m;
}

std::vector<TreePoint> skeleton(const FamilyForest& f) {
  std::vector<TreePoint> s;
  s.push_back({f.roots.front(), 0.0});
  for (std::size_t i = 0; i < f.nodes.size(); ++i) {
    const Node& n = f.nodes[i];
    if (n.death > n.birth) s.push_back({static_cast<int>(i), n.death - n.birth});
  }
  return s;
}

// Half the minimal distortion over correspondences between skeletons that pair the roots.
double skeleton_correspondence(const FamilyForest& f1, const FamilyForest& f2) {
  auto s1 = skeleton(f1), s2 = skeleton(f2);
  auto d1 = pairwise_distances(f1, s1), d2 = pairwise_distances(f2, s2);
  const int a = static_cast<int>(s1.size()), b = static_cast<int>(s2.size());
  const int npairs = a * b;
  double best = kInf;
  std::vector<std::pair<int, int>> rel;
  for (unsigned long mask = 0; mask < (1UL << (npairs - 1)); ++mask) {
    rel.assign(1, {0, 0});
    for (int k = 1; k < npairs; ++k)
      if (mask & (1UL << (k - 1))) rel.push_back({k / b, k % b});
    std::vector<char> c1(a, 0), c2(b, 0);
    for (auto [i, j] : rel) { c1[i] = 1; c2[j] = 1; }
    if (std::count(c1.begin(), c1.end(), 0) || std::count(c2.begin(), c2.end(), 0)) continue;
    double dis = 0.0;
    for (auto [i, j] : rel)
      for (auto [k, l] : rel) dis = std::max(dis, std::abs(d1(i, k) - d2(j, l)));
    best = std::min(best, dis);
  }
  return 0.5 * best;
}

}  // namespace

int add_root(FamilyForest& f, double birth, double death) {
  Node n;
  n.birth = birth;
  n.death = death;
  f.nodes.push_back(std::move(n));
  int id = static_cast<int>(f.nodes.size()) - 1;
  f.roots.push_back(id);
  return id;
}

int add_child(FamilyForest& f, int parent, double death) {
  check_node(f, parent);
  Node n;
  n.parent = parent;
  n.birth = f.nodes[parent].death;
  n.death = death;
  if (!std::isfinite(n.birth)) throw InputError("cannot branch from an immortal node");
  f.nodes.push_back(std::move(n));
  int id = static_cast<int>(f.nodes.size()) - 1;
  f.nodes[parent].children.push_back(id);
  return id;
}

void assign_labels(FamilyForest& f) {
  for (std::size_t r = 0; r < f.roots.size(); ++r) {
    f.nodes[f.roots[r]].label = {static_cast<int>(r)};
  }
  for (int v : preorder(f)) {
    const Node& n = f.nodes[v];
    for (std::size_t j = 0; j < n.children.size(); ++j) {
      auto lab = n.label;
      lab.push_back(static_cast<int>(j));
      f.nodes[n.children[j]].label = std::move(lab);
    }
  }
}

void validate(const FamilyForest& f) {
  // link consistency first, so the traversal below cannot loop
  std::vector<int> refs(f.nodes.size(), 0);
  for (std::size_t v = 0; v < f.nodes.size(); ++v)
    for (int c : f.nodes[v].children) {
      check_node(f, c);
      if (f.nodes[c].parent != static_cast<int>(v) || refs[c]++) throw InputError("parent/child mismatch");
    }
  std::vector<int> seen(f.nodes.size(), 0);
  for (int r : f.roots) {
    check_node(f, r);
    if (f.nodes[r].parent != kNoParent) throw InputError("root with a parent");
  }
  for (int v : preorder(f)) {
    if (seen[v]++) throw InputError("node reached twice: not a forest");
    const Node& n = f.nodes[v];
    if (!(n.birth >= 0.0) || n.death < n.birth) throw InputError("bad lifetime");
    if (f.height_cap && n.death > *f.height_cap) throw InputError("node above height cap");
    for (std::size_t j = 0; j < n.children.size(); ++j) {
      int c = n.children[j];
      check_node(f, c);
      const Node& k = f.nodes[c];
      if (k.parent != v) throw InputError("parent/child mismatch");
      if (k.birth != n.death) throw InputError("child not born at parent death");
      if (!n.label.empty() && !k.label.empty()) {
        if (k.label.size() != n.label.size() + 1 ||
            !std::equal(n.label.begin(), n.label.end(), k.label.begin()) ||
            k.label.back() != static_cast<int>(j))
          throw InputError("Ulam-Harris label inconsistent with child order");
      }
    }
  }
  for (std::size_t i = 0; i < seen.size(); ++i)
    if (!seen[i]) throw InputError("node unreachable from the roots");
}

std::vector<int> preorder(const FamilyForest& f) {
  std::vector<int> out, stack;
  out.reserve(f.nodes.size());
  for (auto it = f.roots.rbegin(); it != f.roots.rend(); ++it) stack.push_back(*it);
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    out.push_back(v);
    const auto& ch = f.nodes[v].children;
    for (auto it = ch.rbegin(); it != ch.rend(); ++it) stack.push_back(*it);
  }
  return out;
}

int tree_of(const FamilyForest& f, int node) {
  check_node(f, node);
  while (f.nodes[node].parent != kNoParent) node = f.nodes[node].parent;
  return node;
}

double point_height(const FamilyForest& f, const TreePoint& p) {
  check_point(f, p);
  return f.nodes[p.node].birth + p.offset;
}

double height(const FamilyForest& f) {
  double h = 0.0;
  for (const Node& n : f.nodes) h = std::max(h, n.death);
  return h;
}

double total_length(const FamilyForest& f) {
  double s = 0.0;
  for (const Node& n : f.nodes) s += n.death - n.birth;
  return s;
}

std::size_t leaf_count(const FamilyForest& f) {
  std::size_t k = 0;
  for (const Node& n : f.nodes) k += n.children.empty();
  return k;
}

bool is_finite(const FamilyForest& f) {
  return std::all_of(f.nodes.begin(), f.nodes.end(),
                     [](const Node& n) { return std::isfinite(n.death); });
}

double genealogical_distance(const FamilyForest& f, const TreePoint& a, const TreePoint& b) {
  const double t1 = point_height(f, a), t2 = point_height(f, b);
  if (a.node == b.node) return std::abs(t1 - t2);
  // walk both lineages up to equal depth in the ancestry
  std::vector<int> pa, pb;
  for (int v = a.node; v != kNoParent; v = f.nodes[v].parent) pa.push_back(v);
  for (int v = b.node; v != kNoParent; v = f.nodes[v].parent) pb.push_back(v);
  if (pa.back() != pb.back()) return t1 + t2;
  auto ia = pa.rbegin(), ib = pb.rbegin();
  int c = *ia;
  while (ia != pa.rend() && ib != pb.rend() && *ia == *ib) { c = *ia; ++ia; ++ib; }
  double tau;
  if (c == a.node) tau = t1;
  else if (c == b.node) tau = t2;
  else tau = f.nodes[c].death;
  return (t1 + t2) - 2.0 * tau;
}

Eigen::MatrixXd pairwise_distances(const FamilyForest& f, const std::vector<TreePoint>& pts) {
  const auto k = static_cast<Eigen::Index>(pts.size());
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(k, k);
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = i + 1; j < k; ++j) d(i, j) = d(j, i) = genealogical_distance(f, pts[i], pts[j]);
  return d;
}

FamilyForest truncate(const FamilyForest& f, double t) {
  if (!(t >= 0.0)) throw InputError("truncation level must be >= 0");
  FamilyForest g;
  std::function<void(int, int)> copy = [&](int v, int parent) {
    const Node& n = f.nodes[v];
    Node m;
    m.parent = parent;
    m.birth = n.birth;
    m.death = std::min(n.death, t);
    m.label = n.label;
    g.nodes.push_back(m);
    int id = static_cast<int>(g.nodes.size()) - 1;
    if (parent == kNoParent) g.roots.push_back(id);
    else g.nodes[parent].children.push_back(id);
    if (n.death < t)
      for (int c : n.children) copy(c, id);
  };
  for (int r : f.roots) copy(r, kNoParent);
  g.height_cap = f.height_cap ? std::min(*f.height_cap, t) : t;
  return g;
}

std::vector<TreePoint> level_set(const FamilyForest& f, double t) {
  std::vector<TreePoint> out;
  if (t < 0.0) return out;
  for (int v : preorder(f)) {
    const Node& n = f.nodes[v];
    bool hit = (t > n.birth && t <= n.death) || (n.parent == kNoParent && t == n.birth);
    if (hit) out.push_back({v, t - n.birth});
  }
  return out;
}

FamilyForest trim(const FamilyForest& f, double eps) {
  if (!(eps > 0.0)) throw InputError("trim requires eps > 0");
  auto H = subtree_heights(f);
  FamilyForest g;
  std::function<void(int, int)> copy = [&](int v, int parent) {
    const Node& n = f.nodes[v];
    Node m;
    m.parent = parent;
    m.birth = n.birth;
    m.death = std::min(n.death, H[v] - eps);
    m.label = n.label;
    g.nodes.push_back(m);
    int id = static_cast<int>(g.nodes.size()) - 1;
    if (parent == kNoParent) g.roots.push_back(id);
    else g.nodes[parent].children.push_back(id);
    if (H[v] - eps >= n.death)
      for (int c : n.children)
        if (H[c] - eps > f.nodes[c].birth) copy(c, id);
  };
  for (int r : f.roots)
    if (H[r] - eps >= f.nodes[r].birth) copy(r, kNoParent);
  if (g.roots.empty() && !f.roots.empty()) {
    int r = add_root(g, f.nodes[f.roots.front()].birth, f.nodes[f.roots.front()].birth);
    g.nodes[r].label = f.nodes[f.roots.front()].label;
  }
  g.height_cap = f.height_cap;
  return g;
}

std::vector<TreePoint> ancestors(const FamilyForest& f, double t, double eps) {
  if (!(eps > 0.0) || eps > t) throw InputError("ancestors requires 0 < eps <= t");
  auto H = subtree_heights(f);
  std::vector<TreePoint> out;
  for (const TreePoint& p : level_set(f, t - eps))
    if (H[p.node] >= t) out.push_back(p);
  return out;
}

GhBounds gh_distance_bounds(const FamilyForest& f1, const FamilyForest& f2) {
  if (!is_finite(f1) || !is_finite(f2)) throw InputError("gh bounds need finite forests");
  if (f1.roots.empty() || f2.roots.empty()) throw InputError("gh bounds need non-empty forests");
  const double h1 = height(f1), h2 = height(f2);
  const double D1 = diameter(f1), D2 = diameter(f2);
  GhBounds r;
  r.lower = std::max(0.5 * std::abs(h1 - h2), 0.5 * std::abs(D1 - D2));
  double up = 0.5 * std::max(D1, D2);
  up = std::min(up, 2.0 * rescaled_sup_distance(contour_from_forest(f1, 1.0), contour_from_forest(f2, 1.0)));
  if (auto e = embedded_correspondence(f1, f2)) up = std::min(up, *e);
  if (auto e = embedded_correspondence(f2, f1)) up = std::min(up, *e);
  r.upper = std::max(up, r.lower);
  if (skeleton(f1).size() + skeleton(f2).size() <= 8) r.skeleton_estimate = skeleton_correspondence(f1, f2);
  return r;
}

double i2_length(const FamilyForest& f, double mesh) {
  if (!(mesh > 0.0)) throw InputError("mesh must be > 0");
  if (!is_finite(f)) throw InputError("i2_length needs a finite forest");
  double s = 0.0;
  for (const Node& n : f.nodes) {
    double len = n.death - n.birth;
    if (len <= 0.0) continue;
    double k = std::max(1.0, std::ceil(len / mesh));
    s += k * (len / k) * (len / k);
  }
  return s;
}

FamilyForest merge_unary(const FamilyForest& f) {
  FamilyForest g;
  std::function<void(int, int)> copy = [&](int v, int parent) {
    const Node& n = f.nodes[v];
    Node m;
    m.parent = parent;
    m.birth = n.birth;
    int last = v;
    while (f.nodes[last].children.size() == 1) last = f.nodes[last].children.front();
    m.death = f.nodes[last].death;
    g.nodes.push_back(m);
    int id = static_cast<int>(g.nodes.size()) - 1;
    if (parent == kNoParent) g.roots.push_back(id);
    else g.nodes[parent].children.push_back(id);
    for (int c : f.nodes[last].children) copy(c, id);
  };
  for (int r : f.roots) copy(r, kNoParent);
  g.height_cap = f.height_cap;
  assign_labels(g);
  return g;
}

bool ordered_isometric(const FamilyForest& a0, const FamilyForest& b0) {
  FamilyForest a = merge_unary(a0), b = merge_unary(b0);
  if (a.roots.size() != b.roots.size()) return false;
  std::function<bool(int, int)> same = [&](int x, int y) {
    const Node& p = a.nodes[x];
    const Node& q = b.nodes[y];
    if (p.birth != q.birth || p.death != q.death || p.children.size() != q.children.size()) return false;
    for (std::size_t i = 0; i < p.children.size(); ++i)
      if (!same(p.children[i], q.children[i])) return false;
    return true;
  };
  for (std::size_t i = 0; i < a.roots.size(); ++i)
    if (!same(a.roots[i], b.roots[i])) return false;
  return true;
}

}  // namespace catbranch
