#include "catbranch/contour.hpp"

#include <algorithm>
#include <cmath>

namespace catbranch {

double Excursion::value_at(double u) const {
  if (points.empty() || u <= points.front().u) return points.empty() ? 0.0 : points.front().e;
  if (u >= points.back().u) return points.back().e;
  auto it = std::upper_bound(points.begin(), points.end(), u,
                             [](double x, const Breakpoint& p) { return x < p.u; });
  const Breakpoint& q = *it;
  const Breakpoint& p = *(it - 1);
  if (q.u == p.u) return q.e;
  return p.e + (q.e - p.e) * (u - p.u) / (q.u - p.u);
}

double Excursion::max_height() const {
  double m = 0.0;
  for (const auto& p : points) m = std::max(m, p.e);
  return m;
}

void validate(const Excursion& e) {
  if (e.points.empty()) throw InputError("empty excursion");
  if (e.points.front().u != 0.0 || e.points.front().e != 0.0) throw InputError("excursion must start at (0,0)");
  if (e.points.back().e != 0.0) throw InputError("excursion must end at height 0");
  for (std::size_t i = 0; i < e.points.size(); ++i) {
    if (!(e.points[i].e >= 0.0) || !std::isfinite(e.points[i].e)) throw InputError("negative or non-finite height");
    if (i && !(e.points[i].u > e.points[i - 1].u)) throw InputError("times must increase strictly");
  }
}

Excursion canonical(const Excursion& e) {
  Excursion out;
  out.speed = e.speed;
  for (const Breakpoint& q : e.points) {
    if (!out.points.empty() && q.u == out.points.back().u) {
      if (q.e != out.points.back().e) throw InputError("excursion jumps at u=" + std::to_string(q.u));
      continue;
    }
    if (out.points.size() >= 2) {
      const Breakpoint& a = out.points[out.points.size() - 2];
      const Breakpoint& b = out.points.back();
      if ((b.e - a.e) * (q.u - b.u) == (q.e - b.e) * (b.u - a.u)) {
        out.points.back() = q;
        continue;
      }
    }
    out.points.push_back(q);
  }
  return out;
}

Excursion contour_from_forest(const FamilyForest& f, double sigma) {
  if (!(sigma > 0.0)) throw InputError("contour speed must be > 0");
  if (!is_finite(f)) throw InputError("cannot trace the contour of an infinite forest");
  Excursion ex;
  ex.speed = sigma;
  ex.points.push_back({0.0, 0.0});
  double u = 0.0;
  // (node, next child index); child index -1 means "climb the edge first"
  std::vector<std::pair<int, int>> stack;
  for (int r : f.roots) {
    if (f.nodes[r].birth != 0.0) throw InputError("roots must sit at height 0");
    stack.push_back({r, -1});
    while (!stack.empty()) {
      auto& [v, k] = stack.back();
      const Node& n = f.nodes[v];
      if (k == -1) {
        u += (n.death - n.birth) / sigma;
        ex.points.push_back({u, n.death});
        k = 0;
      } else if (k < static_cast<int>(n.children.size())) {
        int c = n.children[k++];
        stack.push_back({c, -1});
      } else {
        u += (n.death - n.birth) / sigma;
        ex.points.push_back({u, n.birth});
        stack.pop_back();
      }
    }
  }
  return canonical(ex);
}

namespace {

// Alternating extrema 0, M1, m1, M2, ..., 0 of a piecewise-linear path.
std::vector<double> extrema(const Excursion& e) {
  std::vector<double> h;
  for (const auto& p : e.points)
    if (h.empty() || p.e != h.back()) h.push_back(p.e);
  std::vector<double> out;
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (i == 0 || i + 1 == h.size()) { out.push_back(h[i]); continue; }
    bool peak = h[i] > h[i - 1] && h[i] > h[i + 1];
    bool dip = h[i] < h[i - 1] && h[i] < h[i + 1];
    if (peak || dip) out.push_back(h[i]);
  }
  return out;
}

}  // namespace

FamilyForest tree_from_excursion(const Excursion& e) {
  validate(e);
  FamilyForest f;
  auto x = extrema(e);
  if (x.size() < 3) {
    add_root(f, 0.0, 0.0);
    assign_labels(f);
    return f;
  }
  std::vector<int> path;
  // x = 0, M1, m1, M2, m2, ..., Mk, 0
  for (std::size_t i = 1; i + 1 < x.size(); i += 2) {
    const double M = x[i];
    if (path.empty()) {
      path.push_back(add_root(f, 0.0, M));
    } else {
      const double m = x[i - 1];
      while (f.nodes[path.back()].birth > m) path.pop_back();
      int X = path.back();
      // split X at m; the part above keeps X's subtree
      Node up;
      up.parent = X;
      up.birth = m;
      up.death = f.nodes[X].death;
      up.children = std::move(f.nodes[X].children);
      f.nodes.push_back(std::move(up));
      int U = static_cast<int>(f.nodes.size()) - 1;
      for (int c : f.nodes[U].children) f.nodes[c].parent = U;
      f.nodes[X].death = m;
      f.nodes[X].children = {U};
      path.push_back(add_child(f, X, M));
    }
    if (x[i + 1] == 0.0) path.clear();
  }
  assign_labels(f);
  return f;
}

Excursion excise_above(const Excursion& e, double t) {
  if (!(t >= 0.0)) throw InputError("excision level must be >= 0");
  if (t >= e.max_height()) return e;
  Excursion out;
  out.speed = e.speed;
  out.points.push_back(e.points.front());
  double v = 0.0;
  for (std::size_t i = 1; i < e.points.size(); ++i) {
    const Breakpoint& p = e.points[i - 1];
    const Breakpoint& q = e.points[i];
    const double du = q.u - p.u;
    if (p.e <= t && q.e <= t) {
      v += du;
      out.points.push_back({v, q.e});
    } else if (p.e <= t) {
      double w = (t - p.e) * du / (q.e - p.e);
      v += w;
      out.points.push_back({v, t});
    } else if (q.e <= t) {
      double w = (p.e - t) * du / (p.e - q.e);
      out.points.push_back({v, t});
      v += du - w;
      out.points.push_back({v, q.e});
    }
  }
  return canonical(out);
}

}  // namespace catbranch
