#include "catbranch/points.hpp"

#include <algorithm>
#include <cmath>

namespace catbranch {

GenealogicalPointProcess point_process_at_level(const FamilyForest& f, double t, double spacing) {
  if (!(spacing > 0.0)) throw InputError("spacing must be > 0");
  if (!(t >= 0.0)) throw InputError("level must be >= 0");
  if (f.height_cap && t > *f.height_cap) throw InputError("level above the forest's height cap");
  GenealogicalPointProcess p;
  p.t = t;
  p.spacing = spacing;
  auto lv = level_set(f, t);
  for (std::size_t i = 1; i < lv.size(); ++i) {
    double d = genealogical_distance(f, lv[i - 1], lv[i]);
    GenealogyPoint g;
    g.ell = static_cast<double>(i) * spacing;
    g.h = t - 0.5 * d;
    g.separator = tree_of(f, lv[i - 1].node) != tree_of(f, lv[i].node);
    p.zero_marks += g.separator;
    p.points.push_back(g);
  }
  return p;
}

Eigen::MatrixXd reconstruct_distance_matrix(const GenealogicalPointProcess& p) {
  const auto k = static_cast<Eigen::Index>(p.points.size());
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(k + 1, k + 1);
  for (Eigen::Index i = 0; i <= k; ++i) {
    double m = 0.0;
    for (Eigen::Index l = i + 1; l <= k; ++l) {
      m = std::max(m, (p.t + p.t) - 2.0 * p.points[l - 1].h);
      d(i, l) = d(l, i) = m;
    }
  }
  return d;
}

std::vector<DepthEntry> excursion_depths_below_level(const Excursion& e, double t, double spacing) {
  std::vector<DepthEntry> out;
  bool reached = false, below = false;
  double lo = 0.0;
  for (const Breakpoint& b : e.points) {
    if (b.e >= t) {
      if (below) out.push_back({static_cast<double>(out.size() + 1) * spacing, t - lo});
      reached = true;
      below = false;
    } else if (reached) {
      lo = below ? std::min(lo, b.e) : b.e;
      below = true;
    }
  }
  return out;
}

std::vector<DepthEntry> excursion_depths_below_level(const DiffusionPath& path, double t,
                                                     const DepthOptions& opt) {
  std::vector<DepthEntry> out;
  const auto& v = path.values;
  if (v.size() < 2) return out;
  double qv = 0.0;
  for (std::size_t i = 1; i < v.size(); ++i) qv += (v[i] - v[i - 1]) * (v[i] - v[i - 1]);
  const double rms = std::sqrt(qv / static_cast<double>(v.size() - 1));
  const double floor = opt.depth_floor >= 0.0 ? opt.depth_floor : 10.0 * rms;
  const double eps = opt.band > 0.0 ? opt.band : 5.0 * rms;
  double L = 0.0, idx = 0.0, lo = 0.0;
  bool reached = false, below = false;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i > 0 && std::abs(v[i - 1] - t) < eps) L += (v[i] - v[i - 1]) * (v[i] - v[i - 1]);
    if (v[i] >= t) {
      if (below) {
        double depth = t - lo + opt.depth_shift;
        if (depth >= floor) out.push_back({idx, depth});
      }
      reached = true;
      below = false;
    } else if (reached) {
      if (!below) {
        idx = opt.ell_scale * L / (2.0 * eps);
        lo = v[i];
      }
      lo = std::min(lo, v[i]);
      below = true;
    }
  }
  return out;
}

}  // namespace catbranch
