#include "mfc/geometry.hpp"

#include <cmath>

namespace mfc {

namespace {

int to_grid_index(double x, int nh, const char* what) {
  double scaled = x * nh;
  double rounded = std::round(scaled);
  if (std::abs(scaled - rounded) > 1e-9 * nh) {
    throw std::invalid_argument(std::string(what) + " coordinate " +
                                std::to_string(x) +
                                " is not a multiple of h = 1/" +
                                std::to_string(nh));
  }
  return static_cast<int>(rounded);
}

}  // namespace

Geometry Geometry::periodic(int nh, int nt, double horizon) {
  if (nh < 2 || nt < 2) throw std::invalid_argument("need Nh >= 2 and NT >= 2");
  if (!(horizon > 0)) throw std::invalid_argument("horizon T must be positive");
  Geometry g;
  g.kind_ = GeometryKind::Periodic;
  g.nh_ = nh;
  g.nt_ = nt;
  g.horizon_ = horizon;
  g.build_periodic_tables();
  return g;
}

Geometry Geometry::box(int nh, int nt, double horizon,
                       std::vector<Rect> obstacles) {
  if (nh < 2 || nt < 2) throw std::invalid_argument("need Nh >= 2 and NT >= 2");
  if (!(horizon > 0)) throw std::invalid_argument("horizon T must be positive");
  Geometry g;
  g.kind_ = GeometryKind::Box;
  g.nh_ = nh;
  g.nt_ = nt;
  g.horizon_ = horizon;
  g.obstacles_ = std::move(obstacles);
  for (const Rect& r : g.obstacles_) {
    IRect ir;
    ir.i1 = to_grid_index(r.x1min, nh, "obstacle");
    ir.i2 = to_grid_index(r.x1max, nh, "obstacle");
    ir.j1 = to_grid_index(r.x2min, nh, "obstacle");
    ir.j2 = to_grid_index(r.x2max, nh, "obstacle");
    if (ir.i1 >= ir.i2 || ir.j1 >= ir.j2)
      throw std::invalid_argument("obstacle rectangle is empty");
    if (ir.i1 <= 0 || ir.i2 >= nh || ir.j1 <= 0 || ir.j2 >= nh)
      throw std::invalid_argument(
          "obstacle must lie strictly inside the unit square");
    g.iobs_.push_back(ir);
  }
  g.build_box_tables();
  return g;
}

void Geometry::build_periodic_tables() {
  side_ = nh_;
  ns_ = nh_ * nh_;
  id_.assign(ns_, 0);
  gi_.resize(ns_);
  gj_.resize(ns_);
  nb_.resize(4 * ns_);
  for (int j = 0; j < nh_; ++j) {
    for (int i = 0; i < nh_; ++i) {
      int s = i + nh_ * j;
      id_[s] = s;
      gi_[s] = i;
      gj_[s] = j;
      int ip = (i + 1) % nh_, im = (i + nh_ - 1) % nh_;
      int jp = (j + 1) % nh_, jm = (j + nh_ - 1) % nh_;
      nb_[4 * s + XPlus] = ip + nh_ * j;
      nb_[4 * s + XMinus] = im + nh_ * j;
      nb_[4 * s + YPlus] = i + nh_ * jp;
      nb_[4 * s + YMinus] = i + nh_ * jm;
    }
  }
}

void Geometry::build_box_tables() {
  side_ = nh_ + 1;
  id_.assign(side_ * side_, -1);
  auto excluded = [&](int i, int j) {
    for (const IRect& r : iobs_)
      if (i > r.i1 && i < r.i2 && j > r.j1 && j < r.j2) return true;
    return false;
  };
  // An edge between (i,j) and (i+1,j) may still cross an obstacle interior
  // when both endpoints sit on opposite faces of a one-cell-wide obstacle.
  auto edge_blocked_x = [&](int i, int j) {
    for (const IRect& r : iobs_)
      if (i >= r.i1 && i + 1 <= r.i2 && j > r.j1 && j < r.j2) return true;
    return false;
  };
  auto edge_blocked_y = [&](int i, int j) {
    for (const IRect& r : iobs_)
      if (j >= r.j1 && j + 1 <= r.j2 && i > r.i1 && i < r.i2) return true;
    return false;
  };

  ns_ = 0;
  for (int j = 0; j <= nh_; ++j)
    for (int i = 0; i <= nh_; ++i)
      if (!excluded(i, j)) {
        int s = ns_++;
        id_[i + side_ * j] = s;
        gi_.push_back(i);
        gj_.push_back(j);
      }
  nb_.assign(4 * ns_, -1);
  for (int s = 0; s < ns_; ++s) {
    int i = gi_[s], j = gj_[s];
    if (i + 1 <= nh_ && !edge_blocked_x(i, j))
      nb_[4 * s + XPlus] = id_[(i + 1) + side_ * j];
    if (i - 1 >= 0 && !edge_blocked_x(i - 1, j))
      nb_[4 * s + XMinus] = id_[(i - 1) + side_ * j];
    if (j + 1 <= nh_ && !edge_blocked_y(i, j))
      nb_[4 * s + YPlus] = id_[i + side_ * (j + 1)];
    if (j - 1 >= 0 && !edge_blocked_y(i, j - 1))
      nb_[4 * s + YMinus] = id_[i + side_ * (j - 1)];
  }
  for (int s = 0; s < ns_; ++s) {
    bool xp = nb_[4 * s + XPlus] >= 0, xm = nb_[4 * s + XMinus] >= 0;
    bool yp = nb_[4 * s + YPlus] >= 0, ym = nb_[4 * s + YMinus] >= 0;
    if ((!xp && !xm) || (!yp && !ym))
      throw std::invalid_argument(
          "admissible region contains a corridor of zero width at node (" +
          std::to_string(gi_[s]) + "," + std::to_string(gj_[s]) + ")");
  }
}

int Geometry::node_id(int i, int j) const {
  if (kind_ == GeometryKind::Periodic) {
    i = ((i % nh_) + nh_) % nh_;
    j = ((j % nh_) + nh_) % nh_;
    return i + nh_ * j;
  }
  if (i < 0 || i > nh_ || j < 0 || j > nh_) return -1;
  return id_[i + side_ * j];
}

unsigned Geometry::channel_mask(int s) const {
  unsigned m = 0;
  for (int c = 0; c < 4; ++c)
    if (nb_[4 * s + c] >= 0) m |= (1u << c);
  return m;
}

NodeClass Geometry::classify(int i, int j) const {
  if (kind_ == GeometryKind::Periodic) return NodeClass::Interior;
  int s = node_id(i, j);
  if (s < 0) return NodeClass::Excluded;
  bool xp = nb_[4 * s + XPlus] >= 0, xm = nb_[4 * s + XMinus] >= 0;
  bool yp = nb_[4 * s + YPlus] >= 0, ym = nb_[4 * s + YMinus] >= 0;
  if (!xm && !ym) return NodeClass::CornerBottomLeft;
  if (!xp && !ym) return NodeClass::CornerBottomRight;
  if (!xm && !yp) return NodeClass::CornerTopLeft;
  if (!xp && !yp) return NodeClass::CornerTopRight;
  if (!xm) return NodeClass::EdgeLeft;
  if (!xp) return NodeClass::EdgeRight;
  if (!ym) return NodeClass::EdgeBottom;
  if (!yp) return NodeClass::EdgeTop;
  return NodeClass::Interior;
}

bool Geometry::operator==(const Geometry& o) const {
  if (kind_ != o.kind_ || nh_ != o.nh_ || nt_ != o.nt_ ||
      horizon_ != o.horizon_ || obstacles_.size() != o.obstacles_.size())
    return false;
  for (size_t k = 0; k < obstacles_.size(); ++k) {
    const Rect &a = obstacles_[k], &b = o.obstacles_[k];
    if (a.x1min != b.x1min || a.x1max != b.x1max || a.x2min != b.x2min ||
        a.x2max != b.x2max)
      return false;
  }
  return true;
}

}  // namespace mfc
