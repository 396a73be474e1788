#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace mfc {

enum class GeometryKind { Periodic, Box };

/// Spatial node classification for the state-constrained (Box) setting.
/// Edge/corner names refer to the directions in which a one-sided
/// difference is unavailable; an obstacle face produces the class of the
/// opposite outer boundary (reversed normal).
enum class NodeClass {
  Interior,
  EdgeLeft,
  EdgeRight,
  EdgeBottom,
  EdgeTop,
  CornerBottomLeft,
  CornerBottomRight,
  CornerTopLeft,
  CornerTopRight,
  Excluded,
};

/// Axis-aligned rectangle [x1min,x1max] x [x2min,x2max].
struct Rect {
  double x1min = 0, x1max = 0, x2min = 0, x2max = 0;

  bool operator==(const Rect&) const = default;
};

/// Direction indices for spatial neighbors and the four one-sided
/// difference channels of the stacked operator:
///   channel 0 <-> p1 = (D1+ f)_{i,j}    (needs the +x neighbor)
///   channel 1 <-> p2 = (D1+ f)_{i-1,j}  (needs the -x neighbor)
///   channel 2 <-> p3 = (D2+ f)_{i,j}    (needs the +y neighbor)
///   channel 3 <-> p4 = (D2+ f)_{i,j-1}  (needs the -y neighbor)
enum Direction : int { XPlus = 0, XMinus = 1, YPlus = 2, YMinus = 3 };

/// Immutable space-time grid descriptor.
///
/// Periodic: spatial nodes (i,j) with i,j in {0..Nh-1}, indices taken
/// modulo Nh.  Box: nodes (i,j) with i,j in {0..Nh}, minus the nodes
/// strictly inside an obstacle; obstacle boundaries must lie on grid
/// lines and strictly inside (0,1)^2.
class Geometry {
 public:
  static Geometry periodic(int nh, int nt, double horizon);
  static Geometry box(int nh, int nt, double horizon,
                      std::vector<Rect> obstacles = {});

  GeometryKind kind() const { return kind_; }
  int nh() const { return nh_; }
  int nt() const { return nt_; }
  double horizon() const { return horizon_; }
  double h() const { return 1.0 / nh_; }
  double dt() const { return horizon_ / nt_; }
  const std::vector<Rect>& obstacles() const { return obstacles_; }

  /// Number of admissible spatial nodes.
  int num_nodes() const { return ns_; }
  /// Compact id of node (i,j); -1 if excluded/out of domain (Box).
  /// Periodic indices are reduced modulo Nh first.
  int node_id(int i, int j) const;
  /// Compact id of the neighbor of node s in direction d, or -1 when the
  /// corresponding one-sided difference is unavailable.
  int neighbor(int s, int d) const { return nb_[4 * s + d]; }
  /// Whether difference channel c (0..3, see Direction) exists at node s.
  bool channel_active(int s, int c) const { return nb_[4 * s + c] >= 0; }
  /// Bitmask of active channels at node s (bit c set iff channel c active).
  unsigned channel_mask(int s) const;

  int grid_i(int s) const { return gi_[s]; }
  int grid_j(int s) const { return gj_[s]; }
  double x1(int s) const { return gi_[s] * h(); }
  double x2(int s) const { return gj_[s] * h(); }

  NodeClass classify(int i, int j) const;

  /// Flat sizes of the two field types living on this grid.
  int scalar_size() const { return (nt_ + 1) * ns_; }
  int stacked_size() const { return 5 * nt_ * ns_; }

  bool operator==(const Geometry& o) const;

 private:
  Geometry() = default;
  void build_box_tables();
  void build_periodic_tables();

  GeometryKind kind_ = GeometryKind::Periodic;
  int nh_ = 0, nt_ = 0;
  double horizon_ = 1.0;
  std::vector<Rect> obstacles_;
  // obstacles in grid-index units
  struct IRect {
    int i1, i2, j1, j2;
  };
  std::vector<IRect> iobs_;

  int ns_ = 0;
  int side_ = 0;                // nodes per row in the full grid
  std::vector<int> id_;         // full-grid -> compact id (-1 excluded)
  std::vector<int> gi_, gj_;    // compact id -> grid coordinates
  std::vector<int> nb_;         // 4 neighbor ids per node (-1 missing)
};

}  // namespace mfc
