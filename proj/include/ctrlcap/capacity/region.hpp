#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "ctrlcap/numerics/random.hpp"

namespace ctrlcap::capacity {

using Point = std::complex<double>;

enum class RegionKind {
  Interval,             // [a, b] on the real line
  TwoIntervals,         // [-b, -a] u [a, b]
  Ellipse,              // semi-axes a (real), b (imaginary)
  Disk,                 // |z - c| <= r
  HalfDisk,             // |z| <= r, Im z >= 0
  Square,               // side l, axis aligned, centred at 0
  RegularNGon,          // n sides of length h, centred at 0
  EquilateralTriangle,  // side l, centred at 0
  Polygon,              // simple polygon, vertices in order
  Polyline,             // open curve through the vertices
  PointCloud,
};

std::string_view to_string(RegionKind kind);

/// z -> scale * z + shift. A complex scale is a rotation plus a dilation.
struct Affine {
  Point scale{1.0, 0.0};
  Point shift{0.0, 0.0};

  Point apply(Point z) const { return scale * z + shift; }
  Point invert(Point w) const { return (w - shift) / scale; }
  Affine then(const Affine& outer) const { return {outer.scale * scale, outer.scale * shift + outer.shift}; }
};

struct BoundingEllipse {
  Point center;
  double a = 0;      // semi-axis along exp(i theta)
  double b = 0;      // semi-axis along i exp(i theta), b <= a
  double theta = 0;
};

/// One piece of the boundary, traversed by a parameter u in [0, 1].
struct Curve {
  enum class Type { Segment, Arc, EllipseArc } type = Type::Segment;
  Point p0, p1;           // segment end points
  double rx = 0, ry = 0;  // arc radius / ellipse semi-axes, centred at 0
  double t0 = 0, t1 = 0;  // angles
  bool closed = false;    // part of a closed loop (end point repeats a start)
  Affine xf;              // canonical -> output coordinates
  double canonical_length = 0;
  std::vector<double> cumulative;  // ellipse arcs: normalised arc length at u = j / (size - 1)

  Point at(double u) const;
  /// Point at arc-length fraction f in [0, 1].
  Point at_fraction(double f) const;
  double length() const;
};

/// Compact subset of the plane. Shapes are stored in canonical coordinates
/// with an affine transform applied on output.
class Region {
 public:
  static Region interval(double a, double b);
  static Region two_intervals(double a, double b);
  static Region ellipse(double a, double b);
  static Region disk(Point center, double r);
  static Region half_disk(double r);
  static Region square(double l);
  static Region regular_ngon(int n, double h);
  static Region equilateral_triangle(double l);
  static Region polygon(std::vector<Point> vertices);
  static Region polyline(std::vector<Point> vertices);
  static Region point_cloud(std::vector<Point> points);
  static Region point(Point z) { return point_cloud({z}); }

  RegionKind kind() const { return kind_; }
  const std::vector<double>& params() const { return params_; }
  const std::vector<Point>& vertices() const { return vertices_; }
  const Affine& transform() const { return transform_; }

  Region transformed(const Affine& t) const;

  /// True for shapes with interior (sampled by area).
  bool two_dimensional() const;
  bool is_point_cloud() const { return kind_ == RegionKind::PointCloud; }
  bool is_single_point() const;
  /// Whether every point is real (within 1e-12 of the real axis).
  bool real_subset() const;

  /// Boundary pieces in output coordinates; empty for point clouds.
  std::vector<Curve> boundary() const;
  double boundary_length() const;

  /// Points spread by arc length over the boundary (open pieces include their
  /// end points). Point clouds return their points.
  std::vector<Point> boundary_grid(std::size_t count) const;

  /// Boundary point at arc-length fraction s in [0, 1).
  Point boundary_point(double s) const;

  bool contains(Point z, double tol = 1e-9) const;

  /// Uniform sample: by area for two-dimensional shapes, by arc length for
  /// curves, uniform over the points of a cloud.
  Point sample(numerics::Rng& rng) const;

  double area() const;
  double diameter() const;
  BoundingEllipse bounding_ellipse() const;

  /// Spec string in the CLI grammar, e.g. "interval:-1,1".
  std::string to_spec() const;

 private:
  Region(RegionKind kind, std::vector<double> params, std::vector<Point> vertices)
      : kind_(kind), params_(std::move(params)), vertices_(std::move(vertices)) {}

  std::vector<Curve> canonical_boundary() const;
  bool canonical_contains(Point z, double tol) const;
  void canonical_box(double& x0, double& x1, double& y0, double& y1) const;

  RegionKind kind_;
  std::vector<double> params_;
  std::vector<Point> vertices_;
  Affine transform_;
};

/// Parses the CLI region grammar:
///   interval:a,b  disk:cx,cy,r  ngon:n,h  twointervals:a,b  halfdisk:r
///   ellipse:a,b  square:l  triangle:l  polygon:x1,y1;x2,y2;...
///   polyline:x1,y1;...  points:x1,y1;...  point:x,y
/// Throws ParseError.
Region parse_region(const std::string& text);

/// Polygon with the given vertex count, random star-shaped, rescaled to area 1
/// and centred at the origin.
Region random_unit_area_polygon(numerics::Rng& rng, int vertices);

double polygon_signed_area(const std::vector<Point>& v);

}  // namespace ctrlcap::capacity
