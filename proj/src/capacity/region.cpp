#include "ctrlcap/capacity/region.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "ctrlcap/numerics/error.hpp"

namespace ctrlcap::capacity {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kEllipseTable = 1024;

Curve segment(Point a, Point b, bool closed, const Affine& xf) {
  Curve c;
  c.type = Curve::Type::Segment;
  c.p0 = a;
  c.p1 = b;
  c.closed = closed;
  c.xf = xf;
  c.canonical_length = std::abs(b - a);
  return c;
}

Curve arc(double r, double t0, double t1, bool closed, const Affine& xf) {
  Curve c;
  c.type = Curve::Type::Arc;
  c.rx = c.ry = r;
  c.t0 = t0;
  c.t1 = t1;
  c.closed = closed;
  c.xf = xf;
  c.canonical_length = r * std::abs(t1 - t0);
  return c;
}

Curve ellipse_arc(double a, double b, const Affine& xf) {
  Curve c;
  c.type = Curve::Type::EllipseArc;
  c.rx = a;
  c.ry = b;
  c.t0 = 0;
  c.t1 = 2 * kPi;
  c.closed = true;
  c.xf = xf;
  c.cumulative.assign(kEllipseTable + 1, 0.0);
  // Composite Simpson per table cell on |d/dt (a cos t, b sin t)|.
  auto speed = [&](double t) { return std::hypot(a * std::sin(t), b * std::cos(t)); };
  const double h = 2 * kPi / kEllipseTable;
  double acc = 0;
  for (int j = 0; j < kEllipseTable; ++j) {
    const double t = j * h;
    acc += h / 6 * (speed(t) + 4 * speed(t + h / 2) + speed(t + h));
    c.cumulative[j + 1] = acc;
  }
  c.canonical_length = acc;
  for (double& v : c.cumulative) v /= acc;
  return c;
}

double segment_distance(Point z, Point a, Point b) {
  const Point d = b - a;
  const double len2 = std::norm(d);
  if (len2 == 0) return std::abs(z - a);
  const double u = std::clamp(((z - a) * std::conj(d)).real() / len2, 0.0, 1.0);
  return std::abs(z - (a + u * d));
}

bool point_in_polygon(Point z, const std::vector<Point>& v) {
  bool inside = false;
  for (std::size_t i = 0, j = v.size() - 1; i < v.size(); j = i++) {
    if ((v[i].imag() > z.imag()) != (v[j].imag() > z.imag())) {
      const double x = v[j].real() + (z.imag() - v[j].imag()) * (v[i].real() - v[j].real()) / (v[i].imag() - v[j].imag());
      if (z.real() < x) inside = !inside;
    }
  }
  return inside;
}

double cross(Point a, Point b) { return a.real() * b.imag() - a.imag() * b.real(); }

bool segments_intersect(Point p1, Point p2, Point q1, Point q2) {
  const double d1 = cross(q2 - q1, p1 - q1);
  const double d2 = cross(q2 - q1, p2 - q1);
  const double d3 = cross(p2 - p1, q1 - p1);
  const double d4 = cross(p2 - p1, q2 - p1);
  return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0)) && d1 != 0 && d2 != 0 && d3 != 0 && d4 != 0;
}

std::vector<Point> ngon_vertices(int n, double h) {
  const double circum = h / (2 * std::sin(kPi / n));
  std::vector<Point> v;
  v.reserve(n);
  for (int k = 0; k < n; ++k) v.push_back(std::polar(circum, kPi / 2 + 2 * kPi * k / n));
  return v;
}

void require_positive(double x, const char* what) {
  require(std::isfinite(x) && x > 0, ErrorKind::InvalidArgument, std::string(what) + " must be positive and finite");
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double parse_number(std::string_view s) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  require(ec == std::errc() && ptr == s.data() + s.size() && !s.empty(), ErrorKind::ParseError,
          "invalid number '" + std::string(s) + "'");
  return value;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::vector<double> numbers(std::string_view s) {
  std::vector<double> out;
  if (s.empty()) return out;
  for (auto part : split(s, ',')) out.push_back(parse_number(part));
  return out;
}

std::vector<Point> point_list(std::string_view s) {
  std::vector<Point> out;
  for (auto part : split(s, ';')) {
    if (part.empty()) continue;
    auto xy = numbers(part);
    require(xy.size() == 2, ErrorKind::ParseError, "point needs two coordinates: '" + std::string(part) + "'");
    out.emplace_back(xy[0], xy[1]);
  }
  return out;
}

}  // namespace

std::string_view to_string(RegionKind kind) {
  switch (kind) {
    case RegionKind::Interval: return "interval";
    case RegionKind::TwoIntervals: return "twointervals";
    case RegionKind::Ellipse: return "ellipse";
    case RegionKind::Disk: return "disk";
    case RegionKind::HalfDisk: return "halfdisk";
    case RegionKind::Square: return "square";
    case RegionKind::RegularNGon: return "ngon";
    case RegionKind::EquilateralTriangle: return "triangle";
    case RegionKind::Polygon: return "polygon";
    case RegionKind::Polyline: return "polyline";
    case RegionKind::PointCloud: return "points";
  }
  return "unknown";
}

Point Curve::at(double u) const {
  Point z;
  switch (type) {
    case Type::Segment: z = p0 + u * (p1 - p0); break;
    case Type::Arc: z = std::polar(rx, t0 + u * (t1 - t0)); break;
    case Type::EllipseArc: {
      const double t = t0 + u * (t1 - t0);
      z = {rx * std::cos(t), ry * std::sin(t)};
      break;
    }
  }
  return xf.apply(z);
}

Point Curve::at_fraction(double f) const {
  f = std::clamp(f, 0.0, 1.0);
  if (type != Type::EllipseArc || cumulative.size() < 2) return at(f);
  auto it = std::upper_bound(cumulative.begin(), cumulative.end(), f);
  std::size_t j = std::min<std::size_t>(std::max<std::ptrdiff_t>(it - cumulative.begin(), 1), cumulative.size() - 1);
  const double lo = cumulative[j - 1], hi = cumulative[j];
  const double w = hi > lo ? (f - lo) / (hi - lo) : 0.0;
  const double cells = static_cast<double>(cumulative.size() - 1);
  return at((static_cast<double>(j - 1) + w) / cells);
}

double Curve::length() const { return canonical_length * std::abs(xf.scale); }

Region Region::interval(double a, double b) {
  require(std::isfinite(a) && std::isfinite(b) && a < b, ErrorKind::InvalidArgument, "interval requires a < b");
  return Region(RegionKind::Interval, {a, b}, {});
}

Region Region::two_intervals(double a, double b) {
  require(std::isfinite(a) && std::isfinite(b) && 0 <= a && a < b, ErrorKind::InvalidArgument,
          "twointervals requires 0 <= a < b");
  return Region(RegionKind::TwoIntervals, {a, b}, {});
}

Region Region::ellipse(double a, double b) {
  require_positive(a, "ellipse semi-axis a");
  require_positive(b, "ellipse semi-axis b");
  return Region(RegionKind::Ellipse, {a, b}, {});
}

Region Region::disk(Point center, double r) {
  require_positive(r, "disk radius");
  require(std::isfinite(center.real()) && std::isfinite(center.imag()), ErrorKind::InvalidArgument, "disk centre must be finite");
  return Region(RegionKind::Disk, {center.real(), center.imag(), r}, {});
}

Region Region::half_disk(double r) {
  require_positive(r, "halfdisk radius");
  return Region(RegionKind::HalfDisk, {r}, {});
}

Region Region::square(double l) {
  require_positive(l, "square side");
  const double h = l / 2;
  return Region(RegionKind::Square, {l}, {{-h, -h}, {h, -h}, {h, h}, {-h, h}});
}

Region Region::regular_ngon(int n, double h) {
  require(n >= 3, ErrorKind::InvalidArgument, "ngon requires n >= 3");
  require_positive(h, "ngon side");
  return Region(RegionKind::RegularNGon, {static_cast<double>(n), h}, ngon_vertices(n, h));
}

Region Region::equilateral_triangle(double l) {
  require_positive(l, "triangle side");
  return Region(RegionKind::EquilateralTriangle, {l}, ngon_vertices(3, l));
}

Region Region::polygon(std::vector<Point> v) {
  require(v.size() >= 3, ErrorKind::InvalidArgument, "polygon needs at least 3 vertices");
  const std::size_t n = v.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      require(std::abs(v[i] - v[j]) > 0, ErrorKind::InvalidArgument, "polygon has repeated vertices");
      if (j == i + 1 || (i == 0 && j == n - 1)) continue;
      require(!segments_intersect(v[i], v[(i + 1) % n], v[j], v[(j + 1) % n]), ErrorKind::InvalidArgument,
              "polygon is self-intersecting");
    }
  require(std::abs(polygon_signed_area(v)) > 0, ErrorKind::InvalidArgument, "polygon has zero area");
  return Region(RegionKind::Polygon, {}, std::move(v));
}

Region Region::polyline(std::vector<Point> v) {
  require(v.size() >= 2, ErrorKind::InvalidArgument, "polyline needs at least 2 vertices");
  return Region(RegionKind::Polyline, {}, std::move(v));
}

Region Region::point_cloud(std::vector<Point> v) {
  require(!v.empty(), ErrorKind::InvalidArgument, "point cloud must be nonempty");
  for (const auto& z : v)
    require(std::isfinite(z.real()) && std::isfinite(z.imag()), ErrorKind::InvalidArgument, "point cloud entries must be finite");
  return Region(RegionKind::PointCloud, {}, std::move(v));
}

Region Region::transformed(const Affine& t) const {
  require(std::abs(t.scale) > 0, ErrorKind::InvalidArgument, "affine scale must be nonzero");
  Region out = *this;
  out.transform_ = transform_.then(t);
  return out;
}

bool Region::two_dimensional() const {
  switch (kind_) {
    case RegionKind::Ellipse:
    case RegionKind::Disk:
    case RegionKind::HalfDisk:
    case RegionKind::Square:
    case RegionKind::RegularNGon:
    case RegionKind::EquilateralTriangle:
    case RegionKind::Polygon: return true;
    default: return false;
  }
}

bool Region::is_single_point() const {
  if (kind_ != RegionKind::PointCloud) return false;
  return std::all_of(vertices_.begin(), vertices_.end(), [&](Point z) { return z == vertices_.front(); });
}

bool Region::real_subset() const {
  if (two_dimensional()) return false;
  if (kind_ == RegionKind::PointCloud) {
    return std::all_of(vertices_.begin(), vertices_.end(),
                       [&](Point z) { return std::abs(transform_.apply(z).imag()) <= 1e-12; });
  }
  for (const auto& c : boundary())
    if (std::abs(c.at(0).imag()) > 1e-12 || std::abs(c.at(1).imag()) > 1e-12) return false;
  return true;
}

std::vector<Curve> Region::canonical_boundary() const {
  const Affine id;
  std::vector<Curve> out;
  switch (kind_) {
    case RegionKind::Interval: out.push_back(segment(params_[0], params_[1], false, id)); break;
    case RegionKind::TwoIntervals:
      out.push_back(segment(-params_[1], -params_[0], false, id));
      out.push_back(segment(params_[0], params_[1], false, id));
      break;
    case RegionKind::Ellipse: out.push_back(ellipse_arc(params_[0], params_[1], id)); break;
    case RegionKind::Disk:
      out.push_back(arc(params_[2], 0, 2 * kPi, true, Affine{{1, 0}, {params_[0], params_[1]}}));
      break;
    case RegionKind::HalfDisk:
      out.push_back(arc(params_[0], 0, kPi, true, id));
      out.push_back(segment(-params_[0], params_[0], true, id));
      break;
    case RegionKind::Square:
    case RegionKind::RegularNGon:
    case RegionKind::EquilateralTriangle:
    case RegionKind::Polygon:
      for (std::size_t i = 0; i < vertices_.size(); ++i)
        out.push_back(segment(vertices_[i], vertices_[(i + 1) % vertices_.size()], true, id));
      break;
    case RegionKind::Polyline:
      for (std::size_t i = 0; i + 1 < vertices_.size(); ++i)
        out.push_back(segment(vertices_[i], vertices_[i + 1], i + 2 < vertices_.size(), id));
      break;
    case RegionKind::PointCloud: break;
  }
  return out;
}

std::vector<Curve> Region::boundary() const {
  auto curves = canonical_boundary();
  for (auto& c : curves) c.xf = c.xf.then(transform_);
  return curves;
}

double Region::boundary_length() const {
  double total = 0;
  for (const auto& c : boundary()) total += c.length();
  return total;
}

std::vector<Point> Region::boundary_grid(std::size_t count) const {
  if (kind_ == RegionKind::PointCloud) {
    std::vector<Point> out;
    for (const auto& z : vertices_) out.push_back(transform_.apply(z));
    return out;
  }
  const auto curves = boundary();
  const double total = boundary_length();
  std::vector<Point> out;
  out.reserve(count + 2 * curves.size());
  for (const auto& c : curves) {
    const double share = total > 0 ? c.length() / total : 1.0 / static_cast<double>(curves.size());
    std::size_t m = static_cast<std::size_t>(std::llround(share * static_cast<double>(count)));
    m = std::max<std::size_t>(m, 2);
    if (c.closed) {
      for (std::size_t j = 0; j < m; ++j) out.push_back(c.at_fraction(static_cast<double>(j) / static_cast<double>(m)));
    } else {
      for (std::size_t j = 0; j < m; ++j)
        out.push_back(c.at_fraction(static_cast<double>(j) / static_cast<double>(m - 1)));
    }
  }
  return out;
}

Point Region::boundary_point(double s) const {
  if (kind_ == RegionKind::PointCloud) {
    const double wrapped = s - std::floor(s);
    std::size_t idx = std::min(vertices_.size() - 1, static_cast<std::size_t>(wrapped * static_cast<double>(vertices_.size())));
    return transform_.apply(vertices_[idx]);
  }
  const auto curves = boundary();
  const double total = boundary_length();
  const bool open_end = !curves.back().closed;
  double target = open_end ? std::clamp(s, 0.0, 1.0) * total : (s - std::floor(s)) * total;
  for (const auto& c : curves) {
    const double len = c.length();
    if (target <= len || &c == &curves.back()) return c.at_fraction(len > 0 ? target / len : 0.0);
    target -= len;
  }
  return curves.back().at(1.0);
}

bool Region::canonical_contains(Point z, double tol) const {
  const double x = z.real(), y = z.imag();
  switch (kind_) {
    case RegionKind::Interval: return std::abs(y) <= tol && x >= params_[0] - tol && x <= params_[1] + tol;
    case RegionKind::TwoIntervals:
      return std::abs(y) <= tol && std::abs(x) >= params_[0] - tol && std::abs(x) <= params_[1] + tol;
    case RegionKind::Ellipse: {
      const double a = params_[0], b = params_[1];
      return (x / a) * (x / a) + (y / b) * (y / b) <= 1 + 2 * tol / std::min(a, b);
    }
    case RegionKind::Disk: return std::abs(z - Point(params_[0], params_[1])) <= params_[2] + tol;
    case RegionKind::HalfDisk: return std::abs(z) <= params_[0] + tol && y >= -tol;
    case RegionKind::Square:
    case RegionKind::RegularNGon:
    case RegionKind::EquilateralTriangle:
    case RegionKind::Polygon: {
      if (point_in_polygon(z, vertices_)) return true;
      for (std::size_t i = 0; i < vertices_.size(); ++i)
        if (segment_distance(z, vertices_[i], vertices_[(i + 1) % vertices_.size()]) <= tol) return true;
      return false;
    }
    case RegionKind::Polyline:
      for (std::size_t i = 0; i + 1 < vertices_.size(); ++i)
        if (segment_distance(z, vertices_[i], vertices_[i + 1]) <= tol) return true;
      return false;
    case RegionKind::PointCloud:
      return std::any_of(vertices_.begin(), vertices_.end(), [&](Point p) { return std::abs(p - z) <= tol; });
  }
  return false;
}

bool Region::contains(Point z, double tol) const {
  return canonical_contains(transform_.invert(z), tol / std::abs(transform_.scale));
}

void Region::canonical_box(double& x0, double& x1, double& y0, double& y1) const {
  switch (kind_) {
    case RegionKind::Ellipse:
      x0 = -params_[0], x1 = params_[0], y0 = -params_[1], y1 = params_[1];
      return;
    case RegionKind::Disk:
      x0 = params_[0] - params_[2], x1 = params_[0] + params_[2];
      y0 = params_[1] - params_[2], y1 = params_[1] + params_[2];
      return;
    case RegionKind::HalfDisk:
      x0 = -params_[0], x1 = params_[0], y0 = 0, y1 = params_[0];
      return;
    default: {
      x0 = y0 = std::numeric_limits<double>::infinity();
      x1 = y1 = -x0;
      for (const auto& v : vertices_) {
        x0 = std::min(x0, v.real()), x1 = std::max(x1, v.real());
        y0 = std::min(y0, v.imag()), y1 = std::max(y1, v.imag());
      }
    }
  }
}

Point Region::sample(numerics::Rng& rng) const {
  if (kind_ == RegionKind::PointCloud) return transform_.apply(vertices_[rng.below(vertices_.size())]);
  if (!two_dimensional()) return boundary_point(rng.uniform());
  double x0, x1, y0, y1;
  canonical_box(x0, x1, y0, y1);
  for (int attempt = 0; attempt < 100000; ++attempt) {
    const Point z(rng.uniform(x0, x1), rng.uniform(y0, y1));
    if (canonical_contains(z, 0.0)) return transform_.apply(z);
  }
  fail(ErrorKind::DegenerateRegion, "region sampling failed: no interior found");
}

double polygon_signed_area(const std::vector<Point>& v) {
  double acc = 0;
  for (std::size_t i = 0; i < v.size(); ++i) acc += cross(v[i], v[(i + 1) % v.size()]);
  return acc / 2;
}

double Region::area() const {
  const double s2 = std::norm(transform_.scale);
  switch (kind_) {
    case RegionKind::Ellipse: return kPi * params_[0] * params_[1] * s2;
    case RegionKind::Disk: return kPi * params_[2] * params_[2] * s2;
    case RegionKind::HalfDisk: return kPi * params_[0] * params_[0] / 2 * s2;
    case RegionKind::Square:
    case RegionKind::RegularNGon:
    case RegionKind::EquilateralTriangle:
    case RegionKind::Polygon: return std::abs(polygon_signed_area(vertices_)) * s2;
    default: return 0;
  }
}

double Region::diameter() const {
  const double s = std::abs(transform_.scale);
  switch (kind_) {
    case RegionKind::Interval: return (params_[1] - params_[0]) * s;
    case RegionKind::TwoIntervals: return 2 * params_[1] * s;
    case RegionKind::Ellipse: return 2 * std::max(params_[0], params_[1]) * s;
    case RegionKind::Disk: return 2 * params_[2] * s;
    case RegionKind::HalfDisk: return 2 * params_[0] * s;
    default: break;
  }
  double best = 0;
  for (std::size_t i = 0; i < vertices_.size(); ++i)
    for (std::size_t j = i + 1; j < vertices_.size(); ++j) best = std::max(best, std::abs(vertices_[i] - vertices_[j]));
  return best * s;
}

BoundingEllipse Region::bounding_ellipse() const {
  BoundingEllipse e;
  const double s = std::abs(transform_.scale);
  const double rot = std::arg(transform_.scale);
  auto finish = [&](Point c, double a, double b, double theta) {
    if (b > a) {
      std::swap(a, b);
      theta += kPi / 2;
    }
    e.center = transform_.apply(c);
    e.a = a * s;
    e.b = b * s;
    e.theta = theta + rot;
    return e;
  };
  switch (kind_) {
    case RegionKind::Interval: return finish((params_[0] + params_[1]) / 2, (params_[1] - params_[0]) / 2, 0, 0);
    case RegionKind::TwoIntervals: return finish(0.0, params_[1], 0, 0);
    case RegionKind::Ellipse: return finish(0.0, params_[0], params_[1], 0);
    case RegionKind::Disk: return finish({params_[0], params_[1]}, params_[2], params_[2], 0);
    default: break;
  }
  // Principal axes of the boundary sample, then the ellipse through the
  // corners of the aligned bounding box.
  std::vector<Point> pts;
  if (kind_ == RegionKind::PointCloud) {
    pts = vertices_;
  } else {
    const Affine saved = transform_;
    Region canon = *this;
    canon.transform_ = Affine{};
    pts = canon.boundary_grid(512);
    (void)saved;
  }
  Point mean = 0;
  for (auto z : pts) mean += z;
  mean /= static_cast<double>(pts.size());
  double sxx = 0, syy = 0, sxy = 0;
  for (auto z : pts) {
    const Point d = z - mean;
    sxx += d.real() * d.real();
    syy += d.imag() * d.imag();
    sxy += d.real() * d.imag();
  }
  const double theta = 0.5 * std::atan2(2 * sxy, sxx - syy);
  const Point un = std::polar(1.0, -theta);
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (auto z : pts) {
    const Point w = z * un;
    x0 = std::min(x0, w.real()), x1 = std::max(x1, w.real());
    y0 = std::min(y0, w.imag()), y1 = std::max(y1, w.imag());
  }
  const Point c = Point((x0 + x1) / 2, (y0 + y1) / 2) * std::polar(1.0, theta);
  const double hw = (x1 - x0) / 2, hh = (y1 - y0) / 2;
  const double tiny = 1e-12 * std::max(hw, hh);
  const double a = hh <= tiny ? hw : std::sqrt(2.0) * hw;
  const double b = hh <= tiny ? 0.0 : std::sqrt(2.0) * hh;
  return finish(c, a, b, theta);
}

std::string Region::to_spec() const {
  std::string out(to_string(kind_));
  out += ':';
  auto join_points = [&](const std::vector<Point>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) s += ';';
      s += fmt(v[i].real()) + "," + fmt(v[i].imag());
    }
    return s;
  };
  switch (kind_) {
    case RegionKind::Polygon:
    case RegionKind::Polyline:
    case RegionKind::PointCloud: out += join_points(vertices_); break;
    case RegionKind::RegularNGon: out += std::to_string(static_cast<int>(params_[0])) + "," + fmt(params_[1]); break;
    default:
      for (std::size_t i = 0; i < params_.size(); ++i) {
        if (i) out += ',';
        out += fmt(params_[i]);
      }
  }
  if (transform_.scale != Point(1, 0) || transform_.shift != Point(0, 0)) {
    out += "@" + fmt(transform_.scale.real()) + "," + fmt(transform_.scale.imag()) + "," + fmt(transform_.shift.real()) +
           "," + fmt(transform_.shift.imag());
  }
  return out;
}

Region parse_region(const std::string& text) {
  std::string_view s(text);
  std::string_view affine;
  if (auto at = s.find('@'); at != std::string_view::npos) {
    affine = s.substr(at + 1);
    s = s.substr(0, at);
  }
  const auto colon = s.find(':');
  require(colon != std::string_view::npos, ErrorKind::ParseError, "region spec needs 'kind:params': '" + text + "'");
  std::string kind(s.substr(0, colon));
  std::transform(kind.begin(), kind.end(), kind.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  const std::string_view body = s.substr(colon + 1);

  auto expect = [&](const std::vector<double>& v, std::size_t n) {
    require(v.size() == n, ErrorKind::ParseError,
            "region '" + kind + "' expects " + std::to_string(n) + " numbers, got " + std::to_string(v.size()));
  };

  auto build = [&]() -> Region {
    if (kind == "interval") {
      auto v = numbers(body);
      expect(v, 2);
      return Region::interval(v[0], v[1]);
    }
    if (kind == "twointervals") {
      auto v = numbers(body);
      expect(v, 2);
      return Region::two_intervals(v[0], v[1]);
    }
    if (kind == "ellipse") {
      auto v = numbers(body);
      expect(v, 2);
      return Region::ellipse(v[0], v[1]);
    }
    if (kind == "disk") {
      auto v = numbers(body);
      if (v.size() == 1) return Region::disk(0.0, v[0]);
      expect(v, 3);
      return Region::disk({v[0], v[1]}, v[2]);
    }
    if (kind == "halfdisk") {
      auto v = numbers(body);
      expect(v, 1);
      return Region::half_disk(v[0]);
    }
    if (kind == "square") {
      auto v = numbers(body);
      expect(v, 1);
      return Region::square(v[0]);
    }
    if (kind == "triangle") {
      auto v = numbers(body);
      expect(v, 1);
      return Region::equilateral_triangle(v[0]);
    }
    if (kind == "ngon") {
      auto v = numbers(body);
      expect(v, 2);
      require(v[0] == std::floor(v[0]), ErrorKind::ParseError, "ngon side count must be an integer");
      return Region::regular_ngon(static_cast<int>(v[0]), v[1]);
    }
    if (kind == "polygon") return Region::polygon(point_list(body));
    if (kind == "polyline") return Region::polyline(point_list(body));
    if (kind == "points") return Region::point_cloud(point_list(body));
    if (kind == "point") {
      auto v = numbers(body);
      expect(v, 2);
      return Region::point({v[0], v[1]});
    }
    fail(ErrorKind::ParseError, "unknown region kind '" + kind + "'");
  };

  try {
    Region r = build();
    if (!affine.empty()) {
      auto v = numbers(affine);
      require(v.size() == 4, ErrorKind::ParseError, "affine suffix expects @scale_re,scale_im,shift_re,shift_im");
      r = r.transformed(Affine{{v[0], v[1]}, {v[2], v[3]}});
    }
    return r;
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::ParseError) throw;
    throw Error(ErrorKind::ParseError, std::string("invalid region '") + text + "': " + e.what());
  }
}

Region random_unit_area_polygon(numerics::Rng& rng, int count) {
  require(count >= 3, ErrorKind::InvalidArgument, "polygon needs at least 3 vertices");
  std::vector<Point> v;
  v.reserve(count);
  for (int j = 0; j < count; ++j) {
    const double angle = 2 * kPi * (j + 0.8 * rng.uniform()) / count;
    v.push_back(std::polar(rng.uniform(0.5, 1.0), angle));
  }
  const double area = polygon_signed_area(v);
  Point centroid = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Point a = v[i], b = v[(i + 1) % v.size()];
    centroid += (a + b) * cross(a, b);
  }
  centroid /= 6 * area;
  const double scale = 1 / std::sqrt(std::abs(area));
  for (auto& z : v) z = (z - centroid) * scale;
  return Region::polygon(std::move(v));
}

}  // namespace ctrlcap::capacity
