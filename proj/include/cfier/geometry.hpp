#pragma once

// Piecewise-analytic closed curves with corners and their graded-mesh samples.
//
// A curve is an ordered list of segments, each mapped from a local parameter
// u in [0,1]. On the 2pi-periodic global parameter the segment j occupies
// [T_j, T_{j+1}], and the Kress sigmoid w(s) is applied inside every segment so
// that the composed parametrization x(t) = seg_j(w(t)) has |x'| -> 0 at the
// corners like |t - T_j|^(p-1).

#include <string>
#include <variant>
#include <vector>

#include "cfier/common.hpp"

namespace cfier {

using Vec2 = Eigen::Vector2d;

struct LineSegment {
    Vec2 start, end;
};

/// Circular arc, counter-clockwise when angle_end > angle_start.
struct ArcSegment {
    Vec2 center;
    double radius;
    double angle_start, angle_end;
};

using Segment = std::variant<LineSegment, ArcSegment>;

/// Position and local-parameter derivatives of a segment at u in [0,1].
struct SegmentSample {
    Vec2 x, dx, ddx;
};

SegmentSample evaluate_segment(const Segment& seg, double u);
double segment_length(const Segment& seg);

class CurveSpec {
public:
    /// Validates closedness, regularity and counter-clockwise orientation.
    /// `smooth` marks a single closed analytic segment without corners.
    CurveSpec(std::string name, std::vector<Segment> segments, bool smooth = false);

    static CurveSpec polygon(std::string name, const std::vector<Vec2>& vertices);
    /// Square centered at the origin.
    static CurveSpec square(double side = 4.0);
    /// L-shape with outer sides `side` and a notch of size `indentation` cut
    /// from the upper right corner, bounding box centered at the origin.
    static CurveSpec lshape(double side = 4.0, double indentation = 2.0);
    static CurveSpec circle(double radius = 1.0);

    const std::string& name() const { return name_; }
    const std::vector<Segment>& segments() const { return segments_; }
    int corner_count() const { return smooth_ ? 0 : int(segments_.size()); }
    bool smooth() const { return smooth_; }
    double perimeter() const;
    /// T_1 = 0 < ... < T_{P+1} = 2pi, proportional to arc length.
    std::vector<double> corner_parameters() const;
    /// True when `p` lies in the open bounded domain.
    bool contains(const Vec2& p) const;
    double diameter() const;

private:
    std::string name_;
    std::vector<Segment> segments_;
    bool smooth_;
};

struct SigmoidParams {
    int p = 3;
};

struct SigmoidValue {
    double w, dw, d2w;
};

/// Kress sigmoid transform on [t_lo, t_hi] with grading exponent p, and its
/// first two derivatives in closed form.
SigmoidValue sigmoid_map(double s, double t_lo, double t_hi, int p);

/// Samples of the sigmoid-composed parametrization on the shifted grid
/// t_i = h/2 + i h, h = pi/n, i = 0..2n-1.
struct GridData {
    int n = 0;
    double h = 0.0;
    int p = 0;
    RVector t;
    std::vector<Vec2> x, dx, ddx;
    RVector jacobian;
    std::vector<Vec2> normal; ///< outward from the bounded domain
    std::vector<double> corners; ///< realized T_j, j = 1..P+1 (empty for smooth curves)
    std::vector<int> segment; ///< segment index of each node
    std::vector<int> nodes_per_segment;
    bool proportional = true; ///< node budgets exactly proportional to arc length

    int size() const { return 2 * n; }
    /// Unnormalized normal (x2', -x1') = |x'| n.
    Vec2 scaled_normal(int i) const { return {dx[i].y(), -dx[i].x()}; }
    /// Signed curvature x' x x'' / |x'|^3.
    double curvature(int i) const;
};

/// Evaluates the composed parametrization at an arbitrary t.
SegmentSample evaluate_curve(const CurveSpec& curve, const GridData& grid, double t);

GridData build_grid(const CurveSpec& curve, SigmoidParams sigmoid, int n);

/// Built-ins "square4", "lshape4x2", "circle:R".
CurveSpec named_curve(const std::string& name);

} // namespace cfier
