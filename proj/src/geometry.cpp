#include "cfier/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <numeric>

namespace cfier {

namespace {

constexpr int kPolylineSamples = 256;

struct SegmentEval {
    SegmentSample operator()(const LineSegment& s, double) const
    {
        return {s.start + (s.end - s.start) * u_, s.end - s.start, Vec2::Zero()};
    }
    SegmentSample operator()(const ArcSegment& s, double) const
    {
        const double span = s.angle_end - s.angle_start;
        const double a = s.angle_start + span * u_;
        const Vec2 radial{std::cos(a), std::sin(a)};
        const Vec2 tangent{-std::sin(a), std::cos(a)};
        return {s.center + s.radius * radial, s.radius * span * tangent,
                -s.radius * span * span * radial};
    }
    double u_;
};

std::vector<Vec2> polyline(const std::vector<Segment>& segments)
{
    std::vector<Vec2> pts;
    for (const auto& seg : segments) {
        const int m = std::holds_alternative<LineSegment>(seg) ? 1 : kPolylineSamples;
        for (int i = 0; i < m; ++i)
            pts.push_back(evaluate_segment(seg, double(i) / m).x);
    }
    return pts;
}

double signed_area(const std::vector<Vec2>& pts)
{
    double a = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const Vec2& p = pts[i];
        const Vec2& q = pts[(i + 1) % pts.size()];
        a += p.x() * q.y() - q.x() * p.y();
    }
    return 0.5 * a;
}

} // namespace

SegmentSample evaluate_segment(const Segment& seg, double u)
{
    return std::visit([u](const auto& s) { return SegmentEval{u}(s, u); }, seg);
}

double segment_length(const Segment& seg)
{
    if (const auto* line = std::get_if<LineSegment>(&seg))
        return (line->end - line->start).norm();
    const auto& arc = std::get<ArcSegment>(seg);
    return arc.radius * std::abs(arc.angle_end - arc.angle_start);
}

CurveSpec::CurveSpec(std::string name, std::vector<Segment> segments, bool smooth)
    : name_(std::move(name)), segments_(std::move(segments)), smooth_(smooth)
{
    if (segments_.empty())
        throw ConfigError("curve needs at least one segment");
    if (smooth_ && segments_.size() != 1)
        throw ConfigError("a smooth curve is a single closed segment");
    if (!smooth_ && segments_.size() < 2)
        throw ConfigError("a curve with corners needs at least two segments");

    double scale = 1.0;
    for (const auto& seg : segments_)
        for (double u : {0.0, 1.0})
            scale = std::max(scale, evaluate_segment(seg, u).x.cwiseAbs().maxCoeff());

    const std::size_t m = segments_.size();
    for (std::size_t j = 0; j < m; ++j) {
        const Vec2 end = evaluate_segment(segments_[j], 1.0).x;
        const Vec2 next = evaluate_segment(segments_[(j + 1) % m], 0.0).x;
        if ((end - next).norm() > 1e-14 * scale)
            throw ConfigError(fmt::format("curve '{}' is not closed at the end of segment {}",
                                          name_, j));
        for (double u : {0.0, 0.25, 0.5, 0.75, 1.0})
            if (!(evaluate_segment(segments_[j], u).dx.norm() > 0.0))
                throw ConfigError(
                    fmt::format("segment {} of curve '{}' has a vanishing derivative", j, name_));
    }
    if (!(signed_area(polyline(segments_)) > 0.0))
        throw ConfigError(fmt::format("curve '{}' must be oriented counter-clockwise", name_));
}

CurveSpec CurveSpec::polygon(std::string name, const std::vector<Vec2>& vertices)
{
    if (vertices.size() < 3)
        throw ConfigError("polygon needs at least three vertices");
    std::vector<Segment> segs;
    for (std::size_t i = 0; i < vertices.size(); ++i)
        segs.emplace_back(LineSegment{vertices[i], vertices[(i + 1) % vertices.size()]});
    return CurveSpec(std::move(name), std::move(segs));
}

CurveSpec CurveSpec::square(double side)
{
    const double a = 0.5 * side;
    return polygon(fmt::format("square{}", side), {{-a, -a}, {a, -a}, {a, a}, {-a, a}});
}

CurveSpec CurveSpec::lshape(double side, double indentation)
{
    const double a = side, b = indentation;
    if (!(b > 0.0 && b < a))
        throw ConfigError("L-shape indentation must lie in (0, side)");
    std::vector<Vec2> v{{0, 0}, {a, 0}, {a, a - b}, {a - b, a - b}, {a - b, a}, {0, a}};
    for (auto& p : v)
        p -= Vec2{0.5 * a, 0.5 * a};
    return polygon(fmt::format("lshape{}x{}", side, indentation), v);
}

CurveSpec CurveSpec::circle(double radius)
{
    if (!(radius > 0.0))
        throw ConfigError("circle radius must be positive");
    return CurveSpec(fmt::format("circle:{}", radius),
                     {ArcSegment{Vec2::Zero(), radius, 0.0, 2.0 * pi}}, true);
}

double CurveSpec::perimeter() const
{
    double total = 0.0;
    for (const auto& seg : segments_)
        total += segment_length(seg);
    return total;
}

std::vector<double> CurveSpec::corner_parameters() const
{
    std::vector<double> t{0.0};
    const double total = perimeter();
    double acc = 0.0;
    for (const auto& seg : segments_) {
        acc += segment_length(seg);
        t.push_back(2.0 * pi * acc / total);
    }
    t.back() = 2.0 * pi;
    return t;
}

bool CurveSpec::contains(const Vec2& p) const
{
    // even-odd rule with a ray toward +x, intersected exactly with each segment
    bool inside = false;
    for (const auto& seg : segments_) {
        if (const auto* line = std::get_if<LineSegment>(&seg)) {
            const Vec2& a = line->start;
            const Vec2& b = line->end;
            if ((a.y() > p.y()) != (b.y() > p.y())) {
                const double xc = a.x() + (p.y() - a.y()) * (b.x() - a.x()) / (b.y() - a.y());
                if (p.x() < xc)
                    inside = !inside;
            }
            continue;
        }
        const auto& arc = std::get<ArcSegment>(seg);
        const double s = (p.y() - arc.center.y()) / arc.radius;
        if (std::abs(s) >= 1.0)
            continue;
        const double lo = std::min(arc.angle_start, arc.angle_end);
        const double span = std::abs(arc.angle_end - arc.angle_start);
        for (double a : {std::asin(s), pi - std::asin(s)}) {
            double rel = std::fmod(a - lo, 2.0 * pi);
            if (rel < 0.0)
                rel += 2.0 * pi;
            if (rel < span && arc.center.x() + arc.radius * std::cos(a) > p.x())
                inside = !inside;
        }
    }
    return inside;
}

double CurveSpec::diameter() const
{
    const auto pts = polyline(segments_);
    double d = 0.0;
    for (const auto& a : pts)
        for (const auto& b : pts)
            d = std::max(d, (a - b).norm());
    return d;
}

SigmoidValue sigmoid_map(double s, double t_lo, double t_hi, int p)
{
    if (p < 2)
        throw DomainError(fmt::format("sigmoid exponent p = {} must be >= 2", p));
    if (!(t_lo < t_hi))
        throw DomainError("sigmoid interval must satisfy t_lo < t_hi");
    if (s < t_lo || s > t_hi)
        throw DomainError(fmt::format("sigmoid argument {} outside [{}, {}]", s, t_lo, t_hi));

    const double len = t_hi - t_lo;
    const double xi = (2.0 * s - t_lo - t_hi) / len;
    const double a3 = 0.5 - 1.0 / p;
    const double v = a3 * xi * xi * xi + xi / p + 0.5;
    const double dv = (3.0 * a3 * xi * xi + 1.0 / p) * (2.0 / len);
    const double d2v = 6.0 * a3 * xi * (2.0 / len) * (2.0 / len);

    const double vc = 1.0 - v;
    const double vp = std::pow(v, p), vcp = std::pow(vc, p);
    const double den = vp + vcp;
    const double q = v * vc;
    const double g = vp / den;
    const double dg = p * std::pow(q, p - 1) / (den * den);
    const double dden = p * (std::pow(v, p - 1) - std::pow(vc, p - 1));
    const double d2g = p * (p - 1) * std::pow(q, p - 2) * (1.0 - 2.0 * v) / (den * den)
                       - 2.0 * p * std::pow(q, p - 1) * dden / (den * den * den);

    return {t_lo + len * g, len * dg * dv, len * (d2g * dv * dv + dg * d2v)};
}

double GridData::curvature(int i) const
{
    const double cross = dx[i].x() * ddx[i].y() - dx[i].y() * ddx[i].x();
    return cross / std::pow(jacobian[i], 3);
}

SegmentSample evaluate_curve(const CurveSpec& curve, const GridData& grid, double t)
{
    t = std::fmod(t, 2.0 * pi);
    if (t < 0.0)
        t += 2.0 * pi;
    if (curve.smooth()) {
        const auto s = evaluate_segment(curve.segments()[0], t / (2.0 * pi));
        const double c = 1.0 / (2.0 * pi);
        return {s.x, s.dx * c, s.ddx * c * c};
    }
    const auto& T = grid.corners;
    auto it = std::upper_bound(T.begin(), T.end(), t);
    int j = int(it - T.begin()) - 1;
    j = std::clamp(j, 0, int(curve.segments().size()) - 1);
    const double lo = T[j], hi = T[j + 1];
    const auto sg = sigmoid_map(std::clamp(t, lo, hi), lo, hi, grid.p);
    const double len = hi - lo;
    const auto s = evaluate_segment(curve.segments()[j], (sg.w - lo) / len);
    const double du = sg.dw / len;
    const double d2u = sg.d2w / len;
    return {s.x, s.dx * du, s.ddx * du * du + s.dx * d2u};
}

GridData build_grid(const CurveSpec& curve, SigmoidParams sigmoid, int n)
{
    if (sigmoid.p < 2)
        throw ConfigError(fmt::format("sigmoid exponent p = {} must be >= 2", sigmoid.p));
    const int total = 2 * n;
    const int corners = curve.corner_count();
    if (n < 2 || total < 4 * corners)
        throw ConfigError(
            fmt::format("2n = {} too small for {} corners (need 2n >= 4P)", total, corners));

    GridData g;
    g.n = n;
    g.h = pi / n;
    g.p = sigmoid.p;
    g.t.resize(total);
    for (int i = 0; i < total; ++i)
        g.t[i] = 0.5 * g.h + i * g.h;

    if (curve.smooth()) {
        g.nodes_per_segment = {total};
        g.segment.assign(total, 0);
    } else {
        // largest-remainder allocation of the node budget by arc length
        const auto& segs = curve.segments();
        const double L = curve.perimeter();
        std::vector<double> exact(segs.size());
        std::vector<int> count(segs.size());
        for (std::size_t j = 0; j < segs.size(); ++j) {
            exact[j] = total * segment_length(segs[j]) / L;
            count[j] = int(std::floor(exact[j]));
        }
        int missing = total - std::accumulate(count.begin(), count.end(), 0);
        std::vector<std::size_t> order(segs.size());
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) {
            return exact[a] - count[a] > exact[b] - count[b];
        });
        for (int m = 0; m < missing; ++m)
            ++count[order[m % order.size()]];
        for (std::size_t j = 0; j < segs.size(); ++j) {
            if (count[j] < 2)
                throw ConfigError(fmt::format(
                    "2n = {} leaves segment {} of '{}' with fewer than two nodes", total, j,
                    curve.name()));
            if (std::abs(exact[j] - count[j]) > 1e-9)
                g.proportional = false;
        }
        g.nodes_per_segment = count;
        g.corners.push_back(0.0);
        for (std::size_t j = 0; j < segs.size(); ++j) {
            g.segment.insert(g.segment.end(), count[j], int(j));
            g.corners.push_back(g.corners.back() + count[j] * g.h);
        }
        g.corners.back() = 2.0 * pi;
    }

    g.x.resize(total);
    g.dx.resize(total);
    g.ddx.resize(total);
    g.normal.resize(total);
    g.jacobian.resize(total);
    for (int i = 0; i < total; ++i) {
        const auto s = evaluate_curve(curve, g, g.t[i]);
        g.x[i] = s.x;
        g.dx[i] = s.dx;
        g.ddx[i] = s.ddx;
        g.jacobian[i] = s.dx.norm();
        if (!(g.jacobian[i] > 0.0))
            throw ConfigError(fmt::format("vanishing |x'| at node {} of '{}'", i, curve.name()));
        g.normal[i] = Vec2{s.dx.y(), -s.dx.x()} / g.jacobian[i];
    }
    return g;
}

CurveSpec named_curve(const std::string& name)
{
    if (name == "square4")
        return CurveSpec::square(4.0);
    if (name == "lshape4x2")
        return CurveSpec::lshape(4.0, 2.0);
    if (name.rfind("circle:", 0) == 0) {
        double r = 0.0;
        try {
            r = std::stod(name.substr(7));
        } catch (const std::exception&) {
            throw ConfigError(fmt::format("bad circle radius in '{}'", name));
        }
        return CurveSpec::circle(r);
    }
    throw ConfigError(fmt::format("unknown built-in geometry '{}'", name));
}

} // namespace cfier
