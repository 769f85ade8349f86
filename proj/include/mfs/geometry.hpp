#pragma once

// Boundary curves, point sampling, R_Omega and the source-placement constraint.
//
// Every curve is parametrized over t in [0, 2pi), closed, and traversed
// counterclockwise, so the outward normal is the unit tangent rotated by -pi/2.

#include <algorithm>
#include <cctype>
#include <charconv>
#include <limits>
#include <cmath>
#include <memory>
#include <numbers>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "mfs/errors.hpp"

namespace mfs {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    double r() const { return std::hypot(x, y); }

    /// Polar angle in [0, 2pi).
    double theta() const {
        double a = std::atan2(y, x);
        if (a < 0.0) a += two_pi;
        if (a >= two_pi) a -= two_pi;
        return a;
    }

    friend Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
    friend Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
    friend Point2 operator*(double s, Point2 a) { return {s * a.x, s * a.y}; }
    friend bool operator==(const Point2&, const Point2&) = default;
};

inline double distance(Point2 a, Point2 b) { return (a - b).r(); }

inline Point2 from_polar(double r, double theta) {
    return {r * std::cos(theta), r * std::sin(theta)};
}

/// Star-shaped curves given by a radial function r(t): x = r(t)(cos t, sin t).
enum class RadialShape {
    star_kite,  // (cos 4t + sqrt(18/5 - sin^2 4t))^(1/3)
    osc_r1,     // 6/5 + cos 6t / 5 + cos 3t / 10
    osc_art,    // 2 + cos 6t / 5 + cos 3t / 10
    eta1,       // 1 + cos 3t / 5
};

enum class ParametricShape {
    ellipse,     // (a cos t, b sin t)
    gamma_blob,  // (4 g(t) cos t - 1, 4 g(t) sin t - 1)
    eta2,        // (cos t - cos t sin 2t / 2, sin t + cos 4t / 6)
};

class BoundaryCurve;

namespace curve_kind {

struct Circle {
    Point2 center;
    double radius = 1.0;
};

struct PolarRadial {
    RadialShape shape;
};

struct Parametric {
    ParametricShape shape;
    double a = 2.0;  // ellipse semi-axes; ignored otherwise
    double b = 1.5;
};

struct NormalOffset {
    std::shared_ptr<const BoundaryCurve> base;
    double rho = 0.0;
};

}  // namespace curve_kind

namespace detail {

inline double radial_value(RadialShape shape, double t) {
    switch (shape) {
        case RadialShape::star_kite: {
            const double s = std::sin(4.0 * t);
            return std::cbrt(std::cos(4.0 * t) + std::sqrt(18.0 / 5.0 - s * s));
        }
        case RadialShape::osc_r1:
            return 6.0 / 5.0 + std::cos(6.0 * t) / 5.0 + std::cos(3.0 * t) / 10.0;
        case RadialShape::osc_art:
            return 2.0 + std::cos(6.0 * t) / 5.0 + std::cos(3.0 * t) / 10.0;
        case RadialShape::eta1:
            return 1.0 + std::cos(3.0 * t) / 5.0;
    }
    return 0.0;
}

inline double radial_derivative(RadialShape shape, double t) {
    switch (shape) {
        case RadialShape::star_kite: {
            const double s = std::sin(4.0 * t);
            const double c = std::cos(4.0 * t);
            const double root = std::sqrt(18.0 / 5.0 - s * s);
            const double f = c + root;
            const double df = -4.0 * s - 4.0 * s * c / root;
            return df / (3.0 * std::cbrt(f * f));
        }
        case RadialShape::osc_r1:
        case RadialShape::osc_art:
            return -6.0 * std::sin(6.0 * t) / 5.0 - 3.0 * std::sin(3.0 * t) / 10.0;
        case RadialShape::eta1:
            return -3.0 * std::sin(3.0 * t) / 5.0;
    }
    return 0.0;
}

inline double gamma_blob_g(double t) {
    const double s2 = std::sin(2.0 * t);
    const double c2 = std::cos(2.0 * t);
    return std::exp(std::sin(t)) * s2 * s2 + std::exp(std::cos(t)) * c2 * c2;
}

inline double gamma_blob_dg(double t) {
    const double s2 = std::sin(2.0 * t);
    const double c2 = std::cos(2.0 * t);
    const double es = std::exp(std::sin(t));
    const double ec = std::exp(std::cos(t));
    return es * std::cos(t) * s2 * s2 + es * 4.0 * s2 * c2 - ec * std::sin(t) * c2 * c2 -
           ec * 4.0 * c2 * s2;
}

/// Shortest decimal form that reads back to the same double.
inline std::string format_number(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

}  // namespace detail

/// Closed planar curve drawn from a fixed catalog.
///
/// Value type; copies share the (immutable) base of offset curves.
class BoundaryCurve {
public:
    using Kind = std::variant<curve_kind::Circle, curve_kind::PolarRadial,
                              curve_kind::Parametric, curve_kind::NormalOffset>;

    explicit BoundaryCurve(Kind kind) : kind_(std::move(kind)) {}

    static BoundaryCurve circle(double radius, Point2 center = {}) {
        if (!(radius > 0.0) || !std::isfinite(radius))
            throw ArgumentError("circle radius must be positive");
        return BoundaryCurve(curve_kind::Circle{center, radius});
    }

    static BoundaryCurve radial(RadialShape shape) {
        return BoundaryCurve(curve_kind::PolarRadial{shape});
    }

    static BoundaryCurve ellipse(double a, double b) {
        if (!(a > 0.0) || !(b > 0.0)) throw ArgumentError("ellipse semi-axes must be positive");
        return BoundaryCurve(curve_kind::Parametric{ParametricShape::ellipse, a, b});
    }

    static BoundaryCurve parametric(ParametricShape shape) {
        return BoundaryCurve(curve_kind::Parametric{shape});
    }

    /// Parallel curve eta(t) + rho n(t) of `base`.
    static BoundaryCurve offset(const BoundaryCurve& base, double rho) {
        if (!(rho > 0.0) || !std::isfinite(rho))
            throw ArgumentError("offset distance rho must be positive");
        return BoundaryCurve(
            curve_kind::NormalOffset{std::make_shared<const BoundaryCurve>(base), rho});
    }

    const Kind& kind() const { return kind_; }

    Point2 point(double t) const {
        return std::visit([t](const auto& k) { return point_of(k, t); }, kind_);
    }

    /// d point / dt.
    Point2 tangent(double t) const {
        return std::visit([t](const auto& k) { return tangent_of(k, t); }, kind_);
    }

    Point2 outward_normal(double t) const {
        if (const auto* off = std::get_if<curve_kind::NormalOffset>(&kind_)) {
            // a parallel curve shares the normal of its base curve
            return off->base->outward_normal(t);
        }
        const Point2 d = tangent(t);
        const double len = d.r();
        if (!(len > 0.0)) throw DegenerateError("zero tangent vector", 0);
        return {d.y / len, -d.x / len};
    }

    /// Catalog string that parse_curve() maps back to this curve.
    std::string name() const {
        return std::visit([](const auto& k) { return name_of(k); }, kind_);
    }

private:
    static Point2 point_of(const curve_kind::Circle& c, double t) {
        return c.center + from_polar(c.radius, t);
    }
    static Point2 tangent_of(const curve_kind::Circle& c, double t) {
        return {-c.radius * std::sin(t), c.radius * std::cos(t)};
    }
    static std::string name_of(const curve_kind::Circle& c) {
        std::string s = "circle(radius=" + detail::format_number(c.radius);
        if (c.center.x != 0.0 || c.center.y != 0.0)
            s += ", cx=" + detail::format_number(c.center.x) +
                 ", cy=" + detail::format_number(c.center.y);
        return s + ")";
    }

    static Point2 point_of(const curve_kind::PolarRadial& c, double t) {
        return from_polar(detail::radial_value(c.shape, t), t);
    }
    static Point2 tangent_of(const curve_kind::PolarRadial& c, double t) {
        const double r = detail::radial_value(c.shape, t);
        const double dr = detail::radial_derivative(c.shape, t);
        return {dr * std::cos(t) - r * std::sin(t), dr * std::sin(t) + r * std::cos(t)};
    }
    static std::string name_of(const curve_kind::PolarRadial& c) {
        switch (c.shape) {
            case RadialShape::star_kite: return "star_kite";
            case RadialShape::osc_r1: return "osc_r1";
            case RadialShape::osc_art: return "osc_art";
            case RadialShape::eta1: return "eta1";
        }
        return {};
    }

    static Point2 point_of(const curve_kind::Parametric& c, double t) {
        switch (c.shape) {
            case ParametricShape::ellipse:
                return {c.a * std::cos(t), c.b * std::sin(t)};
            case ParametricShape::gamma_blob: {
                const double g = detail::gamma_blob_g(t);
                return {4.0 * g * std::cos(t) - 1.0, 4.0 * g * std::sin(t) - 1.0};
            }
            case ParametricShape::eta2:
                return {std::cos(t) - std::cos(t) * std::sin(2.0 * t) / 2.0,
                        std::sin(t) + std::cos(4.0 * t) / 6.0};
        }
        return {};
    }
    static Point2 tangent_of(const curve_kind::Parametric& c, double t) {
        switch (c.shape) {
            case ParametricShape::ellipse:
                return {-c.a * std::sin(t), c.b * std::cos(t)};
            case ParametricShape::gamma_blob: {
                const double g = detail::gamma_blob_g(t);
                const double dg = detail::gamma_blob_dg(t);
                return {4.0 * (dg * std::cos(t) - g * std::sin(t)),
                        4.0 * (dg * std::sin(t) + g * std::cos(t))};
            }
            case ParametricShape::eta2:
                return {-std::sin(t) + std::sin(t) * std::sin(2.0 * t) / 2.0 -
                            std::cos(t) * std::cos(2.0 * t),
                        std::cos(t) - 2.0 * std::sin(4.0 * t) / 3.0};
        }
        return {};
    }
    static std::string name_of(const curve_kind::Parametric& c) {
        switch (c.shape) {
            case ParametricShape::ellipse:
                return "ellipse(a=" + detail::format_number(c.a) +
                       ", b=" + detail::format_number(c.b) + ")";
            case ParametricShape::gamma_blob: return "gamma_blob";
            case ParametricShape::eta2: return "eta2";
        }
        return {};
    }

    static Point2 point_of(const curve_kind::NormalOffset& c, double t) {
        return c.base->point(t) + c.rho * c.base->outward_normal(t);
    }
    static Point2 tangent_of(const curve_kind::NormalOffset& c, double t) {
        // needs the base curve's second derivative; central difference instead
        const double h = 1e-6;
        const Point2 a = point_of(c, t + h);
        const Point2 b = point_of(c, t - h);
        return (1.0 / (2.0 * h)) * (a - b);
    }
    static std::string name_of(const curve_kind::NormalOffset& c) {
        return "offset(" + c.base->name() + ", rho=" + detail::format_number(c.rho) + ")";
    }

    Kind kind_;
};

inline Point2 boundary_point(const BoundaryCurve& curve, double t) {
    if (!std::isfinite(t)) throw ArgumentError("curve parameter must be finite");
    return curve.point(t);
}

inline Point2 outward_normal(const BoundaryCurve& curve, double t) {
    if (!std::isfinite(t)) throw ArgumentError("curve parameter must be finite");
    return curve.outward_normal(t);
}

// ---------------------------------------------------------------------------
// Catalog parsing.
//
//   curve   := name | name '(' args ')'
//   args    := arg (',' arg)*
//   arg     := key '=' number | curve
//
//   circle(radius=R, cx=X, cy=Y)   ellipse(a=A, b=B)   offset(<curve>, rho=P)
//   star_kite  gamma_blob  osc_r1  osc_art  eta1  eta2

namespace detail {

class CurveParser {
public:
    explicit CurveParser(std::string_view text) : text_(text) {}

    BoundaryCurve parse() {
        BoundaryCurve c = parse_curve();
        skip_ws();
        if (pos_ != text_.size()) fail("trailing characters");
        return c;
    }

private:
    struct Args {
        std::vector<BoundaryCurve> curves;
        std::vector<std::pair<std::string, double>> values;

        double take(const std::string& key, double fallback, bool required = false) {
            for (auto it = values.begin(); it != values.end(); ++it) {
                if (it->first == key) {
                    const double v = it->second;
                    values.erase(it);
                    return v;
                }
            }
            if (required) throw ConfigError("curve is missing required argument '" + key + "'");
            return fallback;
        }
    };

    [[noreturn]] void fail(const std::string& what) const {
        throw ConfigError("cannot parse curve '" + std::string(text_) + "': " + what);
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    std::string identifier() {
        skip_ws();
        const std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            ++pos_;
        if (start == pos_) fail("expected a name");
        return std::string(text_.substr(start, pos_ - start));
    }

    double number() {
        skip_ws();
        const std::size_t start = pos_;
        while (pos_ < text_.size() && text_[pos_] != ',' && text_[pos_] != ')' &&
               !std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
        const std::string token(text_.substr(start, pos_ - start));
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(token, &used);
        } catch (const std::exception&) {
            fail("bad number '" + token + "'");
        }
        if (used != token.size() || !std::isfinite(v)) fail("bad number '" + token + "'");
        return v;
    }

    Args arguments() {
        Args args;
        skip_ws();
        if (pos_ >= text_.size() || text_[pos_] != '(') return args;
        ++pos_;
        for (;;) {
            skip_ws();
            const std::size_t save = pos_;
            const std::string id = identifier();
            skip_ws();
            if (pos_ < text_.size() && text_[pos_] == '=') {
                ++pos_;
                args.values.emplace_back(id, number());
            } else {
                pos_ = save;
                args.curves.push_back(parse_curve());
            }
            skip_ws();
            if (pos_ >= text_.size()) fail("unterminated argument list");
            if (text_[pos_] == ')') {
                ++pos_;
                return args;
            }
            if (text_[pos_] != ',') fail("expected ',' or ')'");
            ++pos_;
        }
    }

    BoundaryCurve parse_curve() {
        const std::string id = identifier();
        Args args = arguments();
        auto done = [&](BoundaryCurve c) {
            if (!args.values.empty())
                fail("unknown argument '" + args.values.front().first + "' for " + id);
            if (!args.curves.empty()) fail("unexpected curve argument for " + id);
            return c;
        };
        try {
            if (id == "circle") {
                const double r = args.take("radius", 1.0);
                const double cx = args.take("cx", 0.0);
                const double cy = args.take("cy", 0.0);
                return done(BoundaryCurve::circle(r, {cx, cy}));
            }
            if (id == "ellipse") {
                const double a = args.take("a", 2.0);
                const double b = args.take("b", 1.5);
                return done(BoundaryCurve::ellipse(a, b));
            }
            if (id == "offset") {
                if (args.curves.size() != 1) fail("offset needs exactly one base curve");
                const BoundaryCurve base = args.curves.front();
                args.curves.clear();
                const double rho = args.take("rho", 0.0, true);
                return done(BoundaryCurve::offset(base, rho));
            }
        } catch (const ArgumentError& e) {
            fail(e.what());
        }
        if (id == "star_kite") return done(BoundaryCurve::radial(RadialShape::star_kite));
        if (id == "osc_r1") return done(BoundaryCurve::radial(RadialShape::osc_r1));
        if (id == "osc_art") return done(BoundaryCurve::radial(RadialShape::osc_art));
        if (id == "eta1") return done(BoundaryCurve::radial(RadialShape::eta1));
        if (id == "eta2") return done(BoundaryCurve::parametric(ParametricShape::eta2));
        if (id == "gamma_blob") return done(BoundaryCurve::parametric(ParametricShape::gamma_blob));
        throw ConfigError("unknown curve name '" + id + "'");
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

}  // namespace detail

/// Parses a catalog curve expression such as `offset(eta1, rho=0.05)`.
inline BoundaryCurve parse_curve(std::string_view text) {
    return detail::CurveParser(text).parse();
}

// ---------------------------------------------------------------------------
// Point sets.

struct CollocationSet {
    std::vector<Point2> points;
    std::vector<double> params;  // curve parameter of each point

    std::size_t size() const { return points.size(); }
};

/// Exterior points carrying the kernel singularities, with polar data (1/eps_j, alpha_j).
class SourceSet {
public:
    explicit SourceSet(std::vector<Point2> points) : points_(std::move(points)) {
        eps_.reserve(points_.size());
        alpha_.reserve(points_.size());
        for (const Point2& y : points_) {
            const double r = y.r();
            if (!(r > 0.0) || !std::isfinite(r))
                throw ArgumentError("source point at the origin or not finite");
            eps_.push_back(1.0 / r);
            alpha_.push_back(y.theta());
        }
    }

    std::size_t size() const { return points_.size(); }
    const std::vector<Point2>& points() const { return points_; }
    const Point2& operator[](std::size_t j) const { return points_[j]; }
    double eps(std::size_t j) const { return eps_[j]; }
    double alpha(std::size_t j) const { return alpha_[j]; }
    const std::vector<double>& eps() const { return eps_; }

private:
    std::vector<Point2> points_;
    std::vector<double> eps_;
    std::vector<double> alpha_;
};

/// M points at t_i = 2 pi i / M, i = 1..M.
inline CollocationSet sample_collocation(const BoundaryCurve& curve, int count) {
    if (count <= 0) throw ArgumentError("collocation count must be positive");
    CollocationSet set;
    set.points.reserve(count);
    set.params.reserve(count);
    for (int i = 1; i <= count; ++i) {
        const double t = two_pi * i / count;
        set.params.push_back(t);
        set.points.push_back(curve.point(t));
    }
    return set;
}

/// N sources on `curve` using the same uniform parameter rule as the collocation points.
inline SourceSet sample_sources(const BoundaryCurve& curve, int count) {
    if (count <= 0) throw ArgumentError("source count must be positive");
    return SourceSet(sample_collocation(curve, count).points);
}

/// R_Omega = max ||x|| over the curve: dense grid, then golden-section refinement
/// on the two grid cells adjacent to the best sample.
///
/// Also rejects curves passing through the origin (the expansion is centred there).
inline double compute_R_Omega(const BoundaryCurve& curve, int samples = 4096) {
    if (samples < 256) throw ArgumentError("compute_R_Omega needs at least 256 samples");
    const double h = two_pi / samples;
    double best = -1.0;
    double min_norm = std::numeric_limits<double>::infinity();
    int best_k = 0;
    for (int k = 0; k < samples; ++k) {
        const double r = curve.point(k * h).r();
        min_norm = std::min(min_norm, r);
        if (r > best) {
            best = r;
            best_k = k;
        }
    }
    if (!(min_norm > 1e-12 * best))
        throw ConfigError("domain boundary passes through the origin; it must enclose it");

    constexpr double inv_phi = 0.6180339887498949;
    double a = (best_k - 1) * h;
    double b = (best_k + 1) * h;
    auto f = [&](double t) { return curve.point(t).r(); };
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c);
    double fd = f(d);
    while (b - a > 1e-13) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    return std::max({best, fc, fd, f(0.5 * (a + b))});
}

struct ConstraintCheck {
    bool ok = false;
    double margin = 0.0;  // 1 - max_j eps_j R_Omega
};

inline ConstraintCheck check_source_constraint(const SourceSet& sources, double R_Omega) {
    if (!(R_Omega > 0.0)) throw ArgumentError("R_Omega must be positive");
    double q = 0.0;
    for (double e : sources.eps()) q = std::max(q, e * R_Omega);
    const double margin = 1.0 - q;
    return {margin > 0.0, margin};
}

}  // namespace mfs
