#pragma once

// Contractivity-factor expressions: a small recursive-descent parser,
// evaluator, printer and sampled sup/Lipschitz estimators.
//
// Grammar:
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := ('-')? atom ('^' INTEGER)?
//   atom   := NUMBER | IDENT | IDENT '(' expr (',' expr)* ')' | '(' expr ')'
//   IDENT  in {x, y, sin, cos, abs, exp, sqrt}

#include "hvrfif/error.hpp"
#include "hvrfif/partition.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hvrfif {

enum class NodeKind { Number, VarX, VarY, Add, Sub, Mul, Div, Neg, Pow, Sin, Cos, Abs, Exp, Sqrt };

struct ExprNode {
    NodeKind kind = NodeKind::Number;
    double value = 0.0;  // Number
    int exponent = 0;    // Pow
    int lhs = -1;        // first operand / function argument
    int rhs = -1;
};

/// Immutable expression tree stored as a node arena; the root is the last node.
class Expr {
public:
    Expr() = default;

    int dimension() const { return dim_; }
    bool empty() const { return nodes_.empty(); }
    const std::vector<ExprNode>& nodes() const { return nodes_; }
    int root() const { return static_cast<int>(nodes_.size()) - 1; }

    bool uses_variables() const {
        return std::any_of(nodes_.begin(), nodes_.end(), [](const ExprNode& n) {
            return n.kind == NodeKind::VarX || n.kind == NodeKind::VarY;
        });
    }

    double operator()(double x, double y = 0.0) const { return eval(root(), x, y); }

    std::string to_string() const { return print(root()); }

    friend bool operator==(const Expr& a, const Expr& b) {
        if (a.empty() || b.empty()) return a.empty() && b.empty();
        return a.dim_ == b.dim_ && equal(a, a.root(), b, b.root());
    }

private:
    friend class ExprParser;

    int add(ExprNode n) {
        nodes_.push_back(n);
        return static_cast<int>(nodes_.size()) - 1;
    }

    double eval(int id, double x, double y) const {
        const ExprNode& n = nodes_[static_cast<std::size_t>(id)];
        switch (n.kind) {
            case NodeKind::Number: return n.value;
            case NodeKind::VarX: return x;
            case NodeKind::VarY: return y;
            case NodeKind::Add: return eval(n.lhs, x, y) + eval(n.rhs, x, y);
            case NodeKind::Sub: return eval(n.lhs, x, y) - eval(n.rhs, x, y);
            case NodeKind::Mul: return eval(n.lhs, x, y) * eval(n.rhs, x, y);
            case NodeKind::Div: {
                const double d = eval(n.rhs, x, y);
                if (d == 0.0) throw EvalError("division by zero in '" + print(id) + "'");
                return eval(n.lhs, x, y) / d;
            }
            case NodeKind::Neg: return -eval(n.lhs, x, y);
            case NodeKind::Pow: {
                const double base = eval(n.lhs, x, y);
                if (n.exponent < 0 && base == 0.0) throw EvalError("zero raised to a negative power");
                return std::pow(base, n.exponent);
            }
            case NodeKind::Sin: return std::sin(eval(n.lhs, x, y));
            case NodeKind::Cos: return std::cos(eval(n.lhs, x, y));
            case NodeKind::Abs: return std::fabs(eval(n.lhs, x, y));
            case NodeKind::Exp: {
                const double v = std::exp(eval(n.lhs, x, y));
                if (!std::isfinite(v)) throw EvalError("exp overflow");
                return v;
            }
            case NodeKind::Sqrt: {
                const double v = eval(n.lhs, x, y);
                if (v < 0.0) throw EvalError("sqrt of negative value");
                return std::sqrt(v);
            }
        }
        throw ConsistencyError("unknown expression node");
    }

    std::string print(int id) const {
        const ExprNode& n = nodes_[static_cast<std::size_t>(id)];
        auto bin = [&](const char* op) { return "(" + print(n.lhs) + op + print(n.rhs) + ")"; };
        auto fn = [&](const char* name) { return std::string(name) + "(" + print(n.lhs) + ")"; };
        switch (n.kind) {
            case NodeKind::Number: {
                char buf[32];
                std::snprintf(buf, sizeof buf, "%.17g", n.value);
                return buf;
            }
            case NodeKind::VarX: return "x";
            case NodeKind::VarY: return "y";
            case NodeKind::Add: return bin("+");
            case NodeKind::Sub: return bin("-");
            case NodeKind::Mul: return bin("*");
            case NodeKind::Div: return bin("/");
            case NodeKind::Neg: return "(-(" + print(n.lhs) + "))";
            case NodeKind::Pow: return "((" + print(n.lhs) + ")^" + std::to_string(n.exponent) + ")";
            case NodeKind::Sin: return fn("sin");
            case NodeKind::Cos: return fn("cos");
            case NodeKind::Abs: return fn("abs");
            case NodeKind::Exp: return fn("exp");
            case NodeKind::Sqrt: return fn("sqrt");
        }
        throw ConsistencyError("unknown expression node");
    }

    static bool equal(const Expr& a, int ia, const Expr& b, int ib) {
        const ExprNode& na = a.nodes_[static_cast<std::size_t>(ia)];
        const ExprNode& nb = b.nodes_[static_cast<std::size_t>(ib)];
        if (na.kind != nb.kind) return false;
        if (na.kind == NodeKind::Number) return na.value == nb.value;
        if (na.kind == NodeKind::Pow && na.exponent != nb.exponent) return false;
        if ((na.lhs < 0) != (nb.lhs < 0) || (na.rhs < 0) != (nb.rhs < 0)) return false;
        if (na.lhs >= 0 && !equal(a, na.lhs, b, nb.lhs)) return false;
        if (na.rhs >= 0 && !equal(a, na.rhs, b, nb.rhs)) return false;
        return true;
    }

    std::vector<ExprNode> nodes_;
    int dim_ = 1;
};

class ExprParser {
public:
    ExprParser(std::string_view text, int dim) : text_(text), dim_(dim) {}

    Expr parse() {
        if (dim_ != 1 && dim_ != 2) throw ValidationError("expression dimension must be 1 or 2");
        out_.dim_ = dim_;
        skip_ws();
        if (pos_ >= text_.size()) throw ParseError("empty expression", pos_);
        parse_expr();
        skip_ws();
        if (pos_ < text_.size()) throw ParseError(std::string("unexpected '") + text_[pos_] + "'", pos_);
        return std::move(out_);
    }

private:
    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) {
            if (pos_ >= text_.size()) throw ParseError(std::string("expected '") + c + "' but input ended", pos_);
            throw ParseError(std::string("expected '") + c + "' but found '" + text_[pos_] + "'", pos_);
        }
    }

    int binary(NodeKind k, int l, int r) { return out_.add({k, 0.0, 0, l, r}); }

    int parse_expr() {
        int lhs = parse_term();
        for (;;) {
            if (accept('+')) lhs = binary(NodeKind::Add, lhs, parse_term());
            else if (accept('-')) lhs = binary(NodeKind::Sub, lhs, parse_term());
            else return lhs;
        }
    }

    int parse_term() {
        int lhs = parse_factor();
        for (;;) {
            if (accept('*')) lhs = binary(NodeKind::Mul, lhs, parse_factor());
            else if (accept('/')) lhs = binary(NodeKind::Div, lhs, parse_factor());
            else return lhs;
        }
    }

    int parse_factor() {
        const bool negate = accept('-');
        int node = parse_atom();
        if (accept('^')) {
            skip_ws();
            const std::size_t start = pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            if (start == pos_) throw ParseError("expected integer exponent", start);
            if (pos_ - start > 6) throw ParseError("exponent too large", start);
            const int e = std::stoi(std::string(text_.substr(start, pos_ - start)));
            node = out_.add({NodeKind::Pow, 0.0, e, node, -1});
        }
        if (negate) node = out_.add({NodeKind::Neg, 0.0, 0, node, -1});
        return node;
    }

    int parse_number() {
        const std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (pos_ < text_.size() && text_[pos_] == '.') {
            ++pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        }
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            std::size_t p = pos_ + 1;
            if (p < text_.size() && (text_[p] == '+' || text_[p] == '-')) ++p;
            if (p < text_.size() && std::isdigit(static_cast<unsigned char>(text_[p]))) {
                pos_ = p;
                while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            }
        }
        const std::string lexeme(text_.substr(start, pos_ - start));
        if (lexeme == ".") throw ParseError("malformed number", start);
        char* end = nullptr;
        const double v = std::strtod(lexeme.c_str(), &end);
        if (end != lexeme.c_str() + lexeme.size() || !std::isfinite(v)) throw ParseError("malformed number", start);
        return out_.add({NodeKind::Number, v, 0, -1, -1});
    }

    int parse_atom() {
        skip_ws();
        if (pos_ >= text_.size()) throw ParseError("unexpected end of input", pos_);
        const char c = text_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (c == '(') {
            ++pos_;
            const int inner = parse_expr();
            expect(')');
            return inner;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            const std::size_t start = pos_;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
                ++pos_;
            const std::string name(text_.substr(start, pos_ - start));
            if (name == "x") return out_.add({NodeKind::VarX, 0.0, 0, -1, -1});
            if (name == "y") {
                if (dim_ < 2) throw ParseError("unknown identifier 'y' in a one-variable expression", start);
                return out_.add({NodeKind::VarY, 0.0, 0, -1, -1});
            }
            const std::optional<NodeKind> fn = function_kind(name);
            if (!fn) throw ParseError("unknown identifier '" + name + "'", start);
            if (!accept('(')) throw ParseError("function '" + name + "' requires an argument list", pos_);
            const int arg = parse_expr();
            if (accept(',')) throw ParseError("function '" + name + "' takes exactly one argument", pos_ - 1);
            expect(')');
            return out_.add({*fn, 0.0, 0, arg, -1});
        }
        throw ParseError(std::string("unexpected '") + c + "'", pos_);
    }

    static std::optional<NodeKind> function_kind(const std::string& name) {
        if (name == "sin") return NodeKind::Sin;
        if (name == "cos") return NodeKind::Cos;
        if (name == "abs") return NodeKind::Abs;
        if (name == "exp") return NodeKind::Exp;
        if (name == "sqrt") return NodeKind::Sqrt;
        return std::nullopt;
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    int dim_;
    Expr out_;
};

inline Expr parse_expr(std::string_view text, int dim) { return ExprParser(text, dim).parse(); }

inline double eval_expr(const Expr& e, double x) { return e(x); }
inline double eval_expr(const Expr& e, double x, double y) { return e(x, y); }

// ---------------------------------------------------------------------------
// Sampled bounds

struct SamplingDensity {
    std::size_t points_1d = 10001;
    std::size_t points_2d = 257;  // per axis
};

inline constexpr double kSafetyFactor = 1.05;

struct SampleStats {
    double max_abs = 0.0;       // max |f| over the sample
    double max_quotient = 0.0;  // max adjacent |df|/dx over the sample
};

namespace detail {

inline double sample_coord(const Interval& iv, std::size_t k, std::size_t count) {
    if (k + 1 == count) return iv.hi;
    const double t = static_cast<double>(k) / static_cast<double>(count - 1);
    return (1.0 - t) * iv.lo + t * iv.hi;
}

template <class F>
SampleStats sample_stats_1d(F f, const Interval& iv, std::size_t count) {
    if (!(iv.hi > iv.lo)) throw ValidationError("sampling interval is empty");
    if (count < 2) throw ValidationError("need at least 2 sample points");
    SampleStats st;
    double prev_x = 0.0, prev_v = 0.0;
    for (std::size_t k = 0; k < count; ++k) {
        const double x = sample_coord(iv, k, count);
        const double v = f(x);
        if (!std::isfinite(v)) throw EvalError("non-finite value while sampling");
        st.max_abs = std::max(st.max_abs, std::fabs(v));
        if (k > 0) st.max_quotient = std::max(st.max_quotient, std::fabs(v - prev_v) / (x - prev_x));
        prev_x = x;
        prev_v = v;
    }
    return st;
}

// Lipschitz quotient is taken along both axes, which bounds the constant
// with respect to the l1 distance on the plane.
template <class F>
SampleStats sample_stats_2d(F f, const Interval& ix, const Interval& iy, std::size_t count) {
    if (!(ix.hi > ix.lo) || !(iy.hi > iy.lo)) throw ValidationError("sampling rectangle is empty");
    if (count < 2) throw ValidationError("need at least 2 sample points per axis");
    std::vector<double> xs(count), ys(count), prev_row(count), row(count);
    for (std::size_t k = 0; k < count; ++k) {
        xs[k] = sample_coord(ix, k, count);
        ys[k] = sample_coord(iy, k, count);
    }
    SampleStats st;
    for (std::size_t b = 0; b < count; ++b) {
        for (std::size_t a = 0; a < count; ++a) {
            const double v = f(xs[a], ys[b]);
            if (!std::isfinite(v)) throw EvalError("non-finite value while sampling");
            row[a] = v;
            st.max_abs = std::max(st.max_abs, std::fabs(v));
            if (a > 0) st.max_quotient = std::max(st.max_quotient, std::fabs(v - row[a - 1]) / (xs[a] - xs[a - 1]));
            if (b > 0) st.max_quotient = std::max(st.max_quotient, std::fabs(v - prev_row[a]) / (ys[b] - ys[b - 1]));
        }
        std::swap(row, prev_row);
    }
    return st;
}

}  // namespace detail

inline double estimate_sup(const Expr& e, const Interval& region, std::size_t points = 10001) {
    return detail::sample_stats_1d([&](double x) { return e(x); }, region, points).max_abs * kSafetyFactor;
}

inline double estimate_sup(const Expr& e, const Interval& rx, const Interval& ry, std::size_t points = 257) {
    return detail::sample_stats_2d([&](double x, double y) { return e(x, y); }, rx, ry, points).max_abs *
           kSafetyFactor;
}

inline double estimate_lipschitz(const Expr& e, const Interval& region, std::size_t points = 10001) {
    return detail::sample_stats_1d([&](double x) { return e(x); }, region, points).max_quotient * kSafetyFactor;
}

inline double estimate_lipschitz(const Expr& e, const Interval& rx, const Interval& ry, std::size_t points = 257) {
    return detail::sample_stats_2d([&](double x, double y) { return e(x, y); }, rx, ry, points).max_quotient *
           kSafetyFactor;
}

// ---------------------------------------------------------------------------
// Factors

enum class BoundsMode {
    Exact,          // expression without variables: |c| and 0
    Estimated,      // sampled, inflated by the safety factor
    UserSupplied,   // supplied by the configuration
};

inline const char* to_string(BoundsMode m) {
    switch (m) {
        case BoundsMode::Exact: return "exact";
        case BoundsMode::Estimated: return "estimated";
        case BoundsMode::UserSupplied: return "user-supplied";
    }
    return "?";
}

/// Optional analytic bounds from the configuration.
struct BoundOverride {
    std::optional<double> sup;
    std::optional<double> lipschitz;
};

/// A contractivity factor bound to the region it is defined on.
struct FactorFn {
    Expr expr;
    int dim = 1;
    double sample_sup = 0.0;  // max |f| over the sample grid (exact for constants)
    double sup_est = 0.0;     // bound used for certification
    double lip_est = 0.0;
    BoundsMode bounds_mode = BoundsMode::Estimated;

    double operator()(double x, double y = 0.0) const { return expr(x, y); }
};

namespace detail {

inline void apply_override(FactorFn& f, const BoundOverride& o) {
    if (!o.sup && !o.lipschitz) return;
    if (o.sup) {
        if (*o.sup < 0.0) throw ValidationError("supplied sup bound is negative");
        f.sup_est = *o.sup;
    }
    if (o.lipschitz) {
        if (*o.lipschitz < 0.0) throw ValidationError("supplied Lipschitz bound is negative");
        f.lip_est = *o.lipschitz;
    }
    f.bounds_mode = BoundsMode::UserSupplied;
}

}  // namespace detail

inline FactorFn make_factor_1d(Expr e, const Interval& region, const SamplingDensity& density = {},
                               const BoundOverride& bounds = {}) {
    if (e.dimension() != 1) throw ValidationError("one-variable factor expected");
    FactorFn f;
    f.dim = 1;
    if (!e.uses_variables()) {
        const double c = std::fabs(e(0.0));
        f.sample_sup = f.sup_est = c;
        f.lip_est = 0.0;
        f.bounds_mode = BoundsMode::Exact;
    } else {
        const auto st = detail::sample_stats_1d([&](double x) { return e(x); }, region, density.points_1d);
        f.sample_sup = st.max_abs;
        f.sup_est = st.max_abs * kSafetyFactor;
        f.lip_est = st.max_quotient * kSafetyFactor;
        f.bounds_mode = BoundsMode::Estimated;
    }
    f.expr = std::move(e);
    detail::apply_override(f, bounds);
    return f;
}

inline FactorFn make_factor_2d(Expr e, const Interval& rx, const Interval& ry, const SamplingDensity& density = {},
                               const BoundOverride& bounds = {}) {
    if (e.dimension() != 2) throw ValidationError("bivariate factor expected");
    FactorFn f;
    f.dim = 2;
    if (!e.uses_variables()) {
        const double c = std::fabs(e(0.0, 0.0));
        f.sample_sup = f.sup_est = c;
        f.lip_est = 0.0;
        f.bounds_mode = BoundsMode::Exact;
    } else {
        const auto st =
            detail::sample_stats_2d([&](double x, double y) { return e(x, y); }, rx, ry, density.points_2d);
        f.sample_sup = st.max_abs;
        f.sup_est = st.max_abs * kSafetyFactor;
        f.lip_est = st.max_quotient * kSafetyFactor;
        f.bounds_mode = BoundsMode::Estimated;
    }
    f.expr = std::move(e);
    detail::apply_override(f, bounds);
    return f;
}

/// Entries of the factor matrix [[s, s'], [s~, s~']] for one region.
struct FactorQuad {
    FactorFn s, s_prime, s_tilde, s_tilde_prime;

    std::array<const FactorFn*, 4> all() const { return {&s, &s_prime, &s_tilde, &s_tilde_prime}; }
};

/// Textual factor lists as they appear in a configuration, one entry per region.
struct FactorSpec {
    std::vector<std::string> s, s_prime, s_tilde, s_tilde_prime;
    std::vector<std::array<BoundOverride, 4>> overrides;  // optional, same order as FactorQuad

    std::size_t size() const { return s.size(); }
};

/// One quadruple per region, each entry certified on its own region.
using FactorSet = std::vector<FactorQuad>;

inline FactorSpec constant_factor_spec(std::size_t regions, double s, double s_prime, double s_tilde,
                                       double s_tilde_prime) {
    auto str = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    FactorSpec spec;
    spec.s.assign(regions, str(s));
    spec.s_prime.assign(regions, str(s_prime));
    spec.s_tilde.assign(regions, str(s_tilde));
    spec.s_tilde_prime.assign(regions, str(s_tilde_prime));
    return spec;
}

namespace detail {

inline void check_spec_lengths(const FactorSpec& spec, std::size_t regions) {
    auto check = [&](const std::vector<std::string>& v, const char* name) {
        if (v.size() != regions)
            throw ValidationError(std::string("factor list '") + name + "' has " + std::to_string(v.size()) +
                                  " entries for " + std::to_string(regions) + " regions");
    };
    check(spec.s, "s");
    check(spec.s_prime, "s_prime");
    check(spec.s_tilde, "s_tilde");
    check(spec.s_tilde_prime, "s_tilde_prime");
    if (!spec.overrides.empty() && spec.overrides.size() != regions)
        throw ValidationError("factor bound overrides do not match region count");
}

}  // namespace detail

inline FactorSet build_factor_set_1d(const FactorSpec& spec, const HiddenDataset1D& data,
                                     const SamplingDensity& density = {}) {
    const std::size_t n = data.regions();
    detail::check_spec_lengths(spec, n);
    FactorSet set;
    set.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Interval r = data.region(i);
        const auto ov = spec.overrides.empty() ? std::array<BoundOverride, 4>{} : spec.overrides[i];
        set.push_back({make_factor_1d(parse_expr(spec.s[i], 1), r, density, ov[0]),
                       make_factor_1d(parse_expr(spec.s_prime[i], 1), r, density, ov[1]),
                       make_factor_1d(parse_expr(spec.s_tilde[i], 1), r, density, ov[2]),
                       make_factor_1d(parse_expr(spec.s_tilde_prime[i], 1), r, density, ov[3])});
    }
    return set;
}

/// Spec entries are indexed by tau(i, j).
inline FactorSet build_factor_set_2d(const FactorSpec& spec, const HiddenDataset2D& data,
                                     const SamplingDensity& density = {}) {
    const std::size_t n = data.nx(), m = data.ny();
    detail::check_spec_lengths(spec, n * m);
    FactorSet set;
    set.reserve(n * m);
    for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t r = tau(i, j, n);
            const Interval rx{data.xs[i], data.xs[i + 1]}, ry{data.ys[j], data.ys[j + 1]};
            const auto ov = spec.overrides.empty() ? std::array<BoundOverride, 4>{} : spec.overrides[r];
            set.push_back({make_factor_2d(parse_expr(spec.s[r], 2), rx, ry, density, ov[0]),
                           make_factor_2d(parse_expr(spec.s_prime[r], 2), rx, ry, density, ov[1]),
                           make_factor_2d(parse_expr(spec.s_tilde[r], 2), rx, ry, density, ov[2]),
                           make_factor_2d(parse_expr(spec.s_tilde_prime[r], 2), rx, ry, density, ov[3])});
        }
    }
    return set;
}

}  // namespace hvrfif
