#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hirschlab/error.hpp"
#include "hirschlab/linalg.hpp"
#include "hirschlab/rational.hpp"

namespace hirschlab {

/**
 * Affine constraint `offset + normal . x >= 0`.
 *
 * Coefficients are kept exactly as given so that files round-trip; use
 * canonical() to compare constraints up to positive scaling.
 */
struct Inequality {
    Rational offset;
    QVector normal;

    Inequality() = default;
    Inequality(Rational b, QVector a) : offset(std::move(b)), normal(std::move(a))
    {
        if (offset.is_zero() && is_zero(normal))
            throw DataError("inequality with all coefficients zero");
    }

    std::size_t dim() const { return normal.size(); }

    /// offset + normal . x
    Rational evaluate(const QVector& x) const { return offset + dot(normal, x); }

    bool satisfied_by(const QVector& x) const { return evaluate(x).sign() >= 0; }

    /**
     * Scale by the positive factor lcm(denominators) / gcd(scaled numerators),
     * which leaves coprime integer coefficients. Orientation is never flipped.
     */
    Inequality canonical() const
    {
        mpz_class lcm = offset.denominator();
        for (const auto& a : normal)
            mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), a.denominator().get_mpz_t());
        mpz_class gcd = 0;
        auto scaled_num = [&](const Rational& v) { return mpz_class(v.numerator() * (lcm / v.denominator())); };
        mpz_gcd(gcd.get_mpz_t(), gcd.get_mpz_t(), scaled_num(offset).get_mpz_t());
        for (const auto& a : normal)
            mpz_gcd(gcd.get_mpz_t(), gcd.get_mpz_t(), scaled_num(a).get_mpz_t());
        Inequality out;
        out.offset = Rational(mpz_class(scaled_num(offset) / gcd));
        out.normal.reserve(normal.size());
        for (const auto& a : normal)
            out.normal.emplace_back(mpz_class(scaled_num(a) / gcd));
        return out;
    }

    friend bool operator==(const Inequality&, const Inequality&) = default;
};

/// True when a and b describe the same closed half-space (same orientation).
inline bool same_halfspace(const Inequality& a, const Inequality& b)
{
    return a.canonical() == b.canonical();
}

/// Finite list of inequalities in a fixed ambient dimension, each with a label.
class HPolyhedron {
public:
    HPolyhedron() = default;
    explicit HPolyhedron(std::size_t dim) : dim_(dim) {}

    /// Labels default to "I_<position>".
    HPolyhedron(std::size_t dim, std::vector<Inequality> inequalities)
        : dim_(dim)
    {
        for (auto& ineq : inequalities)
            add(std::move(ineq));
    }

    std::size_t dim() const { return dim_; }
    std::size_t size() const { return inequalities_.size(); }
    bool empty() const { return inequalities_.empty(); }

    const Inequality& operator[](std::size_t i) const { return inequalities_.at(i); }
    const std::vector<Inequality>& inequalities() const { return inequalities_; }
    const std::string& label(std::size_t i) const { return labels_.at(i); }
    const std::vector<std::string>& labels() const { return labels_; }

    std::optional<std::size_t> find(std::string_view label) const
    {
        auto it = std::find(labels_.begin(), labels_.end(), label);
        if (it == labels_.end())
            return std::nullopt;
        return static_cast<std::size_t>(it - labels_.begin());
    }

    void add(Inequality ineq, std::string label = {})
    {
        if (ineq.dim() != dim_)
            throw DimensionError("inequality of length " + std::to_string(ineq.dim()) +
                                 " in a polyhedron of dimension " + std::to_string(dim_));
        if (label.empty())
            label = "I_" + std::to_string(inequalities_.size());
        inequalities_.push_back(std::move(ineq));
        labels_.push_back(std::move(label));
    }

    /// Every inequality holds at x.
    bool contains(const QVector& x) const
    {
        for (const auto& ineq : inequalities_)
            if (!ineq.satisfied_by(x))
                return false;
        return true;
    }

    /// Indices of inequalities that are tight at x.
    std::vector<std::size_t> tight_at(const QVector& x) const
    {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < size(); ++i)
            if (inequalities_[i].evaluate(x).is_zero())
                out.push_back(i);
        return out;
    }

    friend bool operator==(const HPolyhedron&, const HPolyhedron&) = default;

private:
    std::size_t dim_ = 0;
    std::vector<Inequality> inequalities_;
    std::vector<std::string> labels_;
};

/// Concatenation of both systems, labels preserved; same ambient dimension required.
inline HPolyhedron intersect(const HPolyhedron& a, const HPolyhedron& b)
{
    if (a.dim() != b.dim())
        throw DimensionError("intersecting polyhedra of different dimensions");
    HPolyhedron out = a;
    for (std::size_t i = 0; i < b.size(); ++i)
        out.add(b[i], b.label(i));
    return out;
}

/// Copy of p without the inequality labelled `label`; order of the rest is kept.
inline HPolyhedron remove_inequality(const HPolyhedron& p, std::string_view label)
{
    auto idx = p.find(label);
    if (!idx)
        throw DataError("no inequality labelled '" + std::string(label) + "'");
    HPolyhedron out(p.dim());
    for (std::size_t i = 0; i < p.size(); ++i)
        if (i != *idx)
            out.add(p[i], p.label(i));
    return out;
}

/// Removes the inequality labelled I_<j>.
inline HPolyhedron remove_inequality(const HPolyhedron& p, std::size_t j)
{
    return remove_inequality(p, "I_" + std::to_string(j));
}

/// lo <= normal . x <= hi. lo < hi is checked by the cube test, not here.
struct Slab {
    QVector normal;
    Rational lo;
    Rational hi;

    friend bool operator==(const Slab&, const Slab&) = default;
};

/// Lower side (-lo) + a.x >= 0 and upper side hi - a.x >= 0, both canonical.
inline std::pair<Inequality, Inequality> slab_to_inequalities(const Slab& s)
{
    QVector negated(s.normal.size());
    for (std::size_t i = 0; i < s.normal.size(); ++i)
        negated[i] = -s.normal[i];
    return {Inequality(-s.lo, s.normal).canonical(), Inequality(s.hi, std::move(negated)).canonical()};
}

struct CubeSpec {
    std::size_t dim = 0;
    std::vector<Slab> slabs;

    /// Both sides of every slab, labelled C_<k>.lo and C_<k>.hi.
    HPolyhedron as_polyhedron() const
    {
        HPolyhedron out(dim);
        for (std::size_t k = 0; k < slabs.size(); ++k) {
            auto [lower, upper] = slab_to_inequalities(slabs[k]);
            out.add(std::move(lower), "C_" + std::to_string(k) + ".lo");
            out.add(std::move(upper), "C_" + std::to_string(k) + ".hi");
        }
        return out;
    }

    friend bool operator==(const CubeSpec&, const CubeSpec&) = default;
};

/// One published construction: N minus I_<removed_index>, intersected with `cube`.
struct Dataset {
    std::size_t removed_index = 0;
    CubeSpec cube;
};

namespace detail {

struct Line {
    std::size_t number;
    std::vector<std::string_view> tokens;
};

inline std::vector<Line> tokenize(std::string_view text)
{
    std::vector<Line> out;
    std::size_t number = 0;
    while (!text.empty()) {
        ++number;
        auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        if (auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        Line parsed{number, {}};
        std::size_t i = 0;
        while (i < line.size()) {
            while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r'))
                ++i;
            std::size_t start = i;
            while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r')
                ++i;
            if (i > start)
                parsed.tokens.push_back(line.substr(start, i - start));
        }
        if (!parsed.tokens.empty())
            out.push_back(std::move(parsed));
    }
    return out;
}

inline Rational parse_token(std::string_view token, std::size_t line)
{
    try {
        return Rational::parse(token);
    } catch (const Error& e) {
        throw ParseError(e.what(), line);
    }
}

// Splits off the "dim <d>" header; every other line is returned in order.
inline std::size_t take_dim_header(const std::vector<Line>& lines, std::vector<const Line*>& body)
{
    std::optional<std::size_t> dim;
    for (const auto& line : lines) {
        if (line.tokens.front() == "dim") {
            if (dim)
                throw ParseError("duplicate dim header", line.number);
            if (!body.empty())
                throw ParseError("dim header must precede data lines", line.number);
            if (line.tokens.size() != 2)
                throw ParseError("expected 'dim <d>'", line.number);
            Rational d = parse_token(line.tokens[1], line.number);
            if (!d.is_integer() || d.sign() <= 0)
                throw ParseError("dimension must be a positive integer", line.number);
            dim = d.numerator().get_ui();
            continue;
        }
        if (!dim)
            throw ParseError("missing dim header", line.number);
        body.push_back(&line);
    }
    if (!dim)
        throw ParseError("missing dim header");
    return *dim;
}

}  // namespace detail

/**
 * Parse the .hine format: a "dim <d>" line, then one "<b> <a1> ... <ad>" line
 * per inequality b + a.x >= 0. '#' starts a comment.
 */
inline HPolyhedron parse_hine(std::string_view text)
{
    auto lines = detail::tokenize(text);
    std::vector<const detail::Line*> body;
    std::size_t dim = detail::take_dim_header(lines, body);
    HPolyhedron out(dim);
    for (const auto* line : body) {
        if (line->tokens.size() != dim + 1)
            throw ParseError("expected " + std::to_string(dim + 1) + " coefficients, got " +
                                 std::to_string(line->tokens.size()),
                             line->number);
        Rational b = detail::parse_token(line->tokens[0], line->number);
        QVector a;
        a.reserve(dim);
        for (std::size_t i = 1; i <= dim; ++i)
            a.push_back(detail::parse_token(line->tokens[i], line->number));
        try {
            out.add(Inequality(std::move(b), std::move(a)));
        } catch (const DataError& e) {
            throw ParseError(e.what(), line->number);
        }
    }
    return out;
}

/// Parse the .cube format: "dim <d>", then "<lo> <hi> <a1> ... <ad>" per slab.
inline CubeSpec parse_cube(std::string_view text)
{
    auto lines = detail::tokenize(text);
    std::vector<const detail::Line*> body;
    CubeSpec out;
    out.dim = detail::take_dim_header(lines, body);
    for (const auto* line : body) {
        if (line->tokens.size() != out.dim + 2)
            throw ParseError("expected " + std::to_string(out.dim + 2) + " values, got " +
                                 std::to_string(line->tokens.size()),
                             line->number);
        Slab s;
        s.lo = detail::parse_token(line->tokens[0], line->number);
        s.hi = detail::parse_token(line->tokens[1], line->number);
        s.normal.reserve(out.dim);
        for (std::size_t i = 0; i < out.dim; ++i)
            s.normal.push_back(detail::parse_token(line->tokens[i + 2], line->number));
        out.slabs.push_back(std::move(s));
    }
    return out;
}

inline std::string serialize_hine(const HPolyhedron& p)
{
    std::ostringstream os;
    os << "dim " << p.dim() << '\n';
    for (const auto& ineq : p.inequalities()) {
        os << ineq.offset.str();
        for (const auto& a : ineq.normal)
            os << ' ' << a.str();
        os << '\n';
    }
    return os.str();
}

inline std::string serialize_cube(const CubeSpec& c)
{
    std::ostringstream os;
    os << "dim " << c.dim << '\n';
    for (const auto& s : c.slabs) {
        os << s.lo.str() << ' ' << s.hi.str();
        for (const auto& a : s.normal)
            os << ' ' << a.str();
        os << '\n';
    }
    return os.str();
}

}  // namespace hirschlab
