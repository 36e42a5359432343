#pragma once

// Brute-force reference implementations used only by the tests. They share
// the exact arithmetic layer with the library and nothing else: no simplex
// dictionaries, no pivoting graph search.

#include <algorithm>
#include <map>
#include <optional>
#include <random>
#include <vector>

#include "hirschlab/hrep.hpp"
#include "hirschlab/linalg.hpp"
#include "hirschlab/simplex.hpp"

namespace oracle {

using namespace hirschlab;

struct BruteVertex {
    QVector point;
    std::vector<std::size_t> tight;
};

/// Every d-subset of rows, solved as equalities; feasible solutions deduplicated and sorted.
inline std::vector<BruteVertex> vertices(const HPolyhedron& p)
{
    const std::size_t d = p.dim(), m = p.size();
    std::map<QVector, std::vector<std::size_t>> found;
    if (m < d)
        return {};
    std::vector<std::size_t> pick(d);
    for (std::size_t i = 0; i < d; ++i)
        pick[i] = i;
    for (;;) {
        QMatrix a(d, d);
        QVector rhs(d);
        for (std::size_t r = 0; r < d; ++r) {
            for (std::size_t c = 0; c < d; ++c)
                a(r, c) = p[pick[r]].normal[c];
            rhs[r] = -p[pick[r]].offset;
        }
        if (auto x = solve_square(a, rhs); x && p.contains(*x))
            found.emplace(*x, p.tight_at(*x));
        std::size_t k = d;
        while (k > 0 && pick[k - 1] == m - d + k - 1)
            --k;
        if (k == 0)
            break;
        ++pick[k - 1];
        for (std::size_t i = k; i < d; ++i)
            pick[i] = pick[i - 1] + 1;
    }
    std::vector<BruteVertex> out;
    for (auto& [x, tight] : found)
        out.push_back({x, tight});
    return out;
}

/// True when the normals span R^d, so a nonempty polyhedron has a vertex.
inline bool pointed(const HPolyhedron& p)
{
    std::vector<QVector> normals;
    for (const auto& ineq : p.inequalities())
        normals.push_back(ineq.normal);
    return !normals.empty() && rank(normals) == p.dim();
}

/// Best objective value over the brute-force vertices, or nullopt if there are none.
inline std::optional<Rational> best_vertex_value(const std::vector<BruteVertex>& vs, const QVector& c, Sense sense)
{
    std::optional<Rational> best;
    for (const auto& v : vs) {
        Rational value = dot(c, v.point);
        if (!best || (sense == Sense::Maximize ? value > *best : value < *best))
            best = value;
    }
    return best;
}

/**
 * Edge test via LPs on the common face: u and v span an edge iff the face
 * cut out by their common tight constraints stays on the line through u and
 * v, i.e. every direction orthogonal to v - u is constant on it.
 */
inline bool adjacent(const HPolyhedron& p, const QVector& u, const QVector& v)
{
    const std::size_t d = p.dim();
    HPolyhedron face = p;
    for (std::size_t i = 0; i < p.size(); ++i)
        if (p[i].evaluate(u).is_zero() && p[i].evaluate(v).is_zero())
            face.add(Inequality(-p[i].offset, scaled(p[i].normal, Rational(-1))));
    QVector w(d);
    for (std::size_t j = 0; j < d; ++j)
        w[j] = v[j] - u[j];
    std::size_t k = 0;
    while (w[k].is_zero())
        ++k;
    LPSolver solver(face);
    for (std::size_t j = 0; j < d; ++j) {
        if (j == k)
            continue;
        QVector y = unit_vector(d, j);
        y[k] = -w[j] / w[k];
        for (Sense s : {Sense::Maximize, Sense::Minimize}) {
            auto o = solver.solve(s, y);
            const auto* opt = std::get_if<Optimal>(&o);
            if (!opt || opt->value != dot(y, u))
                return false;
        }
    }
    return true;
}

// ---------------------------------------------------------------------------
// Random instances
// ---------------------------------------------------------------------------

struct Generator {
    std::mt19937 rng;
    explicit Generator(unsigned seed) : rng(seed) {}

    long uniform(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); }

    Rational small_rational()
    {
        long num = uniform(-3, 3);
        return uniform(0, 4) == 0 ? reduce(num, uniform(1, 3)) : Rational(num);
    }

    Inequality random_inequality(std::size_t d)
    {
        for (;;) {
            QVector a(d);
            for (auto& x : a)
                x = small_rational();
            if (is_zero(a))
                continue;
            return Inequality(Rational(uniform(-2, 4)), a);
        }
    }

    /// Bounded by construction: a box or a simplex wrapper plus random cuts, m <= max_rows.
    HPolyhedron bounded_polytope(std::size_t d, std::size_t max_rows)
    {
        HPolyhedron p(d);
        if (uniform(0, 1) == 0 && 2 * d <= max_rows) {
            for (std::size_t k = 0; k < d; ++k) {
                p.add(Inequality(Rational(uniform(1, 3)), unit_vector(d, k)));
                p.add(Inequality(Rational(uniform(1, 3)), unit_vector(d, k, -1)));
            }
        } else {
            QVector all(d, Rational(-1));
            for (std::size_t k = 0; k < d; ++k)
                p.add(Inequality(Rational(uniform(1, 2)), unit_vector(d, k)));
            p.add(Inequality(Rational(uniform(1, 4)), all));
        }
        std::size_t extra = uniform(0, static_cast<long>(max_rows - p.size()));
        HPolyhedron out(d);
        std::vector<Inequality> rows = p.inequalities();
        for (std::size_t i = 0; i < extra; ++i)
            rows.push_back(random_inequality(d));
        std::shuffle(rows.begin(), rows.end(), rng);
        for (auto& r : rows)
            out.add(std::move(r));
        return out;
    }

    HPolyhedron free_polyhedron(std::size_t d, std::size_t rows)
    {
        HPolyhedron p(d);
        for (std::size_t i = 0; i < rows; ++i)
            p.add(random_inequality(d));
        return p;
    }

    QVector objective(std::size_t d)
    {
        QVector c(d);
        for (auto& x : c)
            x = small_rational();
        return c;
    }
};

}  // namespace oracle
