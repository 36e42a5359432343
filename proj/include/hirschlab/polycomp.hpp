#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <variant>
#include <vector>

#include "hirschlab/error.hpp"
#include "hirschlab/hrep.hpp"
#include "hirschlab/linalg.hpp"
#include "hirschlab/parallel.hpp"
#include "hirschlab/simplex.hpp"

namespace hirschlab {

// ---------------------------------------------------------------------------
// Boundedness
// ---------------------------------------------------------------------------

/// Nonnegative multipliers with sum_k multipliers_k * a_k = -sign * e_axis,
/// which forces sign * y_axis <= 0 on every recession direction y.
struct DirectionProof {
    std::size_t axis = 0;
    int sign = 1;
    QVector multipliers;
};

struct BoundednessResult {
    bool bounded = false;
    std::vector<DirectionProof> proofs;  // one per (axis, sign) when bounded
    std::optional<QVector> ray;          // nonzero recession direction when unbounded
};

/**
 * Decide boundedness by 2 * dim LPs over the recession cone {y : a_i.y >= 0}
 * cut by the box -1 <= y_k <= 1: P is bounded iff max(+-y_k) is 0 for every k.
 */
inline BoundednessResult is_bounded(const HPolyhedron& p)
{
    const std::size_t d = p.dim();
    HPolyhedron cone(d);
    std::vector<std::optional<std::size_t>> cone_row(p.size());  // zero normals do not constrain directions
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (is_zero(p[i].normal))
            continue;
        cone_row[i] = cone.size();
        cone.add(Inequality{Rational{}, p[i].normal}, p.label(i));
    }
    for (std::size_t k = 0; k < d; ++k) {
        cone.add(Inequality(1, unit_vector(d, k)), "box_" + std::to_string(k) + ".lo");
        cone.add(Inequality(1, unit_vector(d, k, -1)), "box_" + std::to_string(k) + ".hi");
    }
    LPSolver solver(cone);
    BoundednessResult result;
    result.bounded = true;
    for (std::size_t k = 0; k < d; ++k) {
        for (int sign : {1, -1}) {
            LPOutcome o = solver.solve(Sense::Maximize, unit_vector(d, k, sign));
            auto& opt = std::get<Optimal>(o);
            if (opt.value.sign() > 0) {
                result.bounded = false;
                result.proofs.clear();
                result.ray = std::move(opt.point);
                return result;
            }
            QVector multipliers(p.size());
            for (std::size_t i = 0; i < p.size(); ++i)
                if (cone_row[i])
                    multipliers[i] = opt.dual[*cone_row[i]];
            result.proofs.push_back(DirectionProof{k, sign, std::move(multipliers)});
        }
    }
    return result;
}

inline bool check_direction_proof(const HPolyhedron& p, const DirectionProof& proof)
{
    if (proof.multipliers.size() != p.size() || proof.axis >= p.dim() || (proof.sign != 1 && proof.sign != -1))
        return false;
    QVector sum(p.dim());
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (proof.multipliers[i].sign() < 0)
            return false;
        if (!proof.multipliers[i].is_zero())
            for (std::size_t j = 0; j < p.dim(); ++j)
                sum[j].add_product(proof.multipliers[i], p[i].normal[j]);
    }
    return sum == unit_vector(p.dim(), proof.axis, -proof.sign);
}

/// Re-checks a boundedness verdict by substitution only.
inline bool check_boundedness(const HPolyhedron& p, const BoundednessResult& r)
{
    if (!r.bounded) {
        if (!r.ray || r.ray->size() != p.dim() || is_zero(*r.ray))
            return false;
        for (const auto& ineq : p.inequalities())
            if (dot(ineq.normal, *r.ray).sign() < 0)
                return false;
        return true;
    }
    std::vector<bool> covered(2 * p.dim(), false);
    for (const auto& proof : r.proofs) {
        if (!check_direction_proof(p, proof))
            return false;
        covered[2 * proof.axis + (proof.sign > 0 ? 0 : 1)] = true;
    }
    return std::all_of(covered.begin(), covered.end(), [](bool b) { return b; });
}

// ---------------------------------------------------------------------------
// Equality of polyhedra
// ---------------------------------------------------------------------------

struct EqualityResult {
    bool equal = false;
    std::vector<Implication> p_from_q;  // certificates that Q implies each inequality of P
    std::vector<Implication> q_from_p;  // certificates that P implies each inequality of Q
    std::optional<QVector> witness;     // point of one side violating an inequality of the other
};

/// P == Q iff each system implies every inequality of the other. Stops at the first failure.
inline EqualityResult polyhedra_equal(const LPSolver& p, const LPSolver& q)
{
    if (p.system().dim() != q.system().dim())
        throw DimensionError("comparing polyhedra of different dimensions");
    EqualityResult r;
    auto run = [&](const LPSolver& from, const HPolyhedron& targets, std::vector<Implication>& out) {
        for (const auto& t : targets.inequalities()) {
            out.push_back(implies(from, t));
            if (auto* n = std::get_if<NotImplied>(&out.back())) {
                r.witness = n->witness;
                return false;
            }
        }
        return true;
    };
    r.equal = run(q, p.system(), r.p_from_q) && run(p, q.system(), r.q_from_p);
    return r;
}

inline EqualityResult polyhedra_equal(const HPolyhedron& p, const HPolyhedron& q)
{
    return polyhedra_equal(LPSolver(p), LPSolver(q));
}

// ---------------------------------------------------------------------------
// Combinatorial cube test
// ---------------------------------------------------------------------------

struct CubeVerdict {
    bool is_cube = false;
    std::size_t rank = 0;
    std::vector<std::string> reasons;
};

/**
 * A slab system is a combinatorial cube iff it has exactly dim slabs, each
 * with lo < hi, and linearly independent normals: x -> (a_i.x)_i is then an
 * affine bijection onto the box prod [lo_i, hi_i].
 */
inline CubeVerdict is_combinatorial_cube(const CubeSpec& c)
{
    CubeVerdict v;
    if (c.slabs.size() != c.dim)
        v.reasons.push_back("expected " + std::to_string(c.dim) + " slabs, found " + std::to_string(c.slabs.size()));
    std::vector<QVector> normals;
    for (std::size_t k = 0; k < c.slabs.size(); ++k) {
        const auto& s = c.slabs[k];
        if (s.normal.size() != c.dim) {
            v.reasons.push_back("slab " + std::to_string(k) + " normal has wrong length");
            continue;
        }
        if (!(s.lo < s.hi))
            v.reasons.push_back("slab " + std::to_string(k) + " has lo >= hi");
        normals.push_back(s.normal);
    }
    v.rank = normals.empty() ? 0 : rank(normals);
    if (v.rank != c.dim)
        v.reasons.push_back("slab normals have rank " + std::to_string(v.rank) + ", need " + std::to_string(c.dim));
    v.is_cube = v.reasons.empty();
    return v;
}

// ---------------------------------------------------------------------------
// Vertices
// ---------------------------------------------------------------------------

struct Vertex {
    QVector point;
    std::vector<std::size_t> active;  // indices of the inequalities tight at point, ascending

    friend bool operator==(const Vertex&, const Vertex&) = default;
};

namespace detail {

class BasisKey {
public:
    explicit BasisKey(std::size_t m) : words_((m + 63) / 64, 0) {}
    void set(std::size_t i) { words_[i / 64] |= std::uint64_t{1} << (i % 64); }
    void reset(std::size_t i) { words_[i / 64] &= ~(std::uint64_t{1} << (i % 64)); }
    friend bool operator==(const BasisKey&, const BasisKey&) = default;

    struct Hash {
        std::size_t operator()(const BasisKey& k) const
        {
            std::size_t h = 1469598103934665603ULL;
            for (auto w : k.words_)
                h = (h ^ static_cast<std::size_t>(w)) * 1099511628211ULL;
            return h;
        }
    };

private:
    std::vector<std::uint64_t> words_;
};

inline BasisKey cobasis_key(const Dictionary& d)
{
    BasisKey key(d.num_constraints());
    for (std::size_t c = 0; c < d.cols(); ++c)
        key.set(d.nonbasic(c) - d.dim());
    return key;
}

// Pivots (row, column) from d that land on another feasible basis.
inline std::vector<std::pair<std::size_t, std::size_t>> feasible_moves(const Dictionary& d)
{
    std::vector<std::pair<std::size_t, std::size_t>> moves;
    for (std::size_t c = 0; c < d.cols(); ++c) {
        auto rows = d.blocking_rows(c);
        if (rows.empty())
            throw DataError("polyhedron is unbounded; check is_bounded before enumerating vertices");
        for (std::size_t r : rows)
            moves.emplace_back(r, c);
        // A degenerate row can also be exchanged through a positive coefficient.
        for (std::size_t r = 0; r < d.rows(); ++r)
            if (!d.is_free(d.basic(r)) && d.constant(r).is_zero() && d.coef(r, c).sign() > 0)
                moves.emplace_back(r, c);
    }
    return moves;
}

}  // namespace detail

/**
 * All vertices of a bounded polyhedron, sorted lexicographically by point.
 *
 * Depth-first search over the graph of feasible bases, moving between
 * neighbours by exact pivots and undoing them on backtrack. Degenerate
 * vertices are reached through several bases and reported once.
 */
inline std::vector<Vertex> enumerate_vertices(const HPolyhedron& p, const Deadline& deadline = {})
{
    LPSolver solver(p);
    if (!solver.feasible())
        return {};
    detail::Dictionary d = solver.feasible_dictionary();
    for (std::size_t c = 0; c < d.cols(); ++c)
        if (d.is_free(d.nonbasic(c)))
            throw DataError("polyhedron contains a line; check is_bounded before enumerating vertices");

    std::map<QVector, std::vector<std::size_t>> found;
    auto record = [&] {
        QVector x = d.point();
        if (found.count(x))
            return;
        std::vector<std::size_t> active;
        for (std::size_t c = 0; c < d.cols(); ++c)
            active.push_back(d.nonbasic(c) - d.dim());
        for (std::size_t r = 0; r < d.rows(); ++r)
            if (!d.is_free(d.basic(r)) && d.constant(r).is_zero())
                active.push_back(d.basic(r) - d.dim());
        std::sort(active.begin(), active.end());
        found.emplace(std::move(x), std::move(active));
    };

    struct Frame {
        std::optional<std::pair<std::size_t, std::size_t>> arrival;
        std::vector<std::pair<std::size_t, std::size_t>> moves;
        std::size_t next = 0;
    };
    std::unordered_set<detail::BasisKey, detail::BasisKey::Hash> visited;
    visited.insert(detail::cobasis_key(d));
    record();
    std::vector<Frame> stack;
    stack.push_back(Frame{std::nullopt, detail::feasible_moves(d)});
    while (!stack.empty()) {
        deadline.check("vertex enumeration", found.size());
        Frame& top = stack.back();
        if (top.next == top.moves.size()) {
            if (top.arrival)
                d.pivot(top.arrival->first, top.arrival->second);  // a pivot is its own inverse
            stack.pop_back();
            continue;
        }
        auto [r, c] = top.moves[top.next++];
        detail::BasisKey key = detail::cobasis_key(d);
        key.reset(d.nonbasic(c) - d.dim());
        key.set(d.basic(r) - d.dim());
        if (!visited.insert(key).second)
            continue;
        d.pivot(r, c);
        record();
        stack.push_back(Frame{std::make_pair(r, c), detail::feasible_moves(d)});
    }

    std::vector<Vertex> out;
    out.reserve(found.size());
    for (auto& [x, active] : found)
        out.push_back(Vertex{x, active});
    return out;
}

/**
 * The two spindle apexes: the points where all inequalities with positive
 * (resp. negative) first normal coordinate are tight. Each group must have
 * exactly dim members, a nonsingular tight system, and its apex must keep
 * the other group strictly slack.
 */
inline std::pair<QVector, QVector> find_apexes(const HPolyhedron& p)
{
    const std::size_t d = p.dim();
    if (d == 0)
        throw DataError("find_apexes needs positive dimension");
    std::vector<std::size_t> groups[2];
    for (std::size_t i = 0; i < p.size(); ++i) {
        int s = p[i].normal[0].sign();
        if (s == 0)
            throw DataError(p.label(i) + " has zero first coordinate; not a spindle system");
        groups[s > 0 ? 0 : 1].push_back(i);
    }
    auto apex = [&](const std::vector<std::size_t>& tight, const std::vector<std::size_t>& slack) {
        if (tight.size() != d)
            throw DataError("apex group has " + std::to_string(tight.size()) + " inequalities, expected " + std::to_string(d));
        QMatrix m(d, d);
        QVector rhs(d);
        for (std::size_t r = 0; r < d; ++r) {
            for (std::size_t c = 0; c < d; ++c)
                m(r, c) = p[tight[r]].normal[c];
            rhs[r] = -p[tight[r]].offset;
        }
        auto x = solve_square(m, rhs);
        if (!x)
            throw DataError("apex tight system is singular");
        for (std::size_t i : slack)
            if (p[i].evaluate(*x).sign() <= 0)
                throw DataError("apex candidate is not strictly inside " + p.label(i));
        return *x;
    };
    return {apex(groups[0], groups[1]), apex(groups[1], groups[0])};
}

// ---------------------------------------------------------------------------
// Graph, distances, Hirsch bound
// ---------------------------------------------------------------------------

struct PolytopeGraph {
    std::vector<Vertex> vertices;
    std::vector<std::vector<std::size_t>> adjacency;

    std::size_t num_edges() const
    {
        std::size_t e = 0;
        for (const auto& a : adjacency)
            e += a.size();
        return e / 2;
    }

    std::optional<std::size_t> index_of(const QVector& point) const
    {
        for (std::size_t i = 0; i < vertices.size(); ++i)
            if (vertices[i].point == point)
                return i;
        return std::nullopt;
    }
};

namespace detail {

inline std::vector<std::size_t> intersection(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b)
{
    std::vector<std::size_t> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

inline std::string subset_key(const std::vector<std::size_t>& active, std::size_t skip)
{
    std::string key;
    key.reserve(active.size() * 2);
    for (std::size_t k = 0; k < active.size(); ++k) {
        if (k == skip)
            continue;
        key.push_back(static_cast<char>(active[k] & 0xff));
        key.push_back(static_cast<char>(active[k] >> 8));
    }
    return key;
}

}  // namespace detail

/**
 * u and v are adjacent iff their common active normals have rank dim - 1 and
 * no third vertex is tight on that whole common set (the common set then
 * defines a 1-face whose endpoints are u and v).
 */
inline PolytopeGraph build_graph(const HPolyhedron& p, std::vector<Vertex> vertices, const Deadline& deadline = {})
{
    const std::size_t d = p.dim();
    PolytopeGraph g;
    g.vertices = std::move(vertices);
    const std::size_t n = g.vertices.size();
    g.adjacency.assign(n, {});
    if (d == 0 || n < 2)
        return g;

    bool simple = std::all_of(g.vertices.begin(), g.vertices.end(), [&](const Vertex& v) { return v.active.size() == d; });
    if (simple) {
        // d tight normals of rank d at each vertex: every (d-1)-subset has rank
        // d-1, and an edge is exactly a (d-1)-subset shared by two vertices.
        std::unordered_map<std::string, std::vector<std::size_t>> buckets;
        for (std::size_t v = 0; v < n; ++v) {
            deadline.check("graph construction", v);
            for (std::size_t skip = 0; skip < d; ++skip)
                buckets[detail::subset_key(g.vertices[v].active, skip)].push_back(v);
        }
        for (const auto& [key, members] : buckets) {
            if (members.size() > 2)
                throw DataError("edge shared by more than two vertices");
            if (members.size() == 2) {
                g.adjacency[members[0]].push_back(members[1]);
                g.adjacency[members[1]].push_back(members[0]);
            }
        }
    } else {
        // Bitset prefilter on |common| >= d-1. When one endpoint is simple its
        // active normals are independent, so rank(common) = |common| without
        // any arithmetic; only degenerate-degenerate pairs need an exact rank.
        const std::size_t words = (p.size() + 63) / 64;
        std::vector<std::uint64_t> bits(n * words, 0);
        std::vector<std::vector<std::size_t>> tight_on(p.size());
        for (std::size_t v = 0; v < n; ++v)
            for (std::size_t i : g.vertices[v].active) {
                bits[v * words + i / 64] |= std::uint64_t{1} << (i % 64);
                tight_on[i].push_back(v);
            }
        auto common_count = [&](std::size_t u, std::size_t v) {
            std::size_t c = 0;
            for (std::size_t k = 0; k < words; ++k)
                c += static_cast<std::size_t>(__builtin_popcountll(bits[u * words + k] & bits[v * words + k]));
            return c;
        };
        for (std::size_t u = 0; u < n; ++u) {
            deadline.check("graph construction", u);
            const bool u_simple = g.vertices[u].active.size() == d;
            for (std::size_t v = u + 1; v < n; ++v) {
                std::size_t shared = common_count(u, v);
                if (shared + 1 < d)
                    continue;
                auto common = detail::intersection(g.vertices[u].active, g.vertices[v].active);
                if (u_simple || g.vertices[v].active.size() == d) {
                    if (shared != d - 1)
                        continue;
                } else {
                    std::vector<QVector> normals;
                    for (std::size_t i : common)
                        normals.push_back(p[i].normal);
                    if (rank(normals) != d - 1)
                        continue;
                }
                const auto* candidates = &tight_on[common.front()];
                for (std::size_t i : common)
                    if (tight_on[i].size() < candidates->size())
                        candidates = &tight_on[i];
                bool third = false;
                for (std::size_t w : *candidates) {
                    if (w == u || w == v)
                        continue;
                    bool contains = true;
                    for (std::size_t k = 0; k < words && contains; ++k) {
                        std::uint64_t need = bits[u * words + k] & bits[v * words + k];
                        contains = (bits[w * words + k] & need) == need;
                    }
                    if (contains) {
                        third = true;
                        break;
                    }
                }
                if (third)
                    continue;
                g.adjacency[u].push_back(v);
                g.adjacency[v].push_back(u);
            }
        }
    }
    for (auto& a : g.adjacency)
        std::sort(a.begin(), a.end());
    return g;
}

inline constexpr std::size_t kUnreached = std::numeric_limits<std::size_t>::max();

/// BFS distances from source; stops expanding past max_depth (unreached = kUnreached).
inline std::vector<std::size_t> bfs_distances(const PolytopeGraph& g, std::size_t source,
                                              std::size_t max_depth = kUnreached)
{
    std::vector<std::size_t> dist(g.vertices.size(), kUnreached);
    std::vector<std::size_t> queue;
    queue.reserve(g.vertices.size());
    dist.at(source) = 0;
    queue.push_back(source);
    for (std::size_t head = 0; head < queue.size(); ++head) {
        std::size_t u = queue[head];
        if (dist[u] >= max_depth)
            continue;
        for (std::size_t v : g.adjacency[u])
            if (dist[v] == kUnreached) {
                dist[v] = dist[u] + 1;
                queue.push_back(v);
            }
    }
    return dist;
}

/// Edge distance from s to t, or nullopt when t is farther than max_depth.
inline std::optional<std::size_t> distance(const PolytopeGraph& g, std::size_t s, std::size_t t,
                                           std::size_t max_depth = kUnreached)
{
    if (s >= g.vertices.size() || t >= g.vertices.size())
        throw DataError("vertex index out of range");
    std::vector<std::size_t> dist(g.vertices.size(), kUnreached);
    std::vector<std::size_t> queue{s};
    dist[s] = 0;
    for (std::size_t head = 0; head < queue.size(); ++head) {
        std::size_t u = queue[head];
        if (u == t)
            return dist[u];
        if (dist[u] >= max_depth)
            continue;
        for (std::size_t v : g.adjacency[u])
            if (dist[v] == kUnreached) {
                dist[v] = dist[u] + 1;
                queue.push_back(v);
            }
    }
    if (max_depth == kUnreached)
        throw DataError("graph is disconnected");
    return std::nullopt;
}

/// Maximum BFS eccentricity over all sources. Throws DataError if disconnected.
inline std::size_t diameter(const PolytopeGraph& g, std::size_t jobs = 1, const Deadline& deadline = {})
{
    const std::size_t n = g.vertices.size();
    std::vector<std::size_t> ecc(n, 0);
    std::atomic<bool> disconnected{false};
    parallel_for(n, jobs, [&](std::size_t s) {
        deadline.check("diameter", s);
        auto dist = bfs_distances(g, s);
        std::size_t e = 0;
        for (auto x : dist) {
            if (x == kUnreached) {
                disconnected = true;
                return;
            }
            e = std::max(e, x);
        }
        ecc[s] = e;
    });
    if (disconnected)
        throw DataError("graph is disconnected");
    return n == 0 ? 0 : *std::max_element(ecc.begin(), ecc.end());
}

/**
 * Indices of an irredundant subsystem: inequalities are dropped in order
 * whenever the remaining ones imply them. For a full-dimensional polytope
 * these are exactly its facets.
 */
inline std::vector<std::size_t> irredundant_indices(const HPolyhedron& p)
{
    std::vector<std::size_t> keep(p.size());
    for (std::size_t i = 0; i < p.size(); ++i)
        keep[i] = i;
    for (std::size_t i = 0; i < p.size(); ++i) {
        HPolyhedron others(p.dim());
        for (std::size_t k : keep)
            if (k != i)
                others.add(p[k], p.label(k));
        if (others.empty())
            continue;
        if (is_implied(implies(others, p[i])))
            keep.erase(std::find(keep.begin(), keep.end(), i));
    }
    return keep;
}

/// Dimension of the affine hull of the points (-1 for an empty set).
inline long affine_dimension(const std::vector<Vertex>& vertices)
{
    if (vertices.empty())
        return -1;
    const std::size_t d = vertices.front().point.size();
    std::vector<std::pair<std::size_t, QVector>> basis;  // (pivot column, row with 1 at pivot)
    for (std::size_t v = 1; v < vertices.size() && basis.size() < d; ++v) {
        QVector diff(d);
        for (std::size_t j = 0; j < d; ++j)
            diff[j] = vertices[v].point[j] - vertices[0].point[j];
        for (const auto& [col, row] : basis) {
            if (diff[col].is_zero())
                continue;
            Rational f = -diff[col];
            for (std::size_t j = 0; j < d; ++j)
                if (!row[j].is_zero())
                    diff[j].add_product(f, row[j]);
        }
        std::size_t col = 0;
        while (col < d && diff[col].is_zero())
            ++col;
        if (col == d)
            continue;
        Rational inv = diff[col].inverse();
        for (auto& x : diff)
            x *= inv;
        for (auto& [c, row] : basis) {
            if (row[col].is_zero())
                continue;
            Rational f = -row[col];
            for (std::size_t j = 0; j < d; ++j)
                if (!diff[j].is_zero())
                    row[j].add_product(f, diff[j]);
        }
        basis.emplace_back(col, std::move(diff));
    }
    return static_cast<long>(basis.size());
}

struct HirschResult {
    bool satisfied = false;
    std::size_t facets = 0;
    long dimension = 0;
    std::size_t diameter = 0;
    std::vector<std::size_t> redundant;
};

/// diameter(G) <= facets - dimension, with facets counted after removing redundant inequalities.
inline HirschResult hirsch_satisfied(const HPolyhedron& p, const PolytopeGraph& g, std::size_t jobs = 1,
                                     const Deadline& deadline = {})
{
    HirschResult r;
    auto keep = irredundant_indices(p);
    r.facets = keep.size();
    for (std::size_t i = 0; i < p.size(); ++i)
        if (!std::binary_search(keep.begin(), keep.end(), i))
            r.redundant.push_back(i);
    r.dimension = affine_dimension(g.vertices);
    r.diameter = diameter(g, jobs, deadline);
    r.satisfied = static_cast<long>(r.diameter) <= static_cast<long>(r.facets) - r.dimension;
    return r;
}

}  // namespace hirschlab
