#include <catch_amalgamated.hpp>

#include <set>

#include "hirschlab/embedded.hpp"
#include "hirschlab/polycomp.hpp"
#include "oracles.hpp"

using namespace hirschlab;

namespace {

HPolyhedron unit_cube(std::size_t d)
{
    HPolyhedron p(d);
    for (std::size_t k = 0; k < d; ++k) {
        p.add(Inequality(0, unit_vector(d, k)));
        p.add(Inequality(1, unit_vector(d, k, -1)));
    }
    return p;
}

HPolyhedron standard_simplex(std::size_t d)
{
    HPolyhedron p(d);
    for (std::size_t k = 0; k < d; ++k)
        p.add(Inequality(0, unit_vector(d, k)));
    p.add(Inequality(1, QVector(d, Rational(-1))));
    return p;
}

CubeSpec axis_cube(std::size_t d)
{
    CubeSpec c{d, {}};
    for (std::size_t k = 0; k < d; ++k)
        c.slabs.push_back(Slab{unit_vector(d, k), 0, 1});
    return c;
}

std::set<std::pair<std::size_t, std::size_t>> edge_set(const PolytopeGraph& g)
{
    std::set<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t u = 0; u < g.adjacency.size(); ++u)
        for (std::size_t v : g.adjacency[u])
            out.emplace(std::min(u, v), std::max(u, v));
    return out;
}

}  // namespace

TEST_CASE("boundedness examples", "[bounded]")
{
    auto square = unit_cube(2);
    auto b = is_bounded(square);
    CHECK(b.bounded);
    CHECK(b.proofs.size() == 4);
    CHECK(check_boundedness(square, b));

    auto half = parse_hine("dim 1\n0 1\n");
    auto u = is_bounded(half);
    CHECK_FALSE(u.bounded);
    REQUIRE(u.ray);
    CHECK(*u.ray == QVector{1});
    CHECK(check_boundedness(half, u));

    auto tampered = b;
    tampered.proofs[0].multipliers[0] += Rational(1);
    CHECK_FALSE(check_boundedness(square, tampered));
    tampered = b;
    tampered.proofs.pop_back();
    CHECK_FALSE(check_boundedness(square, tampered));
}

TEST_CASE("removals from N: I_0 keeps it bounded, I_12 does not", "[bounded][data]")
{
    HPolyhedron N = embedded_N();
    auto h0 = remove_inequality(N, std::size_t(0));
    auto b0 = is_bounded(h0);
    CHECK(b0.bounded);
    CHECK(check_boundedness(h0, b0));

    auto h12 = remove_inequality(N, std::size_t(12));
    auto b12 = is_bounded(h12);
    CHECK_FALSE(b12.bounded);
    CHECK(check_boundedness(h12, b12));
    // The ray must escape through the removed constraint.
    CHECK(dot(N[12].normal, *b12.ray).sign() < 0);
}

TEST_CASE("equality examples", "[equal]")
{
    auto a = parse_hine("dim 1\n0 1\n1 -1\n");
    auto r = polyhedra_equal(a, a);
    CHECK(r.equal);
    for (std::size_t i = 0; i < r.p_from_q.size(); ++i) {
        const auto& f = std::get<FarkasImplication>(r.p_from_q[i]);
        CHECK(f.multipliers == unit_vector(2, i));
        CHECK(f.slack.is_zero());
    }

    auto b = parse_hine("dim 1\n0 2\n3 -3\n5 -1\n");
    auto ab = polyhedra_equal(a, b);
    CHECK(ab.equal);
    for (std::size_t i = 0; i < a.size(); ++i)
        CHECK(check_implication(b, a[i], ab.p_from_q[i]));
    for (std::size_t i = 0; i < b.size(); ++i)
        CHECK(check_implication(a, b[i], ab.q_from_p[i]));

    auto c = parse_hine("dim 1\n0 1\n2 -1\n");
    auto ac = polyhedra_equal(a, c);
    CHECK_FALSE(ac.equal);
    REQUIRE(ac.witness);
    CHECK(c.contains(*ac.witness));
    CHECK_FALSE(a.contains(*ac.witness));
}

TEST_CASE("N equals H_0 intersected with the dataset 0 cube", "[equal][data]")
{
    HPolyhedron N = embedded_N();
    auto hc = intersect(remove_inequality(N, std::size_t(0)), embedded_dataset(0).cube.as_polyhedron());
    auto r = polyhedra_equal(N, hc);
    CHECK(r.equal);
    CHECK(r.p_from_q.size() == 40);
    CHECK(r.q_from_p.size() == 79);
    for (std::size_t i = 0; i < N.size(); ++i)
        CHECK(check_implication(hc, N[i], r.p_from_q[i]));
    for (std::size_t i = 0; i < hc.size(); ++i)
        CHECK(check_implication(N, hc[i], r.q_from_p[i]));
}

TEST_CASE("cube verdicts", "[cube]")
{
    auto v = is_combinatorial_cube(axis_cube(3));
    CHECK(v.is_cube);
    CHECK(v.rank == 3);

    CubeSpec parallel{2, {Slab{{1, 0}, 0, 1}, Slab{{2, 0}, 0, 1}}};
    auto pv = is_combinatorial_cube(parallel);
    CHECK_FALSE(pv.is_cube);
    CHECK(pv.rank == 1);

    CubeSpec flat = axis_cube(2);
    flat.slabs[1].lo = 1;
    auto fv = is_combinatorial_cube(flat);
    CHECK_FALSE(fv.is_cube);
    REQUIRE(fv.reasons.size() == 1);
    CHECK(fv.reasons[0] == "slab 1 has lo >= hi");

    CubeSpec short_cube = axis_cube(3);
    short_cube.slabs.pop_back();
    CHECK_FALSE(is_combinatorial_cube(short_cube).is_cube);

    for (std::size_t j : published_indices()) {
        CAPTURE(j);
        CHECK(is_combinatorial_cube(embedded_dataset(j).cube).is_cube);
    }
}

TEST_CASE("vertex enumeration on cubes and simplices", "[vertices]")
{
    auto cube = enumerate_vertices(unit_cube(3));
    REQUIRE(cube.size() == 8);
    for (const auto& v : cube)
        CHECK(v.active.size() == 3);
    CHECK(cube.front().point == QVector{0, 0, 0});
    CHECK(cube.back().point == QVector{1, 1, 1});

    auto tri = enumerate_vertices(standard_simplex(2));
    REQUIRE(tri.size() == 3);
    CHECK(tri[0].point == QVector{0, 0});
    CHECK(tri[1].point == QVector{0, 1});
    CHECK(tri[2].point == QVector{1, 0});

    CHECK(enumerate_vertices(parse_hine("dim 1\n-1 1\n0 -1\n")).empty());
    CHECK_THROWS_AS(enumerate_vertices(parse_hine("dim 1\n0 1\n")), DataError);
    CHECK_THROWS_AS(enumerate_vertices(parse_hine("dim 2\n0 1 0\n1 -1 0\n")), DataError);
}

TEST_CASE("enumeration matches the brute-force subset oracle on 500 random polytopes", "[vertices][oracle]")
{
    oracle::Generator gen(31337);
    std::size_t total = 0, degenerate = 0;
    for (int iter = 0; iter < 500; ++iter) {
        std::size_t d = gen.uniform(1, 5);
        HPolyhedron p = gen.bounded_polytope(d, 12);
        CAPTURE(iter, serialize_hine(p));
        auto got = enumerate_vertices(p);
        auto want = oracle::vertices(p);
        REQUIRE(got.size() == want.size());
        for (std::size_t i = 0; i < got.size(); ++i) {
            CHECK(got[i].point == want[i].point);
            CHECK(got[i].active == want[i].tight);
            degenerate += got[i].active.size() > d;
        }
        total += got.size();
    }
    CHECK(total > 1000);
    CHECK(degenerate > 50);
}

TEST_CASE("graph fixtures: cubes and simplices", "[graph]")
{
    for (std::size_t d = 1; d <= 6; ++d) {
        CAPTURE(d);
        auto p = unit_cube(d);
        auto g = build_graph(p, enumerate_vertices(p));
        CHECK(g.vertices.size() == (std::size_t(1) << d));
        CHECK(g.num_edges() == d * (std::size_t(1) << (d - 1)));
        for (const auto& a : g.adjacency)
            CHECK(a.size() == d);
        CHECK(diameter(g) == d);
        CHECK(diameter(g, 3) == d);
        auto h = hirsch_satisfied(p, g);
        CHECK(h.satisfied);
        CHECK(h.facets == 2 * d);
        CHECK(h.dimension == static_cast<long>(d));

        auto s = standard_simplex(d);
        auto gs = build_graph(s, enumerate_vertices(s));
        CHECK(gs.vertices.size() == d + 1);
        CHECK(gs.num_edges() == d * (d + 1) / 2);
        CHECK(diameter(gs) == 1);
    }
}

TEST_CASE("3-cube distances and Hirsch bound", "[graph]")
{
    auto p = unit_cube(3);
    auto g = build_graph(p, enumerate_vertices(p));
    auto o = *g.index_of({0, 0, 0});
    auto far = *g.index_of({1, 1, 1});
    CHECK(distance(g, o, far) == 3u);
    CHECK_FALSE(distance(g, o, far, 2).has_value());
    CHECK(distance(g, o, o) == 0u);
    auto h = hirsch_satisfied(p, g);
    CHECK(h.satisfied);
    CHECK(h.diameter == 3);
    CHECK(h.redundant.empty());
}

TEST_CASE("graph adjacency matches the LP face oracle", "[graph][oracle]")
{
    oracle::Generator gen(4242);
    std::size_t edges = 0;
    for (int iter = 0; iter < 60; ++iter) {
        std::size_t d = gen.uniform(2, 4);
        HPolyhedron p = gen.bounded_polytope(d, 10);
        auto g = build_graph(p, enumerate_vertices(p));
        CAPTURE(iter, serialize_hine(p));
        auto got = edge_set(g);
        for (std::size_t u = 0; u < g.vertices.size(); ++u)
            for (std::size_t v = u + 1; v < g.vertices.size(); ++v)
                CHECK(got.count({u, v}) == oracle::adjacent(p, g.vertices[u].point, g.vertices[v].point));
        edges += got.size();
    }
    CHECK(edges > 100);
}

TEST_CASE("graph invariants under row order and positive scaling", "[graph][property]")
{
    oracle::Generator gen(99);
    for (int iter = 0; iter < 60; ++iter) {
        std::size_t d = gen.uniform(2, 4);
        HPolyhedron p = gen.bounded_polytope(d, 11);
        auto vs = enumerate_vertices(p);
        if (vs.empty())
            continue;
        auto g = build_graph(p, vs);

        std::vector<Inequality> rows = p.inequalities();
        std::reverse(rows.begin(), rows.end());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            Rational s = reduce(static_cast<long>(i) + 2, 3);
            rows[i] = Inequality(rows[i].offset * s, scaled(rows[i].normal, s));
        }
        HPolyhedron q(d, rows);
        auto g2 = build_graph(q, enumerate_vertices(q));
        REQUIRE(g2.vertices.size() == g.vertices.size());
        for (std::size_t i = 0; i < vs.size(); ++i)
            CHECK(g2.vertices[i].point == g.vertices[i].point);
        CHECK(edge_set(g2) == edge_set(g));
        if (vs.size() > 1 && affine_dimension(vs) == static_cast<long>(d))
            CHECK(diameter(g2) == diameter(g));
    }
}

TEST_CASE("apexes of N", "[apex][data]")
{
    HPolyhedron N = embedded_N();
    auto [u, w] = find_apexes(N);
    QVector eu(20), ew(20);
    eu[0] = reduce(-1, 100);
    ew[0] = reduce(1, 100);
    CHECK(u == eu);
    CHECK(w == ew);
    CHECK(N.contains(u));
    CHECK(N.contains(w));
    std::vector<std::size_t> first(20), second(20);
    for (std::size_t i = 0; i < 20; ++i) {
        first[i] = i;
        second[i] = 20 + i;
    }
    CHECK(N.tight_at(u) == first);
    CHECK(N.tight_at(w) == second);
}

TEST_CASE("corrupted N has no apex pair", "[apex][data]")
{
    HPolyhedron N = embedded_N();
    std::vector<Inequality> rows = N.inequalities();
    rows[20].normal[0] = -rows[20].normal[0];
    CHECK_THROWS_AS(find_apexes(HPolyhedron(20, rows)), DataError);

    rows = N.inequalities();
    rows[5].offset = -rows[5].offset;
    CHECK_THROWS_AS(find_apexes(HPolyhedron(20, rows)), DataError);
}

TEST_CASE("budget exhaustion is reported, not hidden", "[deadline]")
{
    HPolyhedron N = embedded_N();
    Deadline expired(std::chrono::duration<double>(0));
    CHECK_THROWS_AS(enumerate_vertices(N, expired), BudgetExhausted);
}
