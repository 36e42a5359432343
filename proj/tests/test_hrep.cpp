#include <catch_amalgamated.hpp>

#include <random>

#include "hirschlab/embedded.hpp"
#include "hirschlab/hrep.hpp"

using namespace hirschlab;

namespace {

Rational q(const char* s) { return Rational::parse(s); }

QVector ints(std::initializer_list<long> xs)
{
    QVector v;
    for (long x : xs)
        v.emplace_back(x);
    return v;
}

}  // namespace

TEST_CASE("parse_hine reads a one-dimensional half-line", "[hine]")
{
    HPolyhedron p = parse_hine("dim 1\n1 1\n");
    REQUIRE(p.dim() == 1);
    REQUIRE(p.size() == 1);
    CHECK(p[0].offset == Rational(1));
    CHECK(p[0].normal == ints({1}));
    CHECK(p.label(0) == "I_0");
    CHECK(p.contains({-1}));
    CHECK_FALSE(p.contains({q("-3/2")}));
}

TEST_CASE("parse_hine tolerates comments and blank lines", "[hine]")
{
    HPolyhedron p = parse_hine("# header\n\ndim 2  # two\n 0 1 0\n\n1/2 -1 -1 # tail\n");
    REQUIRE(p.size() == 2);
    CHECK(p[1].offset == q("1/2"));
}

TEST_CASE("parse errors carry line numbers", "[hine]")
{
    auto line_of = [](std::string_view text) {
        try {
            parse_hine(text);
        } catch (const ParseError& e) {
            return e.line();
        }
        return std::size_t(9999);
    };
    CHECK(line_of("dim 2\n1 2\n") == 2);
    CHECK(line_of("dim 2\n1 2 3\n1 2 x\n") == 3);
    CHECK(line_of("1 2 3\n") == 1);
    CHECK(line_of("dim 2\ndim 2\n") == 2);
    CHECK(line_of("dim 2\n0 0 0\n") == 2);
    CHECK(line_of("dim 0\n") == 1);
    CHECK(line_of("dim 2\n1 2 3.5\n") == 2);
    CHECK_THROWS_AS(parse_hine(""), ParseError);
    CHECK_THROWS_AS(parse_cube("dim 1\n0 1\n"), ParseError);
}

TEST_CASE("embedded N has 40 inequalities in dimension 20", "[embedded]")
{
    HPolyhedron N = embedded_N();
    CHECK(N.dim() == 20);
    CHECK(N.size() == 40);
    CHECK(N[0].offset == Rational(1));
    CHECK(N[0].normal == ints({100, 0, 0, 21, -7, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 0, 0, 0}));
    for (std::size_t i = 0; i < 40; ++i) {
        CHECK(N.label(i) == "I_" + std::to_string(i));
        CHECK(N[i].offset == Rational(1));
        CHECK(N[i].normal[0] == Rational(i < 20 ? 100 : -100));
    }
}

TEST_CASE("every embedded file round-trips bit-exactly", "[embedded]")
{
    std::string n_text = data_file("N.hine");
    CHECK(serialize_hine(parse_hine(n_text)) == n_text);
    for (std::size_t j : published_indices()) {
        std::string text = data_file(cube_file_name(j));
        CHECK(serialize_cube(parse_cube(text)) == text);
    }
}

TEST_CASE("dataset 0 cube has the published first and third slabs", "[embedded]")
{
    Dataset ds = embedded_dataset(0);
    REQUIRE(ds.removed_index == 0);
    REQUIRE(ds.cube.dim == 20);
    REQUIRE(ds.cube.slabs.size() == 20);

    const Slab& first = ds.cube.slabs[0];
    CHECK(first.normal == unit_vector(20, 6));
    CHECK(first.lo == q("-2361185124158778945083/2361183241434822606848"));

    const Slab& third = ds.cube.slabs[2];
    CHECK(third.normal == ints({-100, 0, 0, -21, 7, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, -1, -1, 0, 0, 0}));
    CHECK(third.hi == Rational(1));
}

TEST_CASE("unpublished removal index has no dataset", "[embedded]")
{
    CHECK_THROWS_AS(embedded_dataset(12), DataError);
    CHECK_THROWS_AS(embedded_dataset(19), DataError);
    CHECK_THROWS_AS(embedded_dataset(40), DataError);
    CHECK(published_indices().size() == 25);
    CHECK(cube_file_name(7) == "cube_07.cube");
    CHECK(cube_file_name(32) == "cube_32.cube");
}

TEST_CASE("parse_cube reads a single unit interval slab", "[cube]")
{
    CubeSpec c = parse_cube("dim 1\n0 1 1\n");
    REQUIRE(c.slabs.size() == 1);
    CHECK(c.slabs[0] == Slab{ints({1}), 0, 1});
}

TEST_CASE("slab_to_inequalities examples", "[cube]")
{
    auto [lower, upper] = slab_to_inequalities(Slab{unit_vector(3, 1), 0, 1});
    CHECK(lower == Inequality(0, unit_vector(3, 1)));
    CHECK(upper == Inequality(1, unit_vector(3, 1, -1)));

    // The upper side of slab 3 in dataset 0 is the removed inequality I_0.
    auto [l3, u3] = slab_to_inequalities(embedded_dataset(0).cube.slabs[2]);
    CHECK(u3 == embedded_N()[0].canonical());
    CHECK(same_halfspace(u3, embedded_N()[0]));

    auto [a, b] = slab_to_inequalities(Slab{ints({2, 0}), q("1/2"), q("1/2")});
    CHECK(a == Inequality(-1, ints({4, 0})));
    CHECK(b == Inequality(1, ints({-4, 0})));
    CHECK(a.evaluate({q("1/4"), 5}).is_zero());
    CHECK(b.evaluate({q("1/4"), 5}).is_zero());
}

TEST_CASE("exactly one cube side equals the removed inequality in every dataset", "[cube]")
{
    HPolyhedron N = embedded_N();
    for (std::size_t j : published_indices()) {
        CAPTURE(j);
        const auto target = N[j].canonical();
        int matches = 0;
        for (const auto& s : embedded_dataset(j).cube.slabs) {
            CHECK(s.lo < s.hi);
            auto [lower, upper] = slab_to_inequalities(s);
            matches += (lower == target) + (upper == target);
        }
        CHECK(matches == 1);
    }
}

TEST_CASE("canonical form is idempotent and invariant under positive scaling", "[inequality][property]")
{
    std::mt19937 rng(5);
    std::uniform_int_distribution<long> coef(-9, 9), den(1, 8), scale(1, 30);
    for (int iter = 0; iter < 500; ++iter) {
        QVector a(4);
        for (auto& x : a)
            x = reduce(coef(rng), den(rng));
        Rational b = reduce(coef(rng), den(rng));
        if (b.is_zero() && is_zero(a))
            continue;
        Inequality ineq(b, a);
        Inequality c = ineq.canonical();
        CHECK(c.canonical() == c);
        Rational s = reduce(scale(rng), den(rng));
        CHECK(Inequality(b * s, scaled(a, s)).canonical() == c);
        // Orientation is never flipped.
        CHECK(c.offset.sign() == b.sign());
        for (std::size_t i = 0; i < a.size(); ++i)
            CHECK(c.normal[i].sign() == a[i].sign());
    }
    CHECK_THROWS_AS(Inequality(0, ints({0, 0})), DataError);
}

TEST_CASE("remove_inequality examples", "[hrep]")
{
    HPolyhedron N = embedded_N();
    HPolyhedron H = remove_inequality(N, std::size_t(0));
    CHECK(H.size() == 39);
    CHECK_FALSE(H.find("I_0"));
    CHECK(H.label(0) == "I_1");

    HPolyhedron H4 = remove_inequality(N, std::size_t(4));
    CHECK_FALSE(H4.find("I_4"));
    CHECK_THROWS_AS(remove_inequality(H4, std::size_t(4)), DataError);

    CubeSpec c = embedded_dataset(0).cube;
    HPolyhedron hc = intersect(H, c.as_polyhedron());
    CHECK(hc.size() == 79);
    CHECK(hc.label(39) == "C_0.lo");
    CHECK(hc.label(78) == "C_19.hi");
    CHECK_THROWS_AS(intersect(H, HPolyhedron(3)), DimensionError);
}
