#include <catch2/catch_amalgamated.hpp>

#include <nashblow/grassmann.hpp>

#include "support.hpp"

using namespace nbtest;

namespace {

QVector qv(std::initializer_list<long> xs) {
    QVector v;
    for (long x : xs) v.push_back(Rational(x));
    return v;
}

std::vector<Integer> iv(std::initializer_list<long> xs) {
    std::vector<Integer> v;
    for (long x : xs) v.push_back(Integer(x));
    return v;
}

}  // namespace

TEST_CASE("subspaces are canonical", "[grassmann]") {
    auto a = Subspace::span(3, {qv({1, 2, 3}), qv({0, 1, 1})});
    auto b = Subspace::span(3, {qv({1, 3, 4}), qv({2, 4, 6}), qv({1, 1, 2})});
    CHECK(a == b);
    CHECK(a.dim() == 2);
    CHECK(a.contains(qv({2, 5, 7})));
    CHECK_FALSE(a.contains(qv({0, 0, 1})));
    CHECK(Subspace::whole(3).contains(a));
    CHECK(Subspace(3).dim() == 0);
}

TEST_CASE("pluecker examples", "[grassmann]") {
    CHECK(pluecker(Subspace::whole(2)).coords == iv({1}));
    CHECK(pluecker(Subspace::span(2, {qv({1, 2})})).coords == iv({1, 2}));
    CHECK(pluecker(Subspace::span(3, {qv({1, 0, -1})})).coords == iv({1, 0, -1}));
    CHECK(pluecker(Subspace::span(3, {qv({-2, 0, 2})})).coords == iv({1, 0, -1}));
    CHECK_THROWS_AS(pluecker(Subspace(3)), ZeroDim);
}

TEST_CASE("unpluecker examples", "[grassmann]") {
    PlueckerVector p{3, 1, iv({1, 0, -1})};
    CHECK(unpluecker(p, 3, 1) == Subspace::span(3, {qv({1, 0, -1})}));
    PlueckerVector bad{4, 2, iv({1, 0, 0, 0, 0, 1})};
    CHECK_THROWS_AS(unpluecker(bad, 4, 2), NotDecomposable);
    CHECK_THROWS_AS(unpluecker(PlueckerVector{3, 1, iv({0, 0, 0})}, 3, 1), NotDecomposable);
    CHECK_THROWS_AS(unpluecker(p, 4, 2), SizeError);
}

TEST_CASE("pluecker round trip on random subspaces", "[grassmann][property]") {
    Rng rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        auto n = static_cast<std::size_t>(rng.uniform(1, 5));
        auto k = static_cast<std::size_t>(rng.uniform(1, static_cast<long>(n)));
        std::vector<QVector> rows;
        for (std::size_t i = 0; i < k; ++i) rows.push_back(random_point(rng, n));
        auto s = Subspace::span(n, rows);
        if (s.dim() == 0) continue;
        auto p = pluecker(s);
        CHECK(unpluecker(p, n, s.dim()) == s);
        CHECK(pluecker(unpluecker(p, n, s.dim())) == p);
    }
}

TEST_CASE("image, kernel, coordinates and inverse", "[grassmann]") {
    auto m = qmatrix({{1, 2, 3}, {2, 4, 6}});
    auto k = kernel(m);
    CHECK(k.dim() == 2);
    for (const auto& v : k.vectors()) {
        for (const auto& c : m * v) CHECK(c.is_zero());
    }
    auto img = image(m, Subspace::whole(3));
    CHECK(img == Subspace::span(2, {qv({1, 2})}));

    auto c = coordinates({qv({1, 0, 1}), qv({0, 1, 1})}, qv({2, 3, 5}));
    CHECK(c == qv({2, 3}));
    CHECK_THROWS_AS(coordinates({qv({1, 0, 1})}, qv({0, 1, 0})), Error);

    auto g = qmatrix({{2, 1}, {1, 1}});
    auto gi = inverse(g);
    CHECK(g * gi == qmatrix({{1, 0}, {0, 1}}));
    CHECK_THROWS_AS(inverse(qmatrix({{1, 2}, {2, 4}})), Error);
}
