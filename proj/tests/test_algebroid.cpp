#include <catch2/catch_amalgamated.hpp>

#include <nashblow/presets.hpp>

#include <algorithm>

#include "support.hpp"

using namespace nbtest;
namespace ps = nashblow::presets;

namespace {

const VarList xyz{"x", "y", "z"};
const VarList xy{"x", "y"};

VectorField vf(std::initializer_list<const char*> comps, const VarList& vars) {
    std::vector<Poly> c;
    for (const char* s : comps) c.push_back(P(s, vars));
    return VectorField(c);
}

Section sec(std::initializer_list<const char*> comps, const VarList& vars) {
    std::vector<Poly> c;
    for (const char* s : comps) c.push_back(P(s, vars));
    return Section(c);
}

QVector qv(std::initializer_list<long> xs) {
    QVector v;
    for (long x : xs) v.push_back(Rational(x));
    return v;
}

Section random_section(Rng& rng, std::size_t n, std::size_t d) {
    Section s(n, d);
    for (std::size_t i = 0; i < n; ++i) s[i] = random_poly(rng, d, 2, 3);
    return s;
}

std::vector<AlmostLieAlgebroid> lie_fixtures() {
    return {ps::gl_action(2),
            ps::gl_action(3),
            ps::sl2_action(),
            ps::so3_action(),
            ps::su2_adjoint(),
            cotangent_algebroid(ps::so3_bivector()),
            cotangent_algebroid(ps::duval_bivector(2)),
            cotangent_algebroid(ps::duval_bivector(3))};
}

/// Zero anchor over a one-dimensional base with the sl_2 bracket [h,e]=2e, [h,f]=-2f, [e,f]=h.
AlmostLieAlgebroid sl2_bundle_of_algebras() {
    AnchoredBundle b({"t"}, PolyMatrix(1, 3, Poly(1)));
    return AlmostLieAlgebroid(b, {{{0, 1}, Rational(2) * b.basis_section(1)},
                                  {{0, 2}, Rational(-2) * b.basis_section(2)},
                                  {{1, 2}, b.basis_section(0)}});
}

}  // namespace

TEST_CASE("vector field bracket examples", "[algebroid]") {
    CHECK(vf_bracket(vf({"1"}, {"x"}), vf({"x"}, {"x"})) == vf({"1"}, {"x"}));
    auto x = vf({"0", "z", "-y"}, xyz), y = vf({"z", "0", "-x"}, xyz);
    CHECK(vf_bracket(x, y) == vf({"-y", "x", "0"}, xyz));
    CHECK(vf_bracket(x, x).is_zero());
    CHECK_THROWS_AS(vf_bracket(x, vf({"1"}, {"x"})), ArityMismatch);
}

TEST_CASE("section bracket on basis sections and sl2", "[algebroid]") {
    auto alg = ps::sl2_action();
    const auto& b = alg.bundle();
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            CHECK(section_bracket(alg, b.basis_section(i), b.basis_section(j)) == alg.structure(i, j));
    CHECK(section_bracket(alg, b.basis_section(0), b.basis_section(1)) == Rational(2) * b.basis_section(1));
    CHECK_THROWS_AS(section_bracket(alg, Section(2, 2), b.basis_section(0)), ArityMismatch);
}

TEST_CASE("Leibniz identity for random sections", "[algebroid][property]") {
    Rng rng(3);
    for (const auto& alg : lie_fixtures()) {
        std::size_t n = alg.rank(), d = alg.dim();
        for (int trial = 0; trial < 5; ++trial) {
            auto a = random_section(rng, n, d), b = random_section(rng, n, d);
            Poly f = random_poly(rng, d, 2, 3);
            auto lhs = section_bracket(alg, a, f * b) - f * section_bracket(alg, a, b);
            auto rhs = apply(alg.bundle().anchor_of(a), f) * b;
            CHECK(lhs == rhs);
        }
    }
}

TEST_CASE("anchor morphism on fixtures and random sections", "[algebroid][property]") {
    Rng rng(5);
    for (const auto& alg : lie_fixtures()) {
        for (const auto& d : validate_anchor_morphism(alg)) CHECK(d.defect.is_zero());
        const auto& b = alg.bundle();
        for (int trial = 0; trial < 4; ++trial) {
            auto u = random_section(rng, alg.rank(), alg.dim()), v = random_section(rng, alg.rank(), alg.dim());
            CHECK((b.anchor_of(section_bracket(alg, u, v)) - vf_bracket(b.anchor_of(u), b.anchor_of(v))).is_zero());
        }
    }
}

TEST_CASE("corrupted bracket is caught by the anchor check", "[algebroid][negative]") {
    auto good = ps::gl_action(2);
    auto br = good.brackets();
    br[{0, 1}] = br[{0, 1}] + good.bundle().basis_section(3);
    AlmostLieAlgebroid bad(good.bundle(), br);
    auto defects = validate_anchor_morphism(bad);
    auto it = std::find_if(defects.begin(), defects.end(), [](const AnchorDefect& d) { return !d.defect.is_zero(); });
    REQUIRE(it != defects.end());
    CHECK(it->i == 0);
    CHECK(it->j == 1);
    CHECK(std::count_if(defects.begin(), defects.end(), [](const AnchorDefect& d) { return !d.defect.is_zero(); }) == 1);
}

TEST_CASE("jacobiator", "[algebroid]") {
    for (const auto& alg : lie_fixtures()) CHECK(jacobi_holds(alg));
    AnchoredBundle b({"t"}, PolyMatrix(1, 3, Poly(1)));
    AlmostLieAlgebroid broken(b, {{{0, 1}, b.basis_section(1)}, {{0, 2}, b.basis_section(0)}});
    CHECK(jacobiator(broken, 0, 1, 2) == -b.basis_section(1));
    CHECK_THROWS_AS(jacobiator(broken, 0, 1, 3), IndexError);
}

TEST_CASE("generic anchor rank", "[algebroid]") {
    CHECK(anchor_rank_generic(pi_sharp(ps::so3_bivector())) == 2);
    CHECK(anchor_rank_generic(ps::gl_action(2).bundle()) == 2);
    CHECK(anchor_rank_generic(AnchoredBundle(xy, PolyMatrix(2, 3, Poly(2)))) == 0);
    auto e = rref_rank(to_ratfunc(pi_sharp(ps::so3_bivector()).anchor()));
    CHECK(e.rank() == 2);
}

TEST_CASE("kernel at a point", "[algebroid]") {
    auto duval = pi_sharp(ps::duval_bivector(2));
    CHECK(kernel_at(duval, qv({1, 2, 1})) == Subspace::span(3, {qv({2, 1, -1})}));
    auto gl2 = ps::gl_action(2).bundle();
    CHECK(kernel_at(gl2, qv({1, 0})) == Subspace::span(4, {qv({0, 0, 1, 0}), qv({0, 0, 0, 1})}));
    AnchoredBundle inv(xy, pmatrix({{"1", "x"}, {"0", "1"}}, xy));
    CHECK(kernel_at(inv, qv({3, 4})).dim() == 0);
    CHECK_THROWS_AS(kernel_at(gl2, qv({1})), ArityMismatch);
}

TEST_CASE("singular locus minors", "[algebroid]") {
    const VarList x12{"x1", "x2"};
    auto gl2 = singular_locus(ps::gl_action(2).bundle());
    std::vector<Poly> expected{P("x1^2", x12), P("0", x12), P("x1*x2", x12), P("-x1*x2", x12), P("0", x12), P("x2^2", x12)};
    CHECK(gl2 == expected);

    auto sl2 = singular_locus(ps::sl2_action().bundle());
    REQUIRE(sl2.size() == 3);
    for (const char* want : {"x^2", "x*y", "y^2"}) {
        Poly w = P(want, xy);
        CHECK(std::any_of(sl2.begin(), sl2.end(), [&](const Poly& p) { return p == w || p == -w; }));
    }

    AnchoredBundle full(xy, pmatrix({{"1", "0"}, {"0", "2"}}, xy));
    auto m = singular_locus(full);
    CHECK(std::any_of(m.begin(), m.end(), [](const Poly& p) { return p.is_constant() && !p.is_zero(); }));
}

TEST_CASE("kernel dimension is upper semicontinuous", "[algebroid][property]") {
    Rng rng(17);
    std::vector<AnchoredBundle> bundles{ps::gl_action(2).bundle(), ps::sl2_action().bundle(),
                                        pi_sharp(ps::so3_bivector()), pi_sharp(ps::duval_bivector(3)),
                                        ps::order_k_foliation(2, 2, ps::OrderKBracket::none).bundle()};
    for (const auto& b : bundles) {
        std::size_t r = anchor_rank_generic(b);
        auto mins = singular_locus(b);
        std::vector<Point> pts{Point(b.dim(), Rational(0))};
        for (int i = 0; i < 10; ++i) pts.push_back(random_point(rng, b.dim()));
        Point axis(b.dim(), Rational(0));
        axis[0] = 1;
        pts.push_back(axis);
        for (const auto& x : pts) {
            std::size_t k = kernel_at(b, x).dim();
            bool regular = std::any_of(mins.begin(), mins.end(), [&](const Poly& p) { return !p.eval(x).is_zero(); });
            CHECK(k >= b.rank() - r);
            CHECK((k == b.rank() - r) == regular);
            CHECK(is_regular(b, x) == regular);
        }
    }
}

TEST_CASE("strong kernel", "[algebroid]") {
    auto gl2 = ps::gl_action(2).bundle();
    const VarList x12{"x1", "x2"};
    CHECK(strong_kernel_at(gl2, {}, qv({0, 0})).dim() == 0);
    std::vector<Section> gens{sec({"x2", "0", "-x1", "0"}, x12), sec({"0", "x2", "0", "-x1"}, x12)};
    CHECK(strong_kernel_at(gl2, gens, qv({0, 0})).dim() == 0);
    auto s = strong_kernel_at(gl2, gens, qv({1, 0}));
    CHECK(kernel_at(gl2, qv({1, 0})).contains(s));
    CHECK(s.dim() == 2);
    std::vector<Section> bad{gens[0], sec({"1", "0", "0", "0"}, x12)};
    try {
        strong_kernel_at(gl2, bad, qv({1, 0}));
        FAIL("expected NotInKernelModule");
    } catch (const NotInKernelModule& e) {
        CHECK(e.index() == 1);
    }
}

TEST_CASE("pointwise kernel bracket", "[algebroid]") {
    auto gl2 = ps::gl_action(2);
    auto z = qv({0, 0});
    CHECK(pointwise_kernel_bracket(gl2, z, qv({0, 1, 0, 0}), qv({0, 0, 1, 0})) == qv({1, 0, 0, -1}));
    CHECK(pointwise_kernel_bracket(gl2, z, qv({1, 2, 3, 4}), qv({1, 2, 3, 4})) == qv({0, 0, 0, 0}));
    CHECK_THROWS_AS(pointwise_kernel_bracket(gl2, qv({1, 0}), qv({1, 0, 0, 0}), qv({0, 0, 1, 0})), NotInKernel);

    // with [dx_i, dx_j] = d(pi^{ji}) the bracket of dx, dy at 0 is +dz
    auto cot = cotangent_algebroid(ps::so3_bivector());
    CHECK(pointwise_kernel_bracket(cot, qv({0, 0, 0}), qv({1, 0, 0}), qv({0, 1, 0})) == qv({0, 0, 1}));
}

TEST_CASE("pointwise bracket stays in the kernel", "[algebroid][property]") {
    Rng rng(23);
    for (const auto& alg : lie_fixtures()) {
        for (int trial = 0; trial < 5; ++trial) {
            Point x = trial == 0 ? Point(alg.dim(), Rational(0)) : random_point(rng, alg.dim());
            auto k = kernel_at(alg.bundle(), x).vectors();
            for (const auto& u : k)
                for (const auto& v : k) {
                    auto w = pointwise_kernel_bracket(alg, x, u, v);
                    for (const auto& c : eval(alg.bundle().anchor(), x) * w) CHECK(c.is_zero());
                }
        }
    }
}

TEST_CASE("isotropy algebras", "[algebroid]") {
    auto gl2 = ps::gl_action(2);
    auto iso = isotropy_algebra_at(gl2, {}, qv({0, 0}));
    REQUIRE(iso.dim() == 4);
    CHECK(iso.jacobi_checked);
    // quotient basis is E11, E12, E21, E22; constants are the matrix commutators
    for (std::size_t a = 0; a < 4; ++a)
        for (std::size_t b = 0; b < 4; ++b) {
            QVector want(4, Rational(0));
            for (std::size_t k = 0; k < 4; ++k) want[k] = gl2.structure(a, b)[k].constant_value();
            CHECK(iso.constants[a][b] == want);
        }
    const VarList x12{"x1", "x2"};
    std::vector<Section> gens{sec({"x2", "0", "-x1", "0"}, x12), sec({"0", "x2", "0", "-x1"}, x12)};
    CHECK(isotropy_algebra_at(gl2, gens, qv({1, 3})).dim() == 0);
    CHECK(isotropy_algebra_at(gl2, gens, qv({0, 0})).dim() == 4);

    auto so3 = isotropy_algebra_at(cotangent_algebroid(ps::so3_bivector()), {}, qv({0, 0, 0}));
    CHECK(so3.dim() == 3);
    for (std::size_t a = 0; a < 3; ++a)
        for (std::size_t b = 0; b < 3; ++b) CHECK(so3.constants[a][b] == [&] {
            auto v = so3.constants[b][a];
            for (auto& c : v) c = -c;
            return v;
        }());

    auto alg = sl2_bundle_of_algebras();
    CHECK_THROWS_AS(isotropy_algebra_at(alg, {alg.bundle().basis_section(1)}, qv({0})), WellDefinednessFailure);
    const auto& ab = alg.bundle();
    CHECK(isotropy_algebra_at(alg, {}, qv({0})).dim() == 3);
    CHECK(isotropy_algebra_at(alg, {ab.basis_section(0), ab.basis_section(1), ab.basis_section(2)}, qv({0})).dim() == 0);
}

TEST_CASE("linear lifts", "[algebroid]") {
    auto gl2 = ps::gl_action(2);
    const auto& b = gl2.bundle();
    for (std::size_t i = 0; i < 4; ++i) {
        auto lift = linear_lift(gl2, b.basis_section(i));
        CHECK(lift.base == b.column(i));
        for (std::size_t k = 0; k < 4; ++k)
            for (std::size_t j = 0; j < 4; ++j) CHECK(lift.fiber(k, j) == -gl2.structure(i, j)[k]);
    }
    auto zero = linear_lift(gl2, b.zero_section());
    CHECK(zero.base.is_zero());
    CHECK(zero.fiber.is_zero());

    // a = f e_i with rho(e_i) = 0: bundle of Lie algebras over the line
    auto alg = sl2_bundle_of_algebras();
    Poly t = Poly::variable(1, 0);
    auto lift = linear_lift(alg, t * alg.bundle().basis_section(1));
    CHECK(lift.base.is_zero());
    CHECK(rank(lift.fiber) == 2);
}

TEST_CASE("linear lifts respect brackets", "[algebroid][property]") {
    Rng rng(29);
    for (const auto& alg : lie_fixtures()) {
        for (int trial = 0; trial < 3; ++trial) {
            auto a = random_section(rng, alg.rank(), alg.dim()), b = random_section(rng, alg.rank(), alg.dim());
            CHECK(linear_lift_defect(alg, a, b).is_zero());
        }
    }
}

TEST_CASE("frame change preserves the axioms", "[algebroid][property]") {
    Rng rng(31);
    for (const auto& alg : {ps::gl_action(2), ps::sl2_action(), cotangent_algebroid(ps::so3_bivector())}) {
        std::size_t n = alg.rank();
        QMatrix g(n, n, Rational(0));
        do {
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) g(i, j) = rng.rational(3, 2);
        } while (rank(g) < n);
        auto moved = change_frame(alg, g);
        CHECK(is_lie_algebroid(moved));
        Point x = random_point(rng, alg.dim());
        CHECK(image(g, kernel_at(moved.bundle(), x)) == kernel_at(alg.bundle(), x));
    }
}

TEST_CASE("pi sharp", "[poisson]") {
    auto b = pi_sharp(ps::so3_bivector());
    CHECK(b.column(0) == vf({"0", "z", "-y"}, xyz));
    CHECK(b.column(1) == vf({"-z", "0", "x"}, xyz));
    CHECK(b.column(2) == vf({"y", "-x", "0"}, xyz));
    CHECK(pi_sharp(Bivector(xyz, PolyMatrix(3, 3, Poly(3)))).anchor().is_zero());
    CHECK_THROWS_AS(Bivector(xy, pmatrix({{"0", "x"}, {"x", "0"}}, xy)), NotSkew);

    const VarList v{"x", "y", "z"};
    auto duval = pi_sharp(ps::duval_bivector(2));
    Poly phi = ps::duval_phi(2);
    CHECK(phi == P("x*y - 1/3*z^3", v));
    CHECK(duval.anchor()(0, 1) == phi.diff(2));
    CHECK(duval.anchor()(0, 2) == -phi.diff(1));
    CHECK(duval.anchor()(1, 2) == phi.diff(0));
}

TEST_CASE("cotangent algebroids", "[poisson]") {
    auto so3 = cotangent_algebroid(ps::so3_bivector());
    CHECK(so3.structure(0, 1) == sec({"0", "0", "1"}, xyz));
    CHECK(so3.structure(1, 2) == sec({"1", "0", "0"}, xyz));
    CHECK(so3.structure(0, 2) == sec({"0", "-1", "0"}, xyz));

    auto flat = cotangent_algebroid(Bivector::from_entries(xy, {{{0, 1}, P("3", xy)}}));
    CHECK(flat.structure(0, 1).is_zero());

    auto duval = cotangent_algebroid(ps::duval_bivector(2));
    CHECK(duval.structure(0, 1) == sec({"0", "0", "2*z"}, xyz));
    CHECK(duval.structure(0, 2) == sec({"1", "0", "0"}, xyz));
    CHECK(duval.structure(1, 2) == sec({"0", "-1", "0"}, xyz));
}

TEST_CASE("jacobiator vanishes exactly for Poisson bivectors", "[poisson][property]") {
    std::vector<Bivector> cases{ps::so3_bivector(), ps::duval_bivector(2), ps::duval_bivector(4),
                                Bivector::from_entries(xyz, {{{0, 1}, P("x", xyz)}, {{0, 2}, P("y", xyz)}, {{1, 2}, P("y", xyz)}}),
                                Bivector::from_entries(xyz, {{{0, 1}, P("z^2", xyz)}, {{1, 2}, P("x*y", xyz)}})};
    for (const auto& pi : cases) {
        auto alg = cotangent_algebroid(pi);
        CHECK(jacobi_holds(alg) == is_poisson(pi));
        CHECK(anchor_morphism_holds(alg) == is_poisson(pi));
    }
}

TEST_CASE("Hamiltonian vector fields", "[poisson]") {
    auto so3 = ps::so3_bivector();
    CHECK(hamiltonian_vf(so3, P("x^2 + y^2 + z^2", xyz)).is_zero());
    CHECK(hamiltonian_vf(so3, P("x", xyz)) == pi_sharp(so3).column(0));
    for (unsigned n : {2u, 3u, 4u}) CHECK(hamiltonian_vf(ps::duval_bivector(n), ps::duval_phi(n)).is_zero());
    CHECK_THROWS_AS(hamiltonian_vf(so3, P("x", xy)), ArityMismatch);

    Rng rng(37);
    for (const auto& pi : {so3, ps::duval_bivector(2), ps::duval_bivector(3)}) {
        for (int trial = 0; trial < 10; ++trial) {
            Poly h = random_poly(rng, 3, 3, 3), g = random_poly(rng, 3, 3, 3);
            CHECK(vf_bracket(hamiltonian_vf(pi, h), hamiltonian_vf(pi, g)) ==
                  hamiltonian_vf(pi, poisson_bracket(pi, g, h)));
        }
    }
}

TEST_CASE("annihilator duality", "[poisson][property]") {
    CHECK(annihilator_duality_check(ps::so3_bivector(), qv({1, 1, 1})).holds);
    Rng rng(41);
    std::vector<Bivector> cases{ps::so3_bivector(), ps::duval_bivector(2), ps::duval_bivector(3), ps::duval_bivector(4)};
    for (const auto& pi : cases)
        for (int i = 0; i < 20; ++i) {
            auto c = annihilator_duality_check(pi, random_point(rng, 3));
            CHECK(c.holds);
            CHECK(c.kernel == c.annihilator);
        }
    CHECK(annihilator_duality_check(ps::so3_bivector(), qv({0, 0, 0})).holds);
    CHECK_FALSE(annihilator_duality_check(qmatrix({{1, 1}, {0, 0}})).holds);
}

TEST_CASE("Schouten self bracket", "[poisson]") {
    for (const auto& c : schouten_self_bracket(ps::so3_bivector())) CHECK(c.is_zero());
    for (unsigned n : {2u, 3u, 4u}) CHECK(is_poisson(ps::duval_bivector(n)));
    auto bad = Bivector::from_entries(xyz, {{{0, 1}, P("x", xyz)}, {{0, 2}, P("y", xyz)}, {{1, 2}, P("y", xyz)}});
    auto comps = schouten_self_bracket(bad);
    REQUIRE(comps.size() == 1);
    CHECK_FALSE(comps[0].is_zero());
    Bivector d4 = Bivector::from_entries(ps::numbered_vars("x", 4), {});
    CHECK(schouten_self_bracket(d4).size() == 4);
}

TEST_CASE("preset structure", "[presets]") {
    auto c = ps::su2_structure_constants();
    // [u_a, u_b] = eps_abc u_c
    CHECK(c[0][1][2] == Rational(1));
    CHECK(c[1][2][0] == Rational(1));
    CHECK(c[2][0][1] == Rational(1));
    CHECK(c[1][0][2] == Rational(-1));
    CHECK(c[0][0][0].is_zero());
    CHECK(c[0][1][0].is_zero());

    CHECK(ps::monomials_of_degree(2, 2) == std::vector<Exponents>{{2, 0}, {1, 1}, {0, 2}});
    CHECK(ps::monomials_of_degree(3, 1).size() == 3);

    auto so3 = ps::so3_action();
    CHECK(section_bracket(so3, so3.bundle().basis_section(0), so3.bundle().basis_section(1)) ==
          -so3.bundle().basis_section(2));
    CHECK(kernel_at(so3.bundle(), qv({1, 2, 3})) == Subspace::span(3, {qv({1, -2, 3})}));
}

TEST_CASE("order-k foliations", "[presets]") {
    for (std::size_t d : {1u, 2u, 3u})
        CHECK(anchor_morphism_holds(ps::order_k_foliation(d, 1, ps::OrderKBracket::literal)));
    for (std::size_t d : {2u, 3u})
        for (unsigned k : {2u, 3u}) {
            CHECK(anchor_morphism_holds(ps::order_k_foliation(d, k, ps::OrderKBracket::weighted)));
            CHECK_FALSE(anchor_morphism_holds(ps::order_k_foliation(d, k, ps::OrderKBracket::literal)));
        }
    auto f2 = ps::order_k_foliation(2, 2, ps::OrderKBracket::none);
    CHECK(f2.rank() == 6);
    CHECK(f2.brackets().empty());
    CHECK(anchor_rank_generic(f2.bundle()) == 2);
}
