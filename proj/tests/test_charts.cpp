#include <catch2/catch_amalgamated.hpp>

#include <nashblow/charts.hpp>
#include <nashblow/nash.hpp>
#include <nashblow/presets.hpp>

#include "support.hpp"

using namespace nbtest;
namespace ps = nashblow::presets;

namespace {

const VarList xy{"x", "y"};
const VarList xyz{"x", "y", "z"};
const VarList x12{"x1", "x2"};
const VarList y12{"y1", "y2"};

VectorField vf(std::initializer_list<const char*> comps, const VarList& vars) {
    std::vector<Poly> c;
    for (const char* s : comps) c.push_back(P(s, vars));
    return VectorField(c);
}

RatFunc rf(const char* num, const char* den, const VarList& vars) { return RatFunc(P(num, vars), P(den, vars)); }

}  // namespace

TEST_CASE("chart maps", "[charts]") {
    auto c = standard_chart(xyz, 0);
    CHECK(c.jacobian_det() == P("x^2", xyz));
    CHECK(c.apply({Rational(2), Rational(3), Rational(5)}) == QVector{Rational(2), Rational(6), Rational(10)});
    CHECK_THROWS_AS(ChartMap(xy, xy, {P("x", xy), P("2*x", xy)}), Error);
    CHECK_THROWS_AS(ChartMap(xy, xy, {P("x", xy), P("x*y", xy)}, P("y", xy)), Error);
    CHECK_NOTHROW(ChartMap(xy, xy, {P("x", xy), P("x*y", xy)}, P("x^2", xy)));
    CHECK_THROWS_AS(standard_chart(xy, 2), IndexError);
}

TEST_CASE("sl2 pullbacks on the x-chart", "[charts]") {
    auto alg = ps::sl2_action();
    auto c = standard_chart(xy, 0);
    auto h = pullback_vector_field(c, alg.bundle().column(0));
    auto e = pullback_vector_field(c, alg.bundle().column(1));
    auto f = pullback_vector_field(c, alg.bundle().column(2));
    REQUIRE(h.polynomial);
    REQUIRE(e.polynomial);
    REQUIRE(f.polynomial);
    CHECK(h.field() == vf({"x", "-2*y"}, xy));
    CHECK(e.field() == vf({"0", "1"}, xy));
    CHECK(f.field() == vf({"x*y", "-y^2"}, xy));

    auto nash = nash_anchor_on_chart(alg, c);
    CHECK(nash.bracket_morphism);
    CHECK(is_lie_algebroid(nash.algebroid));
    auto rel = debord_generators(nash);
    CHECK(rel.independent == std::vector<std::size_t>{0, 1});
    REQUIRE(rel.relations.size() == 1);
    CHECK(rel.relations[0].target == 2);
    CHECK(rel.relations[0].polynomial);
    CHECK(rel.relations[0].coefficients == std::vector<RatFunc>{RatFunc(P("y", xy)), RatFunc(P("y^2", xy))});

    auto k = tautological_frame(alg.bundle(), c);
    CHECK(k.frame.cols() == 1);
    auto ideal = check_ideal(nash, alg.bundle(), k);
    CHECK(ideal.holds());
    auto cert = check_debord_on_chart(nash, alg.bundle(), k);
    CHECK(cert.holds());
    CHECK(cert.pullback_rank == 2);
    CHECK(cert.frame_rank == 1);
}

TEST_CASE("so3 pullbacks on the x-chart", "[charts]") {
    auto alg = ps::so3_action();
    auto c = standard_chart(xyz, 0);
    auto nash = nash_anchor_on_chart(alg, c);
    CHECK(nash.pullbacks[0].field() == vf({"0", "z", "-y"}, xyz));
    CHECK(nash.pullbacks[1].field() == vf({"x*z", "-y*z", "-z^2 - 1"}, xyz));
    CHECK(nash.pullbacks[2].field() == vf({"x*y", "-y^2 - 1", "-y*z"}, xyz));
    CHECK(nash.bracket_morphism);

    auto rel = debord_generators(nash);
    CHECK(rel.independent == std::vector<std::size_t>{1, 2});
    REQUIRE(rel.relations.size() == 1);
    CHECK(rel.relations[0].target == 0);
    CHECK(rel.relations[0].coefficients == std::vector<RatFunc>{RatFunc(P("y", xyz)), RatFunc(P("-z", xyz))});

    auto k = tautological_frame(alg.bundle(), c);
    REQUIRE(k.frame.cols() == 1);
    CHECK(k.frame.col(0) == std::vector<Poly>{P("1", xyz), P("-y", xyz), P("z", xyz)});
    CHECK(check_ideal(nash, alg.bundle(), k).holds());
    auto cert = check_debord_on_chart(nash, alg.bundle(), k);
    CHECK(cert.holds());
    CHECK(cert.frame_rank + cert.pullback_rank == 3);
}

TEST_CASE("so3 bivector pullback has a pole along x", "[charts]") {
    auto c = standard_chart(xyz, 0);
    auto pb = pullback_bivector(c, ps::so3_bivector());
    REQUIRE(pb.pole);
    CHECK(*pb.pole == P("x", xyz));
    CHECK(pb.pi(1, 2) == rf("-1 - y^2 - z^2", "x", xyz));
    CHECK(pb.pi(0, 1) == RatFunc(P("-z", xyz)));
    CHECK(pb.pi(0, 2) == RatFunc(P("y", xyz)));
    CHECK(pb.pi(2, 1) == -pb.pi(1, 2));

    auto id = pullback_bivector(identity_chart(xyz), ps::so3_bivector());
    CHECK_FALSE(id.pole);
    CHECK(id.pi == to_ratfunc(ps::so3_bivector().matrix()));
}

TEST_CASE("linear charts transform bivectors by congruence", "[charts]") {
    auto m = qmatrix({{1, 1, 0}, {0, 1, 0}, {2, 0, 1}});
    auto c = linear_chart(xyz, m);
    auto pi = ps::so3_bivector();
    auto pb = pullback_bivector(c, pi);
    CHECK_FALSE(pb.pole);
    QMatrix mi = inverse(m);
    PolyMatrix mip = mi.map([](const Rational& v) { return Poly::constant(3, v); });
    PolyMatrix composed = pi.matrix().map([&](const Poly& p) { return c.compose(p); });
    CHECK(pb.pi == to_ratfunc(mip * composed * mip.transpose()));
}

TEST_CASE("identity chart leaves fields alone", "[charts]") {
    auto c = identity_chart(xyz);
    auto x = vf({"x*y", "z^2 - 1", "3"}, xyz);
    auto pb = pullback_vector_field(c, x);
    CHECK(pb.polynomial);
    CHECK(pb.field() == x);

    AnchoredBundle reg(xy, pmatrix({{"1", "0", "y"}, {"0", "1", "x"}}, xy));
    AlmostLieAlgebroid alg(reg, {});
    auto nash = nash_anchor_on_chart(alg, identity_chart(xy));
    CHECK(nash.algebroid.bundle().anchor() == reg.anchor());
    auto k = tautological_frame(reg, identity_chart(xy));
    CHECK(k.frame == kernel_basis(reg.anchor()));
    CHECK(debord_generators(nash).relations.size() == 1);
    AnchoredBundle free(xy, pmatrix({{"1", "0"}, {"0", "1"}}, xy));
    CHECK(debord_generators(nash_anchor_on_chart(AlmostLieAlgebroid(free, {}), identity_chart(xy))).relations.empty());
}

TEST_CASE("gl_d charts", "[charts]") {
    for (std::size_t d : {2u, 3u}) {
        auto alg = ps::gl_action(d);
        auto yv = ps::numbered_vars("y", d);
        for (std::size_t i = 0; i < d; ++i) {
            auto c = standard_chart(alg.bundle().vars(), i, yv);
            auto nash = nash_anchor_on_chart(alg, c);
            CHECK(nash.bracket_morphism);
            std::vector<VectorField> gens;
            for (std::size_t j = 0; j < d; ++j) {
                VectorField g(d, d);
                g[j] = j == i ? Poly::variable(d, i) : Poly::constant(d, 1);
                gens.push_back(g);
            }
            for (const auto& pb : nash.pullbacks) {
                auto coeffs = express_in(gens, pb.field());
                REQUIRE(coeffs);
                CHECK(all_polynomial(*coeffs));
            }
            auto k = tautological_frame(alg.bundle(), c);
            CHECK(k.frame.cols() == d * d - d);
            for (const auto& u : k.samples) {
                CHECK(u[i].is_zero());
                CHECK(rank(eval(k.frame, u)) == d * d - d);
            }
            CHECK(check_ideal(nash, alg.bundle(), k).holds());
            CHECK(check_debord_on_chart(nash, alg.bundle(), k).holds());
        }
    }
    auto c = standard_chart(x12, 0, y12);
    auto nash = nash_anchor_on_chart(ps::gl_action(2), c);
    CHECK(nash.pullbacks[0].field() == vf({"y1", "-y2"}, y12));
}

TEST_CASE("tautological frame fibers match kernels at regular points", "[charts][property]") {
    Rng rng(53);
    struct Case {
        AlmostLieAlgebroid alg;
        ChartMap chart;
    };
    std::vector<Case> cases{{ps::sl2_action(), standard_chart(xy, 0)},
                            {ps::so3_action(), standard_chart(xyz, 0)},
                            {cotangent_algebroid(ps::so3_bivector()), standard_chart(xyz, 2)},
                            {cotangent_algebroid(ps::duval_bivector(2)), standard_chart(xyz, 0)},
                            {ps::gl_action(2), standard_chart(x12, 1, y12)}};
    for (const auto& cs : cases) {
        auto k = tautological_frame(cs.alg.bundle(), cs.chart);
        for (int trial = 0; trial < 5; ++trial) {
            Point u = random_point(rng, cs.chart.dim());
            Point x = cs.chart.apply(u);
            if (!is_regular(cs.alg.bundle(), x)) continue;
            QMatrix f = eval(k.frame, u);
            std::vector<QVector> cols;
            for (std::size_t a = 0; a < f.cols(); ++a) cols.push_back(f.col(a));
            CHECK(Subspace::span(cs.alg.rank(), cols) == kernel_at(cs.alg.bundle(), x));
        }
        auto nash = nash_anchor_on_chart(cs.alg, cs.chart);
        CHECK(jacobi_holds(nash.algebroid));
        // [e_i†, e_j†] = (rho(c_ij))†
        for (std::size_t i = 0; i < cs.alg.rank(); ++i)
            for (std::size_t j = i + 1; j < cs.alg.rank(); ++j) {
                auto lhs = vf_bracket(nash.pullbacks[i].field(), nash.pullbacks[j].field());
                auto rhs = pullback_vector_field(cs.chart, cs.alg.bundle().anchor_of(cs.alg.structure(i, j)));
                CHECK(lhs == rhs.field());
            }
    }
}

TEST_CASE("chart failures", "[charts][negative]") {
    AnchoredBundle dy(xy, pmatrix({{"0"}, {"1"}}, xy));
    auto c = standard_chart(xy, 0);
    auto pb = pullback_vector_field(c, dy.column(0));
    CHECK_FALSE(pb.polynomial);
    CHECK(pb.denominator == P("x", xy));
    CHECK_THROWS_AS(nash_anchor_on_chart(AlmostLieAlgebroid(dy, {}), c), NotResolvedByChart);

    // kernel (y^2, -x) pulls back on the y-chart to (y, -x), which vanishes at the origin of the chart
    AnchoredBundle cusp(xy, pmatrix({{"x", "y^2"}, {"0", "0"}}, xy));
    CHECK_THROWS_AS(tautological_frame(cusp, standard_chart(xy, 1)), FrameReductionFailed);
    CHECK_NOTHROW(tautological_frame(cusp, standard_chart(xy, 0)));

    auto alg = ps::so3_action();
    auto sc = standard_chart(xyz, 0);
    auto nash = nash_anchor_on_chart(alg, sc);
    auto k = tautological_frame(alg.bundle(), sc);
    ChartFrame bad = k;
    bad.frame = k.frame.hconcat(pmatrix({{"1"}, {"0"}, {"0"}}, xyz));
    auto rep = check_ideal(nash, alg.bundle(), bad);
    CHECK_FALSE(rep.in_kernel);
    CHECK_FALSE(rep.holds());
    CHECK_FALSE(check_debord_on_chart(nash, alg.bundle(), bad).holds());
}

TEST_CASE("frame reduction repairs a rank drop", "[charts]") {
    // plain kernel of (x, 1, 1) is (-1, x, 0), (-1, 0, x), which collapse on x = 0
    AnchoredBundle b(xy, pmatrix({{"x", "1", "1"}, {"0", "0", "0"}}, xy));
    auto c = standard_chart(xy, 0);
    PolyMatrix composed = b.anchor().map([&](const Poly& p) { return c.compose(p); });
    PolyMatrix start = pmatrix({{"-1", "-1"}, {"x", "0"}, {"0", "x"}}, xy);
    REQUIRE((composed * start).is_zero());
    auto k = reduce_frame(start, c, exceptional_samples(c, 0), 12);
    CHECK(k.passes >= 1);
    REQUIRE(k.frame.cols() == 2);
    for (const auto& u : k.samples) CHECK(rank(eval(k.frame, u)) == 2);
    CHECK((composed * k.frame).is_zero());
    CHECK(rank(k.frame) == 2);

    // pivoting on the unit entry avoids the drop altogether
    auto direct = tautological_frame(b, c);
    CHECK(direct.passes == 0);
    for (const auto& u : direct.samples) CHECK(rank(eval(direct.frame, u)) == 2);
}
