#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "plic/positioning.hpp"
#include "plic/shapes.hpp"

using namespace plic;

namespace {

constexpr Vec3 kOrigin{0.0, 0.0, 0.0};

double portable_unit(std::mt19937_64& rng) { return (rng() >> 11) * 0x1.0p-53; }

Vec3 random_unit(std::mt19937_64& rng) {
    const double z = 1.0 - 2.0 * portable_unit(rng);
    const double ph = 2.0 * std::numbers::pi * portable_unit(rng);
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    return {r * std::cos(ph), r * std::sin(ph), z};
}

// Reference root of 3t^2 - 2t^3 = target by plain bisection.
double smoothstep_root(double target) {
    double lo = 0.0, hi = 1.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        ((3.0 - 2.0 * mid) * mid * mid < target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace

TEST_CASE("initial guess solves the boundary-free cubic model") {
    const StaticCoefficients c = precompute(make_cube(), {0, 0, 1}, kOrigin);

    SECTION("midpoint is exact") {
        CHECK(viete_fraction_root(0.5) == 0.5);
        CHECK(initial_guess(c, 0.5) == c.s_min + c.L / 2.0);
    }
    SECTION("limits approach the support ends") {
        CHECK(viete_fraction_root(1e-15) < 1e-5);
        CHECK(viete_fraction_root(1.0 - 1e-15) > 1.0 - 1e-5);
    }
    SECTION("alpha = 27/100 reproduces the bisection reference") {
        const double t = viete_fraction_root(0.27);
        CHECK_THAT(t, Catch::Matchers::WithinAbs(smoothstep_root(0.27), 1e-13));
        CHECK_THAT(t, Catch::Matchers::WithinAbs(0.34134156048417, 1e-11));
        CHECK_THAT((3.0 - 2.0 * t) * t * t, Catch::Matchers::WithinAbs(0.27, 1e-12));
    }
    SECTION("identity holds across the open interval") {
        std::mt19937_64 rng(123);
        for (int i = 0; i < 100; ++i) {
            const double a = portable_unit(rng);
            const double t = viete_fraction_root(a);
            CHECK_THAT((3.0 - 2.0 * t) * t * t, Catch::Matchers::WithinAbs(a, 1e-12));
        }
    }
}

TEST_CASE("admissible boundary-derivative region") {
    for (double L : {1.0, 2.5}) {
        CHECK(admissible_boundary_derivatives(0.0, 0.0, L));
        CHECK(admissible_boundary_derivatives(2.0 / L, 2.0 / L, L)); // ellipse center
        CHECK_FALSE(admissible_boundary_derivatives(4.0 / L, 0.0, L));
    }
}

TEST_CASE("taylor_step branch selection") {
    SECTION("vanishing curvature degenerates to Newton") {
        const auto r = taylor_step(0.3, 1.0, 0.0, 0.5, 0.3);
        REQUIRE(r.has_value());
        CHECK(r->kind == StepKind::newton);
        CHECK_THAT(r->delta, Catch::Matchers::WithinAbs(0.2, 1e-15));
    }
    SECTION("the target is a fixed point") {
        const auto r = taylor_step(0.5, 0.8, 1.7, 0.5, 0.4);
        REQUIRE(r.has_value());
        CHECK(r->delta == 0.0);
    }
    SECTION("quadratic model is solved exactly") {
        // alpha(t) = t^2 sampled at t = 0.1, target 0.25 -> root at t = 0.5
        const auto r = taylor_step(0.01, 0.2, 2.0, 0.25, 0.1);
        REQUIRE(r.has_value());
        CHECK(r->kind == StepKind::taylor);
        CHECK_THAT(r->delta, Catch::Matchers::WithinAbs(0.4, 1e-15));
    }
    SECTION("quadratic root outside [0,1] falls back to Newton") {
        // alpha(t) = t^2 at t = 0.9, target 4.0: quadratic root t = 2
        const auto r = taylor_step(0.81, 1.8, 2.0, 4.0, 0.9);
        REQUIRE(r.has_value());
        CHECK(r->kind == StepKind::newton);
        CHECK_THAT(r->delta, Catch::Matchers::WithinAbs((4.0 - 0.81) / 1.8, 1e-15));
    }
    SECTION("negative discriminant falls back to Newton") {
        const auto r = taylor_step(0.9, 0.1, -2.0, 0.99, 0.5);
        REQUIRE(r.has_value());
        CHECK(r->kind == StepKind::newton);
    }
    SECTION("no usable derivative yields nothing") {
        CHECK_FALSE(taylor_step(0.3, 0.0, 0.0, 0.5, 0.5).has_value());
    }
}

TEST_CASE("cubic_root_in_bracket across degeneracies") {
    SECTION("linear") {
        const Cubic S{0.0, 0.0, 1.0, 0.0, 0.0}; // S(z) = z
        CHECK_THAT(cubic_root_in_bracket(S, 0.7, 0.0, 1.0), Catch::Matchers::WithinAbs(0.7, 1e-15));
    }
    SECTION("pure cubic, closed-form reference") {
        const double r3 = std::sqrt(3.0);
        const Cubic S{0.0, 0.0, 0.0, 0.0, 0.5 * r3}; // S(z) = (sqrt(3)/2) z^3
        const double root = cubic_root_in_bracket(S, 1.0 / 16.0, 0.0, 1.0 / r3);
        CHECK_THAT(root, Catch::Matchers::WithinAbs(std::cbrt(1.0 / (8.0 * r3)), 1e-12));
    }
    SECTION("smoothstep at one half") {
        const Cubic S{0.0, 0.0, 0.0, 3.0, -2.0}; // S(z) = 3z^2 - 2z^3
        CHECK_THAT(cubic_root_in_bracket(S, 0.5, 0.0, 1.0), Catch::Matchers::WithinAbs(0.5, 1e-12));
    }
    SECTION("quadratic degenerate") {
        const Cubic S{0.0, 0.0, 0.0, 1.0, 0.0}; // S(z) = z^2
        CHECK_THAT(cubic_root_in_bracket(S, 0.49, 0.0, 1.0), Catch::Matchers::WithinAbs(0.7, 1e-12));
    }
    SECTION("constant at the target returns an interior point") {
        const Cubic S{0.0, 0.25, 0.0, 0.0, 0.0};
        const double root = cubic_root_in_bracket(S, 0.25, 0.2, 0.6);
        CHECK(root >= 0.2);
        CHECK(root <= 0.6);
    }
    SECTION("target outside the bracket range throws") {
        const Cubic S{0.0, 0.0, 1.0, 0.0, 0.0};
        CHECK_THROWS_AS(cubic_root_in_bracket(S, 1.5, 0.0, 1.0), NoSignChange);
        CHECK_THROWS_AS(cubic_root_in_bracket(S, -0.5, 0.0, 1.0), NoSignChange);
    }
    SECTION("endpoint roots are honored") {
        const Cubic S{0.0, 0.0, 1.0, 0.0, 0.0};
        CHECK(cubic_root_in_bracket(S, 0.0, 0.0, 1.0) == 0.0);
        CHECK(cubic_root_in_bracket(S, 1.0, 0.0, 1.0) == 1.0);
    }
    SECTION("generic cubics across random brackets") {
        std::mt19937_64 rng(404);
        for (int i = 0; i < 200; ++i) {
            // monotone cubic on [0,1]: S'(z) = c1 + z(2 c2 + 3 c3 z) kept positive
            const double c1 = 0.2 + portable_unit(rng);
            const double c2 = (portable_unit(rng) - 0.5) * 0.2;
            const double c3 = (portable_unit(rng) - 0.5) * 0.1;
            const Cubic S{0.0, portable_unit(rng), c1, c2, c3};
            const double target = S.eval(0.0) + (S.eval(1.0) - S.eval(0.0)) * portable_unit(rng);
            const double root = cubic_root_in_bracket(S, target, 0.0, 1.0);
            CHECK(std::abs(S.eval(root) - target) <= 1e-12);
        }
    }
}

TEST_CASE("positioning on the axis-aligned cube needs one truncation") {
    const StaticCoefficients c = precompute(make_cube(), {0, 0, 1}, kOrigin);
    PositionQuery q;
    q.target_fraction = 0.27;
    const PositionResult r = position(c, q);
    CHECK_THAT(r.s_star, Catch::Matchers::WithinAbs(0.27, 1e-13));
    CHECK_THAT(r.alpha_achieved, Catch::Matchers::WithinAbs(0.27, 1e-13));
    CHECK(r.n_truncations == 1);
    CHECK(r.status == PositionStatus::cubic_solved);
}

TEST_CASE("positioning with an oblique normal matches a bisection oracle") {
    const StaticCoefficients c = precompute(make_cube(), normalized(Vec3{1, -3, 2}), kOrigin);
    PositionQuery q;
    q.target_fraction = 0.27;
    const PositionResult r = position(c, q);
    CHECK(std::abs(r.alpha_achieved - 0.27) <= 1e-12);
    CHECK(r.n_truncations <= 3);

    double lo = c.s_min, hi = c.s_max;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (truncated_volume(c, mid).V < 0.27 * c.volume ? lo : hi) = mid;
    }
    CHECK_THAT(r.s_star, Catch::Matchers::WithinAbs(0.5 * (lo + hi), 1e-9));
    CHECK(std::abs(truncated_volume(c, r.s_star).V / c.volume - 0.27) <= 2e-12);
}

TEST_CASE("extreme fractions converge without stagnation") {
    const Polyhedron shapes[] = {make_cube(), make_tetrahedron(), make_dodecahedron(),
                                 make_torus(), make_letter_a()};
    std::mt19937_64 rng(88);
    for (const Polyhedron& p : shapes) {
        for (double a : {1e-9, 1e-7, 1.0 - 1e-9}) {
            const StaticCoefficients c = precompute(p, random_unit(rng));
            PositionQuery q;
            q.target_fraction = a;
            const PositionResult r = position(c, q);
            CHECK(std::abs(r.alpha_achieved - a) <= 1e-12);
            CHECK(r.status != PositionStatus::bisection_fallback);
        }
    }
}

TEST_CASE("a fraction sampled from a known plane is recovered") {
    std::mt19937_64 rng(3);
    const Polyhedron shapes[] = {make_dodecahedron(), make_torus(), make_letter_a()};
    for (const Polyhedron& p : shapes) {
        for (int rep = 0; rep < 20; ++rep) {
            const StaticCoefficients c = precompute(p, random_unit(rng));
            const double s = c.s_min + (0.02 + 0.96 * portable_unit(rng)) * c.L;
            const double alpha = truncated_volume(c, s).V / c.volume;
            if (alpha <= zero_tol || alpha >= 1.0 - zero_tol) continue;
            PositionQuery q;
            q.target_fraction = alpha;
            const PositionResult r = position(c, q);
            CHECK(std::abs(r.alpha_achieved - alpha) <= 1e-12);
        }
    }
}

TEST_CASE("mirrored queries meet in the middle") {
    std::mt19937_64 rng(55);
    const Polyhedron p = make_letter_a();
    const Vec3 base = p.vertex_centroid();
    for (int rep = 0; rep < 20; ++rep) {
        const Vec3 n = random_unit(rng);
        const double a = 0.05 + 0.9 * portable_unit(rng);
        const StaticCoefficients cf = precompute(p, n, base);
        const StaticCoefficients cb = precompute(p, -1.0 * n, base);
        PositionQuery q;
        q.target_fraction = a;
        const PositionResult rf = position(cf, q);
        q.target_fraction = 1.0 - a;
        const PositionResult rb = position(cb, q);
        CHECK(std::abs(rf.alpha_achieved + rb.alpha_achieved - 1.0) <= 2e-12);
        CHECK(std::abs(rf.s_star + rb.s_star) <= 1e-5 * cf.L);
    }
}

TEST_CASE("single-bracket targets finish after one truncation") {
    // initial guess for a small fraction lands in the first bracket of the
    // corner regime, which also contains the root
    const StaticCoefficients c = precompute(make_cube(), normalized(Vec3{1, 1, 1}), kOrigin);
    PositionQuery q;
    q.target_fraction = 1e-3;
    const PositionResult r = position(c, q);
    CHECK(r.n_truncations == 1);
    CHECK(r.status == PositionStatus::cubic_solved);
    const double expect = std::cbrt(2.0 * 1e-3 * c.volume / std::sqrt(3.0));
    CHECK_THAT(r.s_star, Catch::Matchers::WithinRel(expect, 1e-10));
}

TEST_CASE("every visited position stays inside the support") {
    std::mt19937_64 rng(2718);
    const Polyhedron shapes[] = {make_torus(), make_letter_a()};
    for (const Polyhedron& p : shapes) {
        for (int rep = 0; rep < 50; ++rep) {
            const StaticCoefficients c = precompute(p, random_unit(rng));
            PositionQuery q;
            q.target_fraction = portable_unit(rng);
            q.record_trace = true;
            const PositionResult r = position(c, q);
            REQUIRE(!r.trace.empty());
            CHECK(r.trace.front().kind == StepKind::initial);
            for (const TraceEntry& t : r.trace) {
                CHECK(t.s >= c.s_min - 1e-12 * c.L);
                CHECK(t.s <= c.s_max + 1e-12 * c.L);
            }
        }
    }
}

TEST_CASE("targets at the fraction boundaries are clamped without truncating") {
    const StaticCoefficients c = precompute(make_dodecahedron(), normalized(Vec3{3, 1, -2}));
    for (double a : {0.0, 1e-15}) {
        PositionQuery q;
        q.target_fraction = a;
        const PositionResult r = position(c, q);
        CHECK(r.status == PositionStatus::boundary_clamped);
        CHECK(r.s_star == c.s_min);
        CHECK(r.n_truncations == 0);
    }
    for (double a : {1.0, 1.0 - 1e-15}) {
        PositionQuery q;
        q.target_fraction = a;
        const PositionResult r = position(c, q);
        CHECK(r.status == PositionStatus::boundary_clamped);
        CHECK(r.s_star == c.s_max);
        CHECK(r.n_truncations == 0);
    }
}

TEST_CASE("result contract holds on a random batch") {
    std::mt19937_64 rng(1312);
    const Polyhedron shapes[] = {make_cube(), make_tetrahedron(), make_dodecahedron(),
                                 make_torus(), make_letter_a()};
    for (int rep = 0; rep < 200; ++rep) {
        const Polyhedron& p = shapes[rng() % 5];
        const StaticCoefficients c = precompute(p, random_unit(rng));
        PositionQuery q;
        q.target_fraction = portable_unit(rng);
        const PositionResult r = position(c, q);
        if (r.status == PositionStatus::boundary_clamped) {
            CHECK(r.n_truncations == 0);
        } else {
            CHECK(r.n_truncations >= 1);
            CHECK(std::abs(r.alpha_achieved - q.target_fraction) <= q.tol);
        }
        CHECK(r.s_star >= c.s_min - 1e-12 * c.L);
        CHECK(r.s_star <= c.s_max + 1e-12 * c.L);
    }
}

TEST_CASE("newton baseline: same answers, more truncations on hard fractions") {
    SECTION("linear volume needs no extra work") {
        const StaticCoefficients c = precompute(make_cube(), {0, 0, 1}, kOrigin);
        PositionQuery q;
        q.target_fraction = 0.27;
        const PositionResult r = position_newton_baseline(c, q);
        CHECK(std::abs(r.alpha_achieved - 0.27) <= 1e-12);
        CHECK(r.n_truncations <= 2);
    }
    SECTION("small fractions show the diminishing-derivative slowdown") {
        const StaticCoefficients c = precompute(make_cube(), normalized(Vec3{1, -3, 2}), kOrigin);
        PositionQuery q;
        q.target_fraction = 1e-7;
        const PositionResult prop = position(c, q);
        const PositionResult newt = position_newton_baseline(c, q);
        CHECK(std::abs(newt.alpha_achieved - 1e-7) <= 1e-12);
        CHECK(newt.n_truncations > prop.n_truncations);
    }
}
