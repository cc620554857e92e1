#include <catch2/catch_amalgamated.hpp>

#include "hh/transforms.hpp"

using namespace hh;

TEST_CASE("fit_bounds computes per-column midpoint and half-width") {
    auto b = fit_bounds({{0.2, 0.3, 0.0}, {0.6, 0.3, 1.0}});
    CHECK(b[0].midpoint == Catch::Approx(0.4));
    CHECK(b[0].half_width == Catch::Approx(0.2));
    CHECK(b[1].midpoint == Catch::Approx(0.3));
    CHECK(b[1].half_width == 0.0);
    CHECK(b[2].midpoint == Catch::Approx(0.5));
    CHECK(b[2].half_width == Catch::Approx(0.5));
}

TEST_CASE("fit_bounds rejects empty input") {
    CHECK_THROWS_AS(fit_bounds({}), std::invalid_argument);
}

TEST_CASE("linear transform endpoints and clamping") {
    CHECK(apply_linear(0.4, 0.4, 0.2) == Catch::Approx(0.5));
    CHECK(apply_linear(0.6, 0.4, 0.2) == Catch::Approx(1.0));
    CHECK(apply_linear(0.2, 0.4, 0.2) == Catch::Approx(0.0));
    // 0.7 maps to 1.25 before clamping
    CHECK(apply_linear(0.7, 0.4, 0.2) == 1.0);
    // degenerate width keeps the feature inert
    CHECK(apply_linear(123.0, 0.3, 0.0) == 0.5);
}

TEST_CASE("s-shaped transform hits the logistic anchor points") {
    CHECK(apply_s_shaped(0.4, 0.4, 0.2) == Catch::Approx(0.5));
    CHECK(apply_s_shaped(0.6, 0.4, 0.2) == Catch::Approx(1.0 - 1.0 / (1.0 + std::exp(6.0))));
    CHECK(apply_s_shaped(0.6, 0.4, 0.2) == Catch::Approx(0.997527).epsilon(1e-5));
    CHECK(apply_s_shaped(0.2, 0.4, 0.2) == Catch::Approx(0.002473).epsilon(1e-3));
    CHECK(apply_s_shaped(0.0, 0.3, 0.0) == 0.5);
}

TEST_CASE("s-shaped simplified form matches the midpoint-ratio form away from zero") {
    hh::Rng rng(7);
    for (int i = 0; i < 2000; ++i) {
        double m = 0.05 + rng.next_double();
        double w = 0.01 + rng.next_double();
        double x = 2.0 * rng.next_double() - 0.5;
        double simplified = apply_s_shaped(x, m, w);
        double expanded_form = 1.0 - 1.0 / (1.0 + std::exp((6.0 * m / w) * (x / m - 1.0)));
        CHECK(std::fabs(simplified - expanded_form) < 1e-12);
    }
}

TEST_CASE("exponential transform analytic values") {
    CHECK(apply_exponential(1.0) == Catch::Approx(1.0).margin(1e-12));
    CHECK(apply_exponential(0.0) == Catch::Approx(std::exp(-5.0)).margin(1e-12));
    CHECK(apply_exponential(0.5) == Catch::Approx(0.860738).epsilon(1e-5));
}

TEST_CASE("transform ranges and monotonicity") {
    hh::Rng rng(11);
    double prev_lin = -1.0, prev_s = -1.0, prev_exp = -1.0;
    for (int i = 0; i <= 500; ++i) {
        double x = static_cast<double>(i) / 500.0 * 2.0 - 0.5; // sweep [-0.5, 1.5]
        double lin = apply_linear(x, 0.4, 0.25);
        double s = apply_s_shaped(x, 0.4, 0.25);
        CHECK(lin >= 0.0);
        CHECK(lin <= 1.0);
        CHECK(s > 0.0);
        CHECK(s < 1.0);
        CHECK(lin >= prev_lin);
        CHECK(s >= prev_s);
        prev_lin = lin;
        prev_s = s;
        if (x >= 0.0 && x <= 1.0) {
            double e = apply_exponential(x);
            CHECK(e >= std::exp(-5.0));
            CHECK(e <= 1.0);
            CHECK(e > prev_exp);
            prev_exp = e;
        }
    }
    (void)rng;
}

TEST_CASE("fitted endpoint mapping") {
    std::vector<FeatureVector> rows = {{0.1}, {0.35}, {0.9}};
    auto lin = make_transform(TransformKind::linear, rows);
    auto ss = make_transform(TransformKind::s_shaped, rows);
    CHECK(apply_spec(lin, {0.1})[0] == Catch::Approx(0.0).margin(1e-12));
    CHECK(apply_spec(lin, {0.9})[0] == Catch::Approx(1.0).margin(1e-12));
    CHECK(apply_spec(ss, {0.1})[0] == Catch::Approx(0.00247).margin(1e-4));
    CHECK(apply_spec(ss, {0.9})[0] == Catch::Approx(0.99753).margin(1e-4));
}

TEST_CASE("apply_spec identity and fitted examples") {
    FeatureVector v = {0.1, 0.7, 0.4};
    TransformSpec ident;
    CHECK(apply_spec(ident, v) == v);

    auto lin = make_transform(TransformKind::linear, {{0.0}, {1.0}});
    CHECK(apply_spec(lin, {0.25})[0] == Catch::Approx(0.25));

    auto ss = make_transform(TransformKind::s_shaped, {{0.2}, {0.6}});
    CHECK(apply_spec(ss, {0.4})[0] == Catch::Approx(0.5));

    CHECK_THROWS_AS(apply_spec(lin, {0.1, 0.2}), std::invalid_argument);
}

TEST_CASE("transform spec JSON round-trip") {
    auto spec = make_transform(TransformKind::s_shaped, {{0.1, 0.2}, {0.9, 0.4}});
    nlohmann::json j = spec;
    auto back = j.get<TransformSpec>();
    CHECK(back.kind == spec.kind);
    REQUIRE(back.params.size() == spec.params.size());
    for (std::size_t i = 0; i < spec.params.size(); ++i) {
        CHECK(back.params[i].midpoint == spec.params[i].midpoint);
        CHECK(back.params[i].half_width == spec.params[i].half_width);
    }
}
