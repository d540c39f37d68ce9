#include <doctest.h>

#include <random>

#include "igabem/error.hpp"
#include "igabem/splines.hpp"
#include "oracles.hpp"

using namespace igabem;

namespace {

BasisSpace space(std::vector<double> knots, int degree) {
    return BasisSpace(KnotVector(std::move(knots)), degree);
}

}  // namespace

TEST_CASE("knot vector validation") {
    CHECK_THROWS_AS(KnotVector(std::vector<double>{}), InvalidArgument);
    CHECK_THROWS_AS(KnotVector({0, 1, 0.5, 2}), InvalidArgument);
    CHECK_THROWS_AS(KnotVector({1, 1, 1}), InvalidArgument);
    CHECK_THROWS_AS(KnotVector({0, NAN, 1}), InvalidArgument);

    const KnotVector k({0, 0, 0, 0.5, 0.5, 1, 1, 1});
    CHECK(k.is_open(2));
    CHECK_FALSE(k.is_open(3));
    CHECK(k.multiplicity(0.5) == 2);
    CHECK(k.multiplicity(0.25) == 0);
    CHECK(k.distinct() == std::vector<double>{0, 0.5, 1});

    const KnotVector r = KnotVector({2, 2, 3, 6, 6}).rescaled(0, 1);
    CHECK(r.values() == std::vector<double>{0, 0, 0.25, 1, 1});
}

TEST_CASE("open uniform knot vectors") {
    CHECK(KnotVector::open_uniform(2, 1).values() == std::vector<double>{0, 0, 0, 1, 1, 1});
    CHECK(KnotVector::open_uniform(1, 2).values() == std::vector<double>{0, 0, 0.5, 1, 1});
    const std::vector<double> interior{0.3, 0.3};
    CHECK(KnotVector::open(2, interior, -1, 1).values() ==
          std::vector<double>{-1, -1, -1, 0.3, 0.3, 1, 1, 1});
}

TEST_CASE("basis space rejects bad input") {
    CHECK_THROWS_AS(space({0, 0, 0.5, 1, 1, 1}, 2), InvalidArgument);
    CHECK_THROWS_AS(space({0, 0, 0, 1, 1, 1}, -1), InvalidArgument);
    CHECK_THROWS_AS(space({0, 0, 1, 1}, 3), InvalidArgument);
    CHECK_THROWS_AS(space({0, 0, 0.5, 0.5, 0.5, 1, 1}, 1), InvalidArgument);
}

TEST_CASE("find span") {
    // 0-based spans of {0,0,0,1,2,3,4,4,5,5,5}, degree 2
    const BasisSpace s = space({0, 0, 0, 1, 2, 3, 4, 4, 5, 5, 5}, 2);
    CHECK(s.size() == 8);
    CHECK(s.find_span(0.0) == 2);
    CHECK(s.find_span(0.5) == 2);
    CHECK(s.find_span(1.0) == 3);
    CHECK(s.find_span(2.5) == 4);
    CHECK(s.find_span(4.0) == 7);
    CHECK(s.find_span(5.0) == 7);
    CHECK_THROWS_AS(s.find_span(5.1), DomainError);
    CHECK_THROWS_AS(s.find_span(-0.1), DomainError);
    CHECK(s.find_span(5.0 + 1e-14) == 7);
    CHECK(s.clamp(-1e-14) == 0.0);
}

TEST_CASE("textbook basis values at u = 5/2") {
    const BasisSpace s = space({0, 0, 0, 1, 2, 3, 4, 4, 5, 5, 5}, 2);
    const Eigen::VectorXd n = s.basis(2.5);
    CHECK(n[2] == doctest::Approx(1.0 / 8.0).epsilon(1e-15));
    CHECK(n[3] == doctest::Approx(6.0 / 8.0).epsilon(1e-15));
    CHECK(n[4] == doctest::Approx(1.0 / 8.0).epsilon(1e-15));
    const Eigen::MatrixXd d = s.basis_derivs(2.5, 1);
    CHECK(d(1, 2) == doctest::Approx(-0.5));
    CHECK(d(1, 3) == doctest::Approx(0.0));
    CHECK(d(1, 4) == doctest::Approx(0.5));
}

TEST_CASE("degree zero basis is the span indicator") {
    const BasisSpace s = space({0, 1, 2, 3}, 0);
    CHECK(s.basis(0.5) == Eigen::Vector3d(1, 0, 0));
    CHECK(s.basis(1.0) == Eigen::Vector3d(0, 1, 0));
    CHECK(s.basis(3.0) == Eigen::Vector3d(0, 0, 1));
}

TEST_CASE("basis agrees with the recursive definition") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 300; ++trial) {
        const int p = trial % 6;
        const std::vector<double> U = oracle::random_open_knots(rng, p, 5);
        const BasisSpace s(KnotVector(U), p);
        const double u = trial % 17 == 0 ? U.back() : U.front() + (U.back() - U.front()) * unit(rng);
        const Eigen::VectorXd n = s.basis(u);
        for (int i = 0; i < s.size(); ++i) {
            CHECK(n[i] == doctest::Approx(oracle::basis(U, i, p, u)).epsilon(1e-12));
        }
    }
}

TEST_CASE("derivatives agree with the recursive formula and finite differences") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        const int p = 1 + trial % 5;
        const std::vector<double> U = oracle::random_open_knots(rng, p, 4);
        const BasisSpace s(KnotVector(U), p);
        double u = U.front() + (U.back() - U.front()) * unit(rng);
        const Eigen::MatrixXd d = s.basis_derivs(u, std::min(p, 3));
        for (int i = 0; i < s.size(); ++i) {
            for (int k = 1; k <= std::min(p, 3); ++k) {
                const double ref = oracle::basis_deriv(U, i, p, u, k);
                CHECK(d(k, i) == doctest::Approx(ref).epsilon(1e-9).scale(1.0));
            }
        }
        // finite differences away from knots
        bool near_knot = false;
        for (double k : U) {
            near_knot = near_knot || std::abs(k - u) < 1e-4;
        }
        if (!near_knot) {
            for (int i = 0; i < s.size(); ++i) {
                const double fd = oracle::central_difference(
                    [&](double x) { return oracle::basis(U, i, p, x); }, u, 1e-6);
                CHECK(d(1, i) == doctest::Approx(fd).epsilon(1e-5).scale(1.0));
            }
        }
    }
}

TEST_CASE("nonzero derivatives at the right end") {
    const BasisSpace s = space({0, 0, 0, 0, 1, 1, 1, 1}, 3);
    const Eigen::MatrixXd d = s.nonzero_derivs(s.find_span(1.0), 1.0, 2);
    CHECK(d(0, 3) == doctest::Approx(1.0));
    CHECK(d(1, 3) == doctest::Approx(3.0));
    CHECK(d(1, 2) == doctest::Approx(-3.0));
    CHECK(d(2, 3) == doctest::Approx(6.0));
}

TEST_CASE("greville abscissae") {
    CHECK(greville_abscissae(space({0, 0, 0, 1, 1, 1}, 2)) == std::vector<double>{0, 0.5, 1});
    CHECK(greville_abscissae(space({0, 0, 1, 1}, 1)) == std::vector<double>{0, 1});
    const auto g = greville_abscissae(space({0, 0, 0, 0, 0.5, 1, 1, 1, 1}, 3));
    REQUIRE(g.size() == 5);
    CHECK(g[0] == 0.0);
    CHECK(g[1] == doctest::Approx(0.5 / 3));
    CHECK(g[2] == doctest::Approx(0.5));
    CHECK(g[3] == doctest::Approx(2.5 / 3));
    CHECK(g[4] == 1.0);
    CHECK_THROWS_AS(greville_abscissae(space({0, 1}, 0)), UnsupportedError);
}

TEST_CASE("knot insertion keeps the curve") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const BasisSpace s = space({0, 0, 0, 0.4, 1, 1, 1}, 2);
    Eigen::MatrixXd c = Eigen::MatrixXd::Random(s.size(), 3);
    const SplineData refined = knot_insert(s, c, 0.7);
    CHECK(refined.space.size() == s.size() + 1);
    CHECK(refined.space.knots().multiplicity(0.7) == 1);
    for (int i = 0; i < 50; ++i) {
        const double u = unit(rng);
        CHECK((evaluate(s, c, u) - evaluate(refined.space, refined.coeffs, u)).norm() < 1e-14);
    }
    const SplineData twice = knot_insert(refined.space, refined.coeffs, 0.7);
    CHECK_THROWS_AS(knot_insert(twice.space, twice.coeffs, 0.7), InvalidArgument);
    CHECK_THROWS_AS(knot_insert(s, c, 1.0), DomainError);
}

TEST_CASE("degree elevation keeps the curve and continuity") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const BasisSpace s = space({0, 0, 0, 0.5, 1, 1, 1}, 2);
    const Eigen::MatrixXd c = Eigen::MatrixXd::Random(s.size(), 2);
    for (int q = 3; q <= 5; ++q) {
        const SplineData e = degree_elevate(s, c, q);
        CHECK(e.space.degree() == q);
        CHECK(e.space.knots().multiplicity(0.5) == 1 + (q - 2));
        CHECK(e.space.size() == static_cast<int>(e.space.knots().size()) - q - 1);
        for (int i = 0; i < 40; ++i) {
            const double u = unit(rng);
            CHECK((evaluate(s, c, u) - evaluate(e.space, e.coeffs, u)).norm() < 1e-12);
        }
    }
    CHECK_THROWS_AS(degree_elevate(s, c, 1), InvalidArgument);
}

TEST_CASE("elevated space sizes") {
    CHECK(elevated_space(space({0, 0, 0, 1, 1, 1}, 2), 3).size() == 4);
    CHECK(elevated_space(space({0, 0, 0, 1, 1, 1}, 2), 4).size() == 5);
    CHECK(elevated_space(space({0, 0, 0, 0.5, 1, 1, 1}, 2), 3).size() == 6);
    CHECK_THROWS_AS(elevated_space(space({0, 0, 0, 1, 1, 1}, 2), 2), InvalidArgument);
}

TEST_CASE("bspline curve point") {
    const BasisSpace s = space({0, 0, 1, 1}, 1);
    const std::vector<Eigen::Vector2d> pts{{0.1, 0.2}, {0.9, 0.6}};
    CHECK((bspline_curve_point(s, pts, 0.25) - Eigen::Vector2d(0.3, 0.3)).norm() < 1e-15);
    CHECK((bspline_curve_point(s, pts, 1.0) - pts[1]).norm() == 0.0);
}
