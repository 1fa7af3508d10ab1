#include <gtest/gtest.h>

#include <random>

#include "helpers.hpp"

using namespace polyreal;
using namespace testing_support;

namespace {

IncidenceRelation pyramid() { return read_relation(data_path("pyramid.json")); }

Matrix pyramid_covertices()
{
    Matrix h(3, 5);
    h << -2, 0, 2, 0, 0,
         0, 2, 0, -2, 0,
         1, 1, 1, 1, -1;
    return h;
}

Matrix pyramid_vertices()
{
    Matrix w(3, 5);
    w << -1, -1, 1, 1, 0,
         -1, 1, 1, -1, 0,
         -1, -1, -1, -1, 1;
    return w;
}

// Regular n-gon with covertices scaled so that <h_i, w_j> = 1 on edges.
Realization regular_polygon(std::size_t n)
{
    const double pi = std::acos(-1.0);
    Matrix w(2, static_cast<Index>(n)), h(2, static_cast<Index>(n));
    const double r = 1.0 / std::cos(pi / static_cast<double>(n));
    for (std::size_t k = 0; k < n; ++k) {
        const double a = 2 * pi * static_cast<double>(k) / static_cast<double>(n);
        const double b = a + pi / static_cast<double>(n);
        w.col(static_cast<Index>(k)) << r * std::cos(a), r * std::sin(a);
        h.col(static_cast<Index>(k)) << std::cos(b), std::sin(b);
    }
    return {2, h, w, RealizationKind::Polytope};
}

} // namespace

TEST(FilledIncidence, PyramidMatrix)
{
    auto rel = pyramid();
    EXPECT_TRUE(check_filled_incidence(pyramid_matrix(), rel, 1.0).ok);

    Matrix bad = pyramid_matrix();
    bad(0, 2) = 1.0;
    auto check = check_filled_incidence(bad, rel, 1.0);
    EXPECT_FALSE(check.ok);
    ASSERT_EQ(check.violations.size(), 1u);
    EXPECT_EQ(check.violations[0].facet, 0u);
    EXPECT_EQ(check.violations[0].vertex, 2u);
    EXPECT_FALSE(check.violations[0].incident);

    Matrix cone = pyramid_matrix().array() - 1.0;
    EXPECT_TRUE(check_filled_incidence(cone, rel, 0.0).ok);
    EXPECT_FALSE(check_filled_incidence(cone, rel, 1.0).ok);
}

TEST(FilledIncidence, ToleranceBoundaries)
{
    IncidenceRelation rel(1, 2, {{0, 0}});
    Matrix m(1, 2);
    m << 1.0 + 5e-8, 1.0 - 2e-7;
    EXPECT_TRUE(check_filled_incidence(m, rel, 1.0).ok);
    m(0, 0) = 1.0 + 2e-7;
    EXPECT_FALSE(check_filled_incidence(m, rel, 1.0).ok);
    m << 1.0, 1.0 - 5e-8;
    auto c = check_filled_incidence(m, rel, 1.0);
    EXPECT_FALSE(c.ok);
    EXPECT_NEAR(c.min_slack, 5e-8, 1e-15);
    EXPECT_TRUE(check_filled_incidence(m, rel, 1.0, {1e-7, 1e-8}).ok);
}

TEST(FilledIncidence, DimensionMismatch)
{
    try {
        check_filled_incidence(Matrix::Zero(4, 5), pyramid(), 1.0);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::DimensionMismatch);
    }
}

TEST(FacetVertexMatrix, Examples)
{
    EXPECT_EQ(facet_vertex_matrix(Matrix::Identity(3, 3), Matrix::Identity(3, 3)), Matrix::Identity(3, 3));
    EXPECT_THROW(facet_vertex_matrix(Matrix::Zero(2, 3), Matrix::Zero(3, 3)), Error);

    // These coordinates reproduce the reference matrix.
    EXPECT_EQ(facet_vertex_matrix(pyramid_covertices(), pyramid_vertices()), pyramid_matrix());
}

TEST(FacetVertexMatrix, LinearActionInvariance)
{
    std::mt19937_64 gen(21);
    for (int trial = 0; trial < 100; ++trial) {
        const Index d = 2 + trial % 4;
        Matrix h = random_matrix(gen, d, 6), w = random_matrix(gen, d, 7);
        Matrix a = random_matrix(gen, d, d);
        Matrix ah = a.inverse().transpose() * h;
        Matrix m0 = facet_vertex_matrix(h, w);
        Matrix m1 = facet_vertex_matrix(ah, a * w);
        const double cond = a.norm() * a.inverse().norm();
        EXPECT_LE(max_abs(m1 - m0), 1e-12 * std::max(1.0, max_abs(m0)) * cond * 10);
    }
}

TEST(RealizeFromMatrix, Pyramid)
{
    auto rel = pyramid();
    Matrix m = pyramid_matrix();
    auto real = realize_from_matrix(m, 3);
    EXPECT_EQ(real.w.rows(), 3);
    EXPECT_EQ(real.w.cols(), 5);
    EXPECT_LE((facet_vertex_matrix(real.h, real.w) - m).norm(), 1e-9 * m.norm());
    EXPECT_TRUE(grunbaum_oracle(real.w, build_maxbiclique_lattice(rel)).ok);
    try {
        realize_from_matrix(m, 2);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::RankMismatch);
    }
}

TEST(RealizeFromMatrix, SquareIsCentrallySymmetric)
{
    Matrix m = square_matrix();
    auto sq = families::polygon(4);
    ASSERT_TRUE(check_filled_incidence(m, sq, 1.0).ok);
    auto real = realize_from_matrix(m, 2);
    EXPECT_LE((real.w.col(0) + real.w.col(2)).norm(), 1e-9);
    EXPECT_LE((real.w.col(1) + real.w.col(3)).norm(), 1e-9);
    EXPECT_TRUE(grunbaum_oracle(real.w, build_maxbiclique_lattice(sq)).ok);
}

TEST(PolytopeToCone, RankGoesUpByOne)
{
    Matrix n = polytope_to_cone_matrix(pyramid_matrix());
    EXPECT_EQ(numeric_rank(n), 4);
    EXPECT_TRUE(check_filled_incidence(n, pyramid(), 0.0).ok);
    for (auto [i, j] : pyramid().pairs())
        EXPECT_EQ(n(static_cast<Index>(i), static_cast<Index>(j)), 0.0);
    EXPECT_EQ(numeric_rank(polytope_to_cone_matrix(square_matrix())), 3);
}

TEST(PolytopeToCone, FlagsRankAnomaly)
{
    // All-ones has rank 1 and M - 1 = 0 has rank 0.
    try {
        polytope_to_cone_matrix(Matrix::Ones(3, 3));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::RankAnomaly);
    }
}

TEST(ConeToPolytope, RoundTrip)
{
    struct Case {
        Matrix m;
        IncidenceRelation rel;
        Index d;
    };
    std::vector<Case> cases{{pyramid_matrix(), pyramid(), 3}, {square_matrix(), families::polygon(4), 2}};
    for (std::size_t n = 3; n <= 8; ++n) {
        auto p = regular_polygon(n);
        cases.push_back({facet_vertex_matrix(p.h, p.w), families::polygon(n), 2});
    }
    for (const auto& c : cases) {
        ASSERT_TRUE(check_filled_incidence(c.m, c.rel, 1.0).ok);
        Matrix n = polytope_to_cone_matrix(c.m);
        Matrix back = cone_to_polytope_matrix(n);
        EXPECT_EQ(numeric_rank(back), c.d);
        EXPECT_TRUE(check_filled_incidence(back, c.rel, 1.0, {1e-9, 1e-7}).ok);
    }
}

TEST(ConeToPolytope, RandomScalingsOfAPolytopeCone)
{
    std::mt19937_64 gen(22);
    std::uniform_real_distribution<double> pos(0.2, 5.0);
    Matrix n = polytope_to_cone_matrix(pyramid_matrix());
    for (int trial = 0; trial < 50; ++trial) {
        Vector a(5), b(5);
        for (Index k = 0; k < 5; ++k) {
            a(k) = pos(gen);
            b(k) = pos(gen);
        }
        Matrix scaled = a.asDiagonal() * n * b.asDiagonal();
        Matrix m = cone_to_polytope_matrix(scaled);
        EXPECT_EQ(numeric_rank(m), 3);
        EXPECT_TRUE(check_filled_incidence(m, pyramid(), 1.0, {1e-9, 1e-7}).ok);
    }
}

TEST(ConeToPolytope, NonPointedConeFails)
{
    // Rays +e1 and -e1 with facets through 0: no y makes V y entrywise positive.
    Matrix n(2, 2);
    n << 1, -1, -1, 1;
    try {
        cone_to_polytope_matrix(n);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NoPositiveScaling);
    }
}

TEST(Grunbaum, SquareTriangleAndMissingEdge)
{
    auto sq = realize_from_matrix(square_matrix(), 2);
    auto lat = build_maxbiclique_lattice(families::polygon(4));
    auto rep = grunbaum_oracle(sq.w, lat);
    EXPECT_TRUE(rep.ok);
    EXPECT_EQ(rep.subsets_checked, 14u);

    std::vector<Bits> faces;
    for (std::size_t a = 0; a < lat.size(); ++a)
        if (lat.vertex_bits(a) != to_bits(4, {1, 2}))
            faces.push_back(lat.vertex_bits(a));
    auto missing = grunbaum_oracle(sq.w, faces);
    EXPECT_FALSE(missing.ok);
    ASSERT_EQ(missing.plane_without_face.size(), 1u);
    EXPECT_EQ(missing.plane_without_face[0], to_bits(4, {1, 2}));

    auto tri = regular_polygon(3);
    auto trep = grunbaum_oracle(tri.w, build_maxbiclique_lattice(families::polygon(3)));
    EXPECT_TRUE(trep.ok);
    EXPECT_EQ(trep.subsets_checked, 6u);
}

TEST(Grunbaum, CapExceeded)
{
    auto p = regular_polygon(13);
    try {
        grunbaum_oracle(p.w, build_maxbiclique_lattice(families::polygon(13)));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::CapExceeded);
    }
    GrunbaumOptions wide;
    wide.max_vertices = 13;
    EXPECT_TRUE(grunbaum_oracle(p.w, build_maxbiclique_lattice(families::polygon(13)), wide).ok);
}

TEST(Grunbaum, TrivialDecompositionOfVerifiedMatrices)
{
    // H = I and W = M realize the relation in R^n.
    for (std::size_t n = 3; n <= 7; ++n) {
        auto p = regular_polygon(n);
        Matrix m = facet_vertex_matrix(p.h, p.w);
        auto rel = families::polygon(n);
        EXPECT_TRUE(check_filled_incidence(facet_vertex_matrix(Matrix::Identity(m.rows(), m.rows()), m), rel, 1.0).ok);
        EXPECT_TRUE(grunbaum_oracle(m, build_maxbiclique_lattice(rel)).ok) << n;
    }
    Matrix fig = pyramid_matrix();
    EXPECT_TRUE(grunbaum_oracle(fig, build_maxbiclique_lattice(pyramid())).ok);
}

TEST(Grunbaum, PolarTranspose)
{
    std::vector<std::pair<Matrix, IncidenceRelation>> cases{{pyramid_matrix(), pyramid()},
                                                           {square_matrix(), families::polygon(4)}};
    for (std::size_t n = 3; n <= 7; ++n) {
        auto p = regular_polygon(n);
        cases.emplace_back(facet_vertex_matrix(p.h, p.w), families::polygon(n));
    }
    for (const auto& [m, rel] : cases) {
        Matrix t = m.transpose();
        auto trel = rel.transpose();
        EXPECT_TRUE(check_filled_incidence(t, trel, 1.0).ok);
        auto real = realize_from_matrix(t, numeric_rank(t));
        EXPECT_TRUE(grunbaum_oracle(real.w, build_maxbiclique_lattice(trel)).ok);
    }
}

TEST(CombinatorialGate, ReportsTheFailedCondition)
{
    EXPECT_TRUE(combinatorial_gate(pyramid(), 3).passed());
    EXPECT_EQ(combinatorial_gate(pyramid(), 2).failure, GateCondition::Rank);
    EXPECT_EQ(combinatorial_gate(read_relation(data_path("two_squares.json")), 2).failure,
              GateCondition::FlagConnected);
    EXPECT_EQ(combinatorial_gate(read_relation(data_path("pyramid_missing.json")), 3).failure,
              GateCondition::Diamond);
    EXPECT_EQ(combinatorial_gate(IncidenceRelation(1, 1, {{0, 0}})).failure, GateCondition::Degenerate);
    auto rep = combinatorial_gate(pyramid());
    EXPECT_EQ(rep.rank, 4u);
    EXPECT_EQ(rep.rank_profile, (std::vector<std::size_t>{1, 5, 8, 5, 1}));
}

TEST(RealizabilityCheck, Verdicts)
{
    auto v = realizability_check(pyramid(), 3);
    ASSERT_EQ(v.kind, VerdictKind::Realized);
    ASSERT_TRUE(v.realization.has_value());
    auto cert = verify_certificate(pyramid(), *v.realization, v.m);
    EXPECT_TRUE(cert.ok) << cert.reason;
    EXPECT_EQ(cert.grunbaum, true);
    EXPECT_EQ(v.realization_space_dim, 3 * 10 - 16);

    auto low = realizability_check(pyramid(), 2);
    EXPECT_EQ(low.kind, VerdictKind::CombinatoriallyRejected);
    EXPECT_EQ(low.combinatorics.failure, GateCondition::Rank);

    auto two = realizability_check(read_relation(data_path("two_squares.json")), 2);
    EXPECT_EQ(two.kind, VerdictKind::CombinatoriallyRejected);
    EXPECT_EQ(two.combinatorics.failure, GateCondition::FlagConnected);
}

TEST(RealizabilityCheck, InfersDimension)
{
    auto v = realizability_check(families::polygon(5));
    EXPECT_EQ(v.d, 2);
    EXPECT_EQ(v.kind, VerdictKind::Realized);
}

TEST(RealizabilityCheck, CertificatesReverifyFromScratch)
{
    for (const auto& [name, rel, d] : polytope_corpus()) {
        if (rel.n_vertices() > 8)
            continue;
        auto v = realizability_check(rel, d);
        ASSERT_EQ(v.kind, VerdictKind::Realized) << name;
        // Rebuild from the stored factors only.
        Realization copy{v.realization->dim, v.realization->h, v.realization->w, RealizationKind::Polytope};
        Matrix m = facet_vertex_matrix(copy.h, copy.w);
        auto cert = verify_certificate(rel, copy, m);
        EXPECT_TRUE(cert.ok) << name << ": " << cert.reason;
        Matrix n = polytope_to_cone_matrix(m);
        Matrix back = cone_to_polytope_matrix(n);
        EXPECT_EQ(numeric_rank(back), d) << name;
        EXPECT_TRUE(check_filled_incidence(back, rel, 1.0).ok) << name;
    }
}

TEST(RealizabilityCheck, TamperedCertificateFails)
{
    auto v = realizability_check(families::polygon(4), 2);
    ASSERT_EQ(v.kind, VerdictKind::Realized);
    auto real = *v.realization;
    real.w(0, 0) += 0.3;
    auto cert = verify_certificate(families::polygon(4), real, v.m);
    EXPECT_FALSE(cert.ok);
    EXPECT_FALSE(cert.product_matches);
}

TEST(RealizationSpace, Dimension)
{
    EXPECT_EQ(realization_space_dimension(families::polygon(4), 2), 8);
    EXPECT_EQ(realization_space_dimension(families::simplex(3), 3), 12);
}
