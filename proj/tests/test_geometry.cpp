#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <set>

#include "hext/error.hpp"
#include "hext/geometry.hpp"
#include "hext/rng.hpp"
#include "support/oracles.hpp"

using namespace hext;

namespace {

PointCloud line_cloud(std::initializer_list<double> xs) {
    Matrix m(xs.size(), 1);
    std::size_t i = 0;
    for (double x : xs) m(i++, 0) = x;
    return PointCloud::from_matrix(std::move(m));
}

std::set<std::pair<std::size_t, std::size_t>> edge_set(const NeighborGraph& g) {
    std::set<std::pair<std::size_t, std::size_t>> edges;
    for (std::size_t i = 0; i < g.size(); ++i)
        for (const auto& e : g.adjacency[i]) edges.insert({std::min(i, e.target), std::max(i, e.target)});
    return edges;
}

} // namespace

TEST_CASE("nearest-neighbor union on three collinear points") {
    NeighborGraph g = build_knn_graph(line_cloud({0.0, 1.0, 3.0}), Metric::euclidean(), 1);
    auto edges = edge_set(g);
    CHECK(edges == std::set<std::pair<std::size_t, std::size_t>>{{0, 1}, {1, 2}});
    CHECK(g.adjacency[0][0].length == 1.0);
    CHECK(g.adjacency[2][0].length == 2.0);
    // both endpoints carry the mirrored edge with equal length
    CHECK(g.adjacency[1].size() == 2);
}

TEST_CASE("coincident points give a zero-length edge") {
    Matrix m(2, 2);
    m(1, 0) = 0.0;
    NeighborGraph g = build_knn_graph(PointCloud::from_matrix(std::move(m)), Metric::euclidean(), 1);
    CHECK(g.adjacency[0][0].length == 0.0);
}

TEST_CASE("parameter and metric validation") {
    PointCloud cloud = line_cloud({0.0, 1.0, 2.0});
    CHECK_THROWS_AS((void)build_knn_graph(cloud, Metric::euclidean(), 3), Error);
    CHECK_THROWS_AS((void)build_knn_graph(cloud, Metric::euclidean(), 0), Error);

    Matrix with_zero(3, 2);
    with_zero(0, 0) = 1.0;
    with_zero(2, 1) = 1.0; // row 1 stays zero
    CHECK_THROWS_AS(
        (void)build_knn_graph(PointCloud::from_matrix(std::move(with_zero)), Metric::cosine(), 1),
        Error);
}

TEST_CASE("a dense enough interval sample is connected") {
    Rng rng(99);
    Matrix pts(200, 1);
    for (std::size_t i = 0; i < 200; ++i) pts(i, 0) = rng.uniform();
    NeighborGraph g = build_knn_graph(PointCloud::from_matrix(std::move(pts)),
                                      Metric::euclidean(), 10);

    std::vector<char> seen(g.size(), 0);
    std::vector<std::size_t> stack{0};
    seen[0] = 1;
    std::size_t count = 1;
    while (!stack.empty()) {
        std::size_t u = stack.back();
        stack.pop_back();
        for (const auto& e : g.adjacency[u])
            if (!seen[e.target]) {
                seen[e.target] = 1;
                ++count;
                stack.push_back(e.target);
            }
    }
    CHECK(count == g.size());
}

TEST_CASE("symmetrized adjacency is a simple undirected graph") {
    Rng rng(3);
    PointCloud cloud = oracle::random_cloud(60, 3, rng);
    NeighborGraph g = build_knn_graph(cloud, Metric::euclidean(), 5);
    for (std::size_t i = 0; i < g.size(); ++i) {
        std::set<std::size_t> targets;
        for (const auto& e : g.adjacency[i]) {
            CHECK(e.target != i);
            CHECK(targets.insert(e.target).second);
            // mirror exists with identical length
            const auto& back = g.adjacency[e.target];
            auto it = std::find_if(back.begin(), back.end(),
                                   [&](const NeighborGraph::Edge& r) { return r.target == i; });
            REQUIRE(it != back.end());
            CHECK(it->length == e.length);
        }
        CHECK(g.out_neighbors[i].size() == 5);
    }
}

TEST_CASE("relabeling points relabels the edge set") {
    Rng rng(17);
    PointCloud cloud = oracle::random_cloud(40, 2, rng);
    NeighborGraph g = build_knn_graph(cloud, Metric::euclidean(), 4);

    const std::size_t n = cloud.size();
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    for (std::size_t i = n; i-- > 1;) std::swap(perm[i], perm[rng.below(i + 1)]);

    Matrix permuted(n, cloud.dim());
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < cloud.dim(); ++j) permuted(perm[i], j) = cloud.points(i, j);
    NeighborGraph gp = build_knn_graph(PointCloud::from_matrix(std::move(permuted)),
                                       Metric::euclidean(), 4);

    std::set<std::pair<std::size_t, std::size_t>> mapped;
    for (const auto& [a, b] : edge_set(g))
        mapped.insert({std::min(perm[a], perm[b]), std::max(perm[a], perm[b])});
    CHECK(mapped == edge_set(gp));
}

TEST_CASE("shortest paths on the unit path graph") {
    NeighborGraph g = build_knn_graph(line_cloud({0.0, 1.0, 2.0}), Metric::euclidean(), 1);
    std::vector<std::size_t> sources{0};

    DistanceTable table = graph_distance_matrix(g, sources, kInfinity);
    REQUIRE(table.rows.size() == 1);
    REQUIRE(table.rows[0].size() == 3);
    CHECK(table.rows[0][2] == std::pair<std::size_t, double>{2, 2.0});

    DistanceTable capped = graph_distance_matrix(g, sources, 1.5);
    REQUIRE(capped.rows[0].size() == 2); // entry (0,2) absent beyond the cap
    CHECK(capped.rows[0][1].first == 1);
}

TEST_CASE("all-source distances agree with the all-pairs oracle") {
    Rng rng(23);
    PointCloud cloud = oracle::random_cloud(80, 2, rng);
    NeighborGraph g = build_knn_graph(cloud, Metric::euclidean(), 6);
    Matrix reference = oracle::all_pairs_distances(g);

    std::vector<std::size_t> sources(cloud.size());
    for (std::size_t i = 0; i < sources.size(); ++i) sources[i] = i;
    DistanceTable table = graph_distance_matrix(g, sources, kInfinity);

    for (std::size_t s = 0; s < sources.size(); ++s) {
        std::vector<double> row(cloud.size(), kInfinity);
        for (const auto& [j, d] : table.rows[s]) row[j] = d;
        for (std::size_t j = 0; j < cloud.size(); ++j) {
            if (reference(s, j) == kInfinity)
                CHECK(row[j] == kInfinity);
            else
                CHECK(std::fabs(row[j] - reference(s, j)) <= 1e-12);
        }
    }
}

TEST_CASE("multi-source proximity picks the closest source, lowest index on ties") {
    NeighborGraph g = build_knn_graph(line_cloud({0.0, 1.0, 2.0, 3.0, 4.0}), Metric::euclidean(), 1);
    std::vector<std::size_t> sources{0, 4};
    BoundaryProximity prox = multi_source_proximity(g, sources);
    CHECK(prox.distance[2] == 2.0);
    CHECK(prox.nearest[2] == 0); // tie between sources 0 and 4
    CHECK(prox.nearest[3] == 4);
    CHECK(prox.distance[0] == 0.0);

    BoundaryProximity direct = direct_proximity(line_cloud({0.0, 1.0, 2.0, 3.0, 4.0}),
                                                MetricKind::euclidean, sources);
    for (std::size_t i = 0; i < 5; ++i) {
        CHECK(direct.distance[i] == prox.distance[i]);
        CHECK(direct.nearest[i] == prox.nearest[i]);
    }
}

TEST_CASE("bandwidth from constant edge lengths") {
    NeighborGraph g = build_knn_graph(line_cloud({0.0, 2.0, 4.0}), Metric::euclidean(), 1);
    CHECK(select_bandwidth(g) == 4.0);
}

TEST_CASE("bandwidth on the 101-point grid with two neighbors") {
    const std::size_t n = 101;
    const double s = 0.01;
    Matrix pts(n, 1);
    for (std::size_t i = 0; i < n; ++i) pts(i, 0) = static_cast<double>(i) * s;
    NeighborGraph g = build_knn_graph(PointCloud::from_matrix(std::move(pts)),
                                      Metric::euclidean(), 2);
    // interior points average s; the two endpoints average (s + 2s)/2
    double h = (99.0 * s + 2.0 * 1.5 * s) / 101.0;
    CHECK(select_bandwidth(g) == doctest::Approx(h * h).epsilon(1e-12));
}

TEST_CASE("bandwidth from mixed lengths one and three") {
    // two separated pairs: neighbor distances {1, 1, 3, 3} average to 2
    NeighborGraph g = build_knn_graph(line_cloud({0.0, 1.0, 10.0, 13.0}), Metric::euclidean(), 1);
    CHECK(select_bandwidth(g) == 4.0);
}

TEST_CASE("bandwidth degenerates when every distance is zero") {
    Matrix m(3, 1); // all at the origin
    NeighborGraph g = build_knn_graph(PointCloud::from_matrix(std::move(m)), Metric::euclidean(), 2);
    CHECK_THROWS_AS((void)select_bandwidth(g), Error);
}

TEST_CASE("cosine distance basics") {
    Matrix m(2, 2);
    m(0, 0) = 1.0;
    m(1, 1) = 2.0;
    PointCloud cloud = PointCloud::from_matrix(std::move(m));
    CHECK(point_distance(cloud.point(0), cloud.point(1), MetricKind::cosine) ==
          doctest::Approx(1.0)); // orthogonal
    CHECK(point_distance(cloud.point(0), cloud.point(0), MetricKind::cosine) ==
          doctest::Approx(0.0));
}
