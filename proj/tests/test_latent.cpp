#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "a2opt/dataset.hpp"
#include "a2opt/latent.hpp"
#include "a2opt/rng.hpp"

using namespace a2opt;

namespace {

// independent quadrant oracle: bit pattern -> group
int group_oracle(double vx, double vy, double ux, double uy) {
    static const int table[4] = {1, 2, 4, 3};  // index = (vx>ux) | (vy>uy)<<1
    int idx = (vx > ux ? 1 : 0) | (vy > uy ? 2 : 0);
    return table[idx];
}

Matrix random_spd(Rng& rng, int d) {
    Matrix m(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) m.at(i, j) = rng.normal();
    Matrix spd(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            double acc = i == j ? 0.1 : 0.0;
            for (int k = 0; k < d; ++k) acc += m.at(k, i) * m.at(k, j);
            spd.at(i, j) = acc;
        }
    return spd;
}

}  // namespace

TEST_CASE("quadrant assignment matches the sign-pattern oracle") {
    CHECK(assign_group(0, 0, 1, 1) == 1);
    CHECK(assign_group(0, 0, -1, 1) == 2);
    CHECK(assign_group(0, 0, -1, -1) == 3);
    CHECK(assign_group(0, 0, 1, -1) == 4);
    CHECK(assign_group(0, 0, 0, 0) == 1);  // boundary: <= on both axes

    Rng rng(5);
    for (int i = 0; i < 10000; ++i) {
        double vx = rng.uniform(-2, 2), vy = rng.uniform(-2, 2);
        double ux = rng.uniform(-2, 2), uy = rng.uniform(-2, 2);
        CHECK(assign_group(vx, vy, ux, uy) == group_oracle(vx, vy, ux, uy));
    }
}

TEST_CASE("groups partition the member set") {
    Rng rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        int n = 5 + static_cast<int>(rng.uniform_int(0, 20));
        Matrix coords(n, 2);
        for (int i = 0; i < n; ++i) {
            coords.at(i, 0) = rng.uniform(-3, 3);
            coords.at(i, 1) = rng.uniform(-3, 3);
        }
        std::vector<int> members;
        for (int u = 1; u < n; ++u)
            if (rng.uniform() < 0.5) members.push_back(u);
        auto groups = build_groups(coords, 0, members);
        std::vector<int> seen;
        for (const auto& g : groups) {
            CHECK(std::is_sorted(g.begin(), g.end()));
            seen.insert(seen.end(), g.begin(), g.end());
        }
        std::sort(seen.begin(), seen.end());
        CHECK(seen == members);
    }
}

TEST_CASE("jacobi eigendecomposition agrees with reconstruction and power iteration") {
    Rng rng(23);
    for (int trial = 0; trial < 20; ++trial) {
        int d = trial % 2 == 0 ? 6 : 4;
        Matrix a = random_spd(rng, d);
        auto [eig, vecs] = symmetric_eigen(a);

        for (size_t i = 1; i < eig.size(); ++i) CHECK(eig[i - 1] >= eig[i]);

        // rows orthonormal
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                double dot = 0;
                for (int k = 0; k < d; ++k) dot += vecs.at(i, k) * vecs.at(j, k);
                CHECK(dot == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-9));
            }

        // V^T diag(eig) V reconstructs A
        for (int p = 0; p < d; ++p)
            for (int q = 0; q < d; ++q) {
                double acc = 0;
                for (int k = 0; k < d; ++k) acc += vecs.at(k, p) * eig[k] * vecs.at(k, q);
                CHECK(acc == doctest::Approx(a.at(p, q)).epsilon(1e-8));
            }

        // independent power iteration for the dominant eigenpair
        std::vector<double> x(d, 1.0);
        double lambda = 0;
        for (int it = 0; it < 2000; ++it) {
            std::vector<double> y(d, 0.0);
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j) y[i] += a.at(i, j) * x[j];
            double norm = 0;
            for (double v : y) norm += v * v;
            norm = std::sqrt(norm);
            for (int i = 0; i < d; ++i) x[i] = y[i] / norm;
            lambda = norm;
        }
        CHECK(eig[0] == doctest::Approx(lambda).epsilon(1e-6));
    }
}

TEST_CASE("axis-aligned data maps to the identity projection") {
    // variance on axis 0 dominates; standardization equalizes it, and the
    // stable eigen order keeps the original axes
    Matrix x(6, 2);
    double vals0[] = {-3, -1, 0, 1, 3, 0};
    double vals1[] = {1, -1, 0, -1, 1, 0};
    for (int i = 0; i < 6; ++i) {
        x.at(i, 0) = vals0[i];
        x.at(i, 1) = vals1[i];
    }
    LatentMapper m = fit_latent_mapper(x);
    CHECK(m.proj.at(0, 0) == doctest::Approx(1.0));
    CHECK(m.proj.at(0, 1) == doctest::Approx(0.0));
    CHECK(m.proj.at(1, 0) == doctest::Approx(0.0));
    CHECK(m.proj.at(1, 1) == doctest::Approx(1.0));
}

TEST_CASE("rotating the input rotates the components") {
    // the symmetric point family keeps per-axis variances equal, so
    // standardization is a uniform scaling and a quarter-turn is exact
    double a = 2, b = 1;
    Matrix x(4, 2, {a, b, -a, -b, b, a, -b, -a});
    Matrix xr(4, 2, {-b, a, b, -a, -a, b, a, -b});
    LatentMapper ma = fit_latent_mapper(x);
    LatentMapper mr = fit_latent_mapper(xr);
    Matrix ya = ma.project_rows(x);
    Matrix yr = mr.project_rows(xr);
    for (int i = 0; i < 4; ++i)
        for (int k = 0; k < 2; ++k)
            CHECK(std::abs(ya.at(i, k)) == doctest::Approx(std::abs(yr.at(i, k))).epsilon(1e-9));
}

TEST_CASE("duplicating every row leaves the mapper unchanged") {
    Rng rng(31);
    Matrix x(7, kFeatureDim);
    for (int i = 0; i < 7; ++i)
        for (int j = 0; j < kFeatureDim; ++j) x.at(i, j) = rng.uniform(0, 10);
    Matrix xx(14, kFeatureDim);
    for (int i = 0; i < 14; ++i)
        for (int j = 0; j < kFeatureDim; ++j) xx.at(i, j) = x.at(i % 7, j);
    LatentMapper m1 = fit_latent_mapper(x);
    LatentMapper m2 = fit_latent_mapper(xx);
    for (int j = 0; j < kFeatureDim; ++j) {
        CHECK(m1.mean.at(0, j) == doctest::Approx(m2.mean.at(0, j)).epsilon(1e-12));
        CHECK(m1.std.at(0, j) == doctest::Approx(m2.std.at(0, j)).epsilon(1e-12));
    }
    for (int k = 0; k < 2; ++k)
        for (int j = 0; j < kFeatureDim; ++j)
            CHECK(m1.proj.at(k, j) == doctest::Approx(m2.proj.at(k, j)).epsilon(1e-9));
}

TEST_CASE("projection rows stay orthonormal on fitted data") {
    Rng rng(37);
    Matrix x(40, kFeatureDim);
    for (int i = 0; i < 40; ++i)
        for (int j = 0; j < kFeatureDim; ++j) x.at(i, j) = rng.normal() * (j + 1);
    LatentMapper m = fit_latent_mapper(x);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            double dot = 0;
            for (int k = 0; k < kFeatureDim; ++k) dot += m.proj.at(i, k) * m.proj.at(j, k);
            CHECK(dot == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-8));
        }
}

TEST_CASE("degenerate data is rejected") {
    Matrix two(2, 3, {1, 2, 3, 4, 5, 6});
    CHECK_THROWS_AS(fit_latent_mapper(two), DataError);

    // rank 1: every row is a multiple of the all-ones direction
    Matrix line(5, 3);
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 3; ++j) line.at(i, j) = i * 1.5;
    CHECK_THROWS_AS(fit_latent_mapper(line), DataError);

    Matrix flat(4, 3);
    flat.fill(2.0);
    CHECK_THROWS_AS(fit_latent_mapper(flat), DataError);
}

TEST_CASE("latent neighbors equal the brute-force nearest sort") {
    for (uint64_t seed = 0; seed < 100; ++seed) {
        Rng rng(seed);
        int n = 3 + static_cast<int>(rng.uniform_int(0, 47));
        std::vector<int> ids;
        for (int i = 0; i < n; ++i) ids.push_back(i + 1);
        std::vector<HandoverStat> stats;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (rng.uniform() < 0.15) stats.push_back({ids[i], ids[j], 20.0});
        NetworkGraph g = build_graph(stats, ids, 10.0);
        Matrix coords(n, 2);
        for (int i = 0; i < n; ++i) {
            coords.at(i, 0) = rng.uniform(-5, 5);
            coords.at(i, 1) = rng.uniform(-5, 5);
        }
        int v = static_cast<int>(rng.uniform_int(0, n - 1));
        AugmentedNeighborhood got = augment(g, coords, v);

        const std::vector<int>& gn = g.neighbors(v);
        std::vector<int> pool;
        for (int u = 0; u < n; ++u)
            if (u != v && std::find(gn.begin(), gn.end(), u) == gn.end()) pool.push_back(u);
        std::stable_sort(pool.begin(), pool.end(), [&](int x, int y) {
            double dx = std::hypot(coords.at(x, 0) - coords.at(v, 0), coords.at(x, 1) - coords.at(v, 1));
            double dy = std::hypot(coords.at(y, 0) - coords.at(v, 0), coords.at(y, 1) - coords.at(v, 1));
            if (dx != dy) return dx < dy;
            return x < y;
        });
        pool.resize(std::min(pool.size(), gn.size()));
        std::sort(pool.begin(), pool.end());

        CHECK(got.latent_neighbors == pool);
        CHECK(got.graph_neighbors == gn);
        std::set<int> inter(got.graph_neighbors.begin(), got.graph_neighbors.end());
        for (int u : got.latent_neighbors) {
            CHECK(inter.count(u) == 0);
            CHECK(u != v);
        }
        CHECK(got.all().size() == got.graph_neighbors.size() + got.latent_neighbors.size());
    }
}

TEST_CASE("equidistant ties pick the lower cell index") {
    std::vector<int> ids = {1, 2, 3, 4, 5};
    NetworkGraph g = build_graph({{1, 5, 20.0}}, ids, 10.0);  // v=0 has one graph neighbor: index 4
    Matrix coords(5, 2);
    coords.at(1, 0) = 1;   // distance 1
    coords.at(2, 0) = -1;  // distance 1
    coords.at(3, 1) = 1;   // distance 1
    coords.at(4, 0) = 3;
    AugmentedNeighborhood got = augment(g, coords, 0);
    CHECK(got.latent_neighbors == std::vector<int>{1});

    // 4 cells on a line, leftmost center, graph neighbor at the far end
    std::vector<int> ids2 = {1, 2, 3, 4};
    NetworkGraph g2 = build_graph({{1, 4, 20.0}}, ids2, 10.0);
    Matrix line(4, 2);
    for (int i = 0; i < 4; ++i) line.at(i, 0) = i;
    AugmentedNeighborhood got2 = augment(g2, line, 0);
    CHECK(got2.latent_neighbors == std::vector<int>{1});
    CHECK(got2.all() == std::vector<int>{1, 3});
}

TEST_CASE("isolated centers get no latent neighbors and caps apply") {
    std::vector<int> ids = {1, 2, 3, 4, 5, 6};
    NetworkGraph g = build_graph({{1, 2, 20.0}, {1, 3, 20.0}, {1, 4, 20.0}}, ids, 10.0);
    Matrix coords(6, 2);
    for (int i = 0; i < 6; ++i) coords.at(i, 0) = i;

    AugmentedNeighborhood iso = augment(g, coords, 5);
    CHECK(iso.graph_neighbors.empty());
    CHECK(iso.latent_neighbors.empty());
    CHECK(iso.all().empty());

    AugmentedNeighborhood capped = augment(g, coords, 0, 1);
    CHECK(capped.latent_neighbors.size() == 1);

    AugmentedNeighborhood full = augment(g, coords, 0);
    CHECK(full.latent_neighbors == std::vector<int>{4, 5});  // pool smaller than degree: take all
}
