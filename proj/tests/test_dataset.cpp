#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>

#include "a2opt/dataset.hpp"
#include "a2opt/network.hpp"
#include "a2opt/synthetic.hpp"
#include "a2opt/rng.hpp"

using namespace a2opt;

namespace {

std::vector<CellRecord> one_cell_day(int cell_id, int day, double (*users_of_hour)(int)) {
    std::vector<CellRecord> v;
    for (int h = 0; h < 24; ++h) {
        CellRecord r;
        r.cell_id = cell_id;
        r.day = day;
        r.hour = h;
        r.users = users_of_hour(h);
        r.traffic_mbit = 10;
        r.prb_ratio = 0.5;
        r.avg_cqi = 10;
        r.bandwidth_mhz = 10;
        r.tx_power_dbm = 43;
        v.push_back(r);
    }
    return v;
}

std::string temp_path(const std::string& name) {
    return std::string("/tmp/a2opt_test_") + name;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace

TEST_CASE("edges require the stronger direction to clear the threshold strictly") {
    std::vector<HandoverStat> stats = {{1, 2, 12.0}, {2, 1, 3.0}, {2, 3, 10.0}, {3, 2, 10.0}};
    NetworkGraph g = build_graph(stats, {1, 2, 3}, 10.0);
    CHECK(g.neighbors(0) == std::vector<int>{1});   // 12 > 10
    CHECK(g.neighbors(1) == std::vector<int>{0});   // 10 is not > 10
    CHECK(g.neighbors(2).empty());
}

TEST_CASE("empty statistics leave every cell isolated") {
    NetworkGraph g = build_graph({}, {5, 7, 9}, 10.0);
    for (int i = 0; i < 3; ++i) CHECK(g.degree(i) == 0);
}

TEST_CASE("graph rejects unknown cells, self loops and duplicates") {
    CHECK_THROWS_AS(build_graph({{1, 4, 20.0}}, {1, 2}, 10.0), DataError);
    CHECK_THROWS_AS(build_graph({{1, 1, 20.0}}, {1, 2}, 10.0), DataError);
    CHECK_THROWS_AS(build_graph({}, {1, 1}, 10.0), DataError);
}

TEST_CASE("graph matches exhaustive pairwise evaluation on random instances") {
    for (uint64_t seed = 0; seed < 30; ++seed) {
        Rng rng(seed);
        int n = 3 + static_cast<int>(seed % 18);
        std::vector<int> ids;
        for (int i = 0; i < n; ++i) ids.push_back(i * 3 + 1);
        std::vector<HandoverStat> stats;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                if (i == j || rng.uniform() < 0.3) continue;
                stats.push_back({ids[i], ids[j], rng.uniform(0.0, 20.0)});
            }
        double tau = rng.uniform(2.0, 15.0);
        NetworkGraph g = build_graph(stats, ids, tau);
        for (int u = 0; u < n; ++u)
            for (int v = u + 1; v < n; ++v) {
                double strongest = 0;
                for (const HandoverStat& s : stats)
                    if ((s.src == ids[u] && s.dst == ids[v]) || (s.src == ids[v] && s.dst == ids[u]))
                        strongest = std::max(strongest, s.avg_count);
                bool want = strongest > tau;
                bool got = std::binary_search(g.neighbors(u).begin(), g.neighbors(u).end(), v);
                CHECK(got == want);
            }
    }
}

TEST_CASE("aggregation splits the day into contiguous blocks") {
    auto recs = one_cell_day(1, 1, [](int h) { return static_cast<double>(h); });

    auto [mean4, temp4] = daily_aggregate(recs, 4);
    CHECK(mean4.at(0, feature::kUsers) == doctest::Approx(11.5));
    CHECK(temp4.rows == 4);
    CHECK(temp4.at(0, feature::kUsers) == doctest::Approx(2.5));
    CHECK(temp4.at(1, feature::kUsers) == doctest::Approx(8.5));
    CHECK(temp4.at(2, feature::kUsers) == doctest::Approx(14.5));
    CHECK(temp4.at(3, feature::kUsers) == doctest::Approx(20.5));

    // 24 = 5*4 + remainder: the last block covers hours 16..23
    auto [mean5, temp5] = daily_aggregate(recs, 5);
    CHECK(temp5.at(0, feature::kUsers) == doctest::Approx(1.5));
    CHECK(temp5.at(3, feature::kUsers) == doctest::Approx(13.5));
    CHECK(temp5.at(4, feature::kUsers) == doctest::Approx(19.5));

    auto [mean24, temp24] = daily_aggregate(recs, 24);
    for (int h = 0; h < 24; ++h) CHECK(temp24.at(h, feature::kUsers) == doctest::Approx(h));

    auto [mean1, temp1] = daily_aggregate(recs, 1);
    CHECK(temp1.rows == 1);
    CHECK(temp1.at(0, feature::kUsers) == doctest::Approx(mean1.at(0, feature::kUsers)));
    (void)mean24;
}

TEST_CASE("aggregation is linear in the hourly features") {
    auto recs = one_cell_day(3, 2, [](int h) { return 1.0 + 0.37 * h; });
    auto [mean, temp] = daily_aggregate(recs, 4);
    auto scaled = recs;
    const double s = 2.75;
    for (CellRecord& r : scaled) {
        r.users *= s;
        r.traffic_mbit *= s;
        r.prb_ratio = std::min(1.0, r.prb_ratio * s);  // kept in range; compare unsaturated columns
        r.avg_cqi = std::min(15.0, r.avg_cqi * s);
        r.bandwidth_mhz *= s;
        r.tx_power_dbm *= s;
    }
    auto [mean_s, temp_s] = daily_aggregate(scaled, 4);
    for (int c : {feature::kUsers, feature::kTraffic, feature::kBandwidth, feature::kTxPower}) {
        CHECK(mean_s.at(0, c) == doctest::Approx(s * mean.at(0, c)).epsilon(1e-12));
        for (int b = 0; b < 4; ++b) CHECK(temp_s.at(b, c) == doctest::Approx(s * temp.at(b, c)).epsilon(1e-12));
    }
}

TEST_CASE("aggregation rejects malformed cell-days and block counts") {
    auto recs = one_cell_day(1, 1, [](int) { return 1.0; });
    CHECK_THROWS_AS(daily_aggregate(recs, 0), DataError);
    CHECK_THROWS_AS(daily_aggregate(recs, 25), DataError);
    auto missing = recs;
    missing.pop_back();
    CHECK_THROWS_AS(daily_aggregate(missing, 4), DataError);
    auto dup = recs;
    dup[5].hour = 4;
    CHECK_THROWS_AS(daily_aggregate(dup, 4), DataError);
}

TEST_CASE("throughput ratio against the neighbor average") {
    CHECK(throughput_ratio(5.0, {4.0, 6.0}) == doctest::Approx(1.0));
    CHECK(throughput_ratio(3.0, {}) == 1.0);  // isolated cell
    CHECK_THROWS_AS(throughput_ratio(3.0, {0.0, 0.0}), DataError);
}

TEST_CASE("cells csv round-trips exactly") {
    SyntheticNetworkConfig cfg;
    cfg.cell_count = 5;
    cfg.days = 2;
    cfg.seed = 42;
    SyntheticData data = generate_synthetic(cfg);

    std::string p1 = temp_path("cells_a.csv");
    std::string p2 = temp_path("cells_b.csv");
    save_cells_csv(p1, data.records);
    std::vector<CellRecord> loaded = load_cells_csv(p1);
    REQUIRE(loaded.size() == data.records.size());
    for (size_t i = 0; i < loaded.size(); ++i) {
        CHECK(loaded[i].cell_id == data.records[i].cell_id);
        CHECK(loaded[i].users == data.records[i].users);  // bit-exact
        CHECK(loaded[i].traffic_mbit == data.records[i].traffic_mbit);
        CHECK(loaded[i].prb_ratio == data.records[i].prb_ratio);
        CHECK(loaded[i].throughput_mbps == data.records[i].throughput_mbps);
    }
    save_cells_csv(p2, loaded);
    CHECK(slurp(p1) == slurp(p2));

    std::string hp1 = temp_path("handover_a.csv");
    std::string hp2 = temp_path("handover_b.csv");
    save_handover_csv(hp1, data.handover);
    save_handover_csv(hp2, load_handover_csv(hp1));
    CHECK(slurp(hp1) == slurp(hp2));
}

TEST_CASE("csv loader pinpoints offending rows and fields") {
    std::string path = temp_path("bad_cells.csv");
    {
        std::ofstream out(path);
        out << "cell_id,day,hour,users,traffic_mbit,prb_ratio,avg_cqi,bandwidth_mhz,tx_power_dbm,a2_dbm,"
               "throughput_mbps\n";
        out << "1,1,0,10,50,0.5,10,10,43,-100,0\n";
        out << "1,1,1,10,50,1.2,10,10,43,-100,0\n";  // prb out of range
    }
    try {
        load_cells_csv(path);
        FAIL("expected throw");
    } catch (const DataError& e) {
        std::string msg = e.what();
        CHECK(msg.find(":3") != std::string::npos);
        CHECK(msg.find("prb_ratio") != std::string::npos);
    }

    std::string path2 = temp_path("bad_header.csv");
    {
        std::ofstream out(path2);
        out << "cell_id,day,hour,users\n1,1,0,10\n";
    }
    CHECK_THROWS_AS(load_cells_csv(path2), DataError);

    std::string path3 = temp_path("bad_number.csv");
    {
        std::ofstream out(path3);
        out << "cell_id,day,hour,users,traffic_mbit,prb_ratio,avg_cqi,bandwidth_mhz,tx_power_dbm,a2_dbm,"
               "throughput_mbps\n";
        out << "1,1,0,ten,50,0.5,10,10,43,-100,0\n";
    }
    try {
        load_cells_csv(path3);
        FAIL("expected throw");
    } catch (const DataError& e) {
        std::string msg = e.what();
        CHECK(msg.find(":2") != std::string::npos);
        CHECK(msg.find("users") != std::string::npos);
    }
}

TEST_CASE("synthetic generation is seed-deterministic") {
    SyntheticNetworkConfig cfg;
    cfg.cell_count = 8;
    cfg.days = 2;
    cfg.seed = 7;
    SyntheticData a = generate_synthetic(cfg);
    SyntheticData b = generate_synthetic(cfg);
    REQUIRE(a.records.size() == b.records.size());
    for (size_t i = 0; i < a.records.size(); ++i) {
        CHECK(a.records[i].traffic_mbit == b.records[i].traffic_mbit);
        CHECK(a.records[i].users == b.records[i].users);
    }
    REQUIRE(a.handover.size() == b.handover.size());
    for (size_t i = 0; i < a.handover.size(); ++i) CHECK(a.handover[i].avg_count == b.handover[i].avg_count);

    cfg.seed = 8;
    SyntheticData c = generate_synthetic(cfg);
    bool differs = false;
    for (size_t i = 0; i < a.records.size() && !differs; ++i)
        differs = a.records[i].traffic_mbit != c.records[i].traffic_mbit;
    CHECK(differs);
}

TEST_CASE("synthetic records are complete and in range") {
    SyntheticNetworkConfig cfg;
    cfg.cell_count = 12;
    cfg.days = 3;
    cfg.seed = 3;
    SyntheticData data = generate_synthetic(cfg);
    CHECK(data.records.size() == static_cast<size_t>(12 * 3 * 24));
    for (const CellRecord& r : data.records) validate_record(r, "generated");
    for (const HandoverStat& s : data.handover) CHECK(s.avg_count >= 0);
    std::set<std::pair<int, int>> seen;
    for (const HandoverStat& s : data.handover) CHECK(seen.insert({s.src, s.dst}).second);
}

TEST_CASE("default kernel yields a moderately connected 100-cell graph") {
    SyntheticNetworkConfig cfg;
    cfg.cell_count = 100;
    cfg.days = 1;
    cfg.seed = 11;
    SyntheticData data = generate_synthetic(cfg);
    NetworkGraph g = build_graph(data.handover, data.cell_ids, kDefaultHandoverTau);
    std::vector<int> deg;
    for (size_t i = 0; i < g.cell_count(); ++i) deg.push_back(g.degree(static_cast<int>(i)));
    std::sort(deg.begin(), deg.end());
    int median = deg[deg.size() / 2];
    CHECK(median >= 3);
    CHECK(median <= 10);
}

TEST_CASE("daily samples carry ratios against graph neighbors") {
    SyntheticNetworkConfig cfg;
    cfg.cell_count = 6;
    cfg.days = 1;
    cfg.seed = 5;
    SyntheticData data = generate_synthetic(cfg);
    for (CellRecord& r : data.records) r.throughput_mbps = 10.0 + r.cell_id;
    NetworkGraph g = build_graph(data.handover, data.cell_ids, kDefaultHandoverTau);
    std::vector<DailySample> samples = make_daily_samples(data.records, g, 4);
    REQUIRE(samples.size() == 6);
    for (size_t i = 0; i + 1 < samples.size(); ++i) CHECK(samples[i].cell_id < samples[i + 1].cell_id);
    for (size_t i = 0; i < samples.size(); ++i) {
        CHECK(samples[i].alpha == doctest::Approx(10.0 + samples[i].cell_id));
        if (g.degree(static_cast<int>(i)) == 0) CHECK(samples[i].beta == 1.0);
    }
}
