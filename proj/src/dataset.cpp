#include "a2opt/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>

#include "a2opt/network.hpp"
#include "a2opt/text.hpp"

namespace a2opt {

namespace {

const char* kCellsHeader =
    "cell_id,day,hour,users,traffic_mbit,prb_ratio,avg_cqi,bandwidth_mhz,tx_power_dbm,a2_dbm,throughput_mbps";
const char* kHandoverHeader = "src,dst,avg_count";

[[noreturn]] void field_error(const std::string& path, size_t line, const std::string& field,
                              const std::string& detail) {
    throw DataError(path + ":" + std::to_string(line) + ": field '" + field + "': " + detail);
}

double parse_field(const std::string& token, const std::string& path, size_t line, const std::string& field) {
    try {
        return parse_double(token);
    } catch (const std::exception& e) {
        field_error(path, line, field, e.what());
    }
}

int parse_int_field(const std::string& token, const std::string& path, size_t line, const std::string& field) {
    try {
        return static_cast<int>(parse_long(token));
    } catch (const std::exception& e) {
        field_error(path, line, field, e.what());
    }
}

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path);
    return in;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path);
    return out;
}

void expect_header(std::ifstream& in, const std::string& path, const char* want) {
    std::string line;
    if (!std::getline(in, line)) throw DataError(path + ": empty file, expected header '" + std::string(want) + "'");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != want)
        throw DataError(path + ": bad header, expected '" + std::string(want) + "', got '" + line + "'");
}

}  // namespace

void validate_record(const CellRecord& r, const std::string& where) {
    auto bad = [&](const std::string& field, const std::string& detail) {
        throw DataError(where + ": field '" + field + "': " + detail);
    };
    if (r.day < 1) bad("day", "must be >= 1, got " + std::to_string(r.day));
    if (r.hour < 0 || r.hour > 23) bad("hour", "must be in 0..23, got " + std::to_string(r.hour));
    if (!(r.users >= 0)) bad("users", "must be >= 0, got " + to_decimal(r.users));
    if (!(r.traffic_mbit >= 0)) bad("traffic_mbit", "must be >= 0, got " + to_decimal(r.traffic_mbit));
    if (!(r.prb_ratio >= 0 && r.prb_ratio <= 1)) bad("prb_ratio", "must be in [0,1], got " + to_decimal(r.prb_ratio));
    if (!(r.avg_cqi >= 1 && r.avg_cqi <= 15)) bad("avg_cqi", "must be in [1,15], got " + to_decimal(r.avg_cqi));
    if (!(r.bandwidth_mhz > 0)) bad("bandwidth_mhz", "must be > 0, got " + to_decimal(r.bandwidth_mhz));
    if (!std::isfinite(r.tx_power_dbm)) bad("tx_power_dbm", "must be finite");
    if (!std::isfinite(r.a2_dbm)) bad("a2_dbm", "must be finite");
    if (!(r.throughput_mbps >= 0)) bad("throughput_mbps", "must be >= 0, got " + to_decimal(r.throughput_mbps));
}

Matrix record_features(const CellRecord& r) {
    return Matrix::row({r.users, r.traffic_mbit, r.prb_ratio, r.avg_cqi, r.bandwidth_mhz, r.tx_power_dbm});
}

std::vector<CellRecord> load_cells_csv(const std::string& path) {
    std::ifstream in = open_in(path);
    expect_header(in, path, kCellsHeader);
    std::vector<CellRecord> out;
    std::string line;
    size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> f = split(line, ',');
        if (f.size() != 11)
            throw DataError(path + ":" + std::to_string(lineno) + ": expected 11 fields, got " +
                            std::to_string(f.size()));
        CellRecord r;
        r.cell_id = parse_int_field(f[0], path, lineno, "cell_id");
        r.day = parse_int_field(f[1], path, lineno, "day");
        r.hour = parse_int_field(f[2], path, lineno, "hour");
        r.users = parse_field(f[3], path, lineno, "users");
        r.traffic_mbit = parse_field(f[4], path, lineno, "traffic_mbit");
        r.prb_ratio = parse_field(f[5], path, lineno, "prb_ratio");
        r.avg_cqi = parse_field(f[6], path, lineno, "avg_cqi");
        r.bandwidth_mhz = parse_field(f[7], path, lineno, "bandwidth_mhz");
        r.tx_power_dbm = parse_field(f[8], path, lineno, "tx_power_dbm");
        r.a2_dbm = parse_field(f[9], path, lineno, "a2_dbm");
        r.throughput_mbps = parse_field(f[10], path, lineno, "throughput_mbps");
        validate_record(r, path + ":" + std::to_string(lineno));
        out.push_back(r);
    }
    return out;
}

void save_cells_csv(const std::string& path, const std::vector<CellRecord>& records) {
    for (size_t i = 0; i < records.size(); ++i) validate_record(records[i], "record " + std::to_string(i));
    std::ofstream out = open_out(path);
    out << kCellsHeader << "\n";
    for (const CellRecord& r : records) {
        out << r.cell_id << ',' << r.day << ',' << r.hour << ',' << to_decimal(r.users) << ','
            << to_decimal(r.traffic_mbit) << ',' << to_decimal(r.prb_ratio) << ',' << to_decimal(r.avg_cqi) << ','
            << to_decimal(r.bandwidth_mhz) << ',' << to_decimal(r.tx_power_dbm) << ',' << to_decimal(r.a2_dbm) << ','
            << to_decimal(r.throughput_mbps) << "\n";
    }
}

std::vector<HandoverStat> load_handover_csv(const std::string& path) {
    std::ifstream in = open_in(path);
    expect_header(in, path, kHandoverHeader);
    std::vector<HandoverStat> out;
    std::string line;
    size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> f = split(line, ',');
        if (f.size() != 3)
            throw DataError(path + ":" + std::to_string(lineno) + ": expected 3 fields, got " +
                            std::to_string(f.size()));
        HandoverStat s;
        s.src = parse_int_field(f[0], path, lineno, "src");
        s.dst = parse_int_field(f[1], path, lineno, "dst");
        s.avg_count = parse_field(f[2], path, lineno, "avg_count");
        if (s.src == s.dst) field_error(path, lineno, "dst", "src and dst must differ");
        if (!(s.avg_count >= 0)) field_error(path, lineno, "avg_count", "must be >= 0, got " + f[2]);
        out.push_back(s);
    }
    return out;
}

void save_handover_csv(const std::string& path, const std::vector<HandoverStat>& stats) {
    std::ofstream out = open_out(path);
    out << kHandoverHeader << "\n";
    for (const HandoverStat& s : stats) out << s.src << ',' << s.dst << ',' << to_decimal(s.avg_count) << "\n";
}

std::pair<Matrix, Matrix> daily_aggregate(const std::vector<CellRecord>& cell_day, int k) {
    if (cell_day.size() != kHoursPerDay)
        throw DataError("daily_aggregate: expected 24 hourly records, got " + std::to_string(cell_day.size()));
    if (k < 1 || k > kHoursPerDay)
        throw DataError("daily_aggregate: K must be in 1..24, got " + std::to_string(k));

    std::vector<const CellRecord*> by_hour(kHoursPerDay, nullptr);
    for (const CellRecord& r : cell_day) {
        if (r.cell_id != cell_day.front().cell_id || r.day != cell_day.front().day)
            throw DataError("daily_aggregate: records span more than one cell-day");
        if (by_hour[r.hour]) throw DataError("daily_aggregate: duplicate hour " + std::to_string(r.hour));
        by_hour[r.hour] = &r;
    }

    Matrix hourly(kHoursPerDay, kFeatureDim);
    for (int h = 0; h < kHoursPerDay; ++h) {
        Matrix f = record_features(*by_hour[h]);
        for (int c = 0; c < kFeatureDim; ++c) hourly.at(h, c) = f.at(0, c);
    }

    Matrix mean(1, kFeatureDim);
    for (int h = 0; h < kHoursPerDay; ++h)
        for (int c = 0; c < kFeatureDim; ++c) mean.at(0, c) += hourly.at(h, c);
    for (double& v : mean.data) v /= kHoursPerDay;

    // contiguous blocks of size floor(24/K); the last absorbs the remainder
    int base = kHoursPerDay / k;
    Matrix temporal(k, kFeatureDim);
    for (int b = 0; b < k; ++b) {
        int lo = b * base;
        int hi = (b == k - 1) ? kHoursPerDay : (b + 1) * base;
        for (int h = lo; h < hi; ++h)
            for (int c = 0; c < kFeatureDim; ++c) temporal.at(b, c) += hourly.at(h, c);
        for (int c = 0; c < kFeatureDim; ++c) temporal.at(b, c) /= (hi - lo);
    }
    return {std::move(mean), std::move(temporal)};
}

double throughput_ratio(double alpha, const std::vector<double>& neighbor_alphas) {
    if (neighbor_alphas.empty()) return 1.0;
    double mean = 0;
    for (double a : neighbor_alphas) mean += a;
    mean /= static_cast<double>(neighbor_alphas.size());
    if (mean <= 0) throw DataError("throughput_ratio: neighbor mean throughput is not positive");
    return alpha / mean;
}

std::vector<DailySample> make_daily_samples(const std::vector<CellRecord>& day_records, const NetworkGraph& graph,
                                            int k) {
    if (day_records.empty()) throw DataError("make_daily_samples: no records");
    int day = day_records.front().day;
    std::map<int, std::vector<CellRecord>> by_cell;
    for (const CellRecord& r : day_records) {
        if (r.day != day) throw DataError("make_daily_samples: records span more than one day");
        by_cell[r.cell_id].push_back(r);
    }

    std::vector<DailySample> out;
    std::vector<double> alphas(graph.cell_count(), 0.0);
    for (size_t i = 0; i < graph.cell_count(); ++i) {
        int id = graph.cell_ids[i];
        auto it = by_cell.find(id);
        if (it == by_cell.end()) throw DataError("make_daily_samples: cell " + std::to_string(id) + " has no records");
        DailySample s;
        s.cell_id = id;
        s.day = day;
        auto [mean, temporal] = daily_aggregate(it->second, k);
        s.mean_features = std::move(mean);
        s.temporal = std::move(temporal);
        double a = 0;
        for (const CellRecord& r : it->second) a += r.throughput_mbps;
        s.alpha = a / static_cast<double>(it->second.size());
        s.a2_dbm = it->second.front().a2_dbm;
        for (const CellRecord& r : it->second)
            if (r.a2_dbm != s.a2_dbm)
                throw DataError("make_daily_samples: cell " + std::to_string(id) + " changes a2_dbm within a day");
        alphas[i] = s.alpha;
        out.push_back(std::move(s));
    }
    for (size_t i = 0; i < out.size(); ++i) {
        std::vector<double> na;
        for (int j : graph.neighbors(static_cast<int>(i))) na.push_back(alphas[j]);
        out[i].beta = throughput_ratio(out[i].alpha, na);
    }
    return out;
}

}  // namespace a2opt
