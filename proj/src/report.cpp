#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "a2opt/harness.hpp"
#include "a2opt/text.hpp"

namespace a2opt {

namespace {

constexpr const char* kTrajectoryHeader = "day,policy,repeat,network_throughput,diff_to_default";
constexpr const char* kRatioHeader = "day,cell_id,beta";
constexpr const char* kMseHeader = "day,variant,target,mse";

// two-sided 95% critical values, one per degree of freedom
constexpr double kT95[30] = {12.706, 4.303, 3.182, 2.776, 2.571, 2.447, 2.365, 2.306, 2.262, 2.228,
                             2.201,  2.179, 2.160, 2.145, 2.131, 2.120, 2.110, 2.101, 2.093, 2.086,
                             2.080,  2.074, 2.069, 2.064, 2.060, 2.056, 2.052, 2.048, 2.045, 2.042};

double t95(int df) {
    if (df < 1) return 0.0;
    if (df <= 30) return kT95[df - 1];
    return 1.96;
}

std::string fmt(double v, int prec) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", prec, v);
    return buf;
}

std::string pad(const std::string& s, size_t width) {
    std::string out = s;
    while (out.size() < width) out += ' ';
    return out;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path);
    out << content;
    if (!out) throw DataError("write failed for " + path);
}

std::vector<std::string> read_rows(const std::string& path, const std::string& header) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot read " + path);
    std::string line;
    if (!std::getline(in, line) || line != header)
        throw DataError(path + ": expected header '" + header + "'");
    std::vector<std::string> rows;
    while (std::getline(in, line))
        if (!line.empty()) rows.push_back(line);
    return rows;
}

std::vector<std::string> fields(const std::string& line, size_t n, const std::string& path) {
    std::vector<std::string> f = split(line, ',');
    if (f.size() != n) throw DataError(path + ": malformed row '" + line + "'");
    return f;
}

double mean_of(const std::vector<double>& vs) {
    double s = 0;
    for (double v : vs) s += v;
    return s / static_cast<double>(vs.size());
}

// mean over the final window of each repeat, one value per repeat
struct WindowStats {
    std::vector<double> per_repeat;
    double mean = 0;
    double ci_half = 0;  // 0 for a single repeat
};

WindowStats window_stats(const std::vector<double>& per_repeat) {
    WindowStats w;
    w.per_repeat = per_repeat;
    w.mean = mean_of(per_repeat);
    size_t n = per_repeat.size();
    if (n > 1) {
        double ss = 0;
        for (double v : per_repeat) ss += (v - w.mean) * (v - w.mean);
        double sd = std::sqrt(ss / static_cast<double>(n - 1));
        w.ci_half = t95(static_cast<int>(n) - 1) * sd / std::sqrt(static_cast<double>(n));
    }
    return w;
}

}  // namespace

std::string render_summary(const MetricsReport& report) {
    std::ostringstream out;

    if (!report.trajectory.empty()) {
        int window = std::min(4, report.days);
        int first_day = report.days - window + 1;

        // (policy, repeat) -> final-window throughput and diff means
        std::map<std::string, std::map<int, std::vector<double>>> tp, diff;
        for (const TrajectoryRow& r : report.trajectory) {
            if (r.day < first_day) continue;
            tp[r.policy][r.repeat].push_back(r.throughput);
            diff[r.policy][r.repeat].push_back(r.diff_to_default);
        }
        auto collect = [&](std::map<std::string, std::map<int, std::vector<double>>>& by_arm,
                           const std::string& arm) {
            std::vector<double> per_repeat;
            for (auto& [rep, vals] : by_arm[arm]) per_repeat.push_back(mean_of(vals));
            return per_repeat;
        };

        out << "closed loop: " << report.days << " days, " << report.repeats << " repeats, final " << window
            << "-day window\n\n";
        out << pad("arm", 18) << pad("throughput", 14) << pad("95% ci", 12) << pad("vs default", 14);
        bool have_optimal =
            std::find(report.policies.begin(), report.policies.end(), "optimal") != report.policies.end();
        if (have_optimal) out << "vs optimal";
        out << "\n";

        std::vector<double> opt_repeat;
        if (have_optimal) opt_repeat = collect(tp, "optimal");
        for (const std::string& arm : report.policies) {
            WindowStats wt = window_stats(collect(tp, arm));
            WindowStats wd = window_stats(collect(diff, arm));
            out << pad(arm, 18) << pad(fmt(wt.mean, 4), 14)
                << pad(wt.per_repeat.size() > 1 ? "+/-" + fmt(wt.ci_half, 4) : "n/a", 12)
                << pad(fmt(wd.mean, 4), 14);
            if (have_optimal) {
                std::vector<double> ratios;
                std::vector<double> arm_repeat = wt.per_repeat;
                for (size_t i = 0; i < arm_repeat.size() && i < opt_repeat.size(); ++i)
                    ratios.push_back(arm_repeat[i] / opt_repeat[i]);
                out << fmt(mean_of(ratios), 4);
            }
            out << "\n";
        }
    }

    if (!report.ratios.empty()) {
        std::map<int, double> first, last;
        int max_day = 0;
        for (const RatioRow& r : report.ratios) max_day = std::max(max_day, r.day);
        for (const RatioRow& r : report.ratios) {
            if (r.day == 1 && !first.count(r.cell_id)) first[r.cell_id] = r.beta;
            if (r.day == max_day) last[r.cell_id] = r.beta;
        }
        int improved = 0, total = 0;
        for (const auto& [cell, b1] : first) {
            auto it = last.find(cell);
            if (it == last.end()) continue;
            ++total;
            if (std::fabs(1.0 - it->second) < std::fabs(1.0 - b1)) ++improved;
        }
        out << "\ntracked cells (" << report.primary_arm << " arm): ratio balance improved for " << improved
            << " of " << total << "\n";
    }

    if (!report.mse.empty()) {
        std::vector<std::string> variants;
        for (const MseRow& r : report.mse)
            if (std::find(variants.begin(), variants.end(), r.variant) == variants.end())
                variants.push_back(r.variant);
        out << (report.trajectory.empty() ? "" : "\n") << "average accuracy rank (lower is better)\n\n";
        out << pad("variant", 18) << pad("ratio", 12) << "throughput\n";
        for (const std::string& v : variants) {
            auto rank_of = [&](const std::string& target) {
                auto it = report.avg_rank.find(v + "/" + target);
                return it == report.avg_rank.end() ? std::string("n/a") : fmt(it->second, 2);
            };
            out << pad(v, 18) << pad(rank_of("ratio"), 12) << rank_of("throughput") << "\n";
        }
    }

    std::string text = out.str();
    if (text.empty()) throw DataError("render_summary: empty report");
    return text;
}

void emit_report(const MetricsReport& report, const std::string& out_dir) {
    if (report.trajectory.empty() && report.mse.empty()) throw DataError("emit_report: empty report");
    std::filesystem::create_directories(out_dir);

    std::ostringstream tr;
    tr << kTrajectoryHeader << "\n";
    for (const TrajectoryRow& r : report.trajectory)
        tr << r.day << "," << r.policy << "," << r.repeat << "," << to_decimal(r.throughput) << ","
           << to_decimal(r.diff_to_default) << "\n";
    write_file(out_dir + "/trajectory.csv", tr.str());

    std::ostringstream ra;
    ra << kRatioHeader << "\n";
    for (const RatioRow& r : report.ratios)
        ra << r.day << "," << r.cell_id << "," << to_decimal(r.beta) << "\n";
    write_file(out_dir + "/ratio_trajectories.csv", ra.str());

    std::ostringstream ms;
    ms << kMseHeader << "\n";
    for (const MseRow& r : report.mse)
        ms << r.day << "," << r.variant << "," << r.target << "," << to_decimal(r.mse) << "\n";
    write_file(out_dir + "/mse.csv", ms.str());

    write_file(out_dir + "/summary.txt", render_summary(report));
    write_file(out_dir + "/config.txt", report.config_echo);
}

MetricsReport load_report(const std::string& dir) {
    MetricsReport report;

    ExperimentConfig cfg = ExperimentConfig::from_key_values(KeyValues::load(dir + "/config.txt"));
    report.config_echo = cfg.echo();
    for (Policy p : cfg.policies) report.policies.push_back(policy_name(p));
    report.days = cfg.days;
    report.primary_arm = resolve_primary_arm(cfg.policies, cfg.ratio_arm);

    std::string path = dir + "/trajectory.csv";
    for (const std::string& line : read_rows(path, kTrajectoryHeader)) {
        std::vector<std::string> f = fields(line, 5, path);
        report.trajectory.push_back({static_cast<int>(parse_long(f[0])), f[1], static_cast<int>(parse_long(f[2])),
                                     parse_double(f[3]), parse_double(f[4])});
    }
    report.repeats = report.trajectory.empty() ? 1 : cfg.repeats;

    path = dir + "/ratio_trajectories.csv";
    for (const std::string& line : read_rows(path, kRatioHeader)) {
        std::vector<std::string> f = fields(line, 3, path);
        report.ratios.push_back(
            {static_cast<int>(parse_long(f[0])), static_cast<int>(parse_long(f[1])), parse_double(f[2])});
    }

    path = dir + "/mse.csv";
    for (const std::string& line : read_rows(path, kMseHeader)) {
        std::vector<std::string> f = fields(line, 4, path);
        report.mse.push_back({static_cast<int>(parse_long(f[0])), f[1], f[2], parse_double(f[3])});
    }

    if (report.trajectory.empty() && report.mse.empty()) throw DataError("load_report: empty report in " + dir);
    report.avg_rank = average_ranks(report.mse);
    return report;
}

}  // namespace a2opt
