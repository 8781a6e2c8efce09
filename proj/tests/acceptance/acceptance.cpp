#include <chgeom/potential.hpp>
#include <chgeom/quadrangle.hpp>
#include <chgeom/sweep.hpp>

#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "properties.hpp"

namespace {

using Clock = std::chrono::steady_clock;

enum class Verdict { Pass, Fail, Skip };

int g_failures = 0;

void report(int id, const std::string& name, Verdict v, const std::string& detail, Clock::time_point start) {
    const double secs = std::chrono::duration<double>(Clock::now() - start).count();
    const char* tag = v == Verdict::Pass ? "PASS" : v == Verdict::Fail ? "FAIL" : "SKIP";
    if (v == Verdict::Fail) ++g_failures;
    std::printf("%s  %d  %-28s %s (%.1f s)\n", tag, id, name.c_str(), detail.c_str(), secs);
    std::fflush(stdout);
}

std::vector<chg::ExampleRecord> collect(int n_min, int n_max) {
    chg::SweepConfig cfg;
    cfg.n_min = n_min;
    cfg.n_max = n_max;
    std::vector<chg::ExampleRecord> out;
    chg::run_sweep(cfg, [&](const chg::UnitResult& u) { out.insert(out.end(), u.accepted.begin(), u.accepted.end()); });
    return out;
}

void criterion1(std::vector<chg::ExampleRecord>& pool) {
    const auto start = Clock::now();
    chg::SweepConfig cfg;
    cfg.n_min = 3;
    cfg.n_max = 12;
    cfg.threads = 1;
    std::map<int, long> counts;
    chg::run_sweep(cfg, [&](const chg::UnitResult& u) {
        counts[u.n] = static_cast<long>(u.accepted.size());
        pool.insert(pool.end(), u.accepted.begin(), u.accepted.end());
    });
    bool ok = true;
    std::ostringstream d;
    for (int n = 3; n <= 12; ++n) {
        const bool want = n == 9 || n == 10;
        if ((counts[n] > 0) != want) ok = false;
        if (counts[n] > 0) d << "n=" << n << ":" << counts[n] << ' ';
    }
    d << "others 0";
    report(1, "small-n existence", ok ? Verdict::Pass : Verdict::Fail, d.str(), start);
}

void criteria23(const std::string& dir) {
    auto start = Clock::now();
    std::vector<chg::TableDiff> diffs;
    try {
        diffs = chg::verify_tables(dir, chg::SweepConfig{});
    } catch (const std::exception& e) {
        report(2, "table reproduction", Verdict::Fail, e.what(), start);
        report(3, "n=101 census", Verdict::Fail, e.what(), start);
        return;
    }
    bool ok2 = true;
    std::ostringstream d2;
    for (const chg::TableDiff& t : diffs) {
        if (t.table.rfind("n101", 0) == 0) continue;
        ok2 = ok2 && t.mismatches.empty();
        d2 << t.table << ' ' << t.rows << (t.mismatches.empty() ? " ok; " : " MISMATCH; ");
    }
    report(2, "table reproduction", ok2 ? Verdict::Pass : Verdict::Fail, d2.str(), start);
    for (const chg::TableDiff& t : diffs) {
        if (t.table.rfind("n101", 0) != 0) continue;
        std::ostringstream d3;
        d3 << t.rows << " tuples, " << t.mismatches.size() << " mismatches";
        for (std::size_t i = 0; i < t.mismatches.size() && i < 5; ++i) d3 << "; " << t.mismatches[i];
        report(3, "n=101 census", t.mismatches.empty() ? Verdict::Pass : Verdict::Fail, d3.str(), start);
    }
}

void criterion4() {
    const auto start = Clock::now();
    chg::SweepConfig cfg;
    cfg.n_min = 3;
    cfg.n_max = 200;
    long checked = 0, violations = 0, errors = 0;
    std::string first;
    chg::run_sweep(cfg, [&](const chg::UnitResult& u) {
        errors += static_cast<long>(u.errors.size());
        for (const chg::ExampleRecord& r : u.accepted) {
            ++checked;
            const std::vector<std::string> v = chg::law_violations(r);
            violations += static_cast<long>(v.size());
            if (!v.empty() && first.empty()) first = v.front();
        }
        violations += static_cast<long>(u.violations.size());
        if (!u.violations.empty() && first.empty()) first = u.violations.front().what;
    });
    std::ostringstream d;
    d << checked << " records, " << violations << " violations, " << errors << " degeneracies";
    if (!first.empty()) d << "; first: " << first;
    report(4, "empirical laws n<=200", violations == 0 && errors == 0 && checked > 0 ? Verdict::Pass : Verdict::Fail,
           d.str(), start);
}

void criterion5(const std::string& summary_path) {
    const auto start = Clock::now();
    if (summary_path.empty()) {
        report(5, "full census n<=1001", Verdict::Skip, "optional; pass --census-summary <chgsweep census summary>",
               start);
        return;
    }
    std::ifstream in(summary_path);
    if (!in) {
        report(5, "full census n<=1001", Verdict::Fail, "cannot read " + summary_path, start);
        return;
    }
    const nlohmann::json j = nlohmann::json::parse(in);
    const long total = j.at("total_accepted"), integer = j.at("integer_tau_count");
    const long empty = j.value("n_ge_13_without_examples", -1L);
    const long violations = j.value("violations", 0L);
    const auto& per_n = j.at("per_n_counts");
    bool covered = per_n.size() == 993;
    long sum = 0;
    for (const auto& [n, c] : per_n.items()) sum += c.get<long>();
    std::ostringstream d;
    d << "total " << total << " (want 308359), integer tau " << integer << " (want 89546), marginal "
      << j.value("marginal_count", 0L) << ", n>=13 without examples " << empty;
    const bool ok = covered && sum == total && total == 308359 && integer == 89546 && empty == 0 && violations == 0;
    report(5, "full census n<=1001", ok ? Verdict::Pass : Verdict::Fail, d.str(), start);
}

void criterion6(const std::vector<chg::ExampleRecord>& toledo_pool) {
    using namespace chgtest;
    const auto start = Clock::now();
    std::ostringstream d;
    bool ok = true;
    auto prop = [&](const char* name, const PropertyResult& r, double tol) {
        const bool good = r.ok() && r.worst < tol;
        ok = ok && good;
        d << name << ' ' << r.samples << "/" << r.failures << " worst " << r.worst << (good ? "" : " FAILED") << "; ";
    };
    prop("trace", trace_agreement(101, 10000), 1e-9);
    prop("abs-trace", abs_trace_agreement(102, 10000), 1e-9);
    const PropertyResult tv = transversality_agreement(103, 1000, 1e-4, 61);
    ok = ok && tv.ok();
    d << "transversality " << tv.samples << "/" << tv.failures << " (skipped " << tv.skipped << "); ";
    prop("C-plane", cplane_rotation(104, 10000), 1e-8);
    const RichardsonResult dp = dP_residual(105, 200);
    const bool dp_ok = dp.residual < 1e-5 && dp.ratio_min >= 3.5 && dp.ratio_max <= 4.5;
    ok = ok && dp_ok;
    d << "dP " << dp.residual << " ratio [" << dp.ratio_min << "," << dp.ratio_max << "]" << (dp_ok ? "" : " FAILED")
      << "; ";
    prop("arclength", arclength_agreement(106, 1000), 1e-6);

    long toledo_bad = 0;
    for (const chg::ExampleRecord& r : toledo_pool) {
        const std::optional<chg::QuadrangleData> D = chg::build(r.params);
        if (!D) {
            ++toledo_bad;
            continue;
        }
        try {
            const chg::ToledoIntegral ti = chg::toledo_by_integral(*D);
            const long deg = r.params.n % 2 == 0 ? 2 : 4;
            const double want = 2.0 * r.t - 3.0 * r.params.n;
            if (std::abs(3.0 * ti.value - want) > 1e-9 * r.params.n || deg * ti.num3 != r.tau3) ++toledo_bad;
        } catch (const std::exception&) {
            ++toledo_bad;
        }
    }
    ok = ok && toledo_bad == 0 && !toledo_pool.empty();
    d << "toledo integral " << toledo_pool.size() << "/" << toledo_bad << "; ";

    const PropertyResult fh = no_forbidden_holonomy(107, 100000);
    ok = ok && fh.ok();
    d << "forbidden holonomy " << fh.samples << "/" << fh.failures;
    report(6, "formula cross-checks", ok ? Verdict::Pass : Verdict::Fail, d.str(), start);
}

}  // namespace

int main(int argc, char** argv) {
    std::string table_dir = CHGEOM_TABLE_DIR, census_summary;
    if (const char* env = std::getenv("CHGEOM_CENSUS_SUMMARY")) census_summary = env;
    for (int i = 1; i < argc; ++i) {
        const std::string a = argv[i];
        if (a == "--census-summary" && i + 1 < argc)
            census_summary = argv[++i];
        else if (a == "--data-dir" && i + 1 < argc)
            table_dir = argv[++i];
        else {
            std::cerr << "usage: acceptance [--data-dir DIR] [--census-summary FILE]\n";
            return 2;
        }
    }

    std::vector<chg::ExampleRecord> pool;
    criterion1(pool);
    criteria23(table_dir);
    criterion4();
    criterion5(census_summary);

    // Tuples of the first three criteria: n <= 53 and n = 101.
    std::vector<chg::ExampleRecord> toledo_pool = collect(13, 53);
    toledo_pool.insert(toledo_pool.end(), pool.begin(), pool.end());
    const std::vector<chg::ExampleRecord> n101 = collect(101, 101);
    toledo_pool.insert(toledo_pool.end(), n101.begin(), n101.end());
    criterion6(toledo_pool);

    std::printf("%s: %d failing criteria\n", g_failures == 0 ? "ACCEPTED" : "REJECTED", g_failures);
    return g_failures == 0 ? 0 : 1;
}
