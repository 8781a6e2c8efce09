#include <chgeom/sweep.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#ifndef CHGEOM_DEFAULT_DATA_DIR
#define CHGEOM_DEFAULT_DATA_DIR "data/tables"
#endif

namespace {

using json = nlohmann::json;

enum Exit { kOk = 0, kMismatch = 1, kConfig = 2, kViolation = 3 };

// Command-line values; each overrides config file and environment only when given.
struct Flags {
    std::string config;
    int n_min = 0, n_max = 0;
    double margin = 0, band = 0, z_seed = 0;
    std::string threads, format, out;
    std::vector<std::string> filters;
    bool verify_identities = false;
    CLI::Option *o_n_min = nullptr, *o_n_max = nullptr, *o_margin = nullptr, *o_band = nullptr, *o_z = nullptr,
                *o_threads = nullptr, *o_format = nullptr, *o_out = nullptr, *o_filter = nullptr,
                *o_verify = nullptr;
};

void add_common(CLI::App* app, Flags& f, bool range) {
    app->add_option("--config", f.config, "Flat key=value config file");
    if (range) {
        f.o_n_min = app->add_option("--n-min", f.n_min, "Smallest n");
        f.o_n_max = app->add_option("--n-max", f.n_max, "Largest n");
    }
    f.o_margin = app->add_option("--margin", f.margin, "Strictness margin for strict conditions");
    f.o_band = app->add_option("--marginal-band", f.band, "Slack below which a tuple is flagged marginal");
    f.o_threads = app->add_option("--threads", f.threads, "Worker threads or 'auto'");
    f.o_format = app->add_option("--format", f.format, "Output format")->check(CLI::IsMember({"csv", "jsonl", "text", "json"}));
    f.o_out = app->add_option("--out", f.out, "Output path (default stdout)");
    f.o_filter = app->add_option("--filter", f.filters, "integer_tau, real_hyperbolic, extremes")->delimiter(',');
    f.o_z = app->add_option("--z-seed", f.z_seed, "Boundary angle used for f");
    f.o_verify = app->add_flag("--verify-identities", f.verify_identities, "Check the cycle identities per tuple");
}

chg::SweepConfig resolve(const Flags& f, chg::SweepConfig cfg) {
    if (!f.config.empty()) chg::apply_config_file(cfg, f.config);
    if (const auto t = chg::threads_from_env()) cfg.threads = *t;
    std::ostringstream kv;
    if (f.o_n_min && *f.o_n_min) kv << "n_min=" << f.n_min << '\n';
    if (f.o_n_max && *f.o_n_max) kv << "n_max=" << f.n_max << '\n';
    if (*f.o_margin) kv << "margin=" << f.margin << '\n';
    if (*f.o_band) kv << "marginal_band=" << f.band << '\n';
    if (*f.o_threads) kv << "threads=" << f.threads << '\n';
    if (*f.o_format && (f.format == "csv" || f.format == "jsonl")) kv << "format=" << f.format << '\n';
    if (*f.o_out) kv << "out=" << f.out << '\n';
    if (*f.o_filter) {
        kv << "filter=";
        for (std::size_t i = 0; i < f.filters.size(); ++i) kv << (i ? "," : "") << f.filters[i];
        kv << '\n';
    }
    if (*f.o_verify) kv << "verify_identities=" << (f.verify_identities ? 1 : 0) << '\n';
    std::string text = kv.str();
    if (*f.o_z) {
        std::ostringstream z;
        z.precision(17);
        z << "z_seed=" << f.z_seed << '\n';
        text += z.str();
    }
    chg::apply_config_text(cfg, text);
    cfg.validate();
    return cfg;
}

json to_json(const chg::ExampleRecord& r) {
    return {{"n", r.params.n},       {"l", r.params.l},   {"k", r.params.k},
            {"p", r.params.p},       {"f", r.f},          {"t", r.t},
            {"genus", r.genus},      {"chi", r.chi},      {"e", r.e},
            {"tau", chg::tau_string(r.tau3)},             {"e_P", r.e_P},
            {"orb_e", chg::to_string(r.orb_e)},           {"marginal", r.marginal ? 1 : 0}};
}

json params_json(const chg::Params& P) { return json::array({P.n, P.l, P.k, P.p}); }

class Sink {
public:
    explicit Sink(const std::string& path, bool append = false) {
        if (!path.empty()) {
            file_ = std::make_unique<std::ofstream>(path, append ? std::ios::app : std::ios::trunc);
            if (!*file_) throw std::runtime_error("cannot open " + path);
        }
    }
    std::ostream& os() { return file_ ? *file_ : std::cout; }

private:
    std::unique_ptr<std::ofstream> file_;
};

void write_record(std::ostream& os, chg::OutputFormat fmt, const chg::ExampleRecord& r) {
    if (fmt == chg::OutputFormat::Csv)
        os << chg::csv_row(r) << '\n';
    else
        os << to_json(r).dump() << '\n';
}

json summary_json(const chg::CensusSummary& s) {
    json per_n = json::object();
    for (const auto& [n, c] : s.per_n_counts) per_n[std::to_string(n)] = c;
    return {{"candidates", s.candidates},
            {"total_accepted", s.total_accepted},
            {"integer_tau_count", s.integer_tau_count},
            {"marginal_count", s.marginal_count},
            {"c_fuchsian_discarded", s.c_fuchsian_discarded},
            {"q7_only_failures", s.q7_only_failures},
            {"errors", s.error_count},
            {"violations", s.violation_count},
            {"wall_time_s", s.wall_time},
            {"per_n_counts", per_n}};
}

void report_issues(const chg::UnitResult& u) {
    for (const auto& e : u.errors)
        std::cerr << "error M(" << e.params.n << ',' << e.params.l << ',' << e.params.k << ',' << e.params.p
                  << "): " << e.what << '\n';
    for (const auto& v : u.violations)
        std::cerr << "violation M(" << v.params.n << ',' << v.params.l << ',' << v.params.k << ',' << v.params.p
                  << "): " << v.what << '\n';
}

int run_sweep_cmd(const chg::SweepConfig& cfg) {
    Sink sink(cfg.output_path);
    std::ostream& os = sink.os();
    if (cfg.output_format == chg::OutputFormat::Csv) os << chg::csv_header() << '\n';
    const bool want_extremes = cfg.filters.count(chg::Filter::Extremes) > 0;
    std::vector<chg::ExampleRecord> held;
    const chg::CensusSummary s = chg::run_sweep(cfg, [&](const chg::UnitResult& u) {
        report_issues(u);
        for (const chg::ExampleRecord& r : u.accepted) {
            if (!chg::passes_filters(r, cfg.filters)) continue;
            if (want_extremes)
                held.push_back(r);
            else
                write_record(os, cfg.output_format, r);
        }
    });
    for (const chg::ExampleRecord& r : chg::extremes(held)) write_record(os, cfg.output_format, r);
    os.flush();
    std::cerr << summary_json(s).dump() << '\n';
    return s.violation_count > 0 ? kViolation : kOk;
}

json report_json(const chg::TupleReport& rep) {
    json conds = json::array();
    for (int c = 0; c < chg::kCondCount; ++c) {
        const chg::ConditionResult& r = rep.conditions.cond[c];
        json j = {{"name", chg::cond_name(c)}, {"evaluated", r.evaluated}};
        if (r.evaluated) {
            j["pass"] = r.pass;
            j["slack"] = r.slack;
            j["marginal"] = r.marginal;
        }
        conds.push_back(j);
    }
    json out = {{"params", params_json(rep.params)},
                {"accepted", rep.accepted()},
                {"built", rep.built},
                {"c_fuchsian", rep.c_fuchsian},
                {"conditions", conds},
                {"errors", rep.errors},
                {"laws_violated", rep.laws_violated}};
    if (rep.conditions.first_failure >= 0) out["first_failure"] = chg::cond_name(rep.conditions.first_failure);
    if (rep.record) {
        out["record"] = to_json(*rep.record);
        out["orb_tau"] = chg::to_string(rep.record->orb_tau);
        out["o_y"] = rep.record->o_y;
        out["o_z"] = rep.record->o_z;
    }
    if (rep.f) {
        auto cls = [](const chg::SliceClass& c) {
            return json{{"tag", chg::to_string(c.tag)}, {"abs_trace", c.abs_trace}, {"rotation_angle", c.rotation_angle}};
        };
        out["triangle_C_M1_M2"] = cls(rep.f->phip_class);
        out["triangle_S2_M2_M1"] = cls(rep.f->phi_class);
    }
    if (rep.toledo_closed) out["toledo_closed"] = {{"t", rep.toledo_closed->t}, {"tau", chg::tau_string(rep.toledo_closed->tau3)}};
    if (rep.toledo_integral)
        out["toledo_integral"] = {{"value", rep.toledo_integral->value}, {"num3", rep.toledo_integral->num3}};
    if (rep.identities) {
        const chg::IdentityReport& id = *rep.identities;
        out["identities"] = {{"angle_at_q", id.angle_at_q},
                             {"angle_at_s2", id.angle_at_s2},
                             {"w_inv_rotation", id.w_inv_rotation},
                             {"u_rotation", id.u_rotation},
                             {"max_RU_relation", id.max_ru_relation},
                             {"max_delta_identity", id.max_delta_identity},
                             {"max_cycle_product", id.max_cycle_product},
                             {"failures", id.failures}};
    }
    return out;
}

void print_report_text(std::ostream& os, const chg::TupleReport& rep) {
    const chg::Params& P = rep.params;
    os << "M(" << P.n << ',' << P.l << ',' << P.k << ',' << P.p << "): " << (rep.accepted() ? "accepted" : "rejected");
    if (rep.conditions.first_failure >= 0) os << " (first failure " << chg::cond_name(rep.conditions.first_failure) << ')';
    if (rep.c_fuchsian) os << " (C-Fuchsian, discarded)";
    os << '\n';
    for (int c = 0; c < chg::kCondCount; ++c) {
        const chg::ConditionResult& r = rep.conditions.cond[c];
        os << "  " << chg::cond_name(c) << ": ";
        if (!r.evaluated) {
            os << "not evaluated\n";
            continue;
        }
        os << (r.pass ? "pass" : "FAIL") << "  slack " << r.slack << (r.marginal ? "  marginal" : "") << '\n';
    }
    if (rep.record) {
        const chg::ExampleRecord& r = *rep.record;
        os << "  f=" << r.f << " t=" << r.t << " g=" << r.genus << " chi=" << r.chi << " e=" << r.e
           << " tau=" << chg::tau_string(r.tau3) << " e_P=" << r.e_P << " orb_e=" << chg::to_string(r.orb_e)
           << " orb_tau=" << chg::to_string(r.orb_tau) << '\n';
        os << "  o(y,Uy,phi^-1 y)=" << r.o_y << " o(z,Wz,phi' z)=" << r.o_z << '\n';
    }
    if (rep.f)
        os << "  triangle (C,M1,M2): " << chg::to_string(rep.f->phip_class.tag) << " |tr|=" << rep.f->phip_class.abs_trace
           << "\n  triangle (S2,M2,M1): " << chg::to_string(rep.f->phi_class.tag)
           << " |tr|=" << rep.f->phi_class.abs_trace << '\n';
    if (rep.toledo_closed) os << "  tau (closed form, H_n level 3tau=" << 2 * rep.toledo_closed->t - 3 * P.n << ")\n";
    if (rep.toledo_integral)
        os << "  tau (integral, H_n level) = " << rep.toledo_integral->value << " -> 3tau=" << rep.toledo_integral->num3
           << '\n';
    if (rep.identities) {
        const chg::IdentityReport& id = *rep.identities;
        os << "  identities: " << (id.failures.empty() ? "ok" : "FAILED") << " (RU " << id.max_ru_relation << ", delta "
           << id.max_delta_identity << ", cycle " << id.max_cycle_product << ")\n";
        for (const std::string& f : id.failures) os << "    failed: " << f << '\n';
    }
    for (const std::string& l : rep.laws_violated) os << "  law violated: " << l << '\n';
    for (const std::string& e : rep.errors) os << "  error: " << e << '\n';
}

int run_tables_cmd(const chg::SweepConfig& cfg, const std::string& dir) {
    int rc = kOk;
    for (const chg::TableDiff& d : chg::verify_tables(dir, cfg)) {
        std::cout << (d.mismatches.empty() ? "MATCH    " : "MISMATCH ") << d.table << " (" << d.rows << " rows)\n";
        for (const std::string& m : d.mismatches) std::cout << "  " << m << '\n';
        if (!d.mismatches.empty()) rc = kMismatch;
    }
    return rc;
}

struct Checkpoint {
    std::set<int> done;
    chg::CensusSummary carried;
    std::vector<chg::Params> marginal_rejected;
};

// Lines: n,candidates,accepted,integer_tau,marginal,c_fuchsian,q7_only,errors,violations
Checkpoint load_checkpoint(const std::string& path) {
    Checkpoint cp;
    std::ifstream in(path);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (line[0] == 'm') {
            chg::Params P;
            if (std::sscanf(line.c_str(), "m,%d,%d,%d,%d", &P.n, &P.l, &P.k, &P.p) == 4) cp.marginal_rejected.push_back(P);
            continue;
        }
        int n;
        long v[8];
        if (std::sscanf(line.c_str(), "%d,%ld,%ld,%ld,%ld,%ld,%ld,%ld,%ld", &n, &v[0], &v[1], &v[2], &v[3], &v[4], &v[5],
                        &v[6], &v[7]) != 9)
            continue;
        cp.done.insert(n);
        chg::CensusSummary& s = cp.carried;
        s.candidates += v[0];
        s.total_accepted += v[1];
        s.integer_tau_count += v[2];
        s.marginal_count += v[3];
        s.c_fuchsian_discarded += v[4];
        s.q7_only_failures += v[5];
        s.error_count += v[6];
        s.violation_count += v[7];
        s.per_n_counts[n] = v[1];
    }
    return cp;
}

// Drops record lines for n that did not reach the checkpoint.
void truncate_records(const std::string& path, const std::set<int>& done, chg::OutputFormat fmt) {
    std::ifstream in(path);
    if (!in) return;
    std::vector<std::string> keep;
    std::string line;
    while (std::getline(in, line)) {
        int n = -1;
        if (fmt == chg::OutputFormat::Csv) {
            if (std::sscanf(line.c_str(), "%d,", &n) != 1) continue;
        } else {
            try {
                n = json::parse(line).at("n").get<int>();
            } catch (const std::exception&) {
                continue;
            }
        }
        if (done.count(n)) keep.push_back(line);
    }
    in.close();
    std::ofstream out(path, std::ios::trunc);
    if (fmt == chg::OutputFormat::Csv) out << chg::csv_header() << '\n';
    for (const std::string& l : keep) out << l << '\n';
}

int run_census_cmd(chg::SweepConfig cfg, const std::string& checkpoint, const std::string& summary_path) {
    if (cfg.output_path.empty()) cfg.output_path = "census.csv";
    Checkpoint cp = load_checkpoint(checkpoint);
    if (cp.done.empty()) {
        std::ofstream(cfg.output_path, std::ios::trunc)
            << (cfg.output_format == chg::OutputFormat::Csv ? chg::csv_header() + "\n" : std::string());
        std::ofstream(checkpoint, std::ios::trunc)
            << "# n,candidates,accepted,integer_tau,marginal,c_fuchsian,q7_only,errors,violations\n";
    } else {
        truncate_records(cfg.output_path, cp.done, cfg.output_format);
        std::cerr << "resuming: " << cp.done.size() << " values of n already done\n";
    }
    Sink records(cfg.output_path, true);
    std::ofstream ck(checkpoint, std::ios::app);
    if (!ck) throw std::runtime_error("cannot open checkpoint " + checkpoint);

    const chg::CensusSummary s = chg::run_sweep(
        cfg,
        [&](const chg::UnitResult& u) {
            report_issues(u);
            for (const chg::ExampleRecord& r : u.accepted) write_record(records.os(), cfg.output_format, r);
            records.os().flush();
            for (const chg::Params& P : u.marginal_rejected)
                ck << "m," << P.n << ',' << P.l << ',' << P.k << ',' << P.p << '\n';
            ck << u.n << ',' << u.candidates << ',' << u.accepted.size() << ',' << u.integer_tau << ',' << u.marginal
               << ',' << u.c_fuchsian_discarded << ',' << u.q7_only_failures << ',' << u.errors.size() << ','
               << u.violations.size() << '\n';
            ck.flush();
            std::cerr << "n=" << u.n << " accepted=" << u.accepted.size() << '\n';
        },
        cp.done);

    chg::CensusSummary total = cp.carried;
    total.candidates += s.candidates;
    total.total_accepted += s.total_accepted;
    total.integer_tau_count += s.integer_tau_count;
    total.marginal_count += s.marginal_count;
    total.c_fuchsian_discarded += s.c_fuchsian_discarded;
    total.q7_only_failures += s.q7_only_failures;
    total.error_count += s.error_count;
    total.violation_count += s.violation_count;
    for (const auto& [n, c] : s.per_n_counts) total.per_n_counts[n] = c;
    total.wall_time = s.wall_time;

    json j = summary_json(total);
    const Checkpoint all = load_checkpoint(checkpoint);
    json marg = json::array();
    for (const chg::Params& P : all.marginal_rejected) marg.push_back(params_json(P));
    j["marginal_rejected"] = marg;
    long empty_n = 0;
    for (const auto& [n, c] : total.per_n_counts)
        if (n >= 13 && c == 0) ++empty_n;
    j["n_ge_13_without_examples"] = empty_n;
    if (!summary_path.empty()) std::ofstream(summary_path, std::ios::trunc) << j.dump(2) << '\n';
    std::cout << j.dump(2) << '\n';
    return total.violation_count > 0 ? kViolation : kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sweep, check and catalog the M(n,l,k,p) disc bundle family"};
    app.require_subcommand(1);

    Flags sweep_f, check_f, tables_f, census_f;
    auto* sweep = app.add_subcommand("sweep", "Enumerate (n,l,k,p) and emit accepted examples");
    add_common(sweep, sweep_f, true);

    auto* check = app.add_subcommand("check", "Full report for one tuple");
    std::vector<int> tuple;
    check->add_option("tuple", tuple, "n l k p")->expected(4)->required();
    add_common(check, check_f, false);

    auto* tables = app.add_subcommand("tables", "Verify the bundled tables");
    std::string data_dir = CHGEOM_DEFAULT_DATA_DIR;
    tables->add_option("--data-dir", data_dir, "Directory with the table CSV files");
    add_common(tables, tables_f, false);

    auto* census = app.add_subcommand("census", "Extended census with per-n checkpointing");
    std::string checkpoint = "census.checkpoint", summary_path;
    census->add_option("--checkpoint", checkpoint, "Checkpoint file; an existing one is resumed");
    census->add_option("--summary", summary_path, "Write the JSON summary here as well");
    add_common(census, census_f, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kConfig;
    }

    try {
        if (*sweep) return run_sweep_cmd(resolve(sweep_f, {}));
        if (*check) {
            const chg::SweepConfig cfg = resolve(check_f, {});
            const chg::Params P{tuple[0], tuple[1], tuple[2], tuple[3]};
            if (!P.valid()) throw chg::ConfigError("tuple violates 0 <= k <= l <= n-3, p in {1,2}");
            const chg::TupleReport rep = chg::check_tuple(P, cfg);
            Sink sink(cfg.output_path);
            if (check_f.format == "json" || check_f.format == "jsonl")
                sink.os() << report_json(rep).dump(check_f.format == "json" ? 2 : -1) << '\n';
            else
                print_report_text(sink.os(), rep);
            const bool violated = !rep.laws_violated.empty() || (rep.identities && !rep.identities->failures.empty());
            return violated ? kViolation : kOk;
        }
        if (*tables) return run_tables_cmd(resolve(tables_f, {}), data_dir);
        if (*census) {
            chg::SweepConfig base;
            base.n_min = 9;
            base.n_max = 1001;
            return run_census_cmd(resolve(census_f, base), checkpoint, summary_path);
        }
    } catch (const chg::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfig;
    } catch (const chg::PropertyViolation& e) {
        std::cerr << "property violation: " << e.what() << '\n';
        return kViolation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kViolation;
    }
    return kOk;
}
