#include "chgeom/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

namespace chg {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(trim(item));
    return out;
}

template <class T>
T parse_number(const std::string& key, const std::string& value) {
    std::istringstream in(value);
    T x{};
    in >> x;
    if (in.fail() || !in.eof()) throw ConfigError("bad value for " + key + ": '" + value + "'");
    return x;
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "1" || value == "true" || value == "yes" || value == "on") return true;
    if (value == "0" || value == "false" || value == "no" || value == "off") return false;
    throw ConfigError("bad value for " + key + ": '" + value + "'");
}

// The rejected condition sits within the marginal band.
bool marginal_rejection(const ConditionReport& rep) {
    return rep.first_failure >= 0 && rep.cond[rep.first_failure].evaluated && rep.cond[rep.first_failure].marginal;
}

bool q7_only(const ConditionReport& rep) {
    for (int c = 0; c < kCondCount; ++c) {
        const ConditionResult& r = rep.cond[c];
        if (c == Q7) {
            if (!r.evaluated || r.pass) return false;
        } else if (!r.evaluated || !r.pass) {
            return false;
        }
    }
    return true;
}

}  // namespace

std::optional<Filter> parse_filter(const std::string& name) {
    if (name == "integer_tau") return Filter::IntegerTau;
    if (name == "real_hyperbolic") return Filter::RealHyperbolic;
    if (name == "extremes") return Filter::Extremes;
    return std::nullopt;
}

const char* filter_name(Filter f) {
    switch (f) {
        case Filter::IntegerTau: return "integer_tau";
        case Filter::RealHyperbolic: return "real_hyperbolic";
        case Filter::Extremes: return "extremes";
    }
    return "?";
}

void SweepConfig::validate() const {
    if (n_min < 3) throw ConfigError("n_min must be at least 3");
    if (n_max < n_min) throw ConfigError("n_max must be at least n_min");
    if (!(margin > 0)) throw ConfigError("margin must be positive");
    if (!(marginal_band > 0)) throw ConfigError("marginal_band must be positive");
    if (threads < 0) throw ConfigError("threads must be non-negative");
}

int SweepConfig::resolved_threads() const {
    if (threads > 0) return threads;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

void apply_config_text(SweepConfig& cfg, const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key=value");
        std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        std::replace(key.begin(), key.end(), '-', '_');
        if (key == "n_min") {
            cfg.n_min = parse_number<int>(key, value);
        } else if (key == "n_max") {
            cfg.n_max = parse_number<int>(key, value);
        } else if (key == "margin") {
            cfg.margin = parse_number<double>(key, value);
        } else if (key == "marginal_band") {
            cfg.marginal_band = parse_number<double>(key, value);
        } else if (key == "threads") {
            cfg.threads = value == "auto" ? 0 : parse_number<int>(key, value);
        } else if (key == "format") {
            if (value == "csv") cfg.output_format = OutputFormat::Csv;
            else if (value == "jsonl") cfg.output_format = OutputFormat::Jsonl;
            else throw ConfigError("format must be csv or jsonl");
        } else if (key == "out") {
            cfg.output_path = value;
        } else if (key == "filter") {
            cfg.filters.clear();
            for (const std::string& name : split(value, ',')) {
                if (name.empty()) continue;
                const auto f = parse_filter(name);
                if (!f) throw ConfigError("unknown filter '" + name + "'");
                cfg.filters.insert(*f);
            }
        } else if (key == "z_seed") {
            cfg.z_seed = parse_number<double>(key, value);
        } else if (key == "verify_identities") {
            cfg.verify_identities = parse_bool(key, value);
        } else {
            throw ConfigError("unknown config key '" + key + "'");
        }
    }
}

void apply_config_file(SweepConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    apply_config_text(cfg, buf.str());
}

std::optional<int> threads_from_env() {
    const char* v = std::getenv("CHGEOM_THREADS");
    if (v == nullptr || *v == '\0') return std::nullopt;
    return parse_number<int>("CHGEOM_THREADS", v);
}

void CensusSummary::add(const UnitResult& u) {
    candidates += u.candidates;
    total_accepted += static_cast<long>(u.accepted.size());
    integer_tau_count += u.integer_tau;
    marginal_count += u.marginal;
    c_fuchsian_discarded += u.c_fuchsian_discarded;
    q7_only_failures += u.q7_only_failures;
    error_count += static_cast<long>(u.errors.size());
    violation_count += static_cast<long>(u.violations.size());
    per_n_counts[u.n] = static_cast<long>(u.accepted.size());
}

UnitResult evaluate_unit(int n, const SweepConfig& cfg) {
    UnitResult u;
    u.n = n;
    for (int l = 0; l <= n - 3; ++l)
        for (int k = 0; k <= l; ++k)
            for (int p = 1; p <= 2; ++p) {
                const Params P{n, l, k, p};
                ++u.candidates;
                std::optional<QuadrangleData> D;
                const ConditionReport rep = evaluate(P, cfg.margin, &D, cfg.marginal_band);
                if (!rep.accepted) {
                    if (q7_only(rep)) ++u.q7_only_failures;
                    if (marginal_rejection(rep)) u.marginal_rejected.push_back(P);
                    continue;
                }
                try {
                    const FResult fr = compute_f(*D, cfg.z_seed);
                    const ExampleRecord rec = make_record(*D, rep, fr);
                    if (is_c_fuchsian(rec)) {
                        ++u.c_fuchsian_discarded;
                        continue;
                    }
                    for (const std::string& law : law_violations(rec)) u.violations.push_back({P, law});
                    if (cfg.verify_identities) {
                        for (const std::string& id : verify_identities(*D).failures) u.violations.push_back({P, id});
                        const ToledoIntegral ti = toledo_by_integral(*D);
                        const long deg = n % 2 == 0 ? 2 : 4;
                        if (std::abs(3.0 * ti.value - static_cast<double>(2L * toledo(P).t - 3L * n)) > 1e-9 * n ||
                            deg * ti.num3 != rec.tau3)
                            u.violations.push_back({P, "toledo by integral"});
                    }
                    if (rec.tau3 % 3 == 0) ++u.integer_tau;
                    if (rec.marginal) ++u.marginal;
                    u.accepted.push_back(rec);
                } catch (const PropertyViolation& e) {
                    u.violations.push_back({P, e.what()});
                } catch (const std::exception& e) {
                    u.errors.push_back({P, e.what()});
                }
            }
    return u;
}

CensusSummary run_sweep(const SweepConfig& cfg, const UnitCallback& on_unit, const std::set<int>& skip) {
    cfg.validate();
    const auto start = std::chrono::steady_clock::now();
    std::vector<int> ns;
    for (int n = cfg.n_min; n <= cfg.n_max; ++n)
        if (!skip.count(n)) ns.push_back(n);

    std::vector<std::optional<UnitResult>> results(ns.size());
    std::mutex mu;
    std::condition_variable ready;
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;

    auto worker = [&] {
        for (std::size_t i = next++; i < ns.size(); i = next++) {
            try {
                UnitResult u = evaluate_unit(ns[i], cfg);
                std::lock_guard<std::mutex> lock(mu);
                results[i] = std::move(u);
            } catch (...) {
                std::lock_guard<std::mutex> lock(mu);
                if (!failure) failure = std::current_exception();
                next = ns.size();
            }
            ready.notify_all();
        }
        ready.notify_all();
    };

    const int nthreads = std::max(1, std::min<int>(cfg.resolved_threads(), static_cast<int>(ns.size())));
    std::vector<std::thread> pool;
    for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);

    CensusSummary summary;
    std::exception_ptr emit_failure;
    for (std::size_t i = 0; i < ns.size(); ++i) {
        UnitResult u;
        {
            std::unique_lock<std::mutex> lock(mu);
            ready.wait(lock, [&] { return results[i].has_value() || failure; });
            if (!results[i]) break;
            u = std::move(*results[i]);
            results[i].reset();
        }
        summary.add(u);
        if (on_unit) {
            try {
                on_unit(u);
            } catch (...) {
                emit_failure = std::current_exception();
                next = ns.size();
                break;
            }
        }
    }
    for (std::thread& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
    if (emit_failure) std::rethrow_exception(emit_failure);
    summary.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return summary;
}

bool passes_filters(const ExampleRecord& r, const std::set<Filter>& filters) {
    if (filters.count(Filter::IntegerTau) && r.tau3 % 3 != 0) return false;
    if (filters.count(Filter::RealHyperbolic) && !(3 * r.e >= r.chi)) return false;
    return true;
}

std::vector<ExampleRecord> extremes(const std::vector<ExampleRecord>& records) {
    if (records.empty()) return {};
    std::set<long> genera, es;
    for (const ExampleRecord& r : records) {
        genera.insert(r.genus);
        es.insert(r.e);
    }
    std::set<long> low_g, high_e;
    for (auto it = genera.begin(); it != genera.end() && low_g.size() < 2; ++it) low_g.insert(*it);
    for (auto it = es.rbegin(); it != es.rend() && high_e.size() < 2; ++it) high_e.insert(*it);
    // e/chi compared exactly by cross-multiplication; both are negative.
    const ExampleRecord* best = &records.front();
    for (const ExampleRecord& r : records)
        if (r.e * best->chi < best->e * r.chi) best = &r;
    std::vector<ExampleRecord> out;
    for (const ExampleRecord& r : records)
        if (low_g.count(r.genus) || high_e.count(r.e) || r.e * best->chi == best->e * r.chi) out.push_back(r);
    return out;
}

std::string csv_header() { return "n,l,k,p,f,t,genus,chi,e,tau,e_P,orb_e,marginal"; }

std::string csv_row(const ExampleRecord& r) {
    std::ostringstream o;
    o << r.params.n << ',' << r.params.l << ',' << r.params.k << ',' << r.params.p << ',' << r.f << ',' << r.t << ','
      << r.genus << ',' << r.chi << ',' << r.e << ',' << tau_string(r.tau3) << ',' << r.e_P << ',' << to_string(r.orb_e)
      << ',' << (r.marginal ? 1 : 0);
    return o.str();
}

TupleReport check_tuple(const Params& P, const SweepConfig& cfg) {
    TupleReport rep;
    rep.params = P;
    std::optional<QuadrangleData> D;
    try {
        rep.conditions = evaluate(P, cfg.margin, &D, cfg.marginal_band);
    } catch (const std::exception& e) {
        rep.errors.emplace_back(e.what());
        return rep;
    }
    rep.built = D.has_value();
    if (P.valid()) rep.toledo_closed = toledo(P);
    if (!D || !rep.conditions.accepted) return rep;
    try {
        rep.f = compute_f(*D, cfg.z_seed);
        rep.record = make_record(*D, rep.conditions, *rep.f);
        rep.c_fuchsian = is_c_fuchsian(*rep.record);
        rep.laws_violated = law_violations(*rep.record);
    } catch (const std::exception& e) {
        rep.errors.emplace_back(e.what());
    }
    try {
        rep.toledo_integral = toledo_by_integral(*D);
    } catch (const std::exception& e) {
        rep.errors.emplace_back(e.what());
    }
    try {
        rep.identities = verify_identities(*D);
    } catch (const std::exception& e) {
        rep.errors.emplace_back(e.what());
    }
    return rep;
}

std::vector<TableRow> load_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read table " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty table " + path);
    const std::vector<std::string> header = split(line, ',');
    auto column = [&](const std::string& name) -> int {
        const auto it = std::find(header.begin(), header.end(), name);
        return it == header.end() ? -1 : static_cast<int>(it - header.begin());
    };
    const int cn = column("n"), cl = column("l"), ck = column("k"), cp = column("p");
    const int cg = column("genus"), cc = column("chi"), ce = column("e"), ct = column("tau3");
    if (cn < 0 || cl < 0 || ck < 0 || cp < 0 || ce < 0 || ct < 0)
        throw std::runtime_error("table " + path + " lacks a required column");

    std::vector<TableRow> rows;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        const std::vector<std::string> f = split(line, ',');
        if (f.size() != header.size()) throw std::runtime_error("table " + path + ": ragged row '" + line + "'");
        auto num = [&](int c) { return std::stol(f[c]); };
        TableRow r;
        r.params = {static_cast<int>(num(cn)), static_cast<int>(num(cl)), static_cast<int>(num(ck)),
                    static_cast<int>(num(cp))};
        if (cg >= 0) r.genus = num(cg);
        if (cc >= 0) r.chi = num(cc);
        r.e = num(ce);
        r.tau3 = num(ct);
        rows.push_back(r);
    }
    return rows;
}

namespace {

std::string label(const Params& P) {
    return "M(" + std::to_string(P.n) + "," + std::to_string(P.l) + "," + std::to_string(P.k) + "," +
           std::to_string(P.p) + ")";
}

}  // namespace

TableDiff verify_rows(const std::string& name, const std::vector<TableRow>& rows, const SweepConfig& cfg) {
    TableDiff d{name, {}, static_cast<long>(rows.size())};
    for (const TableRow& row : rows) {
        const TupleReport rep = check_tuple(row.params, cfg);
        if (!rep.accepted()) {
            const int ff = rep.conditions.first_failure;
            d.mismatches.push_back(label(row.params) + ": rejected" +
                                   (ff >= 0 ? std::string(" at ") + cond_name(ff) : std::string()));
            continue;
        }
        const ExampleRecord& r = *rep.record;
        auto expect = [&](const char* what, long want, long got) {
            if (want != got)
                d.mismatches.push_back(label(row.params) + ": " + what + " expected " + std::to_string(want) + ", got " +
                                       std::to_string(got));
        };
        if (row.genus) expect("genus", *row.genus, r.genus);
        if (row.chi) expect("chi", *row.chi, r.chi);
        expect("e", row.e, r.e);
        expect("3tau", row.tau3, r.tau3);
    }
    return d;
}

TableDiff compare_sets(const std::string& name, const std::vector<TableRow>& expected,
                       const std::vector<ExampleRecord>& got) {
    TableDiff d{name, {}, static_cast<long>(expected.size())};
    std::map<Params, const TableRow*> want;
    for (const TableRow& r : expected) want[r.params] = &r;
    std::map<Params, const ExampleRecord*> have;
    for (const ExampleRecord& r : got) have[r.params] = &r;
    for (const auto& [P, row] : want) {
        const auto it = have.find(P);
        if (it == have.end()) {
            d.mismatches.push_back(label(P) + ": expected, not accepted");
            continue;
        }
        const ExampleRecord& r = *it->second;
        if (r.e != row->e || r.tau3 != row->tau3 || (row->genus && *row->genus != r.genus) ||
            (row->chi && *row->chi != r.chi))
            d.mismatches.push_back(label(P) + ": invariants differ");
    }
    for (const auto& [P, r] : have)
        if (!want.count(P)) d.mismatches.push_back(label(P) + ": accepted, not in table");
    return d;
}

std::vector<TableDiff> verify_tables(const std::string& dir, const SweepConfig& cfg) {
    const std::vector<TableRow> extreme = load_table(dir + "/extreme_values.csv");
    const std::vector<TableRow> real = load_table(dir + "/real_hyperbolic.csv");
    const std::vector<TableRow> n101 = load_table(dir + "/n101.csv");

    std::vector<TableDiff> out;
    out.push_back(verify_rows("extreme_values rows", extreme, cfg));
    out.push_back(verify_rows("real_hyperbolic rows", real, cfg));

    SweepConfig sub = cfg;
    sub.filters.clear();
    sub.n_min = 3;
    sub.n_max = 53;
    std::vector<ExampleRecord> upto53;
    run_sweep(sub, [&](const UnitResult& u) { upto53.insert(upto53.end(), u.accepted.begin(), u.accepted.end()); });
    std::vector<ExampleRecord> rh;
    for (const ExampleRecord& r : upto53)
        if (passes_filters(r, {Filter::RealHyperbolic})) rh.push_back(r);
    out.push_back(compare_sets("real_hyperbolic filter n<=53", real, rh));
    out.push_back(compare_sets("extremes filter n<=53", extreme, extremes(upto53)));

    sub.n_min = sub.n_max = 101;
    std::vector<ExampleRecord> got101;
    run_sweep(sub, [&](const UnitResult& u) { got101 = u.accepted; });
    TableDiff d = compare_sets("n101 set", n101, got101);
    for (const ExampleRecord& r : got101)
        if (r.genus != 98 || r.chi != -194) d.mismatches.push_back(label(r.params) + ": genus or chi differ");
    out.push_back(d);
    return out;
}

}  // namespace chg
