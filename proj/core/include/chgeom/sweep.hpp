#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "chgeom/potential.hpp"
#include "chgeom/quadrangle.hpp"
#include "chgeom/types.hpp"

namespace chg {

enum class Filter { IntegerTau, RealHyperbolic, Extremes };

std::optional<Filter> parse_filter(const std::string& name);
const char* filter_name(Filter f);

enum class OutputFormat { Csv, Jsonl };

struct SweepConfig {
    int n_min = 3;
    int n_max = 12;
    double margin = kMargin;
    double marginal_band = kMarginalBand;
    int threads = 0;  // 0 = hardware concurrency
    OutputFormat output_format = OutputFormat::Csv;
    std::string output_path;  // empty = stdout
    double z_seed = kZSeed;
    std::set<Filter> filters;
    bool verify_identities = false;

    /// Throws ConfigError when an invariant fails.
    void validate() const;
    int resolved_threads() const;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Applies flat key=value lines (# comments, blank lines allowed) on top of cfg.
void apply_config_text(SweepConfig& cfg, const std::string& text);
void apply_config_file(SweepConfig& cfg, const std::string& path);

/// Thread count from CHGEOM_THREADS, if set.
std::optional<int> threads_from_env();

struct TupleIssue {
    Params params;
    std::string what;
};

/// Everything produced for one n.
struct UnitResult {
    int n = 0;
    long candidates = 0;
    std::vector<ExampleRecord> accepted;  // ordered by (l,k,p)
    long integer_tau = 0;
    long marginal = 0;
    long c_fuchsian_discarded = 0;
    long q7_only_failures = 0;
    std::vector<Params> marginal_rejected;  // rejected with a near-zero slack
    std::vector<TupleIssue> errors;         // degeneracies
    std::vector<TupleIssue> violations;     // failed laws or identities
};

struct CensusSummary {
    long candidates = 0;
    long total_accepted = 0;
    long integer_tau_count = 0;
    long marginal_count = 0;
    long c_fuchsian_discarded = 0;
    long q7_only_failures = 0;
    long error_count = 0;
    long violation_count = 0;
    std::map<int, long> per_n_counts;
    double wall_time = 0.0;

    void add(const UnitResult& u);
};

/// Evaluates every (l,k,p) for one n, in lexicographic order.
UnitResult evaluate_unit(int n, const SweepConfig& cfg);

/// Per-unit callback, invoked in increasing n from the calling thread.
using UnitCallback = std::function<void(const UnitResult&)>;

/// Runs all n in [n_min, n_max] not in skip; units are merged in n-order.
CensusSummary run_sweep(const SweepConfig& cfg, const UnitCallback& on_unit, const std::set<int>& skip = {});

bool passes_filters(const ExampleRecord& r, const std::set<Filter>& filters);

/// Records with the two smallest genera, the two largest e, or the minimal e/chi.
std::vector<ExampleRecord> extremes(const std::vector<ExampleRecord>& records);

std::string csv_header();
std::string csv_row(const ExampleRecord& r);

struct TupleReport {
    Params params;
    ConditionReport conditions;
    bool built = false;
    std::optional<FResult> f;
    std::optional<ExampleRecord> record;
    bool c_fuchsian = false;
    std::optional<Toledo> toledo_closed;
    std::optional<ToledoIntegral> toledo_integral;
    std::optional<IdentityReport> identities;
    std::vector<std::string> laws_violated;
    std::vector<std::string> errors;

    bool accepted() const { return conditions.accepted && record.has_value() && !c_fuchsian; }
};

TupleReport check_tuple(const Params& P, const SweepConfig& cfg);

struct TableRow {
    Params params;
    std::optional<long> genus;
    std::optional<long> chi;
    long e = 0;
    long tau3 = 0;
};

/// Reads a table with header n,l,k,p[,genus,chi],e,tau3.
std::vector<TableRow> load_table(const std::string& path);

struct TableDiff {
    std::string table;
    std::vector<std::string> mismatches;
    long rows = 0;
};

/// Checks each row against check_tuple.
TableDiff verify_rows(const std::string& name, const std::vector<TableRow>& rows, const SweepConfig& cfg);

/// Compares an accepted set with the expected rows as sets of tuples with their e and tau.
TableDiff compare_sets(const std::string& name, const std::vector<TableRow>& expected,
                       const std::vector<ExampleRecord>& got);

/// The fixture checks over the bundled tables in dir.
std::vector<TableDiff> verify_tables(const std::string& dir, const SweepConfig& cfg);

}  // namespace chg
