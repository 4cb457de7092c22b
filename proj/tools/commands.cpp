#include "commands.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

#include "rookmix/bounds.hpp"
#include "rookmix/full_chain.hpp"
#include "rookmix/spectral.hpp"

namespace rookmix::cli {

namespace {

using json = nlohmann::ordered_json;

constexpr int kSchemaVersion = 1;

struct usage_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct io_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string command;
  int n = 0;
  std::vector<int> d;
  std::vector<std::string> eps_text;
  std::vector<Rational> eps;
  long long t_max = 20;
  long long t = -1;
  std::uint64_t samples = 100000;
  std::uint64_t seed = 1;
  std::string mode_text = "float";
  NumericMode mode = NumericMode::float64;
  std::string out = "-";
  std::string format;
  long long cap_flag = -1;
  std::size_t cap = kDefaultStateCap;
  bool report_discrepancies = false;
  bool spectral = false;
  int trials = 10;
};

// ---- value rendering -------------------------------------------------------

json to_json(const Rational& q) { return format_scalar(q); }
json to_json(double x) {
  if (!std::isfinite(x)) return nullptr;
  return x;
}

std::string csv_cell(const Rational& q) { return format_scalar(q); }
std::string csv_cell(double x) { return format_scalar(x); }
std::string csv_cell(long long v) { return std::to_string(v); }
std::string csv_cell(bool v) { return v ? "true" : "false"; }

template <class T>
std::string csv_cell(const std::optional<T>& v) {
  return v ? csv_cell(*v) : std::string();
}

class Csv {
 public:
  explicit Csv(std::vector<std::string> header) { row(header); }

  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i > 0) text_ += ',';
      text_ += quote(cells[i]);
    }
    text_ += '\n';
  }

  const std::string& str() const { return text_; }

 private:
  static std::string quote(const std::string& cell) {
    if (cell.find_first_of(",\"\n") == std::string::npos) return cell;
    std::string q = "\"";
    for (char c : cell) {
      if (c == '"') q += '"';
      q += c;
    }
    return q + '"';
  }

  std::string text_;
};

// ---- config ---------------------------------------------------------------

std::size_t resolve_cap(long long flag) {
  if (flag >= 0) return static_cast<std::size_t>(flag);
  if (const char* env = std::getenv("ROOKMIX_CAP"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    errno = 0;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (errno != 0 || end == env || *end != '\0' || env[0] == '-') {
      throw usage_error(std::string("ROOKMIX_CAP is not a nonnegative integer: ") + env);
    }
    return static_cast<std::size_t>(v);
  }
  return kDefaultStateCap;
}

std::vector<ChainParams> validated_params(const RunConfig& cfg) {
  if (cfg.n == 0) throw usage_error("--n is required");
  if (cfg.d.empty()) throw usage_error("--d is required");
  std::vector<ChainParams> out;
  for (int d : cfg.d) out.emplace_back(cfg.n, d);
  return out;
}

ChainParams single_params(const RunConfig& cfg) {
  auto all = validated_params(cfg);
  if (all.size() != 1) throw usage_error(cfg.command + " takes a single --d value");
  return all.front();
}

void require_eps(const RunConfig& cfg) {
  if (cfg.eps.empty()) throw usage_error("--eps is required");
}

json config_json(const RunConfig& cfg) {
  json c;
  c["n"] = cfg.n;
  c["d"] = cfg.d;
  c["eps"] = cfg.eps_text;
  c["t_max"] = cfg.t_max;
  c["t"] = cfg.t;
  c["samples"] = cfg.samples;
  c["seed"] = cfg.seed;
  c["mode"] = cfg.mode_text;
  c["out"] = cfg.out;
  c["format"] = cfg.format;
  c["cap"] = cfg.cap;
  c["report_discrepancies"] = cfg.report_discrepancies;
  c["spectral"] = cfg.spectral;
  c["trials"] = cfg.trials;
  return c;
}

json manifest_json(const RunConfig& cfg) {
  json warnings = json::array();
  for (int d : cfg.d) {
    if (cfg.n >= 3 && d >= 1) {
      for (auto& w : ChainParams(cfg.n, d).warnings()) warnings.push_back(w);
      // terms of the float eigen-expansion reach n^{d/2} and cancel
      if (cfg.spectral && cfg.mode_text == "float" && 0.5 * d * std::log10(cfg.n) > 6.0) {
        warnings.push_back("float eigen-expansion at d=" + std::to_string(d) +
                           " cancels terms near n^(d/2); use --mode exact or drop --spectral");
      }
    }
  }
  json m;
  m["tool"] = "rookmix";
  m["version"] = ROOKMIX_VERSION;
  m["schema_version"] = kSchemaVersion;
  m["command"] = cfg.command;
  m["config"] = config_json(cfg);
  m["mode"] = cfg.mode_text;
  m["seed"] = cfg.seed;
  m["warnings"] = warnings;
  return m;
}

// ---- output ---------------------------------------------------------------

struct Output {
  json results;     // always filled
  std::string csv;  // filled when the command has a CSV form
};

void write_text(const std::string& path, const std::string& text, std::ostream& out) {
  if (path == "-") {
    out << text;
    out.flush();
    return;
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw io_error("cannot open " + path + " for writing");
  file << text;
  file.close();
  if (!file) throw io_error("failed writing " + path);
}

void emit(const RunConfig& cfg, const Output& result, std::ostream& out, std::ostream& err) {
  const json manifest = manifest_json(cfg);
  if (cfg.format == "json") {
    json doc;
    doc["manifest"] = manifest;
    doc["results"] = result.results;
    write_text(cfg.out, doc.dump(2) + "\n", out);
    return;
  }
  write_text(cfg.out, result.csv, out);
  const std::string manifest_text = manifest.dump(2) + "\n";
  if (cfg.out == "-") {
    err << manifest_text;
  } else {
    write_text(cfg.out + ".manifest.json", manifest_text, out);
  }
}

// ---- commands ---------------------------------------------------------------

template <Scalar T>
T eps_as(const Rational& e) {
  if constexpr (is_exact_v<T>) {
    return e;
  } else {
    return e.get_d();
  }
}

template <Scalar T>
Output cmd_tv_curve(const RunConfig& cfg) {
  const auto params = single_params(cfg);
  if (cfg.t_max < 0) throw usage_error("--t-max must be >= 0");
  const auto curve = cfg.spectral ? spectral_tv_curve<T>(params, cfg.t_max, build_spectral<T>(params))
                                  : tv_curve<T>(params, cfg.t_max);
  Output o;
  Csv csv({"t", "tv"});
  json rows = json::array();
  for (std::size_t t = 0; t < curve.values.size(); ++t) {
    csv.row({std::to_string(t), csv_cell(curve.values[t])});
    rows.push_back({{"t", t}, {"tv", to_json(curve.values[t])}});
  }
  o.csv = csv.str();
  o.results = {{"n", params.n()}, {"d", params.d()}, {"method", cfg.spectral ? "spectral" : "evolution"},
               {"curve", rows}};
  return o;
}

template <Scalar T>
Output cmd_mixing_time(const RunConfig& cfg) {
  const auto all = validated_params(cfg);
  require_eps(cfg);
  std::vector<T> thresholds;
  for (const auto& e : cfg.eps) thresholds.push_back(eps_as<T>(e));
  Output o;
  Csv csv({"n", "d", "eps", "tmix"});
  json rows = json::array();
  for (const auto& params : all) {
    const auto times = mixing_times<T>(params, thresholds);
    for (std::size_t i = 0; i < times.size(); ++i) {
      csv.row({std::to_string(params.n()), std::to_string(params.d()), cfg.eps_text[i], std::to_string(times[i])});
      rows.push_back({{"n", params.n()}, {"d", params.d()}, {"eps", cfg.eps_text[i]}, {"tmix", times[i]}});
    }
  }
  o.csv = csv.str();
  o.results = rows;
  return o;
}

template <Scalar T>
Output cmd_bounds(const RunConfig& cfg) {
  const auto all = validated_params(cfg);
  require_eps(cfg);
  Output o;
  Csv csv({"n", "d", "eps", "tmix", "bound", "kind", "value", "valid", "note"});
  json reports = json::array();
  for (const auto& params : all) {
    for (std::size_t i = 0; i < cfg.eps.size(); ++i) {
      const auto report = bounds_report<T>(params, cfg.eps[i]);
      json entries = json::object();
      for (const auto& b : report.bounds) {
        json e;
        e["kind"] = b.kind;
        e["value"] = b.value ? to_json(*b.value) : json(nullptr);
        e["valid"] = b.valid ? json(*b.valid) : json(nullptr);
        if (!b.note.empty()) e["note"] = b.note;
        entries[b.name] = e;
        csv.row({std::to_string(params.n()), std::to_string(params.d()), cfg.eps_text[i],
                 csv_cell(report.exact_tmix), b.name, b.kind, csv_cell(b.value), csv_cell(b.valid), b.note});
      }
      json r;
      r["n"] = params.n();
      r["d"] = params.d();
      r["eps"] = cfg.eps_text[i];
      r["exact_tmix"] = report.exact_tmix ? json(*report.exact_tmix) : json(nullptr);
      if (!report.tmix_note.empty()) r["tmix_note"] = report.tmix_note;
      r["bounds"] = entries;
      r["validity_convention"] = "lower: tmix >= ceil(bound) - 1; upper: tmix <= floor(bound) + 1";
      reports.push_back(r);
    }
  }
  o.csv = csv.str();
  o.results = reports;
  return o;
}

template <Scalar T>
Output cmd_cutoff(const RunConfig& cfg) {
  validated_params(cfg);
  require_eps(cfg);
  const auto profile = cutoff_profile<T>(cfg.n, cfg.d, cfg.eps);
  Output o;
  Csv csv({"n", "d", "eps", "tmix", "t_c", "w", "u_low", "u_high", "ratio"});
  json rows = json::array();
  for (const auto& r : profile.rows) {
    const std::string eps_text = format_scalar(r.eps);
    const std::string ratio_text = cfg.mode == NumericMode::exact ? format_scalar(r.ratio) : format_scalar(r.ratio.get_d());
    csv.row({std::to_string(r.n), std::to_string(r.d), eps_text, std::to_string(r.tmix), format_scalar(r.t_c),
             format_scalar(r.w), format_scalar(r.u_low), format_scalar(r.u_high), ratio_text});
    json j;
    j["n"] = r.n;
    j["d"] = r.d;
    j["eps"] = eps_text;
    j["tmix"] = r.tmix;
    j["tmix_complement"] = r.tmix_complement;
    j["t_c"] = to_json(r.t_c);
    j["w"] = to_json(r.w);
    j["u_low"] = to_json(r.u_low);
    j["u_high"] = to_json(r.u_high);
    j["ratio"] = ratio_text;
    j["c_l"] = to_json(r.c_l);
    j["c_u"] = to_json(r.c_u);
    j["c_u_corrected"] = to_json(r.c_u_corrected);
    j["window_low"] = to_json(r.window_low);
    j["window_high"] = to_json(r.window_high);
    j["in_window"] = r.in_window;
    rows.push_back(j);
  }
  o.csv = csv.str();
  o.results = {{"n", profile.n},
               {"note", "c_u_corrected = c_u + log(n-1)/2 depends on n; constant along a fixed-n sequence"},
               {"rows", rows}};
  return o;
}

template <Scalar T>
Output cmd_simulate(const RunConfig& cfg) {
  const auto params = single_params(cfg);
  const long long t = cfg.t >= 0 ? cfg.t : cfg.t_max;
  if (cfg.samples < 1) throw usage_error("--samples must be >= 1");
  const auto hist = mc_shell_histogram(params, t, cfg.samples, cfg.seed);
  LumpedEvolution<T> evo(params);
  for (long long s = 0; s < t; ++s) evo.advance();
  const auto exact = evo.current().weights();
  Output o;
  Csv csv({"shell", "count", "frequency", "exact", "std_error", "within_4sigma"});
  json rows = json::array();
  bool all_within = true;
  for (int x = 0; x <= params.d(); ++x) {
    const double p = to_double(exact[x]);
    const double sigma = std::sqrt(p * (1.0 - p) / static_cast<double>(cfg.samples));
    const bool within = std::abs(hist.frequency[x] - p) <= 4.0 * sigma;
    all_within = all_within && within;
    csv.row({std::to_string(x), std::to_string(hist.counts[x]), format_scalar(hist.frequency[x]), csv_cell(exact[x]),
             format_scalar(hist.std_error[x]), csv_cell(within)});
    rows.push_back({{"shell", x},
                    {"count", hist.counts[x]},
                    {"frequency", hist.frequency[x]},
                    {"exact", to_json(exact[x])},
                    {"std_error", hist.std_error[x]},
                    {"within_4sigma", within}});
  }
  o.csv = csv.str();
  o.results = {{"n", params.n()}, {"d", params.d()}, {"t", t}, {"samples", cfg.samples},
               {"seed", cfg.seed}, {"all_within_4sigma", all_within}, {"histogram", rows}};
  return o;
}

// ---- verify ---------------------------------------------------------------

struct Check {
  std::string name;
  std::string status;  // pass | fail | skipped
  json detail;
};

template <Scalar T>
bool small_enough(const T& value, double tol) {
  if constexpr (is_exact_v<T>) {
    return is_zero(value);
  } else {
    return std::abs(value) <= tol;
  }
}

double log_big(const BigInt& v) {
  long exp = 0;
  const double m = mpz_get_d_2exp(&exp, v.get_mpz_t());
  return std::log(m) + static_cast<double>(exp) * std::log(2.0);
}

template <Scalar T>
Check check_lumping(const ChainParams& params, const RunConfig& cfg) {
  if (!within_cap(params, cfg.cap)) {
    return {"lumping", "skipped",
            {{"reason", "n^d = " + params.state_count().get_str() + " exceeds cap " + std::to_string(cfg.cap)}}};
  }
  const auto report = verify_lumping<T>(params, cfg.t_max, cfg.cap);
  return {"lumping", report.all_equal ? "pass" : "fail",
          {{"t_max", cfg.t_max}, {"max_abs_diff", report.max_abs_diff}}};
}

template <Scalar T>
Check check_transitivity(const ChainParams& params, const RunConfig& cfg) {
  if (!params.transitive()) return {"transitivity", "skipped", {{"reason", "requires d >= 2"}}};
  if (!within_cap(params, cfg.cap)) {
    return {"transitivity", "skipped",
            {{"reason", "n^d = " + params.state_count().get_str() + " exceeds cap " + std::to_string(cfg.cap)}}};
  }
  const long long t = cfg.t >= 0 ? cfg.t : 3;
  const auto report = verify_transitivity<T>(params, t, cfg.trials, cfg.seed, cfg.cap);
  return {"transitivity", report.passed ? "pass" : "fail",
          {{"t", t},
           {"trials", cfg.trials},
           {"translation_checks", report.translation_checks},
           {"translation_failures", report.translation_failures}}};
}

template <Scalar T>
std::vector<Check> spectral_checks(const ChainParams& params, const RunConfig& cfg) {
  std::vector<Check> checks;
  const int d = params.d();
  const auto spectral = build_spectral<T>(params);

  {
    T worst = from_int<T>(0);
    for (int m = 0; m <= d; ++m) worst = std::max(worst, eigen_residual<T>(params, m));
    checks.push_back({"eigen_residual", small_enough(worst, 1e-10) ? "pass" : "fail",
                      {{"max_relative_residual", to_json(worst)}, {"tolerance", is_exact_v<T> ? 0.0 : 1e-10}}});
  }
  {
    double worst = 0.0;
    bool ok = true;
    for (int m = 0; m <= d; ++m) {
      for (int j = m; j <= d; ++j) {
        const T g = spectral.gram_signed_square(m, j);
        const T target = from_int<T>(m == j ? 1 : 0);
        worst = std::max(worst, std::abs(to_double(T(g - target))));
        if constexpr (is_exact_v<T>) {
          ok = ok && g == target;
        } else {
          ok = ok && std::abs(g - target) <= 1e-10;
        }
      }
    }
    checks.push_back({"orthonormality", ok ? "pass" : "fail", {{"max_abs_deviation", worst}}});
  }
  {
    // <K_m,K_m> over shell weights = n^d C(d,m)(n-1)^m, checked as φ_m(0)^2 = C(d,m)(n-1)^m.
    bool ok = true;
    double worst = 0.0;
    for (int m = 0; m <= d; ++m) {
      const BigInt expected = shell_size(params, m);
      if constexpr (is_exact_v<T>) {
        const auto row = spectral.table().row(m);
        const BigInt nd = power(BigInt(params.n()), d);
        ok = ok && weighted_inner<T>(row, row, params) == Rational(nd * expected);
      } else {
        const double dev = std::abs(std::log(spectral.phi0_sq(m)) - log_big(expected)) / std::max(1.0, log_big(expected));
        worst = std::max(worst, dev);
        ok = ok && dev <= 1e-9;
      }
    }
    checks.push_back({"norm_law", ok ? "pass" : "fail",
                      {{"law", "<K_m,K_m> = n^d * C(d,m) * (n-1)^m"}, {"max_log_deviation", worst}}});
  }
  {
    T sum = from_int<T>(0);
    for (int m = 1; m <= d; ++m) sum += spectral.phi0_sq(m);
    const BigInt target = power(BigInt(params.n()), d) - 1;
    bool ok = false;
    if constexpr (is_exact_v<T>) {
      ok = sum == Rational(target);
    } else {
      ok = std::abs(std::log(sum) - log_big(target)) <= 1e-9 * std::max(1.0, log_big(target));
    }
    checks.push_back({"phi0_square_sum", ok ? "pass" : "fail",
                      {{"sum", to_json(sum)}, {"expected", target.get_str()}}});
  }
  {
    const auto series = l2_identity_series<T>(params, cfg.t_max);
    bool ok = true;
    json failures = json::array();
    for (const auto& row : series) {
      if (!row.equal || !row.dominates_tv) {
        ok = false;
        failures.push_back(row.t);
      }
    }
    checks.push_back({"l2_identity", ok ? "pass" : "fail", {{"t_max", cfg.t_max}, {"failing_t", failures}}});
  }
  {
    const T worst = self_adjoint_check<T>(params, 20, cfg.seed);
    checks.push_back({"self_adjoint", small_enough(worst, 1e-12) ? "pass" : "fail",
                      {{"max_abs_asymmetry", to_json(worst)}, {"trials", 20}}});
  }
  return checks;
}

template <Scalar T>
json discrepancy_json(const ChainParams& params, long long t) {
  const auto r = discrepancy_report<T>(params, t);
  json violations = json::array();
  for (const auto& v : r.norm_violations) {
    violations.push_back({{"m", v.m}, {"phi0_sq", to_json(v.phi0_sq)}, {"claimed_bound", v.claimed.get_str()}});
  }
  json j;
  j["n"] = params.n();
  j["d"] = params.d();
  j["t"] = t;
  j["four_tv_sq"] = to_json(r.four_tv_sq);
  j["l2_lhs"] = to_json(r.l2_lhs);
  j["as_stated_sum"] = to_json(r.as_stated_sum);
  j["orthonormal_sum"] = to_json(r.orthonormal_sum);
  j["literal_sum"] = to_json(r.literal_sum);
  j["as_stated_chain"] = r.as_stated_valid ? "valid" : "invalid";
  j["orthonormal_chain"] = r.orthonormal_valid ? "valid" : "invalid";
  j["literal_chain"] = r.literal_valid ? "valid" : "invalid";
  j["orthonormal_matches_l2"] = r.orthonormal_matches_lhs;
  j["literal_matches_l2"] = r.literal_matches_lhs;
  j["phi0_sq_exceeds_binomial"] = violations;
  j["norm_reading"] = r.norm_reading;
  j["norm_reading_verified"] = r.norm_reading_verified;
  return j;
}

template <Scalar T>
Output cmd_verify(const RunConfig& cfg, int& status) {
  const auto params = single_params(cfg);
  if (cfg.t_max < 0) throw usage_error("--t-max must be >= 0");
  std::vector<Check> checks;
  checks.push_back(check_lumping<T>(params, cfg));
  checks.push_back(check_transitivity<T>(params, cfg));
  for (auto& c : spectral_checks<T>(params, cfg)) checks.push_back(std::move(c));

  int passed = 0, failed = 0, skipped = 0;
  Output o;
  Csv csv({"check", "status", "detail"});
  json list = json::array();
  for (const auto& c : checks) {
    if (c.status == "pass") ++passed;
    if (c.status == "fail") ++failed;
    if (c.status == "skipped") ++skipped;
    csv.row({c.name, c.status, c.detail.dump()});
    list.push_back({{"name", c.name}, {"status", c.status}, {"detail", c.detail}});
  }
  o.results["n"] = params.n();
  o.results["d"] = params.d();
  o.results["checks"] = list;
  o.results["summary"] = {{"passed", passed}, {"failed", failed}, {"skipped", skipped}};
  if (cfg.report_discrepancies) {
    const long long t = cfg.t >= 0 ? cfg.t : 1;
    o.results["discrepancies"] = discrepancy_json<T>(params, t);
    csv.row({"discrepancies", "report", o.results["discrepancies"].dump()});
  }
  o.csv = csv.str();
  status = failed > 0 ? kFailed : (skipped > 0 ? kSkipped : kOk);
  return o;
}

template <Scalar T>
Output dispatch(const RunConfig& cfg, int& status) {
  status = kOk;
  if (cfg.command == "tv-curve") return cmd_tv_curve<T>(cfg);
  if (cfg.command == "mixing-time") return cmd_mixing_time<T>(cfg);
  if (cfg.command == "bounds") return cmd_bounds<T>(cfg);
  if (cfg.command == "cutoff") return cmd_cutoff<T>(cfg);
  if (cfg.command == "simulate") return cmd_simulate<T>(cfg);
  if (cfg.command == "verify") return cmd_verify<T>(cfg, status);
  throw usage_error("unknown command " + cfg.command);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Exact and Monte Carlo analysis of the rook's walk on {1..n}^d", "rookmix"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(ROOKMIX_VERSION));

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"tv-curve", "distance to stationarity d(t) for t = 0..t_max"},
      {"mixing-time", "t_mix(eps) by exact lumped evolution"},
      {"bounds", "closed-form mixing-time bounds against exact t_mix"},
      {"verify", "structural checks: lumping, transitivity, spectrum, L2 identity"},
      {"cutoff", "cutoff profile over a list of dimensions"},
      {"simulate", "Monte Carlo shell histogram against exact probabilities"},
  };
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->fallthrough();
    sub->callback([&cfg, name = name] { cfg.command = name; });
  }

  app.add_option("--n", cfg.n, "board length n >= 3");
  app.add_option("--d", cfg.d, "dimension(s), comma separated")->delimiter(',');
  app.add_option("--eps", cfg.eps_text, "threshold(s) in (0,1): decimals or p/q, comma separated")->delimiter(',');
  app.add_option("--t-max", cfg.t_max, "last time step")->capture_default_str();
  app.add_option("--t", cfg.t, "single time step (simulate, transitivity, discrepancy report)");
  app.add_option("--samples", cfg.samples, "Monte Carlo trajectories")->capture_default_str();
  app.add_option("--seed", cfg.seed, "master seed")->capture_default_str();
  app.add_option("--mode", cfg.mode_text, "arithmetic: exact | float")
      ->check(CLI::IsMember({"exact", "float"}))
      ->capture_default_str();
  app.add_option("--out", cfg.out, "output path, - for stdout")->capture_default_str();
  app.add_option("--format", cfg.format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--cap", cfg.cap_flag, "largest n^d for full-chain checks (overrides ROOKMIX_CAP)");
  app.add_flag("--report-discrepancies", cfg.report_discrepancies, "verify: add the L2-normalization report");
  app.add_flag("--spectral", cfg.spectral, "tv-curve: evaluate through the eigen-expansion");
  app.add_option("--trials", cfg.trials, "verify: random starts for the transitivity check")->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    cfg.mode = parse_mode(cfg.mode_text);
    for (const auto& e : cfg.eps_text) {
      Rational q = parse_rational(e);
      if (!(q > 0 && q < 1)) throw usage_error("eps must lie in (0,1), got " + e);
      cfg.eps.push_back(q);
    }
    if (cfg.format.empty()) cfg.format = (cfg.command == "bounds" || cfg.command == "verify") ? "json" : "csv";
    cfg.cap = resolve_cap(cfg.cap_flag);
    if (cfg.trials < 1) throw usage_error("--trials must be >= 1");

    int status = kOk;
    const Output result =
        cfg.mode == NumericMode::exact ? dispatch<Rational>(cfg, status) : dispatch<double>(cfg, status);
    emit(cfg, result, out, err);
    return status;
  } catch (const usage_error& e) {
    err << "rookmix: " << e.what() << "\n";
    return kUsage;
  } catch (const io_error& e) {
    err << "rookmix: " << e.what() << "\n";
    return kIoError;
  } catch (const resource_error& e) {
    err << "rookmix: " << e.what() << "\n";
    return kResource;
  } catch (const std::domain_error& e) {
    err << "rookmix: " << e.what() << "\n";
    return kUsage;
  } catch (const std::bad_alloc&) {
    err << "rookmix: out of memory\n";
    return kResource;
  }
}

}  // namespace rookmix::cli
