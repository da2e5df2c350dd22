// arcdet: command-line runner for the arc/Toeplitz/Fredholm experiments.
//
//   arcdet fredholm   --r 0,1 --s 1 --nodes 40
//   arcdet toeplitz   --family bs --r 1 --s 1 --n 50,100,200,400
//   arcdet kernels    --r 1 --z 0,1,2
//   arcdet asympt     --family f1 --s 1 --n 100,400
//   arcdet converge   --preset paper
//   arcdet verify-all
//
// Exit codes: 0 ok, 1 a verify-all criterion failed, 2 usage or invalid input.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "arcdet/asympt.hpp"
#include "arcdet/fredholm.hpp"
#include "arcdet/kernels.hpp"
#include "arcdet/toeplitz.hpp"
#include "arcdet/verify.hpp"

namespace {

using namespace arcdet;

// ---- tables ---------------------------------------------------------------

using Cell = std::variant<std::monostate, long long, double, std::string>;

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

std::string csv_cell(const Cell& c) {
  struct {
    std::string operator()(std::monostate) const { return ""; }
    std::string operator()(long long v) const { return std::to_string(v); }
    std::string operator()(double v) const { return format_double(v); }
    std::string operator()(const std::string& s) const {
      if (s.find_first_of(",\"\n") == std::string::npos) return s;
      std::string q = "\"";
      for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
      return q + "\"";
    }
  } visit;
  return std::visit(visit, c);
}

nlohmann::ordered_json json_cell(const Cell& c) {
  struct {
    nlohmann::ordered_json operator()(std::monostate) const { return nullptr; }
    nlohmann::ordered_json operator()(long long v) const { return v; }
    nlohmann::ordered_json operator()(double v) const {
      // 15 significant digits, same as the CSV
      if (!std::isfinite(v)) return format_double(v);
      return std::stod(format_double(v));
    }
    nlohmann::ordered_json operator()(const std::string& s) const { return s; }
  } visit;
  return std::visit(visit, c);
}

void write_csv(std::ostream& os, const std::string& meta, const std::vector<Table>& tables) {
  os << "# " << meta << "\n";
  for (std::size_t t = 0; t < tables.size(); ++t) {
    if (tables.size() > 1) os << (t ? "\n" : "") << "# table: " << tables[t].name << "\n";
    for (std::size_t c = 0; c < tables[t].columns.size(); ++c) os << (c ? "," : "") << tables[t].columns[c];
    os << "\n";
    for (const auto& row : tables[t].rows) {
      for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << csv_cell(row[c]);
      os << "\n";
    }
  }
}

// Array of row objects; with several tables each row carries a "table" key.
void write_json(std::ostream& os, const std::vector<Table>& tables) {
  auto out = nlohmann::ordered_json::array();
  for (const auto& t : tables)
    for (const auto& row : t.rows) {
      nlohmann::ordered_json obj;
      if (tables.size() > 1) obj["table"] = t.name;
      for (std::size_t c = 0; c < row.size(); ++c) obj[t.columns[c]] = json_cell(row[c]);
      out.push_back(std::move(obj));
    }
  os << out.dump(2) << "\n";
}

Cell opt_cell(const std::optional<double>& v) { return v ? Cell{*v} : Cell{}; }

// ---- parallel map with deterministic output order -------------------------

unsigned thread_cap() {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("ARCDET_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1) n = std::min<unsigned>(n, static_cast<unsigned>(v));
  }
  return n;
}

template <class R>
std::vector<R> parallel_map(std::size_t count, const std::function<R(std::size_t)>& f) {
  std::vector<R> out(count);
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < count;) {
      try {
        out[i] = f(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned n = std::min<std::size_t>(thread_cap(), std::max<std::size_t>(count, 1));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

// ---- configuration --------------------------------------------------------

struct Config {
  std::string command;
  std::vector<double> r, s, z;
  std::vector<int> n, m_list;
  int nodes = 48;
  int levels = kDefaultLevels;
  std::string family;
  std::string kernel = "bs";
  std::string format = "csv";
  std::string output;
  std::string preset;
  bool no_direct = false;
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + format_double(v[i]);
  return s;
}

std::string join(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

std::string metadata(const Config& c) {
  std::string m = "arcdet " ARCDET_VERSION " command=" + c.command;
  if (!c.preset.empty()) m += " preset=" + c.preset;
  if (!c.family.empty()) m += " family=" + c.family;
  if (c.command == "fredholm" || c.command == "converge") m += " kernel=" + c.kernel;
  if (!c.r.empty()) m += " r=" + join(c.r);
  if (!c.s.empty()) m += " s=" + join(c.s);
  if (!c.n.empty()) m += " n=" + join(c.n);
  if (!c.z.empty()) m += " z=" + join(c.z);
  if (c.command == "fredholm") m += " nodes=" + std::to_string(c.nodes) + " levels=" + std::to_string(c.levels);
  if (!c.m_list.empty()) m += " m=" + join(c.m_list);
  return m;
}

std::vector<double> default_z_grid() {
  std::vector<double> g;
  for (int j = -40; j <= 40; ++j) g.push_back(0.25 * j);
  return g;
}

void require(bool ok, const std::string& msg) {
  if (!ok) throw UsageError(msg);
}

KernelSpec kernel_spec(const std::string& name, double r) {
  if (name == "bs") return KernelSpec::bernstein_szego(r);
  if (name == "kc") return KernelSpec::chebyshev_kc();
  if (name == "sine") return KernelSpec::sine();
  throw UsageError("unknown kernel '" + name + "' (expected bs, kc or sine)");
}

ScalingFamily scaling_family(const std::string& name, double r) {
  using K = ScalingFamily::Kind;
  static const std::map<std::string, K> kinds{{"chebyshev1", K::chebyshev1}, {"bs", K::bernstein_szego},
                                              {"f0", K::f0},                 {"f1", K::f1},
                                              {"f2", K::f2},                 {"chebyshev2_q", K::chebyshev2_q}};
  const auto it = kinds.find(name);
  if (it == kinds.end())
    throw UsageError("unknown family '" + name + "' (expected chebyshev1, bs, f0, f1, f2, chebyshev2_q)");
  return {it->second, r};
}

std::string family_label(const ScalingFamily& f) {
  if (f.kind != ScalingFamily::Kind::bernstein_szego) return f.name();
  return "bs:r=" + format_double(f.r);
}

// ---- commands -------------------------------------------------------------

std::vector<Table> run_fredholm(const Config& c) {
  require(!c.s.empty(), "fredholm: --s is required");
  require(c.nodes >= 4, "fredholm: --nodes must be >= 4");
  std::vector<double> rs = c.kernel == "bs" ? c.r : std::vector<double>{0.0};
  require(!rs.empty(), "fredholm: --r is required for the bs kernel");
  for (double s : c.s) require(s > 0, "fredholm: s must be > 0");
  std::vector<std::pair<double, double>> pts;
  for (double r : rs)
    for (double s : c.s) pts.emplace_back(r, s);
  Table t{"fredholm", {"r", "s", "m", "nystrom", "closed_form", "abs_err"}, {}};
  const auto rows = parallel_map<std::vector<Cell>>(pts.size(), [&](std::size_t i) {
    const auto [r, s] = pts[i];
    const auto spec = kernel_spec(c.kernel, r);
    const double d = fredholm_det(spec, s, c.nodes, c.levels);
    const auto cf = closed_form(spec, s);
    return std::vector<Cell>{r, s, static_cast<long long>(c.nodes), d, opt_cell(cf),
                             cf ? Cell{std::fabs(d - *cf)} : Cell{}};
  });
  t.rows = rows;
  return {t};
}

std::vector<Table> run_toeplitz(const Config& c) {
  require(!c.s.empty() && !c.n.empty(), "toeplitz: --s and --n are required");
  const std::string fam = c.family.empty() ? "bs" : c.family;
  std::vector<std::pair<double, double>> pts;
  if (c.preset == "paper") {
    pts = {{0.0, 1.0}, {1.0, 1.0}, {2.0, 0.5}};
  } else {
    const std::vector<double> rs = fam == "bs" ? (c.r.empty() ? std::vector<double>{0.0} : c.r) : std::vector<double>{0.0};
    for (double r : rs)
      for (double s : c.s) pts.emplace_back(r, s);
  }
  for (int n : c.n) require(n >= 1, "toeplitz: n must be >= 1");
  struct Job {
    ScalingFamily f;
    double s;
    int n;
  };
  std::vector<Job> jobs;
  for (const auto& [r, s] : pts)
    for (int n : c.n) jobs.push_back({scaling_family(fam, r), s, n});
  Table t{"toeplitz", {"family", "s", "n", "logdet_product", "logdet_direct", "closed_form_limit", "deviation"}, {}};
  t.rows = parallel_map<std::vector<Cell>>(jobs.size(), [&](std::size_t i) {
    const auto& j = jobs[i];
    if (j.s < 0) throw UsageError("toeplitz: s must be >= 0");
    if (!(2.0 * j.s / j.n < std::numbers::pi)) throw UsageError("toeplitz: need 2s/n < pi");
    const auto row = scaling_sequence(j.f, j.s, {j.n})[0];
    const bool trivial = j.s == 0.0 && j.f.kind == ScalingFamily::Kind::f0;
    Cell product, direct;
    if (trivial) {
      product = 0.0;
      if (!c.no_direct) direct = 0.0;
    } else {
      const auto fw = j.f.at(2.0 * j.s / j.n);
      if (fw.has_family()) product = row.logdet.logmag;
      // dense elimination only up to order 2000
      if (!c.no_direct && j.n + 1 <= 2000) direct = toeplitz_logdet_direct(fw, j.n).logmag;
    }
    return std::vector<Cell>{family_label(j.f), j.s, static_cast<long long>(j.n), product, direct,
                             opt_cell(row.limit), opt_cell(row.deviation)};
  });
  return {t};
}

std::vector<Table> run_kernels(const Config& c) {
  const std::vector<double> rs = c.r.empty() ? std::vector<double>{0.3, 1.0, 2.0} : c.r;
  const std::vector<double> zs = c.z.empty() ? default_z_grid() : c.z;
  for (double r : rs) require(r >= 0, "kernels: r must be >= 0");
  std::vector<std::pair<double, double>> pts;
  for (double r : rs)
    for (double z : zs) pts.emplace_back(r, z);

  Table reps{"representations", {"r", "z", "cosh_form", "sine_form", "bessel_form", "max_pairwise_diff"}, {}};
  reps.rows = parallel_map<std::vector<Cell>>(pts.size(), [&](std::size_t i) {
    const auto [r, z] = pts[i];
    std::vector<double> vals{kernel_eval(KernelSpec::bernstein_szego(r, KernelRep::cosh_form), z)};
    Cell sine, bessel;
    if (r > 0) {
      vals.push_back(kernel_eval(KernelSpec::bernstein_szego(r, KernelRep::sine_form), z));
      sine = vals.back();
    }
    if (r == 1.0) {
      vals.push_back(kernel_eval(KernelSpec::bernstein_szego(r, KernelRep::bessel_form), z));
      bessel = vals.back();
    }
    double diff = 0.0;
    for (double a : vals)
      for (double b : vals) diff = std::max(diff, std::fabs(a - b));
    return std::vector<Cell>{r, z, vals[0], sine, bessel, diff};
  });

  Table symbol{"symbol", {"r", "xi", "sigma"}, {}};
  for (double r : rs)
    for (double xi : {0.0, 0.5, 1.0, 1.5, 2.0, 5.0, 10.0, 100.0, 1000.0})
      symbol.rows.push_back({r, xi, symbol_sigma(r, xi)});

  std::vector<std::pair<double, double>> inv_pts;
  for (const auto& p : pts)
    if (std::fabs(p.second) <= 50.0) inv_pts.push_back(p);
  Table inversion{"inversion", {"r", "z", "from_symbol", "kernel", "abs_diff"}, {}};
  inversion.rows = parallel_map<std::vector<Cell>>(inv_pts.size(), [&](std::size_t i) {
    const auto [r, z] = inv_pts[i];
    const double a = kernel_from_symbol(r, z), b = kernel_eval(KernelSpec::bernstein_szego(r), z);
    return std::vector<Cell>{r, z, a, b, std::fabs(a - b)};
  });
  return {reps, symbol, inversion};
}

std::vector<Table> run_asympt(const Config& c) {
  require(!c.s.empty() && !c.n.empty(), "asympt: --s and --n are required");
  std::vector<LegendreArc> fams;
  if (c.family.empty() || c.family == "f1") fams.push_back(LegendreArc::f1);
  if (c.family.empty() || c.family == "f2") fams.push_back(LegendreArc::f2);
  require(!fams.empty(), "asympt: --family must be f1 or f2");
  std::vector<int> ns = c.n;
  std::sort(ns.begin(), ns.end());
  struct Job {
    LegendreArc f;
    double s;
    int n;
  };
  std::vector<Job> jobs;
  for (auto f : fams)
    for (double s : c.s)
      for (int n : ns) jobs.push_back({f, s, n});
  Table t{"asympt", {"family", "n", "s", "exact_logdet", "asymptotic_logdet", "ratio"}, {}};
  t.rows = parallel_map<std::vector<Cell>>(jobs.size(), [&](std::size_t i) {
    const auto& j = jobs[i];
    const auto row = asymptotic_report(j.f, j.s, {j.n})[0];
    return std::vector<Cell>{to_string(j.f), static_cast<long long>(j.n), j.s, row.exact_logdet.logmag,
                             row.asymptotic_logdet.logmag, row.ratio};
  });
  return {t};
}

std::vector<Table> run_converge(const Config& c) {
  Config tc = c;
  if (tc.n.empty()) tc.n = {50, 100, 200, 400};
  if (tc.s.empty()) tc.s = {1.0};
  auto tables = run_toeplitz(tc);
  tables[0].name = "scaling";

  const std::vector<int> ms = c.m_list.empty() ? std::vector<int>{8, 16, 32, 64} : c.m_list;
  for (int m : ms) require(m >= 4, "converge: m must be >= 4");
  require(std::is_sorted(ms.begin(), ms.end()), "converge: --m must be ascending");
  std::vector<std::pair<KernelSpec, double>> jobs;
  if (c.preset == "paper") {
    jobs = {{KernelSpec::bernstein_szego(0.0), 1.0}, {KernelSpec::sine(), 1.0}};
  } else {
    const std::vector<double> rs = c.kernel == "bs" ? (c.r.empty() ? std::vector<double>{0.0} : c.r) : std::vector<double>{0.0};
    for (double r : rs)
      for (double s : tc.s) jobs.emplace_back(kernel_spec(c.kernel, r), s);
  }
  for (const auto& j : jobs) require(j.second > 0, "converge: s must be > 0");
  Table t{"nystrom", {"kernel", "s", "m", "det", "error"}, {}};
  const auto blocks = parallel_map<std::vector<ConvergenceRow>>(
      jobs.size(), [&](std::size_t i) { return convergence_report(jobs[i].first, jobs[i].second, ms); });
  for (std::size_t i = 0; i < jobs.size(); ++i)
    for (const auto& row : blocks[i])
      t.rows.push_back({jobs[i].first.name(), jobs[i].second, static_cast<long long>(row.m), row.det, row.error});
  tables.push_back(t);
  return tables;
}

std::vector<Table> run_verify_all(bool& all_pass) {
  const auto checks = criteria();
  const auto results =
      parallel_map<CriterionResult>(checks.size(), [&](std::size_t i) { return run_timed(checks[i]); });
  Table t{"verify", {"criterion", "name", "result", "measured", "tolerance", "seconds", "detail"}, {}};
  all_pass = true;
  for (const auto& r : results) {
    all_pass = all_pass && r.pass;
    t.rows.push_back({static_cast<long long>(r.id), r.name, std::string(r.pass ? "PASS" : "FAIL"), r.measured,
                      r.tolerance, r.seconds, r.detail});
  }
  return {t};
}

void apply_preset(Config& c) {
  if (c.preset.empty()) return;
  if (c.preset != "paper") throw UsageError("unknown preset '" + c.preset + "' (expected paper)");
  if (c.command == "fredholm") {
    c.r = {0.0, 0.5, 1.0, 2.0};
    c.s = {0.5, 1.0, 2.0};
    c.nodes = 48;
    c.kernel = "bs";
  } else if (c.command == "toeplitz" || c.command == "converge") {
    c.family = "bs";
    c.r = {0.0, 1.0, 2.0};
    c.s = {1.0, 1.0, 0.5};
    c.n = {50, 100, 200, 400};
    c.m_list = {8, 16, 32, 64};
  } else if (c.command == "kernels") {
    c.r = {0.3, 1.0, 2.0};
    c.z.clear();
  } else if (c.command == "asympt") {
    c.family.clear();
    c.s = {0.5, 1.0, 2.0};
    c.n = {400};
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"arcdet: arc Toeplitz and Fredholm determinant experiments"};
  app.require_subcommand(1);
  Config cfg;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--output,-o", cfg.output, "Write the table here instead of stdout");
    sub->add_option("--preset", cfg.preset, "Expand to the acceptance grid")->check(CLI::IsMember({"paper"}));
  };
  const auto add_r = [&](CLI::App* sub) { sub->add_option("--r", cfg.r, "Comma-separated r values")->delimiter(','); };
  const auto add_s = [&](CLI::App* sub) { sub->add_option("--s", cfg.s, "Comma-separated s values")->delimiter(','); };
  const auto add_n = [&](CLI::App* sub) { sub->add_option("--n", cfg.n, "Comma-separated n values")->delimiter(','); };

  auto* fred = app.add_subcommand("fredholm", "Nystrom det(I - K) against the closed form");
  add_common(fred), add_r(fred), add_s(fred);
  fred->add_option("--nodes,-m", cfg.nodes, "Nystrom nodes (base level)");
  fred->add_option("--levels", cfg.levels, "Extrapolation levels for kinked kernels")->check(CLI::Range(1, 6));
  fred->add_option("--kernel", cfg.kernel, "bs, kc or sine")->check(CLI::IsMember({"bs", "kc", "sine"}));

  auto* toe = app.add_subcommand("toeplitz", "Arc Toeplitz determinants at alpha = 2s/n");
  add_common(toe), add_r(toe), add_s(toe), add_n(toe);
  toe->add_option("--family", cfg.family, "chebyshev1, bs, f0, f1, f2 or chebyshev2_q");
  toe->add_flag("--no-direct", cfg.no_direct, "Skip the dense elimination column");

  auto* ker = app.add_subcommand("kernels", "Kernel representations, symbol and Fourier inversion");
  add_common(ker), add_r(ker);
  ker->add_option("--z", cfg.z, "Comma-separated z values")->delimiter(',');

  auto* asy = app.add_subcommand("asympt", "Legendre arc determinants against their asymptotics");
  add_common(asy), add_s(asy), add_n(asy);
  asy->add_option("--family", cfg.family, "f1 or f2 (default both)")->check(CLI::IsMember({"f1", "f2"}));

  auto* con = app.add_subcommand("converge", "Scaling sequences and Nystrom convergence tables");
  add_common(con), add_r(con), add_s(con), add_n(con);
  con->add_option("--family", cfg.family, "Toeplitz family (default bs)");
  con->add_option("--m", cfg.m_list, "Comma-separated Nystrom sizes")->delimiter(',');
  con->add_option("--kernel", cfg.kernel, "bs, kc or sine")->check(CLI::IsMember({"bs", "kc", "sine"}));

  auto* ver = app.add_subcommand("verify-all", "Run every acceptance criterion");
  ver->add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  ver->add_option("--output,-o", cfg.output, "Write the table here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  cfg.command = app.get_subcommands().front()->get_name();

  std::vector<Table> tables;
  bool all_pass = true;
  try {
    apply_preset(cfg);
    if (cfg.command == "fredholm") tables = run_fredholm(cfg);
    else if (cfg.command == "toeplitz") tables = run_toeplitz(cfg);
    else if (cfg.command == "kernels") tables = run_kernels(cfg);
    else if (cfg.command == "asympt") tables = run_asympt(cfg);
    else if (cfg.command == "converge") tables = run_converge(cfg);
    else tables = run_verify_all(all_pass);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  std::ofstream file;
  if (!cfg.output.empty()) {
    file.open(cfg.output);
    if (!file) {
      std::cerr << "error: cannot open " << cfg.output << "\n";
      return 2;
    }
  }
  std::ostream& os = cfg.output.empty() ? std::cout : file;
  if (cfg.format == "json")
    write_json(os, tables);
  else
    write_csv(os, metadata(cfg), tables);
  return all_pass ? 0 : 1;
}
