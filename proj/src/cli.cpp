#include "qosc/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "qosc/deformation.hpp"
#include "qosc/eigenstates.hpp"
#include "qosc/errors.hpp"
#include "qosc/log_real.hpp"
#include "qosc/spectrum.hpp"
#include "qosc/verify.hpp"

namespace qosc::cli {

namespace {

using json = nlohmann::ordered_json;

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}
std::string num(const LogReal& x) { return x.to_string(17); }

json to_json(double x) { return x; }
json to_json(const LogReal& x) { return x.to_string(17); }

template <typename T>
json to_json(const std::optional<T>& x) {
  return x ? to_json(*x) : json(nullptr);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

template <typename T>
std::string csv_field(const std::optional<T>& x) {
  return x ? num(*x) : std::string();
}

void write_csv(std::ostream& out, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
    out << '\n';
  };
  line(header);
  for (const auto& r : rows) line(r);
}

json header(const char* command, const RunConfig& cfg, const DerivedParams& dp) {
  json j;
  j["command"] = command;
  j["alpha"] = cfg.alpha;
  j["beta"] = cfg.beta;
  j["regime"] = std::string(to_string(dp.regime));
  return j;
}

const std::vector<std::string> kHierarchyColumns = {
    "i", "g", "s", "u", "v", "t", "eps", "a", "b", "c", "mass_ratio", "freq_ratio"};

template <Scalar S>
json hierarchy_json(const std::vector<HierarchyLevel<S>>& levels) {
  json rows = json::array();
  for (const auto& L : levels) {
    json r;
    r["i"] = L.index;
    r["g"] = to_json(L.g);
    r["s"] = to_json(L.s);
    r["u"] = to_json(L.u);
    r["v"] = to_json(L.v);
    r["t"] = to_json(L.t);
    r["eps"] = to_json(L.eps);
    r["a"] = to_json(L.a);
    r["b"] = to_json(L.b);
    r["c"] = to_json(L.c);
    r["mass_ratio"] = to_json(L.mass_ratio);
    r["freq_ratio"] = to_json(L.freq_ratio);
    rows.push_back(std::move(r));
  }
  return rows;
}

template <Scalar S>
std::vector<std::vector<std::string>> hierarchy_csv(const std::vector<HierarchyLevel<S>>& levels) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& L : levels) {
    rows.push_back({std::to_string(L.index), num(L.g), num(L.s), csv_field(L.u), csv_field(L.v),
                    csv_field(L.t), num(L.eps), num(L.a), num(L.b), num(L.c), num(L.mass_ratio),
                    num(L.freq_ratio)});
  }
  return rows;
}

// Log-domain scalars when asked for, or when q^i would leave double range.
bool hierarchy_in_log_domain(const RunConfig& cfg, const DerivedParams& dp) {
  return cfg.log_domain || cfg.levels > max_double_levels(dp);
}

template <typename F>
void with_hierarchy(const RunConfig& cfg, const DerivedParams& dp, F&& emit) {
  if (hierarchy_in_log_domain(cfg, dp))
    emit(hierarchy<LogReal>(dp, cfg.levels));
  else
    emit(hierarchy<double>(dp, cfg.levels));
}

std::vector<std::pair<std::string, std::optional<double>>> derived_fields(const DerivedParams& dp) {
  return {{"k", dp.k},     {"g", dp.g},         {"s", dp.s},   {"q", dp.q},
          {"log_q", dp.log_q}, {"eps0", dp.eps0}, {"gamma", dp.gamma}, {"u", dp.u},
          {"v", dp.v},     {"t", dp.t},         {"d", dp.d},   {"K", dp.big_k}};
}

}  // namespace

void cmd_params(const RunConfig& cfg, std::ostream& out) {
  const DerivedParams dp = derive({cfg.alpha, cfg.beta});
  const QuadraticHamiltonian h1 = partner_h1(dp);
  if (cfg.format == Format::csv) {
    std::vector<std::vector<std::string>> rows = {
        {"alpha", num(dp.params.alpha)},
        {"beta", num(dp.params.beta)},
        {"regime", std::string(to_string(dp.regime))}};
    for (const auto& [name, value] : derived_fields(dp)) rows.push_back({name, csv_field(value)});
    rows.push_back({"h1_p2", num(h1.p2)});
    rows.push_back({"h1_x2", num(h1.x2)});
    rows.push_back({"h1_constant", num(h1.constant)});
    write_csv(out, {"name", "value"}, rows);
    return;
  }
  json j = header("params", cfg, dp);
  json derived;
  for (const auto& [name, value] : derived_fields(dp)) derived[name] = to_json(value);
  j["derived"] = std::move(derived);
  j["partner_h1"] = {{"p2", h1.p2}, {"x2", h1.x2}, {"constant", h1.constant}};
  with_hierarchy(cfg, dp, [&](const auto& levels) { j["hierarchy"] = hierarchy_json(levels); });
  out << j.dump(2) << '\n';
}

void cmd_hierarchy(const RunConfig& cfg, std::ostream& out) {
  const DerivedParams dp = derive({cfg.alpha, cfg.beta});
  with_hierarchy(cfg, dp, [&](const auto& levels) {
    if (cfg.format == Format::csv) {
      write_csv(out, kHierarchyColumns, hierarchy_csv(levels));
      return;
    }
    json j = header("hierarchy", cfg, dp);
    j["log_domain"] = hierarchy_in_log_domain(cfg, dp);
    j["levels"] = hierarchy_json(levels);
    out << j.dump(2) << '\n';
  });
}

namespace {

template <Scalar S>
void emit_spectrum(const RunConfig& cfg, const DerivedParams& dp, std::ostream& out) {
  const auto rows = spectrum_table<S>({dp, cfg.n_max, cfg.log_domain});
  if (cfg.format == Format::csv) {
    std::vector<std::vector<std::string>> cells;
    for (const auto& r : rows) cells.push_back({std::to_string(r.n), num(r.energy), num(r.excitation)});
    write_csv(out, {"n", "e_n", "excitation"}, cells);
    return;
  }
  json j = header("spectrum", cfg, dp);
  j["log_domain"] = cfg.log_domain;
  json arr = json::array();
  for (const auto& r : rows) {
    json row;
    row["n"] = r.n;
    row["e_n"] = to_json(r.energy);
    row["excitation"] = to_json(r.excitation);
    if (cfg.log_domain) row["log_e_n"] = scalar::log_abs(r.energy);
    arr.push_back(std::move(row));
  }
  j["rows"] = std::move(arr);
  out << j.dump(2) << '\n';
}

}  // namespace

void cmd_spectrum(const RunConfig& cfg, std::ostream& out) {
  const DerivedParams dp = derive({cfg.alpha, cfg.beta});
  if (cfg.log_domain)
    emit_spectrum<LogReal>(cfg, dp, out);
  else
    emit_spectrum<double>(cfg, dp, out);
}

void cmd_eigvec(const RunConfig& cfg, std::ostream& out) {
  const DerivedParams dp = derive({cfg.alpha, cfg.beta});
  if (cfg.n < 0) throw domain_error("eigvec: n must be >= 0");
  const FockExpansion e = eigenstate_fock(dp, cfg.n, cfg.sigma_max, Phase::canonical, cfg.tol);
  const double norm_error = std::fabs(e.norm_squared - 1.0);
  if (!(norm_error <= cfg.tol))
    throw convergence_error("eigvec: sum |c|^2 deviates from 1 by " + num(norm_error) +
                            " > tol " + num(cfg.tol));
  if (cfg.format == Format::csv) {
    std::vector<std::vector<std::string>> rows;
    for (int m = 0; m < e.dim(); ++m) rows.push_back({std::to_string(m), num(e.coeffs(m))});
    write_csv(out, {"index", "coefficient"}, rows);
    return;
  }
  json j = header("eigvec", cfg, dp);
  j["n"] = e.n;
  j["parity"] = e.parity == Parity::even ? "even" : "odd";
  j["sigma_max"] = e.sigma_max;
  j["dim"] = e.dim();
  j["tail_bound"] = e.tail_bound;
  j["norm_squared"] = e.norm_squared;
  j["normalization_error"] = norm_error;
  j["coefficients"] = std::vector<double>(e.coeffs.data(), e.coeffs.data() + e.dim());
  out << j.dump(2) << '\n';
}

bool cmd_verify(const RunConfig& cfg, std::ostream& out) {
  const DerivedParams dp = derive({cfg.alpha, cfg.beta});
  VerifyConfig vc;
  vc.dim = cfg.dim;
  if (cfg.sigma_max > 0) vc.sigma_max = cfg.sigma_max;
  vc.levels = cfg.levels;
  vc.inject_fault = cfg.inject_fault;
  const VerifyReport report = verify(dp, vc);
  if (cfg.format == Format::csv) {
    std::vector<std::vector<std::string>> rows;
    for (const auto& c : report.checks)
      rows.push_back({c.name, std::string(to_string(c.status)), num(c.residual), num(c.tolerance),
                      csv_field(c.note)});
    write_csv(out, {"check", "status", "residual", "tolerance", "note"}, rows);
  } else {
    json j = header("verify", cfg, dp);
    j["passed"] = report.passed();
    j["fault_injected"] = cfg.inject_fault;
    json checks = json::array();
    for (const auto& c : report.checks) {
      checks.push_back({{"name", c.name},
                        {"status", std::string(to_string(c.status))},
                        {"residual", c.residual},
                        {"tolerance", c.tolerance},
                        {"note", c.note}});
    }
    j["checks"] = std::move(checks);
    out << j.dump(2) << '\n';
  }
  return report.passed();
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    switch (cfg.command) {
      case Command::params: cmd_params(cfg, out); break;
      case Command::spectrum: cmd_spectrum(cfg, out); break;
      case Command::eigvec: cmd_eigvec(cfg, out); break;
      case Command::hierarchy: cmd_hierarchy(cfg, out); break;
      case Command::verify:
        if (!cmd_verify(cfg, out)) {
          err << "qosc: verification failed\n";
          return kVerificationFailed;
        }
        break;
    }
    return kOk;
  } catch (const domain_error& e) {
    err << "qosc: domain error: " << e.what() << '\n';
    return kDomainError;
  } catch (const convergence_error& e) {
    err << "qosc: convergence failure: " << e.what() << '\n';
    return kTruncation;
  } catch (const overflow_error& e) {
    err << "qosc: out of double range: " << e.what() << " (try --log-domain)\n";
    return kTruncation;
  } catch (const consistency_error& e) {
    err << "qosc: precision failure: " << e.what() << '\n';
    return kTruncation;
  }
}

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Deformed harmonic oscillator: parameters, spectrum, eigenvectors, checks", "qosc"};
  app.require_subcommand(1);

  const std::map<std::string, Format> formats{{"json", Format::json}, {"csv", Format::csv}};
  auto common = [&](CLI::App* sub) {
    sub->add_option("--alpha", cfg.alpha, "position deformation alpha >= 0")->capture_default_str();
    sub->add_option("--beta", cfg.beta, "momentum deformation beta >= 0")->capture_default_str();
    sub->add_option("--n-max", cfg.n_max, "highest level in tables")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    sub->add_option("--dim", cfg.dim, "oracle Fock-space dimension")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    sub->add_option("--sigma-max", cfg.sigma_max, "Fock truncation 2*sigma_max+1 (0: adaptive)")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    sub->add_option("--levels", cfg.levels, "hierarchy levels")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sub->add_option("--tol", cfg.tol, "truncation tolerance")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sub->add_option("--format", cfg.format, "json or csv")
        ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));
    sub->add_flag("--log-domain", cfg.log_domain, "sign/log-magnitude arithmetic beyond double range");
  };

  struct Sub {
    const char* name;
    const char* help;
    Command command;
  };
  const Sub subs[] = {
      {"params", "derived parameters and partner hierarchy", Command::params},
      {"spectrum", "energy table n, e_n, e_n - e_0", Command::spectrum},
      {"eigvec", "Fock coefficients of an eigenvector", Command::eigvec},
      {"hierarchy", "partner Hamiltonian coefficients", Command::hierarchy},
      {"verify", "run the cross-check battery", Command::verify},
  };
  for (const auto& s : subs) {
    CLI::App* sub = app.add_subcommand(s.name, s.help);
    common(sub);
    const Command c = s.command;
    sub->callback([&cfg, c] { cfg.command = c; });
    if (c == Command::eigvec)
      sub->add_option("--n", cfg.n, "level")->check(CLI::NonNegativeNumber)->capture_default_str();
    if (c == Command::verify) sub->add_flag("--inject-fault", cfg.inject_fault)->group("");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kDomainError;
  }
  return run(cfg, out, err);
}

}  // namespace qosc::cli
