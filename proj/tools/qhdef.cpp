// qhdef command line driver: builds the requested structured space or
// deformation family, runs the verification suites and writes JSON reports
// and CSV convergence tables.
//
// Exit codes: 0 all requested checks pass, 1 check failure or domain
// rejection, 2 usage error.

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <sstream>
#include <string>

#include "qhdef/axioms.hpp"
#include "qhdef/families.hpp"
#include "qhdef/fusion.hpp"

using json = nlohmann::ordered_json;
using namespace qhdef;

namespace {

struct Options {
  std::string group = "su2";
  std::string space;
  std::string family;
  std::string with;
  int samples = 32;
  std::uint64_t seed = 1;
  double fd_step = 1e-4;
  double tol = 1e-6;
  int genus = 1;
  int boundaries = 1;
  std::string element;
  std::string t_grid = "1,0.5,0.25,0.125,0.0625,0.03125,0.015625,0";
  std::string out;
  std::string csv;
  bool no_timestamp = false;
};

std::string default_element(const std::string& group) {
  if (group == "t2") return "0.4,-0.3";
  if (group == "sl2r") return "0.2,0.1,0.6";
  return "0.7,0.3,0.2";  // su2, so3
}

std::vector<double> parse_csv_doubles(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    out.push_back(std::stod(item));
  }
  return out;
}

AlgebraVector element_of(const GroupModel& model, const Options& opt) {
  const std::string text = opt.element.empty() ? default_element(model.name()) : opt.element;
  std::vector<double> coeffs = parse_csv_doubles(text);
  if (static_cast<int>(coeffs.size()) != model.dim())
    throw CLI::ValidationError("--element", "expected " + std::to_string(model.dim()) +
                                                " coefficients for group " + model.name());
  RVec c(model.dim());
  for (int i = 0; i < model.dim(); ++i) c(i) = coeffs[i];
  return model.from_coords(c);
}

std::string iso_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t tt = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::strftime(buf, sizeof buf, "%FT%TZ", std::gmtime(&tt));
  return buf;
}

CheckConfig config_of(const Options& opt) {
  CheckConfig cfg;
  cfg.samples = opt.samples;
  cfg.seed = opt.seed;
  cfg.fd_step = opt.fd_step;
  cfg.tol = opt.tol;
  return cfg;
}

json config_json(const CheckConfig& cfg, double pairing_scale) {
  return json{{"samples", cfg.samples},
              {"seed", cfg.seed},
              {"fd_step", cfg.fd_step},
              {"tol", cfg.tol},
              {"sign_convention",
               {{"moment_sign_qh", cfg.signs.moment_sign_qh},
                {"moment_sign_ham", cfg.signs.moment_sign_ham},
                {"chi_sign", cfg.signs.chi_sign}}},
              {"pairing_scale", pairing_scale}};
}

json report_json(const Report& rep) {
  json axioms = json::array();
  for (const auto& a : rep.axioms)
    axioms.push_back({{"name", a.name},
                      {"max_residual", a.max_residual},
                      {"mean_residual", a.mean_residual},
                      {"pass", a.pass}});
  json ranks{{"chart_dim", rep.ranks.chart_dim},
             {"gram_rank_min", rep.ranks.gram_rank_min},
             {"gram_rank_max", rep.ranks.gram_rank_max},
             {"rank_points", rep.ranks.rank_points},
             {"kernel_points", rep.ranks.kernel_points}};
  return json{{"kind", rep.space_kind},
              {"pairing_rescale", rep.pairing_rescale},
              {"axioms", axioms},
              {"ranks", ranks},
              {"pass", rep.pass}};
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open output file " + path);
  f << text;
}

void emit_json(const Options& opt, json doc) {
  if (!opt.no_timestamp) doc["timestamp"] = iso_timestamp();
  if (opt.out.empty())
    std::cout << doc.dump(2) << "\n";
  else
    write_text(opt.out, doc.dump(2) + "\n");
}

std::string fmt_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// RFC 4180 convergence table. Data rows: |t_grid| x 6 metrics; one footer
/// row (t = nan, metric "slope") carrying the fitted form slope in
/// max_residual and the moment-continuity slope in mean_residual.
std::string family_csv(const FamilyReport& rep, int samples) {
  std::string text = "t,metric,max_residual,mean_residual,samples\r\n";
  auto row = [&](double t, const std::string& metric, double mx, double mean) {
    text += fmt_number(t) + "," + metric + "," + fmt_number(mx) + "," + fmt_number(mean) +
            "," + std::to_string(samples) + "\r\n";
  };
  for (size_t i = 0; i < rep.t_grid.size(); ++i) {
    const double t = rep.t_grid[i];
    for (const auto& name : {"B1", "B2", "B3", "equivariance"}) {
      const AxiomResult* a = rep.per_t[i].find(name);
      row(t, name, a->max_residual, a->mean_residual);
    }
    row(t, "form_vs_limit", rep.convergence[i].form_max, rep.convergence[i].form_mean);
    row(t, "moment_continuity", rep.convergence[i].mu_max, rep.convergence[i].mu_mean);
  }
  row(std::numeric_limits<double>::quiet_NaN(), "slope", rep.slope_form, rep.slope_mu);
  return text;
}

json family_json(const Options& opt, const std::string& family_name,
                 const DeformationFamily& fam, const FamilyReport& rep,
                 const CheckConfig& cfg) {
  json per_t = json::array();
  for (size_t i = 0; i < rep.t_grid.size(); ++i) {
    json r = report_json(rep.per_t[i]);
    r["t"] = rep.t_grid[i];
    per_t.push_back(std::move(r));
  }
  json conv = json::array();
  for (const auto& c : rep.convergence)
    conv.push_back({{"t", c.t},
                    {"form_max", c.form_max},
                    {"form_mean", c.form_mean},
                    {"mu_max", c.mu_max},
                    {"mu_mean", c.mu_mean}});
  return json{{"family", family_name},
              {"group", opt.group},
              {"config",
               config_json(cfg, fam.factors.empty() ? 1.0 : fam.factors[0]->pairing_scale())},
              {"t_interval", {{"lo", fam.t_lo}, {"hi", fam.t_hi}, {"capped", fam.t_capped}}},
              {"t_grid", rep.t_grid},
              {"per_t", per_t},
              {"convergence", conv},
              {"slope_form", rep.slope_form},
              {"slope_mu", rep.slope_mu},
              {"pass", rep.pass}};
}

int run_verify(const Options& opt) {
  auto model = GroupModel::by_name(opt.group);
  CheckConfig cfg = config_of(opt);

  StructuredSpace space;
  if (opt.space == "double") {
    space = double_space(model, model->sample_group(mix_seed(opt.seed, 201), 0.5),
                         model->sample_group(mix_seed(opt.seed, 202), 0.5));
  } else if (opt.space == "tstar") {
    space = tstar_space(model, model->sample_group(mix_seed(opt.seed, 203), 0.5),
                        model->sample_algebra(mix_seed(opt.seed, 204), 0.4));
  } else if (opt.space == "conjugacy") {
    space = conj_class_space(model, model->exp(element_of(*model, opt)));
  } else if (opt.space == "orbit") {
    space = orbit_space(model, element_of(*model, opt));
  } else if (opt.space == "moduli") {
    space = moduli_qh(model, opt.genus, opt.boundaries, mix_seed(opt.seed, 300));
  } else {
    throw CLI::ValidationError("--space", "unknown space '" + opt.space + "'");
  }

  Report rep = (space.flavor == Flavor::quasi_hamiltonian) ? check_qh(space, cfg)
                                                           : check_ham(space, cfg);

  json out{{"space", opt.space},
           {"group", opt.group},
           {"config", config_json(cfg, model->pairing_scale())}};
  if (opt.space == "moduli") {
    out["genus"] = opt.genus;
    out["boundaries"] = opt.boundaries;
  }
  out.update(report_json(rep));
  emit_json(opt, out);

  for (const auto& a : rep.axioms)
    std::fprintf(stderr, "%-14s max %.3e  %s\n", a.name.c_str(), a.max_residual,
                 a.pass ? "pass" : "FAIL");
  return rep.pass ? 0 : 1;
}

int run_family_check(const Options& opt, const std::string& family_name,
                     const DeformationFamily& fam) {
  CheckConfig cfg = config_of(opt);
  std::vector<double> grid = parse_csv_doubles(opt.t_grid);
  FamilyReport rep = check_family(fam, grid, cfg);

  emit_json(opt, family_json(opt, family_name, fam, rep, cfg));
  if (!opt.csv.empty()) write_text(opt.csv, family_csv(rep, cfg.samples));

  for (size_t i = 0; i < rep.t_grid.size(); ++i)
    std::fprintf(stderr, "t = %-10.6g %s\n", rep.t_grid[i],
                 rep.per_t[i].pass ? "pass" : "FAIL");
  std::fprintf(stderr, "slope(form) = %.3f  slope(moment) = %.3f  %s\n", rep.slope_form,
               rep.slope_mu, rep.slopes_pass ? "pass" : "FAIL");
  return rep.pass ? 0 : 1;
}

int run_deform(const Options& opt) {
  auto model = GroupModel::by_name(opt.group);
  if (opt.family == "double") {
    return run_family_check(
        opt, "double", double_family(model, model->sample_group(mix_seed(opt.seed, 211), 0.5)));
  }
  if (opt.family == "conjugacy") {
    return run_family_check(opt, "conjugacy", conj_family(model, element_of(*model, opt)));
  }
  if (opt.family == "moduli") {
    return run_family_check(
        opt, "moduli", moduli_family(model, opt.genus, opt.boundaries, mix_seed(opt.seed, 300)));
  }
  throw CLI::ValidationError("--family", "unknown family '" + opt.family + "'");
}

int run_fuse(const Options& opt) {
  if (opt.family != "double" || opt.with != "double")
    throw CLI::ValidationError("--family/--with", "only double families can be fused");
  auto model = GroupModel::by_name(opt.group);
  auto f1 = double_family(model, model->sample_group(mix_seed(opt.seed, 221), 0.5));
  auto f2 = double_family(model, model->sample_group(mix_seed(opt.seed, 222), 0.5));
  return run_family_check(opt, "double(*)double", external_fuse_family(f1, f2, 0, 0));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical verification of quasi-Hamiltonian spaces, fusion products and their "
               "Hamiltonian deformation families on matrix Lie groups"};
  app.require_subcommand(1);

  Options opt;
  auto add_common = [&](CLI::App* cmd, bool wants_element) {
    cmd->add_option("--group", opt.group, "group model (su2, so3, t2, sl2r)")
        ->default_val("su2");
    cmd->add_option("--samples", opt.samples, "chart points per check")->default_val(32);
    cmd->add_option("--seed", opt.seed, "sampling seed (env QHDEF_SEED overrides)")
        ->default_val(1);
    cmd->add_option("--fd-step", opt.fd_step, "finite difference step")->default_val(1e-4);
    cmd->add_option("--tol", opt.tol, "residual tolerance")->default_val(1e-6);
    cmd->add_option("--out", opt.out, "JSON report path (stdout if omitted)");
    cmd->add_flag("--no-timestamp", opt.no_timestamp, "omit the timestamp field");
    if (wants_element)
      cmd->add_option("--element", opt.element,
                      "algebra basis coefficients \"c1,c2,...\" (defaults per group)");
  };

  CLI::App* verify = app.add_subcommand("verify", "check one structured space");
  verify->add_option("--space", opt.space, "double | tstar | conjugacy | orbit | moduli")
      ->required();
  verify->add_option("--genus", opt.genus, "moduli: genus")->default_val(1);
  verify->add_option("--boundaries", opt.boundaries, "moduli: boundary count r")->default_val(1);
  add_common(verify, true);

  CLI::App* deform = app.add_subcommand("deform", "check a deformation family over a t grid");
  deform->add_option("--family", opt.family, "double | conjugacy | moduli")->required();
  deform->add_option("--t-grid", opt.t_grid, "comma separated t values (must contain 1 and 0)");
  deform->add_option("--csv", opt.csv, "convergence table path");
  deform->add_option("--genus", opt.genus, "moduli: genus")->default_val(1);
  deform->add_option("--boundaries", opt.boundaries, "moduli: boundary count r")->default_val(1);
  add_common(deform, true);

  CLI::App* fuse = app.add_subcommand("fuse", "externally fuse two families, then full check");
  fuse->add_option("--family", opt.family, "left family (double)")->default_val("double");
  fuse->add_option("--with", opt.with, "right family (double)")->default_val("double");
  fuse->add_option("--t-grid", opt.t_grid, "comma separated t values");
  fuse->add_option("--csv", opt.csv, "convergence table path");
  add_common(fuse, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (const char* env_seed = std::getenv("QHDEF_SEED")) {
    try {
      opt.seed = std::stoull(env_seed);
    } catch (...) {
      std::fprintf(stderr, "QHDEF_SEED is not a valid integer: %s\n", env_seed);
      return 2;
    }
  }

  try {
    if (verify->parsed()) return run_verify(opt);
    if (deform->parsed()) return run_deform(opt);
    if (fuse->parsed()) return run_fuse(opt);
  } catch (const CLI::ValidationError& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return 2;
  } catch (const std::domain_error& e) {
    std::fprintf(stderr, "domain rejection: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 2;
}
