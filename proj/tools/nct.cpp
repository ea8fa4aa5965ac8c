// nct: command-line front end for the transport toolkit.

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "nct/config.hpp"
#include "nct/diffusion.hpp"
#include "nct/errors.hpp"
#include "nct/integral_solver.hpp"
#include "nct/monte_carlo.hpp"
#include "nct/path_stats.hpp"
#include "nct/reduce_check.hpp"
#include "nct/report.hpp"
#include "nct/source.hpp"

namespace {

using json = nlohmann::ordered_json;

enum ExitCode { kOk = 0, kConfig = 2, kNumeric = 3, kCheckFailed = 4 };

struct Options {
  std::string config;
  std::string out;
  int threads = 1;
  bool verbose = false;
};

// JSON with every float at 17 significant digits.
void emit(std::ostream& os, const json& j, int indent = 0) {
  const std::string pad(indent, ' ');
  const std::string inner(indent + 2, ' ');
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        break;
      }
      os << "{\n";
      bool first = true;
      for (const auto& [k, v] : j.items()) {
        if (!first) os << ",\n";
        first = false;
        os << inner << json(k).dump() << ": ";
        emit(os, v, indent + 2);
      }
      os << "\n" << pad << "}";
      break;
    }
    case json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        break;
      }
      os << "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) os << ",\n";
        os << inner;
        emit(os, j[i], indent + 2);
      }
      os << "\n" << pad << "]";
      break;
    }
    case json::value_t::number_float: {
      const double v = j.get<double>();
      if (std::isfinite(v)) {
        os << nct::format_double(v);
      } else {
        os << "null";
      }
      break;
    }
    default:
      os << j.dump();
  }
}

void print_json(const json& j) {
  emit(std::cout, j);
  std::cout << "\n";
}

json header_json(const nct::RunDocument& doc, const std::string& command) {
  return json{{"command", command},
              {"schema_version", doc.schema_version},
              {"seed", doc.seed},
              {"config_hash", doc.hash_hex()}};
}

nct::RunDocument load(const Options& opt) {
  if (opt.config.empty()) throw nct::ConfigError("--config", "required");
  return nct::load_config(opt.config);
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw nct::ConfigError("output", "cannot write " + path);
  return out;
}

json tensor_json(const nct::DiffusionTensor& d) {
  return json{{"Dxx", d.xx}, {"Dyy", d.yy}, {"Dzz", d.zz}, {"Dxy", d.xy}, {"Dxz", d.xz}, {"Dyz", d.yz},
              {"s_mean", d.s_mean}, {"s2_mean", d.s2_mean}, {"removal", d.removal},
              {"tau_terms", d.tau_terms}, {"positive_definite", d.positive_definite()}};
}

json estimate_json(const nct::Estimate& e) { return json{{"mean", e.mean}, {"error", e.error}}; }

void log_history(const Options& opt, const char* label, const std::vector<double>& history) {
  if (!opt.verbose) return;
  for (std::size_t i = 0; i < history.size(); ++i) {
    std::cerr << label << " " << i + 1 << " residual " << nct::format_double(history[i]) << "\n";
  }
}

int cmd_mc_run(const Options& opt) {
  const auto doc = load(opt);
  const auto cfg = doc.mc_config(opt.threads);
  const nct::TallyGrid tally = nct::run_simulation(cfg);
  const std::string path = opt.out.empty() ? doc.output.mc : opt.out;
  {
    auto out = open_output(path);
    nct::write_header(out, doc, "mc-run");
    nct::write_tally_csv(out, tally);
  }
  const auto& ev = tally.counters();
  json j = header_json(doc, "mc-run");
  j["output"] = path;
  j["histories"] = tally.histories();
  j["batches"] = tally.batches();
  j["box_phi"] = estimate_json(tally.box_phi());
  j["events"] = json{{"emitted", ev.emitted}, {"collisions", ev.collisions}, {"scatters", ev.scatters},
                     {"absorbed", ev.absorbed}, {"leaked", ev.leaked}, {"tail_escapes", ev.tail_escapes}};
  if (tally.mu_bins() > 0) {
    json bins = json::array();
    for (int b = 0; b < tally.mu_bins(); ++b) {
      bins.push_back(json{{"mu", tally.mu_bin_center(b)},
                          {"psi", estimate_json(tally.box_psi()[b])},
                          {"psi_over_phi", estimate_json(tally.box_psi_ratio()[b])}});
    }
    j["mu_bins"] = bins;
  }
  if (opt.verbose) {
    std::cerr << "mc-run: " << ev.emitted << " emitted, " << ev.collisions << " collisions, " << ev.leaked
              << " leaked\n";
  }
  print_json(j);
  return kOk;
}

int cmd_integral_solve(const Options& opt) {
  const auto doc = load(opt);
  if (!doc.phase.is_isotropic()) {
    throw nct::ConfigError("phase.legendre", "integral-solve supports isotropic scattering only");
  }
  if (doc.boundary != nct::Boundary::vacuum) {
    throw nct::ConfigError("domain.boundary", "integral-solve requires a vacuum boundary");
  }
  const nct::SpatialGrid grid = doc.integral_grid();
  const auto kernel = nct::build_kernel(grid, doc.model, doc.integral.cutoff, opt.threads);
  const auto q = nct::source_density_field(doc.source, doc.domain, grid);
  const auto pic = nct::picard_solve(grid, kernel, doc.c, q, doc.integral.tol, doc.integral.max_iter, opt.threads);
  log_history(opt, "picard", pic.residual_history);
  const auto phi = nct::scalar_flux(grid, kernel, doc.c, pic.collision_density, q, opt.threads);
  const std::string path = opt.out.empty() ? doc.output.integral : opt.out;
  {
    auto out = open_output(path);
    nct::write_header(out, doc, "integral-solve");
    nct::write_field_csv(out, grid, {"F_hat", "phi"}, {&pic.collision_density, &phi});
  }
  double worst_ratio = 0.0;
  for (std::size_t i = 1; i < pic.residual_history.size(); ++i) {
    if (pic.residual_history[i - 1] > 0.0) {
      worst_ratio = std::max(worst_ratio, pic.residual_history[i] / pic.residual_history[i - 1]);
    }
  }
  json j = header_json(doc, "integral-solve");
  j["output"] = path;
  j["iterations"] = pic.iterations;
  j["residual"] = pic.residual;
  j["max_residual_ratio"] = worst_ratio;
  j["cutoff"] = kernel.cutoff();
  j["stencil_collision_sum"] = kernel.stencil_collision_sum();
  print_json(j);
  return kOk;
}

nct::DiffusionTensor tensor_of(const nct::RunDocument& doc) {
  return nct::diffusion_tensor(doc.model, doc.kernel(), doc.xi, doc.angular_quadrature(),
                               doc.diffusion.series_tol, doc.diffusion.max_terms);
}

int cmd_diffusion(const Options& opt) {
  const auto doc = load(opt);
  const auto d = tensor_of(doc);
  const nct::SpatialGrid grid = doc.diffusion_grid();
  const auto q = nct::source_density_field(doc.source, doc.domain, grid);
  nct::DiffusionOptions dopt;
  dopt.boundary = doc.diffusion.boundary;
  dopt.tol = doc.diffusion.tol;
  dopt.max_iter = doc.diffusion.max_iter;
  dopt.threads = opt.threads;
  const auto sol = nct::solve_diffusion(d, q, grid, dopt);
  log_history(opt, "cg", sol.residual_history);
  const std::string path = opt.out.empty() ? doc.output.diffusion : opt.out;
  {
    auto out = open_output(path);
    nct::write_header(out, doc, "diffusion");
    nct::write_field_csv(out, grid, {"phi0"}, {&sol.phi0});
  }
  json j = header_json(doc, "diffusion");
  j["output"] = path;
  j["tensor"] = tensor_json(d);
  j["iterations"] = sol.iterations;
  j["residual"] = sol.residual;
  print_json(j);
  return kOk;
}

int cmd_tensor(const Options& opt) {
  const auto doc = load(opt);
  const auto d = tensor_of(doc);
  json j = header_json(doc, "tensor");
  j.update(tensor_json(d));
  print_json(j);
  if (!opt.out.empty()) {
    auto out = open_output(opt.out);
    emit(out, j);
    out << "\n";
  }
  return kOk;
}

int cmd_moments(const Options& opt) {
  const auto doc = load(opt);
  const auto quad = doc.angular_quadrature();
  json j = header_json(doc, "moments");
  j["model"] = doc.model.kind_name();
  j["s_max"] = doc.model.s_max();
  const auto m1 = nct::directional_moments(doc.model, doc.xi, quad, false);
  j["s_mean"] = m1.s_mean;
  std::optional<nct::DirectionalMoments> m2;
  try {
    m2 = nct::directional_moments(doc.model, doc.xi, quad, true);
    j["s2_mean"] = m2->s2_mean;
  } catch (const nct::DivergentMomentError& e) {
    j["s2_mean"] = nullptr;
    j["s2_divergent"] = e.what();
  }
  // One node per polar ring, at the first azimuth.
  json rings = json::array();
  const auto na = static_cast<std::size_t>(quad.n_azimuthal());
  for (int i = 0; i < quad.n_polar(); ++i) {
    const std::size_t k = static_cast<std::size_t>(i) * na;
    const auto& d = quad.node(k);
    json r{{"mu", quad.polar_mu(i)}, {"direction", {d.x(), d.y(), d.z()}}, {"s1", m1.s1[k]}};
    if (m2) r["s2"] = m2->s2[k];
    rings.push_back(r);
  }
  j["rings"] = rings;
  print_json(j);
  if (!opt.out.empty()) {
    auto out = open_output(opt.out);
    emit(out, j);
    out << "\n";
  }
  return kOk;
}

int cmd_reduce_check(const Options& opt) {
  const auto doc = opt.config.empty() ? nct::default_reduce_document() : nct::load_config(opt.config);
  const auto rep = nct::reduce_check(doc, opt.threads);
  json j = header_json(doc, "reduce-check");
  j["sigma"] = rep.sigma;
  j["c"] = rep.c;
  j["mean_cosine"] = rep.mean_cosine;
  json checks = json::array();
  for (const auto& ch : rep.checks) {
    checks.push_back(json{{"name", ch.name}, {"status", ch.passed ? "PASS" : "FAIL"},
                          {"deviation", ch.deviation}, {"tolerance", ch.tolerance}});
    if (opt.verbose) std::cerr << (ch.passed ? "PASS " : "FAIL ") << ch.name << "\n";
  }
  j["checks"] = checks;
  j["status"] = rep.all_passed() ? "PASS" : "FAIL";
  print_json(j);
  if (!opt.out.empty()) {
    auto out = open_output(opt.out);
    emit(out, j);
    out << "\n";
  }
  return rep.all_passed() ? kOk : kCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nct: generalized linear Boltzmann transport toolkit"};
  app.require_subcommand(1);
  Options opt;

  struct Command {
    const char* name;
    const char* help;
    int (*run)(const Options&);
  };
  const Command commands[] = {
      {"mc-run", "Monte Carlo transport; writes per-cell tallies", cmd_mc_run},
      {"integral-solve", "Picard iteration of the integral formulation", cmd_integral_solve},
      {"diffusion", "Solve the anisotropic diffusion equation", cmd_diffusion},
      {"tensor", "Print the diffusion tensor as JSON", cmd_tensor},
      {"moments", "Print free-path moments as JSON", cmd_moments},
      {"reduce-check", "Verify the constant cross-section limit", cmd_reduce_check},
  };
  int (*selected)(const Options&) = nullptr;
  for (const auto& c : commands) {
    auto* sub = app.add_subcommand(c.name, c.help);
    sub->add_option("--config", opt.config, "Run document (JSON)");
    sub->add_option("--out", opt.out, "Output file");
    sub->add_option("--threads", opt.threads, "Worker threads")->check(CLI::PositiveNumber);
    sub->add_flag("--verbose", opt.verbose, "Iteration logs on stderr");
    sub->callback([&selected, run = c.run] { selected = run; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfig;
  }

  try {
    return selected(opt);
  } catch (const nct::ConfigError& e) {
    for (const auto& fe : e.errors()) {
      std::cerr << "config error at " << (fe.path.empty() ? "<document>" : fe.path) << ": " << fe.message << "\n";
    }
    return kConfig;
  } catch (const nct::SolverError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    log_history(opt, "cg", e.residual_history());
    return kNumeric;
  } catch (const nct::NonConvergenceError& e) {
    std::cerr << "numeric error: " << e.what() << " (iterations " << e.iterations() << ", residual "
              << nct::format_double(e.residual()) << ")\n";
    return kNumeric;
  } catch (const nct::Error& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return kNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNumeric;
  }
}
