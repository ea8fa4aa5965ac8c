#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include "doctest.h"
#include "nct/config.hpp"
#include "nct/diffusion.hpp"
#include "nct/errors.hpp"
#include "nct/reduce_check.hpp"
#include "nct/report.hpp"

using namespace nct;
namespace fs = std::filesystem;

namespace {

bool has_path(const ConfigError& e, const std::string& path, const std::string& fragment = {}) {
  return std::any_of(e.errors().begin(), e.errors().end(), [&](const FieldError& f) {
    return f.path == path && f.message.find(fragment) != std::string::npos;
  });
}

ConfigError config_error(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e;
  }
  FAIL("document was accepted: " << text);
  return ConfigError("", "");
}

const char* kModulated =
    R"({"schema_version":1,"model":{"kind":"direction_modulated","base":{"family":"exponential","sigma":1},)"
    R"("modulation":{"form":"inverse_polynomial","axis":[0,0,1],"coeffs":[1,0,1]}},"c":0.95})";

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("nct_test_" + name);
  fs::create_directories(p);
  return p;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(NCT_BINARY) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("minimal document") {
  const auto doc = parse_config(R"({"schema_version":1,"model":{"kind":"constant","sigma":2}})");
  CHECK(doc.model.kind() == CrossSectionModel::Kind::constant);
  CHECK(doc.model.sigma(Direction(), 0.0) == 2.0);
  CHECK(doc.c == 0.0);
  CHECK(doc.seed == 1);
  CHECK(doc.quadrature.n_polar == 32);
  CHECK(doc.quadrature.n_azimuthal == 64);
  CHECK(doc.mc.batches == 20);
  CHECK(doc.boundary == Boundary::vacuum);
  CHECK(doc.phase.is_isotropic());
  CHECK(doc.config_hash != 0);
  CHECK(doc.hash_hex().size() == 16);
}

TEST_CASE("hash follows the resolved values") {
  const auto a = parse_config(R"({"schema_version":1,"model":{"kind":"constant","sigma":2}})");
  const auto b = parse_config(R"({"model":{"sigma":2,"kind":"constant"},"schema_version":1,"seed":1})");
  const auto c = parse_config(R"({"schema_version":1,"model":{"kind":"constant","sigma":2},"seed":2})");
  CHECK(a.config_hash == b.config_hash);
  CHECK(a.config_hash != c.config_hash);
  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
}

TEST_CASE("field errors carry their path") {
  CHECK(has_path(config_error(R"({"schema_version":1,"model":{"kind":"constant","sigma":1},"c":1.2})"), "c"));
  CHECK(has_path(config_error(R"({"schema_version":2,"model":{"kind":"constant","sigma":1}})"), "schema_version"));
  CHECK(has_path(config_error(R"({"model":{"kind":"constant","sigma":1}})"), "schema_version"));
  CHECK(has_path(config_error(R"({"schema_version":1,"model":{"kind":"constant","sigma":1},"colour":3})"), "colour"));
  CHECK(has_path(config_error(R"({"schema_version":1,"model":{"kind":"constant","sigma":-1}})"), "model.sigma"));
  CHECK(has_path(config_error(R"({"schema_version":1,"model":{"kind":"cubic"}})"), "model.kind"));
  CHECK(has_path(config_error(R"({"schema_version":1,"model":{"kind":"constant","sigma":1},)"
                              R"("quadrature":{"n_polar":7}})"),
                 "quadrature.n_polar"));
  CHECK(has_path(config_error(R"({"schema_version":1,"model":{"kind":"constant","sigma":1},)"
                              R"("phase":{"legendre":[1,0.9]}})"),
                 "phase.legendre"));
  CHECK(has_path(config_error(R"({"schema_version":1,"model":{"kind":"constant","sigma":1},)"
                              R"("mc":{"batches":5}})"),
                 "mc.batches"));
  CHECK(has_path(config_error("{\"schema_version\":1,"), ""));
}

TEST_CASE("odd modulation is rejected") {
  const auto e = config_error(
      R"({"schema_version":1,"model":{"kind":"direction_modulated","base":{"family":"exponential","sigma":1},)"
      R"("modulation":{"form":"polynomial","axis":[0,0,1],"coeffs":[1,0.5]}}})");
  CHECK(has_path(e, "model.modulation.coeffs", "even"));
}

TEST_CASE("cross-field rules") {
  CHECK(has_path(config_error(R"({"schema_version":1,"model":{"kind":"constant","sigma":1},)"
                              R"("domain":{"half_width":2,"boundary":"periodic"},)"
                              R"("source":{"kind":"point","position":[0,0,0]}})"),
                 "source.kind"));
  CHECK(has_path(config_error(R"({"schema_version":1,"model":{"kind":"constant","sigma":1},)"
                              R"("domain":{"half_width":2},"source":{"kind":"point","position":[3,0,0]}})"),
                 "source.position"));
}

TEST_CASE("model kinds") {
  const auto m = parse_config(kModulated);
  CHECK(m.model.kind() == CrossSectionModel::Kind::direction_modulated);
  CHECK(m.model.sigma(Direction(0.0, 0.0, 1.0), 0.3) == doctest::Approx(0.5));

  const auto l = parse_config(R"({"schema_version":1,"model":{"kind":"from_pdf","pdf":{"family":"lomax","alpha":2,"scale":1}}})");
  CHECK(l.model.kind() == CrossSectionModel::Kind::from_pdf);

  const fs::path dir = scratch_dir("csv");
  {
    std::ofstream f(dir / "q.csv");
    f << "s,q\n0,0.5\n1,0.5\n2,0.5\n";
  }
  const auto t = parse_config(
      R"({"schema_version":1,"model":{"kind":"from_pdf","pdf":{"family":"table","csv":"q.csv"}}})", dir);
  // q = 1/2 on [0, 2]: Σ(1) = q/(1 − F) = 1.
  CHECK(t.model.sigma(Direction(), 1.0) == doctest::Approx(1.0));
  CHECK(t.model.sigma(Direction(), 1.5) == doctest::Approx(2.0));
  CHECK(has_path(config_error(R"({"schema_version":1,"model":{"kind":"from_pdf",)"
                              R"("pdf":{"family":"table","s":[0,1],"q":[2,2]}}})"),
                 "model.pdf.q"));

  const auto tab = parse_config(
      R"({"schema_version":1,"model":{"kind":"tabulated","axis":[0,0,1],"nodes":[)"
      R"({"mu":0,"s":[0,1,2,3],"tau":[0,1,2,3]},{"mu":1,"s":[0,1,2,3],"tau":[0,2,4,6]}]}})");
  CHECK(tab.model.sigma(Direction(0.0, 0.0, 1.0), 1.5) == doctest::Approx(2.0));
}

TEST_CASE("reproducibility header") {
  const auto doc = parse_config(R"({"schema_version":1,"model":{"kind":"constant","sigma":1},"seed":9})");
  std::ostringstream os;
  write_header(os, doc, "mc-run");
  const std::string h = os.str();
  CHECK(h.find("# nct mc-run") != std::string::npos);
  CHECK(h.find("# schema_version=1") != std::string::npos);
  CHECK(h.find("# seed=9") != std::string::npos);
  CHECK(h.find("# config_hash=" + doc.hash_hex()) != std::string::npos);
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("classical reduction of the built-in document") {
  const auto rep = reduce_check(default_reduce_document());
  CHECK(rep.all_passed());
  for (const auto& c : rep.checks) {
    CAPTURE(c.name);
    CHECK(c.passed);
  }
  const auto doc = parse_config(R"({"schema_version":1,"model":{"kind":"constant","sigma":1},"c":0.5,)"
                                R"("phase":{"legendre":[1,0.3]},"quadrature":{"n_polar":16,"n_azimuthal":32}})");
  const auto dq = diffusion_tensor(doc.model, doc.kernel(), doc.xi, doc.angular_quadrature());
  CHECK(std::abs(dq.zz - 1.0 / (3.0 * 0.85)) < 1e-8);
  CHECK(std::abs(dq.zz - 0.392157) < 1e-6);

  const auto two = parse_config(R"({"schema_version":1,"model":{"kind":"constant","sigma":2}})");
  const auto quad = two.angular_quadrature();
  CHECK(std::abs(ensemble_mean(two.model, two.xi, quad, 1) - 0.5) < 1e-10);
  CHECK(std::abs(ensemble_mean(two.model, two.xi, quad, 2) - 0.5) < 1e-10);

  try {
    reduce_check(parse_config(kModulated));
    FAIL("modulated model accepted");
  } catch (const ConfigError& e) {
    CHECK(has_path(e, "model.kind"));
  }
}

TEST_CASE("command-line exit codes") {
  const fs::path dir = scratch_dir("cli");
  auto write = [&](const std::string& name, const std::string& text) {
    std::ofstream(dir / name) << text;
    return (dir / name).string();
  };
  const std::string ok = write("ok.json", R"({"schema_version":1,"model":{"kind":"constant","sigma":1},"c":0.5,)"
                                          R"("quadrature":{"n_polar":8,"n_azimuthal":16}})");
  const std::string bad = write("bad.json", R"({"schema_version":1,"model":{"kind":"constant","sigma":1},"c":1.2})");
  const std::string lomax =
      write("lomax.json", R"({"schema_version":1,"model":{"kind":"from_pdf","pdf":{"family":"lomax","alpha":2,"scale":1}},)"
                          R"("quadrature":{"n_polar":8,"n_azimuthal":16}})");
  const std::string out = (dir / "out").string();
  CHECK(run_cli("tensor --config " + ok) == 0);
  CHECK(run_cli("moments --config " + ok) == 0);
  CHECK(run_cli("reduce-check") == 0);
  CHECK(run_cli("tensor --config " + bad) == 2);
  CHECK(run_cli("tensor --config " + (dir / "missing.json").string()) == 2);
  CHECK(run_cli("tensor --config " + lomax) == 3);
  CHECK(run_cli("frobnicate") == 2);
  CHECK(run_cli("reduce-check --config " + (dir / "ok.json").string()) == 0);
}
