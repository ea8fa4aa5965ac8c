#include "nct/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "json.hpp"
#include "nct/errors.hpp"

namespace nct {

using nlohmann::json;

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string RunDocument::hash_hex() const {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(config_hash));
  return buf;
}

AngularQuadrature RunDocument::angular_quadrature() const {
  return AngularQuadrature::product(quadrature.n_polar, quadrature.n_azimuthal);
}

RunConfig RunDocument::mc_config(int threads) const {
  RunConfig cfg;
  cfg.model = model;
  cfg.phase = phase;
  cfg.c = c;
  cfg.source = source;
  cfg.histories = mc.histories;
  cfg.seed = seed;
  cfg.domain = domain;
  cfg.boundary = boundary;
  cfg.batches = mc.batches;
  cfg.cells = mc.cells;
  cfg.mu_bins = mc.mu_bins;
  cfg.threads = threads;
  return cfg;
}

namespace {

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

/// Walks the input tree, records every problem by path, and mirrors each
/// resolved value (defaults included) into `out`.
class Reader {
 public:
  std::vector<FieldError> errors;

  void fail(const std::string& path, const std::string& msg) { errors.push_back({path, msg}); }

  // An object whose keys must come from `allowed`.
  bool object(const json& j, const std::string& path, std::initializer_list<const char*> allowed) {
    if (!j.is_object()) {
      fail(path, "expected an object");
      return false;
    }
    std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [key, value] : j.items()) {
      if (!ok.count(key)) fail(join(path, key), "unknown key");
    }
    return true;
  }

  double number(const json& j, const std::string& key, const std::string& path, json& out,
                std::optional<double> fallback, const std::function<bool(double)>& valid = {},
                const char* requirement = "") {
    const std::string p = join(path, key);
    double v = fallback.value_or(0.0);
    if (!j.contains(key)) {
      if (!fallback) fail(p, "required");
    } else if (!j.at(key).is_number()) {
      fail(p, "expected a number");
    } else {
      v = j.at(key).get<double>();
      if (!std::isfinite(v)) {
        fail(p, "must be finite");
      } else if (valid && !valid(v)) {
        fail(p, std::string("must be ") + requirement);
      }
    }
    out[key] = v;
    return v;
  }

  std::int64_t integer(const json& j, const std::string& key, const std::string& path, json& out,
                       std::optional<std::int64_t> fallback, std::int64_t min_value) {
    const std::string p = join(path, key);
    std::int64_t v = fallback.value_or(0);
    if (!j.contains(key)) {
      if (!fallback) fail(p, "required");
    } else if (!j.at(key).is_number_integer()) {
      fail(p, "expected an integer");
    } else {
      v = j.at(key).get<std::int64_t>();
      if (v < min_value) fail(p, "must be >= " + std::to_string(min_value));
    }
    out[key] = v;
    return v;
  }

  std::string text(const json& j, const std::string& key, const std::string& path, json& out,
                   std::optional<std::string> fallback, std::initializer_list<const char*> choices) {
    const std::string p = join(path, key);
    std::string v = fallback.value_or("");
    if (!j.contains(key)) {
      if (!fallback) fail(p, "required");
    } else if (!j.at(key).is_string()) {
      fail(p, "expected a string");
    } else {
      v = j.at(key).get<std::string>();
      bool found = choices.size() == 0;
      std::string list;
      for (const char* ch : choices) {
        if (v == ch) found = true;
        list += list.empty() ? ch : std::string(", ") + ch;
      }
      if (!found) {
        fail(p, "must be one of: " + list);
        v = fallback.value_or(*choices.begin());
      }
    }
    out[key] = v;
    return v;
  }

  std::vector<double> numbers(const json& j, const std::string& key, const std::string& path, json& out,
                              std::optional<std::vector<double>> fallback, std::size_t exact_size = 0) {
    const std::string p = join(path, key);
    std::vector<double> v = fallback.value_or(std::vector<double>{});
    if (!j.contains(key)) {
      if (!fallback) fail(p, "required");
    } else if (!j.at(key).is_array()) {
      fail(p, "expected an array of numbers");
    } else {
      v.clear();
      bool ok = true;
      for (const auto& e : j.at(key)) {
        if (!e.is_number() || !std::isfinite(e.get<double>())) {
          ok = false;
          break;
        }
        v.push_back(e.get<double>());
      }
      if (!ok) {
        fail(p, "expected an array of finite numbers");
      } else if (exact_size && v.size() != exact_size) {
        fail(p, "expected " + std::to_string(exact_size) + " entries");
      }
      if (!ok || (exact_size && v.size() != exact_size)) v = fallback.value_or(std::vector<double>(exact_size, 0.0));
    }
    out[key] = v;
    return v;
  }

  Vec3 vec3(const json& j, const std::string& key, const std::string& path, json& out,
            std::optional<Vec3> fallback) {
    std::optional<std::vector<double>> fb;
    if (fallback) fb = std::vector<double>{fallback->x, fallback->y, fallback->z};
    const auto v = numbers(j, key, path, out, fb, 3);
    if (v.size() != 3) return {};
    return {v[0], v[1], v[2]};
  }

  std::array<int, 3> cells(const json& j, const std::string& key, const std::string& path, json& out,
                           std::array<int, 3> fallback) {
    const std::string p = join(path, key);
    std::array<int, 3> v = fallback;
    if (j.contains(key)) {
      const auto& a = j.at(key);
      bool ok = a.is_array() && a.size() == 3;
      if (ok) {
        for (const auto& e : a) ok = ok && e.is_number_integer() && e.get<std::int64_t>() >= 1 &&
                                      e.get<std::int64_t>() <= 4096;
      }
      if (!ok) {
        fail(p, "expected three integers in [1, 4096]");
      } else {
        for (int i = 0; i < 3; ++i) v[i] = a[i].get<int>();
      }
    }
    out[key] = v;
    return v;
  }

  // Runs a library constructor, turning its model or domain complaint into a
  // field error at `path`.
  template <class F>
  bool build(const std::string& path, F&& f) {
    try {
      f();
      return true;
    } catch (const InvalidModelError& e) {
      fail(path, e.what());
    } catch (const DomainError& e) {
      fail(path, e.what());
    }
    return false;
  }
};

const auto positive = [](double v) { return v > 0.0; };

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& file) {
  std::filesystem::path p(file);
  return p.is_absolute() || base.empty() ? p : base / p;
}

// Two numeric columns; '#' lines and a non-numeric header are skipped.
bool read_two_columns(const std::filesystem::path& file, std::vector<double>& a, std::vector<double>& b,
                      std::string& problem) {
  std::ifstream in(file);
  if (!in) {
    problem = "cannot open " + file.string();
    return false;
  }
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    for (char& ch : line) {
      if (ch == ',' || ch == ';' || ch == '\t') ch = ' ';
    }
    std::istringstream row(line);
    double x = 0.0, y = 0.0;
    if (!(row >> x >> y)) {
      if (a.empty() && lineno == 1) continue;
      problem = file.string() + ":" + std::to_string(lineno) + ": expected two numbers";
      return false;
    }
    a.push_back(x);
    b.push_back(y);
  }
  if (a.empty()) {
    problem = file.string() + ": no data rows";
    return false;
  }
  return true;
}

std::optional<PathLaw> read_law(Reader& r, const json& j, const std::string& path, json& out,
                                const std::filesystem::path& base) {
  out = json::object();
  if (!j.is_object()) {
    r.fail(path, "expected an object");
    return std::nullopt;
  }
  const std::string family =
      r.text(j, "family", path, out, std::nullopt, {"exponential", "weibull", "uniform", "lomax", "table"});
  std::optional<PathLaw> law;
  if (family == "exponential") {
    r.object(j, path, {"family", "sigma"});
    const double sigma = r.number(j, "sigma", path, out, std::nullopt, positive, "> 0");
    r.build(join(path, "sigma"), [&] { law = PathLaw::exponential(sigma); });
  } else if (family == "weibull") {
    r.object(j, path, {"family", "k", "scale"});
    const double k = r.number(j, "k", path, out, std::nullopt, [](double v) { return v >= 1.0; }, ">= 1");
    const double lambda = r.number(j, "scale", path, out, std::nullopt, positive, "> 0");
    r.build(path, [&] { law = PathLaw::weibull(k, lambda); });
  } else if (family == "uniform") {
    r.object(j, path, {"family", "length"});
    const double len = r.number(j, "length", path, out, std::nullopt, positive, "> 0");
    r.build(join(path, "length"), [&] { law = PathLaw::uniform(len); });
  } else if (family == "lomax") {
    r.object(j, path, {"family", "alpha", "scale"});
    const double alpha = r.number(j, "alpha", path, out, std::nullopt, positive, "> 0");
    const double lambda = r.number(j, "scale", path, out, std::nullopt, positive, "> 0");
    r.build(path, [&] { law = PathLaw::lomax(alpha, lambda); });
  } else if (family == "table") {
    r.object(j, path, {"family", "s", "q", "csv"});
    std::vector<double> s, q;
    if (j.contains("csv")) {
      const std::string file = r.text(j, "csv", path, out, std::nullopt, {});
      std::string problem;
      if (!read_two_columns(resolve(base, file), s, q, problem)) r.fail(join(path, "csv"), problem);
      if (j.contains("s") || j.contains("q")) r.fail(join(path, "csv"), "give either csv or s and q");
    } else {
      s = r.numbers(j, "s", path, out, std::nullopt);
      q = r.numbers(j, "q", path, out, std::nullopt);
    }
    if (s.size() != q.size()) {
      r.fail(join(path, "q"), "must have as many entries as s");
    } else if (!s.empty()) {
      r.build(join(path, "q"), [&] { law = PathLaw::table(s, q); });
    }
  }
  return law;
}

std::optional<CrossSectionModel> read_model(Reader& r, const json& root, json& out,
                                            const std::filesystem::path& base) {
  const std::string path = "model";
  out = json::object();
  if (!root.contains("model")) {
    r.fail(path, "required");
    return std::nullopt;
  }
  const json& j = root.at("model");
  if (!j.is_object()) {
    r.fail(path, "expected an object");
    return std::nullopt;
  }
  const std::string kind = r.text(j, "kind", path, out, std::nullopt,
                                  {"constant", "direction_modulated", "tabulated", "from_pdf"});
  std::optional<CrossSectionModel> model;
  if (kind == "constant") {
    r.object(j, path, {"kind", "sigma"});
    const double sigma = r.number(j, "sigma", path, out, std::nullopt, positive, "> 0");
    r.build(join(path, "sigma"), [&] { model = CrossSectionModel::constant(sigma); });
  } else if (kind == "direction_modulated") {
    r.object(j, path, {"kind", "base", "modulation"});
    std::optional<PathLaw> base_law;
    if (!j.contains("base")) {
      r.fail("model.base", "required");
    } else {
      base_law = read_law(r, j.at("base"), "model.base", out["base"], base);
    }
    std::optional<AngularModulation> mod;
    const std::string mp = "model.modulation";
    json& mo = out["modulation"];
    mo = json::object();
    if (!j.contains("modulation")) {
      r.fail(mp, "required");
    } else if (r.object(j.at("modulation"), mp, {"form", "axis", "coeffs", "matrix"})) {
      const json& m = j.at("modulation");
      const std::string form = r.text(m, "form", mp, mo, std::nullopt,
                                      {"polynomial", "inverse_polynomial", "quadratic", "inverse_quadratic"});
      const bool inverse = form.rfind("inverse_", 0) == 0;
      if (form == "polynomial" || form == "inverse_polynomial") {
        if (m.contains("matrix")) r.fail(join(mp, "matrix"), "not used by the polynomial form");
        const Vec3 axis = r.vec3(m, "axis", mp, mo, Vec3{0.0, 0.0, 1.0});
        const auto coeffs = r.numbers(m, "coeffs", mp, mo, std::nullopt);
        if (norm(axis) == 0.0) {
          r.fail(join(mp, "axis"), "must be nonzero");
        } else if (!coeffs.empty()) {
          r.build(join(mp, "coeffs"), [&] {
            mod = AngularModulation::polynomial(Direction::normalized(axis), coeffs, inverse);
          });
        }
      } else if (!form.empty()) {
        if (m.contains("axis") || m.contains("coeffs")) r.fail(mp, "the quadratic form takes only matrix");
        std::array<std::array<double, 3>, 3> a{};
        bool ok = m.contains("matrix") && m.at("matrix").is_array() && m.at("matrix").size() == 3;
        if (ok) {
          for (int i = 0; i < 3 && ok; ++i) {
            const auto& row = m.at("matrix")[i];
            ok = row.is_array() && row.size() == 3;
            for (int k = 0; k < 3 && ok; ++k) {
              ok = row[k].is_number() && std::isfinite(row[k].get<double>());
              if (ok) a[i][k] = row[k].get<double>();
            }
          }
        }
        if (!ok) {
          r.fail(join(mp, "matrix"), "expected a 3x3 array of numbers");
        } else {
          mo["matrix"] = a;
          r.build(join(mp, "matrix"), [&] { mod = AngularModulation::quadratic(a, inverse); });
        }
      }
    }
    if (base_law && mod) {
      r.build(path, [&] { model = CrossSectionModel::direction_modulated(*base_law, *mod); });
    }
  } else if (kind == "tabulated") {
    r.object(j, path, {"kind", "axis", "nodes"});
    DepthTable table;
    const Vec3 axis = r.vec3(j, "axis", path, out, Vec3{0.0, 0.0, 1.0});
    bool ok = true;
    if (norm(axis) == 0.0) {
      r.fail("model.axis", "must be nonzero");
      ok = false;
    } else {
      table.axis = Direction::normalized(axis);
    }
    if (!j.contains("nodes") || !j.at("nodes").is_array() || j.at("nodes").empty()) {
      r.fail("model.nodes", "expected a nonempty array");
      ok = false;
    } else {
      out["nodes"] = json::array();
      for (std::size_t n = 0; n < j.at("nodes").size(); ++n) {
        const std::string np = "model.nodes[" + std::to_string(n) + "]";
        const json& node = j.at("nodes")[n];
        json no = json::object();
        if (!r.object(node, np, {"mu", "s", "tau", "csv"})) {
          ok = false;
          continue;
        }
        DepthNode dn;
        dn.mu = r.number(node, "mu", np, no, std::nullopt, [](double v) { return v >= 0.0 && v <= 1.0; },
                         "in [0, 1]");
        if (node.contains("csv")) {
          const std::string file = r.text(node, "csv", np, no, std::nullopt, {});
          std::string problem;
          if (!read_two_columns(resolve(base, file), dn.s, dn.tau, problem)) {
            r.fail(join(np, "csv"), problem);
            ok = false;
          }
        } else {
          dn.s = r.numbers(node, "s", np, no, std::nullopt);
          dn.tau = r.numbers(node, "tau", np, no, std::nullopt);
        }
        out["nodes"].push_back(no);
        table.nodes.push_back(std::move(dn));
      }
    }
    if (ok) r.build("model.nodes", [&] { model = CrossSectionModel::tabulated(table); });
  } else if (kind == "from_pdf") {
    r.object(j, path, {"kind", "pdf"});
    if (!j.contains("pdf")) {
      r.fail("model.pdf", "required");
    } else if (auto law = read_law(r, j.at("pdf"), "model.pdf", out["pdf"], base)) {
      r.build("model.pdf", [&] { model = CrossSectionModel::from_pdf(*law); });
    }
  }
  return model;
}

}  // namespace

RunDocument parse_config(const std::string& text, const std::filesystem::path& base_dir) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("malformed JSON: ") + e.what());
  }
  Reader r;
  RunDocument doc;
  json out = json::object();
  if (!r.object(root, "", {"schema_version", "model", "phase", "c", "xi", "source", "domain", "quadrature",
                           "mc", "integral", "diffusion", "seed", "output"})) {
    throw ConfigError(std::move(r.errors));
  }

  if (!root.contains("schema_version")) {
    r.fail("schema_version", "required");
  } else if (!root.at("schema_version").is_number_integer() ||
             root.at("schema_version").get<std::int64_t>() != kSchemaVersion) {
    r.fail("schema_version", "must be " + std::to_string(kSchemaVersion));
  }
  out["schema_version"] = kSchemaVersion;

  auto model = read_model(r, root, out["model"], base_dir);
  if (model) doc.model = *model;

  // phase
  {
    const json empty = json::object();
    const json& j = root.contains("phase") ? root.at("phase") : empty;
    json& o = out["phase"] = json::object();
    if (r.object(j, "phase", {"legendre"})) {
      doc.legendre = r.numbers(j, "legendre", "phase", o, std::vector<double>{1.0});
      r.build("phase.legendre", [&] { doc.phase = PhaseFunction(doc.legendre); });
    }
  }

  doc.c = r.number(root, "c", "", out, 0.0, [](double v) { return v >= 0.0 && v <= 1.0; }, "in [0, 1]");

  // xi
  {
    const json empty = json{{"kind", "uniform"}};
    const json& j = root.contains("xi") ? root.at("xi") : empty;
    json& o = out["xi"] = json::object();
    if (r.object(j, "xi", {"kind", "axis", "coeffs"})) {
      const std::string kind = r.text(j, "kind", "xi", o, "uniform", {"uniform", "polar"});
      if (kind == "polar") {
        const Vec3 axis = r.vec3(j, "axis", "xi", o, Vec3{0.0, 0.0, 1.0});
        const auto coeffs = r.numbers(j, "coeffs", "xi", o, std::nullopt);
        if (norm(axis) == 0.0) {
          r.fail("xi.axis", "must be nonzero");
        } else if (!coeffs.empty()) {
          r.build("xi.coeffs", [&] { doc.xi = AngularWeight::polar(Direction::normalized(axis), coeffs); });
        }
      } else if (j.contains("axis") || j.contains("coeffs")) {
        r.fail("xi", "axis and coeffs apply to the polar kind only");
      }
    }
  }

  // domain
  {
    const json empty = json::object();
    const json& j = root.contains("domain") ? root.at("domain") : empty;
    json& o = out["domain"] = json::object();
    if (r.object(j, "domain", {"lower", "upper", "half_width", "boundary"})) {
      if (j.contains("half_width")) {
        if (j.contains("lower") || j.contains("upper")) r.fail("domain", "give half_width or lower and upper");
        const double hw = r.number(j, "half_width", "domain", o, std::nullopt, positive, "> 0");
        doc.domain = Box::centered(hw);
        o.erase("half_width");
      } else {
        doc.domain.lower = r.vec3(j, "lower", "domain", o, Vec3{-5.0, -5.0, -5.0});
        doc.domain.upper = r.vec3(j, "upper", "domain", o, Vec3{5.0, 5.0, 5.0});
      }
      o["lower"] = std::vector<double>{doc.domain.lower.x, doc.domain.lower.y, doc.domain.lower.z};
      o["upper"] = std::vector<double>{doc.domain.upper.x, doc.domain.upper.y, doc.domain.upper.z};
      for (int a = 0; a < 3; ++a) {
        if (!(doc.domain.upper[a] > doc.domain.lower[a])) r.fail("domain.upper", "must exceed lower on every axis");
      }
      const std::string b = r.text(j, "boundary", "domain", o, "vacuum", {"vacuum", "periodic"});
      doc.boundary = b == "periodic" ? Boundary::periodic : Boundary::vacuum;
    }
  }

  // source
  {
    const json empty = json::object();
    const json& j = root.contains("source") ? root.at("source") : empty;
    json& o = out["source"] = json::object();
    const std::string kind = j.is_object() ? r.text(j, "kind", "source", o, "uniform", {"uniform", "point", "gaussian"})
                                           : std::string("uniform");
    if (kind == "uniform" && r.object(j, "source", {"kind", "q0"})) {
      doc.source.kind = SourceSpec::Kind::uniform;
      doc.source.strength = r.number(j, "q0", "source", o, 1.0, [](double v) { return v >= 0.0; }, ">= 0");
    } else if (kind == "point" && r.object(j, "source", {"kind", "position", "rate"})) {
      doc.source.kind = SourceSpec::Kind::point;
      doc.source.center = r.vec3(j, "position", "source", o, doc.domain.center());
      doc.source.strength = r.number(j, "rate", "source", o, 1.0, [](double v) { return v >= 0.0; }, ">= 0");
    } else if (kind == "gaussian" && r.object(j, "source", {"kind", "center", "width", "rate"})) {
      doc.source.kind = SourceSpec::Kind::gaussian;
      doc.source.center = r.vec3(j, "center", "source", o, doc.domain.center());
      doc.source.width = r.number(j, "width", "source", o, std::nullopt, positive, "> 0");
      doc.source.strength = r.number(j, "rate", "source", o, 1.0, [](double v) { return v >= 0.0; }, ">= 0");
    }
  }

  // quadrature
  {
    const json empty = json::object();
    const json& j = root.contains("quadrature") ? root.at("quadrature") : empty;
    json& o = out["quadrature"] = json::object();
    if (r.object(j, "quadrature", {"n_polar", "n_azimuthal"})) {
      doc.quadrature.n_polar = static_cast<int>(r.integer(j, "n_polar", "quadrature", o, 32, 2));
      doc.quadrature.n_azimuthal = static_cast<int>(r.integer(j, "n_azimuthal", "quadrature", o, 64, 4));
      if (doc.quadrature.n_polar % 2) r.fail("quadrature.n_polar", "must be even");
      if (doc.quadrature.n_azimuthal % 4) r.fail("quadrature.n_azimuthal", "must be a multiple of 4");
    }
  }

  // mc
  {
    const json empty = json::object();
    const json& j = root.contains("mc") ? root.at("mc") : empty;
    json& o = out["mc"] = json::object();
    if (r.object(j, "mc", {"histories", "batches", "cells", "mu_bins"})) {
      doc.mc.histories = static_cast<std::uint64_t>(r.integer(j, "histories", "mc", o, 100000, 1));
      doc.mc.batches = static_cast<int>(r.integer(j, "batches", "mc", o, 20, 20));
      doc.mc.cells = r.cells(j, "cells", "mc", o, doc.mc.cells);
      doc.mc.mu_bins = static_cast<int>(r.integer(j, "mu_bins", "mc", o, 0, 0));
    }
  }

  // integral
  {
    const json empty = json::object();
    const json& j = root.contains("integral") ? root.at("integral") : empty;
    json& o = out["integral"] = json::object();
    if (r.object(j, "integral", {"cells", "cutoff", "tol", "max_iter"})) {
      doc.integral.cells = r.cells(j, "cells", "integral", o, doc.integral.cells);
      doc.integral.cutoff = r.number(j, "cutoff", "integral", o, 0.0, [](double v) { return v >= 0.0; }, ">= 0");
      doc.integral.tol = r.number(j, "tol", "integral", o, 1e-10, positive, "> 0");
      doc.integral.max_iter = static_cast<int>(r.integer(j, "max_iter", "integral", o, 500, 1));
    }
  }

  // diffusion
  {
    const json empty = json::object();
    const json& j = root.contains("diffusion") ? root.at("diffusion") : empty;
    json& o = out["diffusion"] = json::object();
    if (r.object(j, "diffusion", {"cells", "boundary", "tol", "max_iter", "series_tol", "max_terms"})) {
      doc.diffusion.cells = r.cells(j, "cells", "diffusion", o, doc.diffusion.cells);
      const std::string fallback = doc.boundary == Boundary::periodic ? "periodic" : "dirichlet";
      const std::string b = r.text(j, "boundary", "diffusion", o, fallback, {"dirichlet", "periodic"});
      doc.diffusion.boundary = b == "periodic" ? DiffusionBoundary::periodic : DiffusionBoundary::dirichlet_zero;
      doc.diffusion.tol = r.number(j, "tol", "diffusion", o, 1e-10, positive, "> 0");
      doc.diffusion.max_iter = static_cast<int>(r.integer(j, "max_iter", "diffusion", o, 20000, 1));
      doc.diffusion.series_tol = r.number(j, "series_tol", "diffusion", o, 1e-10, positive, "> 0");
      doc.diffusion.max_terms = static_cast<int>(r.integer(j, "max_terms", "diffusion", o, 10000, 1));
    }
  }

  if (root.contains("seed")) {
    if (!root.at("seed").is_number_unsigned()) {
      r.fail("seed", "expected a nonnegative integer");
    } else {
      doc.seed = root.at("seed").get<std::uint64_t>();
    }
  }
  out["seed"] = doc.seed;

  // output
  {
    const json empty = json::object();
    const json& j = root.contains("output") ? root.at("output") : empty;
    json& o = out["output"] = json::object();
    if (r.object(j, "output", {"mc", "integral", "diffusion"})) {
      doc.output.mc = r.text(j, "mc", "output", o, doc.output.mc, {});
      doc.output.integral = r.text(j, "integral", "output", o, doc.output.integral, {});
      doc.output.diffusion = r.text(j, "diffusion", "output", o, doc.output.diffusion, {});
    }
  }

  // Cross-field rules. Command-specific limits (c < 1 for transport in a
  // periodic box, batch counts) are checked when a command runs.
  if (doc.boundary == Boundary::periodic && doc.source.kind != SourceSpec::Kind::uniform) {
    r.fail("source.kind", "a periodic domain requires the uniform source");
  }
  if (doc.source.kind == SourceSpec::Kind::point && !doc.domain.contains(doc.source.center)) {
    r.fail("source.position", "must lie inside the domain");
  }

  if (!r.errors.empty()) throw ConfigError(std::move(r.errors));
  doc.resolved_json = out.dump();
  doc.config_hash = fnv1a64(doc.resolved_json);
  return doc;
}

RunDocument load_config(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError("", "cannot open " + file.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), file.parent_path());
}

}  // namespace nct
