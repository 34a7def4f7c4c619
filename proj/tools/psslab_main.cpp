// psslab command-line front door. Links against the C API only.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "psslab.h"

namespace {

using nlohmann::json;

struct Global {
  uint64_t seed = 0;
  int points = 200;
  double tol = 1e-9;
  int delta = 0;  // 0 = not set
  bool timings = false;
  std::string format = "text";
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    std::cerr << "cannot read " << path << "\n";
    std::exit(2);
  }
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_output(const std::string& path, const std::string& data) {
  if (path.empty() || path == "-") {
    std::cout << data;
    if (!data.empty() && data.back() != '\n') std::cout << "\n";
    return;
  }
  std::ofstream out(path);
  if (!out) {
    std::cerr << "cannot write " << path << "\n";
    std::exit(2);
  }
  out << data;
}

[[noreturn]] void die_api(int code) {
  std::cerr << "error (" << code << "): " << pss_last_error() << "\n";
  std::exit(2);
}

std::string take(char* s) {
  std::string out = s ? s : "";
  pss_string_free(s);
  return out;
}

std::string opts_json(const Global& g) {
  json j{{"seed", g.seed}, {"points", g.points}, {"tol", g.tol}, {"timings", g.timings}};
  if (g.delta != 0) j["delta"] = g.delta;
  return j.dump();
}

// "lambda=1,m=0,delta=1" -> {"lambda":"1","m":"0","delta":"1"}
std::string params_json(const std::string& csv) {
  json j = json::object();
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    auto eq = item.find('=');
    if (eq == std::string::npos) {
      std::cerr << "bad parameter assignment: " << item << "\n";
      std::exit(2);
    }
    j[item.substr(0, eq)] = item.substr(eq + 1);
  }
  return j.dump();
}

// text rendering of a structured report
void print_report(const json& rep, const Global& g) {
  if (g.format == "json") {
    std::cout << rep.dump(2) << "\n";
    return;
  }
  std::cout << "command: " << rep.value("command", "") << "\n";
  for (const auto& c : rep.value("checks", json::array())) {
    std::cout << (c.value("pass", false) ? "PASS" : "FAIL") << "  "
              << c.value("name", std::string{});
    if (c.contains("details")) {
      const json& d = c.at("details");
      if (d.contains("max_scaled_residual"))
        std::cout << "  max residual " << d.at("max_scaled_residual").dump();
      if (d.contains("eq1"))
        std::cout << "  eq1..eq5 " << d.at("eq1").dump() << " " << d.at("eq2").dump() << " "
                  << d.at("eq3").dump() << " " << d.at("eq4").dump() << " "
                  << d.at("eq5").dump();
    }
    std::cout << "\n";
  }
  if (rep.contains("timings_ms"))
    for (auto it = rep.at("timings_ms").begin(); it != rep.at("timings_ms").end(); ++it)
      std::cout << "time " << it.key() << ": " << it.value().dump() << " ms\n";
  std::cout << (rep.value("pass", false) ? "PASS" : "FAIL") << "\n";
}

int finish_with(const json& rep, const Global& g) {
  print_report(rep, g);
  return rep.value("pass", false) ? 0 : 1;
}

pss_sextet* load_sextet_arg(const std::string& path) {
  std::string text = read_file(path);
  pss_sextet* s = nullptr;
  if (int rc = pss_sextet_from_json(text.c_str(), &s)) die_api(rc);
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"psslab — quasilinear PDEs describing pseudospherical and spherical surfaces"};
  app.require_subcommand(1);
  Global g;
  app.add_option("--seed", g.seed, "seed for all sampling verdicts");
  app.add_option("--points", g.points, "number of sample points");
  app.add_option("--tol", g.tol, "residual tolerance");
  app.add_option("--delta", g.delta, "curvature sign override for catalog fixtures (+1/-1)");
  app.add_flag("--timings", g.timings, "include wall-clock timings in structured reports");
  app.add_option("--format", g.format, "output format: text or json")
      ->check(CLI::IsMember({"text", "json"}));

  // family build
  auto* family = app.add_subcommand("family", "build classification families");
  auto* fbuild = family->add_subcommand("build", "build a family from a spec file");
  std::string variant, spec_path, out_path;
  fbuild->add_option("variant", variant,
                     "case_a | case_b1 | case_b2 | cor33 | cor34 | cor35")
      ->required();
  fbuild->add_option("--spec", spec_path, "family spec JSON")->required();
  fbuild->add_option("--out", out_path, "write the build result JSON here");

  // verify
  auto* verify = app.add_subcommand("verify", "verify a sextet file");
  std::string sextet_path;
  verify->add_option("--sextet", sextet_path, "sextet JSON file")->required();

  // catalog
  auto* cat = app.add_subcommand("catalog", "fixture catalog");
  auto* clist = cat->add_subcommand("list", "list fixture names");
  auto* cexport = cat->add_subcommand("export", "dump a fixture as a sextet file");
  auto* crun = cat->add_subcommand("run", "run the check battery on a fixture");
  std::string fixture_name, params_csv;
  cexport->add_option("name", fixture_name, "fixture name")->required();
  cexport->add_option("--params", params_csv, "comma-separated name=value pairs");
  cexport->add_option("--out", out_path, "output path");
  crun->add_option("name", fixture_name, "fixture name")->required();
  crun->add_option("--params", params_csv, "comma-separated name=value pairs");

  // solve / curvature
  auto* solve = app.add_subcommand("solve", "integrate a quasilinear problem");
  std::string problem_path, report_path;
  solve->add_option("--problem", problem_path, "problem JSON")->required();
  solve->add_option("--out", out_path, "CSV output path");
  solve->add_option("--report", report_path, "diagnostics JSON path");

  auto* curv = app.add_subcommand("curvature", "Gaussian-curvature check on a solution grid");
  double ktol = 1e-2;
  curv->add_option("--problem", problem_path, "problem JSON (needs a sextet or catalog name)")
      ->required();
  curv->add_option("--out", out_path, "CSV output path");
  curv->add_option("--report", report_path, "report JSON path");
  curv->add_option("--ktol", ktol, "median |K + delta| tolerance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  if (fbuild->parsed()) {
    json spec = json::parse(read_file(spec_path), nullptr, false);
    if (spec.is_discarded()) {
      std::cerr << "spec file is not valid JSON\n";
      return 2;
    }
    spec["variant"] = variant;
    char* result = nullptr;
    int pass = 0;
    if (int rc = pss_family_build(spec.dump().c_str(), opts_json(g).c_str(), &result, &pass))
      die_api(rc);
    std::string text = take(result);
    write_output(out_path, text);
    if (out_path.empty() && g.format == "text") {
      // the JSON already went to stdout; add a one-line verdict
    }
    json rj = json::parse(text);
    std::cerr << (pass ? "PASS" : "FAIL") << " characterization\n";
    return pass ? 0 : 1;
  }

  if (verify->parsed()) {
    pss_sextet* s = load_sextet_arg(sextet_path);
    char* rep = nullptr;
    int pass = 0;
    int rc = pss_verify(s, opts_json(g).c_str(), &rep, &pass);
    pss_sextet_free(s);
    if (rc) die_api(rc);
    return finish_with(json::parse(take(rep)), g);
  }

  if (clist->parsed()) {
    char* names = nullptr;
    if (int rc = pss_catalog_list(&names)) die_api(rc);
    json j = json::parse(take(names));
    if (g.format == "json") {
      std::cout << j.dump(2) << "\n";
    } else {
      for (const auto& n : j) std::cout << n.get<std::string>() << "\n";
    }
    return 0;
  }

  if (cexport->parsed()) {
    char* fixture = nullptr;
    if (int rc = pss_catalog_export(fixture_name.c_str(), params_json(params_csv).c_str(),
                                    &fixture))
      die_api(rc);
    write_output(out_path, take(fixture));
    return 0;
  }

  if (crun->parsed()) {
    char* rep = nullptr;
    int pass = 0;
    if (int rc = pss_catalog_run(fixture_name.c_str(), params_json(params_csv).c_str(),
                                 opts_json(g).c_str(), &rep, &pass))
      die_api(rc);
    return finish_with(json::parse(take(rep)), g);
  }

  if (solve->parsed()) {
    std::string problem = read_file(problem_path);
    pss_grid* grid = nullptr;
    char* diag = nullptr;
    if (int rc = pss_solve(problem.c_str(), &grid, &diag)) die_api(rc);
    std::string diag_text = take(diag);
    json dj = json::parse(diag_text);
    if (!report_path.empty()) write_output(report_path, diag_text);

    // attach sextet-derived columns when the problem names one
    json pj = json::parse(problem);
    pss_sextet* s = nullptr;
    if (pj.contains("sextet")) {
      if (int rc = pss_sextet_from_json(pj.at("sextet").dump().c_str(), &s)) die_api(rc);
    } else if (pj.contains("catalog")) {
      char* fixture = nullptr;
      std::string params = pj.contains("params") ? pj.at("params").dump() : "{}";
      if (int rc = pss_catalog_export(pj.at("catalog").get<std::string>().c_str(),
                                      params.c_str(), &fixture))
        die_api(rc);
      if (int rc = pss_sextet_from_json(take(fixture).c_str(), &s)) die_api(rc);
    }
    if (!out_path.empty()) {
      char* csv = nullptr;
      if (int rc = pss_grid_csv(grid, s, &csv)) die_api(rc);
      write_output(out_path, take(csv));
    }
    if (s) pss_sextet_free(s);
    pss_grid_free(grid);
    bool completed = dj.value("completed", false);
    if (g.format == "json")
      std::cout << dj.dump(2) << "\n";
    else
      std::cout << (completed ? "PASS" : "FAIL") << "  solve "
                << (dj.contains("diagnostic") ? dj.at("diagnostic").get<std::string>() : "")
                << "\n";
    return completed ? 0 : 1;
  }

  if (curv->parsed()) {
    std::string problem = read_file(problem_path);
    json pj = json::parse(problem, nullptr, false);
    if (pj.is_discarded()) {
      std::cerr << "problem file is not valid JSON\n";
      return 2;
    }
    pss_grid* grid = nullptr;
    char* diag = nullptr;
    if (int rc = pss_solve(problem.c_str(), &grid, &diag)) die_api(rc);
    pss_string_free(diag);

    pss_sextet* s = nullptr;
    if (pj.contains("sextet")) {
      if (int rc = pss_sextet_from_json(pj.at("sextet").dump().c_str(), &s)) die_api(rc);
    } else if (pj.contains("catalog")) {
      char* fixture = nullptr;
      std::string params = pj.contains("params") ? pj.at("params").dump() : "{}";
      if (int rc = pss_catalog_export(pj.at("catalog").get<std::string>().c_str(),
                                      params.c_str(), &fixture))
        die_api(rc);
      if (int rc = pss_sextet_from_json(take(fixture).c_str(), &s)) die_api(rc);
    } else {
      std::cerr << "curvature needs a \"sextet\" or \"catalog\" entry in the problem\n";
      return 2;
    }

    char* rep = nullptr;
    int pass = 0;
    int rc = pss_curvature_report(grid, s, ktol, &rep, &pass);
    if (rc) die_api(rc);
    std::string rep_text = take(rep);
    if (!report_path.empty()) write_output(report_path, rep_text);
    if (!out_path.empty()) {
      char* csv = nullptr;
      if (int rc2 = pss_grid_csv(grid, s, &csv)) die_api(rc2);
      write_output(out_path, take(csv));
    }
    pss_sextet_free(s);
    pss_grid_free(grid);
    json rj = json::parse(rep_text);
    if (g.format == "json")
      std::cout << rj.dump(2) << "\n";
    else
      std::cout << (pass ? "PASS" : "FAIL") << "  median |K + delta| = "
                << rj.at("median_abs_K_plus_delta").dump() << " (tol " << ktol << ")\n";
    return pass ? 0 : 1;
  }

  return 2;
}
