// Command-line front end: classify an Abel inverse-Riccati equation and
// verify its closed-form solution.
//
//   air classify --expr "y' = (y^2 - y)/((x^2+1)*y + x)"
//   air solve --expr "..." [--tol 1e-6] [--from 0.1,0.2] [--to 0.6] [--json]
//   air solve --coeffs equation.json --pretty

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "air/report.hpp"

namespace {

air::RationalAIR load_equation(const std::string& expr, const std::string& coeffs_path) {
  if (!expr.empty() && !coeffs_path.empty())
    throw air::Error(air::ErrorCode::InvalidArgument, "--expr and --coeffs are mutually exclusive");
  if (!expr.empty()) return air::parse_equation(expr);
  if (!coeffs_path.empty()) {
    std::ifstream in(coeffs_path);
    if (!in) throw air::Error(air::ErrorCode::InvalidArgument, "cannot open " + coeffs_path);
    air::Json j;
    try {
      in >> j;
    } catch (const std::exception& e) {
      throw air::Error(air::ErrorCode::ParseSyntax, std::string("bad JSON: ") + e.what());
    }
    return air::equation_from_json(j);
  }
  throw air::Error(air::ErrorCode::InvalidArgument, "one of --expr or --coeffs is required");
}

bool parse_from(const std::string& s, double& x0, air::Complex& y0) {
  std::istringstream is(s);
  double a, b, c = 0;
  char comma;
  if (!(is >> a >> comma >> b) || comma != ',') return false;
  if (is >> comma >> c && comma != ',') return false;
  x0 = a;
  y0 = air::Complex(b, c);
  return true;
}

void print_human(const air::Json& rep, std::ostream& os) {
  os << "input: " << rep["input"]["text"].get<std::string>() << "\n";
  if (rep.contains("class")) {
    os << "class: " << rep["class"]["name"].get<std::string>();
    const auto& params = rep["class"]["params"];
    if (!params.empty()) {
      os << " with parameters";
      for (const auto& p : params) {
        os << " (" << p["re"].get<double>() << (p["im"].get<double>() < 0 ? " - " : " + ")
           << std::abs(p["im"].get<double>()) << "i)";
      }
    }
    os << "\n";
    os << "chain: " << rep["chain"].size() << " substitution(s)\n";
  }
  if (rep.contains("solution"))
    os << "solution basis: " << rep["solution"]["basis"].get<std::string>() << "\n";
  if (rep.contains("verification")) {
    const auto& v = rep["verification"];
    os << "verification: drift " << v["drift"].get<double>() << " over "
       << v["points"].get<int>() << " points, tol " << v["tol"].get<double>() << " -> "
       << (v["passed"].get<bool>() ? "PASS" : "FAIL") << "\n";
  }
  if (rep.contains("note")) os << "note: " << rep["note"].get<std::string>() << "\n";
  if (rep.contains("error"))
    os << "error [" << rep["error"]["code"].get<std::string>()
       << "]: " << rep["error"]["message"].get<std::string>() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Abel inverse-Riccati classifier and solver"};
  app.require_subcommand(1);

  std::string expr, coeffs, from_str;
  double tol = 1e-6;
  double to_val = 0;
  bool has_to = false;
  unsigned seed = 0;
  bool as_json = false, pretty = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--expr", expr, "equation in the form \"y' = P/Q\"");
    sub->add_option("--coeffs", coeffs, "JSON file with keys a0..a3, s0..s2, r0..r2");
    sub->add_flag("--json", as_json, "emit the JSON report");
    sub->add_flag("--pretty", pretty, "pretty-print the JSON report (implies --json)");
  };

  CLI::App* cls = app.add_subcommand("classify", "classify only");
  add_common(cls);

  CLI::App* slv = app.add_subcommand("solve", "classify, solve and verify");
  add_common(slv);
  slv->add_option("--tol", tol, "verification drift tolerance (default 1e-6)");
  slv->add_option("--from", from_str, "start point x0,y0re[,y0im]");
  slv->add_option("--to", to_val, "end of the verification path")->each([&](const std::string&) { has_to = true; });
  slv->add_option("--seed", seed, "seed for automatic start-point selection");

  CLI11_PARSE(app, argc, argv);

  air::RunOptions opt;
  opt.classify_only = cls->parsed();
  opt.tol = tol;
  opt.seed = seed;
  if (!from_str.empty()) {
    double x0;
    air::Complex y0;
    if (!parse_from(from_str, x0, y0)) {
      std::cerr << "error [E_INVALID_ARGUMENT]: --from expects x0,y0re[,y0im]\n";
      return 1;
    }
    opt.x0 = x0;
    opt.y0 = y0;
  }
  if (has_to) opt.x1 = to_val;

  air::RunResult res;
  try {
    air::RationalAIR eq = load_equation(expr, coeffs);
    res = air::run(eq, opt);
  } catch (const air::Error& e) {
    res.report["error"] = air::Json{{"code", air::error_code_name(e.code())}, {"message", e.what()}};
    res.exit_code = 1;
  }

  if (as_json || pretty) {
    std::cout << res.report.dump(pretty ? 2 : -1) << "\n";
  } else {
    print_human(res.report, std::cout);
  }
  return res.exit_code;
}
