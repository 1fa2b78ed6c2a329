#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <sstream>
#include <string>

#include "qlam/algorithms.hpp"
#include "qlam/linearity.hpp"
#include "qlam/machine.hpp"
#include "qlam/parser.hpp"
#include "qlam/prelude.hpp"
#include "qlam/reducer.hpp"

using json = nlohmann::json;
using namespace qlam;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitStuck = 2;
constexpr int kExitBudget = 3;

struct Options {
  std::string command;
  std::string path;
  std::string expr;
  std::string model = "q";
  int max_steps = 10000;
  bool trace = false;
  bool json_out = false;
};

Calculus calculus(const Options& o) {
  return o.model == "i" ? Calculus::LambdaI : Calculus::LambdaQ;
}

std::string read_source(const Options& o) {
  if (!o.expr.empty()) return o.expr;
  if (o.path.empty()) throw Error("no input: give a file path or -e EXPR");
  std::ifstream in(o.path);
  if (!in) throw Error("cannot open " + o.path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int status_exit(RunStatus s) {
  switch (s) {
    case RunStatus::Halted: return kExitOk;
    case RunStatus::Stuck: return kExitStuck;
    case RunStatus::BudgetExceeded: return kExitBudget;
  }
  return kExitError;
}

void print_trace(const std::vector<StepRule>& trace) {
  int i = 0;
  for (auto& r : trace)
    std::cout << "step " << ++i << ": " << rule_tag_name(r.tag) << " @"
              << path_str(r.target) << "\n";
}

json state_json(const Superposition& psi) {
  json out;
  auto factored = factor_history(psi);
  if (factored) {
    out["history"] = json::array();
    for (auto& h : factored->history) out["history"].push_back(pretty(h));
    out["branches"] = json::array();
    for (auto& [reg, amp] : factored->register_marginal)
      out["branches"].push_back({{"amp_re", amp.real()},
                                 {"amp_im", amp.imag()},
                                 {"register", pretty(reg)}});
  } else {
    // Histories differ between branches; attach them per branch.
    out["branches"] = json::array();
    for (auto& [cfg, amp] : psi) {
      json hist = json::array();
      for (auto& h : cfg.history) hist.push_back(pretty(h));
      out["branches"].push_back({{"amp_re", amp.real()},
                                 {"amp_im", amp.imag()},
                                 {"register", pretty(cfg.reg)},
                                 {"history", hist}});
    }
  }
  return out;
}

void print_run_state(const Superposition& psi) {
  auto factored = factor_history(psi);
  if (factored) {
    std::cout << "history:";
    for (auto& h : factored->history) std::cout << " " << pretty(h) << " ;";
    std::cout << "\n";
    for (auto& [reg, amp] : factored->register_marginal)
      std::cout << format_amplitude(amp) << "  " << pretty(reg) << "\n";
  } else {
    std::cout << print_state(psi);
  }
}

int cmd_check(const Options& o) {
  TermPtr t = parse(read_source(o), calculus(o), prelude::env(calculus(o)));
  auto violations = check_well_formed(t);
  if (violations.empty()) {
    std::cout << "well-formed\n";
    return kExitOk;
  }
  for (auto& v : violations)
    std::cout << "violation: " << violation_kind_name(v.kind) << " at "
              << path_str(v.location)
              << (v.binder.empty() ? "" : " (" + v.binder + ")") << "\n";
  return kExitError;
}

int cmd_run(const Options& o) {
  Calculus c = calculus(o);
  TermPtr t = parse(read_source(o), c, prelude::env(c));
  if (c == Calculus::LambdaQ) {
    auto violations = check_well_formed(t);
    if (!violations.empty()) {
      for (auto& v : violations)
        std::cerr << "violation: " << violation_kind_name(v.kind) << " at "
                  << path_str(v.location)
                  << (v.binder.empty() ? "" : " (" + v.binder + ")") << "\n";
      return kExitError;
    }
  }
  RunResult r = run(t, c, o.max_steps, o.trace);
  if (o.trace) print_trace(r.trace);
  if (o.json_out) {
    json out = state_json(r.state);
    out["status"] = run_status_name(r.status);
    out["steps"] = r.steps;
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << "status: " << run_status_name(r.status) << "\n"
              << "steps: " << r.steps << "\n";
    print_run_state(r.state);
  }
  return status_exit(r.status);
}

int cmd_reduce(const Options& o) {
  Calculus c = calculus(o);
  TermPtr t = parse(read_source(o), c, prelude::env(c));
  ReduceResult r = reduce_to_normal(t, c, o.max_steps);
  if (o.json_out) {
    json out;
    out["status"] = run_status_name(r.status);
    out["steps"] = r.steps;
    out["branches"] = json::array();
    for (auto& [reg, amp] : r.state)
      out["branches"].push_back({{"amp_re", amp.real()},
                                 {"amp_im", amp.imag()},
                                 {"register", pretty(reg)}});
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << "status: " << run_status_name(r.status) << "\n"
              << "steps: " << r.steps << "\n";
    for (auto& [reg, amp] : r.state)
      std::cout << format_amplitude(amp) << "  " << pretty(reg) << "\n";
  }
  return status_exit(r.status);
}

int cmd_verify(const Options& o) {
  Calculus c = calculus(o);
  if (c == Calculus::LambdaI) {
    std::cout << "not applicable: register-only reduction is stated for the "
                 "linear calculus (model q)\n";
    return kExitError;
  }
  TermPtr t = parse(read_source(o), c, prelude::env(c));
  AgreementReport rep = agrees_with_machine(t, c, o.max_steps);
  if (rep.agrees) {
    std::cout << "agrees: machine and reducer match for " << rep.steps
              << " steps\n";
    return kExitOk;
  }
  std::cout << "divergence: " << rep.detail << "\n";
  return rep.detail.find("budget") != std::string::npos ? kExitBudget
                                                        : kExitError;
}

int cmd_density(const Options& o) {
  Calculus c = calculus(o);
  TermPtr t = parse(read_source(o), c, prelude::env(c));
  RunResult r = run(t, c, o.max_steps);
  DensityMatrix d = density_matrix(r.state);
  if (o.json_out) {
    json out;
    out["labels"] = json::array();
    for (auto& l : d.labels) out["labels"].push_back(pretty(l));
    json re = json::array(), im = json::array();
    for (Eigen::Index i = 0; i < d.rho.rows(); ++i) {
      json rrow = json::array(), irow = json::array();
      for (Eigen::Index j = 0; j < d.rho.cols(); ++j) {
        rrow.push_back(d.rho(i, j).real());
        irow.push_back(d.rho(i, j).imag());
      }
      re.push_back(rrow);
      im.push_back(irow);
    }
    out["re"] = re;
    out["im"] = im;
    std::cout << out.dump(2) << "\n";
  } else {
    for (size_t i = 0; i < d.labels.size(); ++i)
      std::cout << "[" << i << "] " << pretty(d.labels[i]) << "\n";
    for (Eigen::Index i = 0; i < d.rho.rows(); ++i) {
      for (Eigen::Index j = 0; j < d.rho.cols(); ++j)
        std::cout << (j ? "  " : "") << format_amplitude(d.rho(i, j));
      std::cout << "\n";
    }
  }
  return status_exit(r.status);
}

int cmd_repl(const Options& o) {
  Calculus c = calculus(o);
  Env session = prelude::env(c);
  std::string line;
  std::cout << "qlam repl (model " << (c == Calculus::LambdaQ ? "q" : "i")
            << "); 'let name = expr' binds, blank line or EOF quits\n";
  while (std::cout << "> " << std::flush, std::getline(std::cin, line)) {
    if (line.empty() || line == "quit" || line == "exit") break;
    try {
      std::string name;
      std::string src = line;
      // Bindings: "let name = expr" with a bare identifier makes a session
      // definition instead of a let-expression.
      std::istringstream probe(line);
      std::string w1, w2, w3;
      probe >> w1 >> w2 >> w3;
      if (w1 == "let" && w3 == "=" && !w2.empty() &&
          std::islower(static_cast<unsigned char>(w2[0])) &&
          line.find(" in ") == std::string::npos) {
        name = w2;
        src = line.substr(line.find('=') + 1);
      }
      TermPtr t = parse(src, c, session);
      ReduceResult r = reduce_to_normal(t, c, o.max_steps);
      if (name.empty()) {
        std::cout << "status: " << run_status_name(r.status) << "\n";
        for (auto& [reg, amp] : r.state)
          std::cout << format_amplitude(amp) << "  " << pretty(reg) << "\n";
        continue;
      }
      if (r.state.size() != 1) {
        std::cout << "cannot bind a superposed result; bindings are "
                     "nonlinear (duplicable) values\n";
        continue;
      }
      session[name] = r.state.begin()->first;
      std::cout << name << " = " << pretty(session[name]) << "\n";
    } catch (const std::exception& ex) {
      std::cout << "error: " << ex.what() << "\n";
    }
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  if (const char* env_steps = std::getenv("QLAM_MAX_STEPS"))
    o.max_steps = std::atoi(env_steps);

  CLI::App cli{"interpreter and simulator for a linear quantum lambda calculus"};
  cli.require_subcommand(1);
  auto add_common = [&](CLI::App* sub, bool takes_input) {
    if (takes_input)
      sub->add_option("path", o.path, "program file (.lq)");
    sub->add_option("-e,--expr", o.expr, "inline expression");
    sub->add_option("--model", o.model, "calculus: q (linear) or i")
        ->check(CLI::IsMember({"q", "i"}));
    sub->add_option("--max-steps", o.max_steps, "step budget");
    sub->add_flag("--trace", o.trace, "log the rule fired at each step");
    sub->add_flag("--json", o.json_out, "machine-readable output");
    return sub;
  };
  for (const char* name : {"check", "run", "reduce", "verify", "density"})
    add_common(cli.add_subcommand(name), true);
  add_common(cli.add_subcommand("repl"), false);

  CLI11_PARSE(cli, argc, argv);
  o.command = cli.get_subcommands().front()->get_name();

  try {
    if (o.command == "check") return cmd_check(o);
    if (o.command == "run") return cmd_run(o);
    if (o.command == "reduce") return cmd_reduce(o);
    if (o.command == "verify") return cmd_verify(o);
    if (o.command == "density") return cmd_density(o);
    if (o.command == "repl") return cmd_repl(o);
  } catch (const SyntaxError& ex) {
    std::cerr << "syntax error at " << ex.line << ":" << ex.column << ": "
              << ex.what() << "\n";
    return kExitError;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return kExitError;
  }
  std::cerr << "unknown command\n";
  return kExitError;
}
