// hopi_main.cpp - command-line entry point: check, reduce, lts, bisim,
// merge, translate, testctx and probe over surface-syntax input files.
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "hopi/bisim.hpp"
#include "hopi/lts.hpp"
#include "hopi/merge.hpp"
#include "hopi/parser.hpp"
#include "hopi/printer.hpp"
#include "hopi/reduction.hpp"
#include "hopi/subst.hpp"
#include "hopi/translate.hpp"
#include "hopi/types.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitParse = 1;
constexpr int kExitType = 2;
constexpr int kExitDistinguished = 3;
constexpr int kExitInconclusive = 4;
constexpr int kExitUsage = 64;

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Parse and type-check one input unit; parse errors exit 1, type errors 2.
struct Loaded {
  hopi::Env env;
  hopi::TermPtr config;
};

Loaded load(const std::string& path) {
  hopi::ParsedFile f = hopi::parseFile(slurp(path));
  hopi::checkConfig(f.env, f.config);
  return Loaded{f.env, f.config};
}

int run(int argc, char** argv) {
  CLI::App app{"higher-order pi-calculus workbench"};
  app.require_subcommand(1);

  std::string file, fileQ, labelText;
  int maxSteps = 32, maxStates = 2000;
  int depth = 4, tauBudget = 6, weakStates = 400;
  int maxNodes = 500;
  bool wantJson = false, wantTrace = false;

  auto* cCheck = app.add_subcommand("check", "parse, validate and type-check");
  cCheck->add_option("file", file)->required();

  auto* cReduce = app.add_subcommand("reduce", "explore the reduction relation");
  cReduce->add_option("file", file)->required();
  cReduce->add_option("--max-steps", maxSteps);
  cReduce->add_option("--max-states", maxStates);
  cReduce->add_flag("--trace", wantTrace, "print one-step rules and paths");
  cReduce->add_flag("--json", wantJson);

  auto* cLts = app.add_subcommand("lts", "build the labelled transition graph");
  cLts->add_option("file", file)->required();
  cLts->add_option("--depth", depth);
  cLts->add_option("--max-nodes", maxNodes);
  cLts->add_flag("--json", wantJson);

  auto* cBisim = app.add_subcommand("bisim", "bounded weak bisimulation check");
  cBisim->add_option("fileP", file)->required();
  cBisim->add_option("fileQ", fileQ)->required();
  cBisim->add_option("--depth", depth);
  cBisim->add_option("--tau-budget", tauBudget);
  cBisim->add_option("--max-weak-states", weakStates);
  cBisim->add_flag("--json", wantJson);

  auto* cMerge = app.add_subcommand("merge", "eliminate resources");
  cMerge->add_option("file", file)->required();

  auto* cTranslate = app.add_subcommand("translate", "translate into the plain calculus");
  cTranslate->add_option("file", file)->required();

  auto* cTestctx = app.add_subcommand("testctx", "emit the testing context for a label");
  cTestctx->add_option("file", file)->required();
  cTestctx->add_option("--label", labelText)->required();

  auto* cProbe = app.add_subcommand("probe", "run the testing context against the file");
  cProbe->add_option("file", file)->required();
  cProbe->add_option("--label", labelText)->required();
  cProbe->add_option("--max-steps", maxSteps);
  cProbe->add_option("--max-states", maxStates);
  cProbe->add_option("--tau-budget", tauBudget);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);  // prints help or the usage message
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (cCheck->parsed()) {
    Loaded l = load(file);
    std::cout << hopi::printEnvHeader(l.env) << "ok: " << hopi::print(l.config)
              << "\n";
    return kExitOk;
  }

  if (cReduce->parsed()) {
    Loaded l = load(file);
    if (wantTrace) {
      hopi::TermPtr cur = hopi::canonicalTerm(l.config);
      for (int i = 0; i < maxSteps; ++i) {
        auto steps = hopi::reduceStep(cur);
        if (steps.empty()) break;
        const auto& s = steps.front();
        cur = hopi::canonicalTerm(s.target);
        std::cout << s.rule << " @ " << s.path << " : " << hopi::print(cur)
                  << "\n";
      }
      return kExitOk;
    }
    hopi::ReachResult r = hopi::reduceMulti(l.config, maxSteps, maxStates);
    if (wantJson) {
      nlohmann::json j;
      j["states"] = nlohmann::json::array();
      for (const auto& s : r.states) j["states"].push_back(hopi::print(s));
      j["truncated"] = r.truncated;
      std::cout << j.dump(2) << "\n";
    } else {
      for (const auto& s : r.states) std::cout << hopi::print(s) << "\n";
      if (r.truncated) std::cout << "(truncated)\n";
    }
    return kExitOk;
  }

  if (cLts->parsed()) {
    Loaded l = load(file);
    hopi::LtsGraph g = hopi::buildLts(hopi::makeNode(l.env, l.config), depth, maxNodes);
    if (wantJson) {
      std::cout << hopi::ltsToJson(g) << "\n";
    } else {
      for (const auto& e : g.edges)
        std::cout << e.src << " --" << hopi::printLabel(e.label) << "--> " << e.dst
                  << "\n";
      if (g.truncated) std::cout << "(truncated)\n";
    }
    return kExitOk;
  }

  if (cBisim->parsed()) {
    Loaded l = load(file), r = load(fileQ);
    hopi::WeakBudget budget{tauBudget, weakStates};
    hopi::BisimVerdict v =
        hopi::bisimCheck(hopi::makeNode(l.env, l.config),
                         hopi::makeNode(r.env, r.config), depth, budget);
    if (wantJson) std::cout << hopi::verdictToJson(v) << "\n";
    switch (v.kind) {
      case hopi::VerdictKind::MismatchedEnvironments:
        if (!wantJson) std::cout << "mismatched environments: " << v.detail << "\n";
        return kExitType;
      case hopi::VerdictKind::Distinguished:
        if (!wantJson) std::cout << hopi::explainWitness(v, budget);
        return kExitDistinguished;
      case hopi::VerdictKind::EquivalentToDepth:
        if (!wantJson)
          std::cout << "equivalent to depth " << v.depth
                    << (v.truncated ? " (truncated: inconclusive)" : "") << "\n";
        return v.truncated ? kExitInconclusive : kExitOk;
    }
    return kExitOk;
  }

  if (cMerge->parsed()) {
    Loaded l = load(file);
    hopi::MergeResult m = hopi::merge(l.config);
    if (!m.defined) {
      std::string line = "merge undefined: cycle";
      for (size_t i = 0; i < m.cycle.size(); ++i)
        line += (i ? " -> " : " ") + m.cycle[i];
      std::cout << line << "\n";
      return kExitDistinguished;
    }
    std::cout << hopi::print(m.residue) << "\n";
    return kExitOk;
  }

  if (cTranslate->parsed()) {
    Loaded l = load(file);
    hopi::Env plain = hopi::translateEnv(l.env);
    hopi::TermPtr image = hopi::translateConfig(l.env, l.config);
    hopi::checkConfig(plain, image);
    std::cout << hopi::printFile(plain, image);
    return kExitOk;
  }

  if (cTestctx->parsed()) {
    Loaded l = load(file);
    hopi::Label a = hopi::parseLabel(labelText);
    std::set<std::string> used;
    for (const auto& [n, ty] : l.env.channels) used.insert(n);
    for (const auto& [k, ty] : l.env.triggers) used.insert(k);
    if (!a.bound.empty()) used.insert(a.bound);
    std::string succ = hopi::freshIdent("succ", used);
    used.insert(succ);
    std::string dead = hopi::freshIdent("dead", used);
    hopi::TermPtr t = hopi::testingContext(l.env, l.env, a, succ, dead);
    std::cout << hopi::print(t) << "\n";
    return kExitOk;
  }

  if (cProbe->parsed()) {
    Loaded l = load(file);
    hopi::Label a = hopi::parseLabel(labelText);
    hopi::ProbeBudgets budgets;
    budgets.reduceSteps = maxSteps;
    budgets.reduceStates = maxStates;
    budgets.weak.tauSteps = tauBudget;
    hopi::ProbeResult r = hopi::probeLabel(l.env, l.env, l.config, a, budgets);
    std::cout << hopi::probeToJson(r) << "\n";
    return kExitOk;
  }

  return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const hopi::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const hopi::TypeError& e) {
    std::cerr << "type error: " << e.what() << "\n";
    return kExitType;
  } catch (const hopi::FreshnessViolation& e) {
    std::cerr << "freshness violation: " << e.what() << "\n";
    return kExitType;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}
