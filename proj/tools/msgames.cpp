#include <csignal>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "msgames/bounds.hpp"
#include "msgames/ef_solver.hpp"
#include "msgames/ms_solver.hpp"
#include "msgames/sentence.hpp"
#include "msgames/service.hpp"
#include "msgames/strategy_lab.hpp"
#include "msgames/structure_spec.hpp"

using namespace msgames;

namespace {

// Exit codes: solve/certify/run report the verdict as 0/1.
constexpr int kUsage = 2;
constexpr int kBudget = 3;
constexpr int kDefect = 4;

const char* winnerName(Player p) { return p == Player::Spoiler ? "spoiler" : "duplicator"; }

struct GameArgs {
  std::string a, b, prefix, constrainFirst;
  int rounds = 0;
  bool atoms = false, noPlayOnTop = false;

  void add(CLI::App* cmd) {
    cmd->add_option("--a", a, "side A structures (comma-separated specs)")->required();
    cmd->add_option("--b", b, "side B structures (comma-separated specs)")->required();
    cmd->add_option("--rounds", rounds, "number of rounds")->required()->check(CLI::PositiveNumber);
    cmd->add_flag("--atoms", atoms, "allow atom selections");
    cmd->add_flag("--no-play-on-top", noPlayOnTop, "Spoiler may not reselect an element");
    cmd->add_option("--prefix", prefix, "side constraints, E = side A, A = side B, . = free");
    cmd->add_option("--constrain-first", constrainFirst, "force the first move onto side A or B")
        ->check(CLI::IsMember({"A", "B"}));
  }

  std::vector<SideConstraint> constraints() const {
    std::vector<SideConstraint> c = parse_prefix(prefix);
    if (!constrainFirst.empty()) {
      if (c.empty()) c.push_back(SideConstraint::Free);
      c[0] = constrainFirst == "A" ? SideConstraint::PlayInA : SideConstraint::PlayInB;
    }
    return c;
  }

  GameState state() const {
    return GameState::make(parse_structure_list(a), parse_structure_list(b), rounds, {atoms, noPlayOnTop},
                           constraints());
  }
};

std::string readFile(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw UsageError("cannot read " + path);
  std::stringstream buf;
  buf << f.rdbuf();
  return buf.str();
}

void writeFile(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw UsageError("cannot write " + path);
  f << text;
}

int solveEf(const GameArgs& g) {
  if (g.atoms || g.noPlayOnTop) throw UsageError("--atoms and --no-play-on-top apply to ms only");
  auto as = parse_structure_list(g.a), bs = parse_structure_list(g.b);
  if (as.size() != 1 || bs.size() != 1) throw UsageError("ef needs exactly one structure per side");
  const Board a(as[0]), b(bs[0]);
  const auto c = g.constraints();
  EfVerdict v;
  if (c.empty()) {
    v = ef_winner(a, b, g.rounds, {Budget::fromEnvironment(), false});
  } else {
    if (static_cast<int>(c.size()) > g.rounds) throw UsageError("more side constraints than rounds");
    std::vector<SideConstraint> full = c;
    full.resize(g.rounds, SideConstraint::Free);
    v = ef_prefix_winner(a, b, full, {Budget::fromEnvironment(), false});
  }
  std::cout << "winner\t" << winnerName(v.winner) << "\nnodes\t" << v.nodes << "\n";
  return v.winner == Player::Spoiler ? 1 : 0;
}

int solveMs(const GameArgs& g, const std::string& certPath) {
  const GameState s = g.state();
  MsVerdict v = ms_winner(s, {Budget::fromEnvironment(), !certPath.empty(), {}});
  std::cout << "winner\t" << winnerName(v.winner) << "\nnodes\t" << v.nodes << "\n";
  if (v.certificate && !certPath.empty()) {
    writeFile(certPath, certificate_to_json(s, *v.certificate));
    std::cout << "certificate\t" << certPath << "\n";
  }
  return v.winner == Player::Spoiler ? 1 : 0;
}

int run(int argc, char** argv) {
  CLI::App app{"Multi-structural and Ehrenfeucht-Fraisse games on finite structures"};
  app.require_subcommand(1);

  auto* solve = app.add_subcommand("solve", "decide the winner of a game");
  std::string game;
  std::string certPath;
  GameArgs solveArgs;
  solve->add_option("game", game, "ef or ms")->required()->check(CLI::IsMember({"ef", "ms"}));
  solveArgs.add(solve);
  solve->add_option("--certificate", certPath, "write Spoiler's certificate (ms) to this file");

  auto* sentence = app.add_subcommand("sentence", "evaluate or synthesize sentences");
  sentence->require_subcommand(1);
  auto* evalCmd = sentence->add_subcommand("eval", "evaluate a sentence on a structure");
  std::string sentName, sentText, model;
  int sentR = 0;
  auto* nameOpt = evalCmd->add_option("--name", sentName, "library sentence (phi2..phi6, phi4_5..phi4_9, chain)");
  evalCmd->add_option("--text", sentText, "sentence text")->excludes(nameOpt);
  evalCmd->add_option("--r", sentR, "parameter for chain");
  evalCmd->add_option("--model", model, "structure spec")->required();
  auto* synthCmd = sentence->add_subcommand("synth", "sentence from a Spoiler certificate");
  std::string fromPath;
  synthCmd->add_option("--from", fromPath, "certificate file written by solve ms --certificate")->required();

  auto* certify = app.add_subcommand("certify", "check a Duplicator script against every Spoiler line");
  std::string dupName, refuteWith, traceOut;
  GameArgs certArgs;
  certify->add_option("--script", dupName, "Duplicator script")->required()->check(CLI::IsMember(duplicator_script_names()));
  certArgs.add(certify);
  certify->add_option("--refute-with", refuteWith, "Spoiler script to try first for the refutation trace")
      ->check(CLI::IsMember(spoiler_script_names()));
  certify->add_option("--trace-out", traceOut, "write the refutation trace here");

  auto* runCmd = app.add_subcommand("run", "play a Spoiler script and record its trace");
  std::string spoilerName, against, runTrace;
  GameArgs runArgs;
  runCmd->add_option("--script", spoilerName, "Spoiler script")->required()->check(CLI::IsMember(spoiler_script_names()));
  runArgs.add(runCmd);
  runCmd->add_option("--against", against, "Duplicator script (default: oblivious)")
      ->check(CLI::IsMember(duplicator_script_names()));
  runCmd->add_option("--trace-out", runTrace, "write the trace here (default: stdout)");

  auto* table = app.add_subcommand("table", "print the bounds table");
  int maxR = 10;
  table->add_option("--max-r", maxR, "last row")->check(CLI::Range(1, 62));

  auto* campaign = app.add_subcommand("campaign", "run a verification campaign");
  std::string campaignName, reportPath;
  CampaignCaps caps;
  campaign->add_option("name", campaignName, "campaign")->required()->check(CLI::IsMember(campaign_names()));
  campaign->add_option("--report", reportPath, "report file, appended (default: <name>.tsv)");
  campaign->add_option("--max-r", caps.maxR, "override the campaign's largest r");
  campaign->add_option("--max-size", caps.maxSize, "override the campaign's largest size");

  auto* serve = app.add_subcommand("serve", "start the HTTP session service");
  int port = 8080;
  std::string host = "127.0.0.1", persistDir;
  std::size_t cap = 8;
  serve->add_option("--port", port, "port (0 picks a free one)");
  serve->add_option("--host", host, "interface to bind");
  serve->add_option("--persist", persistDir, "directory for session files");
  serve->add_option("--cap", cap, "engine Duplicator board cap")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  if (*solve) return game == "ef" ? solveEf(solveArgs) : solveMs(solveArgs, certPath);

  if (*evalCmd) {
    if (sentName.empty() && sentText.empty()) throw UsageError("give --name or --text");
    const Sentence phi = sentName.empty() ? parse_sentence(sentText) : library(sentName, sentR);
    std::cout << (eval(phi, *parse_structure(model)) ? "true" : "false") << "\n";
    return 0;
  }

  if (*synthCmd) {
    auto [state, cert] = certificate_from_json(readFile(fromPath));
    std::cout << render(synthesize(cert, state)) << "\n";
    return 0;
  }

  if (*certify) {
    std::vector<SpoilerScript> preferred;
    if (!refuteWith.empty()) preferred.push_back(spoiler_script(refuteWith));
    CertifyOutcome out = certify_duplicator(duplicator_script(dupName), certArgs.state(), Budget::fromEnvironment(), preferred);
    std::cout << (out.certified ? "certified" : "not certified") << "\nbranches\t" << out.branches << "\nnodes\t"
              << out.nodes << "\nmillis\t" << out.millis << "\n";
    if (out.refutationTrace) {
      std::cout << "refuted_by\t" << out.refutedBy << "\nplay_on_top\t"
                << (trace_has_play_on_top(*out.refutationTrace) ? "yes" : "no") << "\n";
      if (!traceOut.empty()) {
        writeFile(traceOut, trace_to_text(*out.refutationTrace));
        std::cout << "trace\t" << traceOut << "\n";
      }
    }
    return out.certified ? 0 : 1;
  }

  if (*runCmd) {
    DuplicatorScript dup;
    if (!against.empty()) dup = duplicator_script(against);
    RunOutcome out = run_spoiler(spoiler_script(spoilerName), runArgs.state(), against.empty() ? nullptr : &dup);
    if (runTrace.empty()) {
      std::cout << trace_to_text(out.trace);
    } else {
      writeFile(runTrace, trace_to_text(out.trace));
      std::cout << "winner\t" << (out.spoilerWins ? "spoiler" : "duplicator") << "\npeak_boards\t" << out.peakBoards
                << "\ntrace\t" << runTrace << "\n";
    }
    return out.spoilerWins ? 1 : 0;
  }

  if (*table) {
    std::cout << bounds_table_text(bounds_table(maxR));
    return 0;
  }

  if (*campaign) {
    const auto records = verify_campaign(campaignName, caps);
    const std::string path = reportPath.empty() ? campaignName + ".tsv" : reportPath;
    append_report(path, records);
    std::size_t counts[3] = {0, 0, 0};
    for (const CampaignRecord& r : records) ++counts[static_cast<int>(r.status)];
    std::cout << campaignName << "\tPASS " << counts[0] << "\tFAIL " << counts[1] << "\tSKIPPED " << counts[2]
              << "\nreport\t" << path << "\n";
    return counts[1] || counts[2] ? 1 : 0;
  }

  if (*serve) {
    static Service* running = nullptr;
    Service service({persistDir, cap, Budget::fromEnvironment()});
    running = &service;
    std::signal(SIGINT, [](int) { running->stop(); });
    std::signal(SIGTERM, [](int) { running->stop(); });
    service.serve(host, port, [&](int bound) { std::cout << "listening\t" << host << ":" << bound << std::endl; });
    return 0;
  }
  return kUsage;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const BudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return kBudget;
  } catch (const ScriptDefect& e) {
    std::cerr << "script defect: " << e.what() << "\n";
    return kDefect;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
}
