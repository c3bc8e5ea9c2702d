#include "bwnim/app/cli.hpp"

#include <algorithm>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <httplib.h>
#include <nlohmann/json.hpp>

#include "bwnim/app/service.hpp"
#include "bwnim/engine.hpp"
#include "bwnim/oracles.hpp"

namespace bwnim::app {

namespace {

using nlohmann::json;

constexpr int kOk = 0;
constexpr int kCheckFailed = 1;
constexpr int kUsage = 2;
constexpr int kResourceLimit = 3;

json sizes(const Position& pos) { return json(std::vector<HeapSize>(pos.begin(), pos.end())); }

struct SolveArgs {
  std::string spec;
  int k = 2;
  HeapSize max = 0;
  std::string format = "csv";
  bool outcome_only = false;
};

int cmd_solve(const SolveArgs& a, std::ostream& out) {
  const auto spec = GameSpec::parse(a.spec, a.k);
  if (spec.is_partizan()) {
    const auto table = partizan_outcomes(*spec.coloring(), a.k, a.max);
    if (a.format == "csv") {
      out << to_csv(table);
      return kOk;
    }
    json rows = json::array();
    table.index().for_each_lex([&](std::span<const HeapSize> p, std::uint64_t r) {
      rows.push_back({{"position", std::vector<HeapSize>(p.begin(), p.end())}, {"outcome", to_string(table.at_rank(r))}});
    });
    out << json{{"spec", spec.rules_string()}, {"k", a.k}, {"max", a.max}, {"convention", "normal play"}, {"rows", rows}}
               .dump(2)
        << '\n';
    return kOk;
  }
  if (a.outcome_only) {
    const auto table = outcome_table(spec, a.max);
    if (a.format == "csv") {
      out << to_csv(table);
      return kOk;
    }
    json rows = json::array();
    table.index().for_each_lex([&](std::span<const HeapSize> p, std::uint64_t r) {
      rows.push_back({{"position", std::vector<HeapSize>(p.begin(), p.end())},
                      {"outcome", to_string(table.at_rank(r))},
                      {"grundy", nullptr}});
    });
    out << json{{"spec", spec.rules_string()}, {"k", a.k}, {"max", a.max}, {"rows", rows}}.dump(2) << '\n';
    return kOk;
  }
  const auto table = grundy_table(spec, a.max);
  if (a.format == "csv") {
    out << to_csv(table);
    return kOk;
  }
  json rows = json::array();
  table.index().for_each_lex([&](std::span<const HeapSize> p, std::uint64_t r) {
    const auto g = table.at_rank(r);
    const bool illegal = g == GrundyTable::kIllegal;
    rows.push_back({{"position", std::vector<HeapSize>(p.begin(), p.end())},
                    {"outcome", illegal ? "Illegal" : g == 0 ? "P" : "N"},
                    {"grundy", illegal ? json(nullptr) : json(g)}});
  });
  out << json{{"spec", spec.rules_string()}, {"k", a.k}, {"max", a.max}, {"rows", rows}}.dump(2) << '\n';
  return kOk;
}

struct VerifyArgs {
  std::string spec;
  HeapSize max = 0;
  std::string oracle;
  std::string format = "text";
};

std::pair<GameSpec, OracleKind> oracle_setup(const std::string& spec_text, const std::string& oracle) {
  auto spec = GameSpec::parse(spec_text, 2);
  if (!oracle.empty()) return {spec, parse_oracle_kind(oracle)};
  const auto kind = oracle_for(spec);
  if (!kind) throw std::invalid_argument("no closed-form oracle for " + spec.rules_string());
  return {spec, *kind};
}

int cmd_verify(const VerifyArgs& a, std::ostream& out) {
  const auto [spec, kind] = oracle_setup(a.spec, a.oracle);
  const auto report = cross_validate(spec, kind, a.max);
  if (a.format == "json") {
    json mismatches = json::array();
    for (const auto& m : report.mismatches) {
      mismatches.push_back({{"position", sizes(m.position)},
                            {"oracle", m.oracle_p ? "P" : "N"},
                            {"solver", m.solver_p ? "P" : "N"},
                            {"detail", m.detail}});
    }
    out << json{{"spec", spec.rules_string()},
                {"oracle", to_string(kind)},
                {"bound", report.bound},
                {"mismatch_count", report.mismatches.size()},
                {"positions_checked", report.positions_checked},
                {"moves_checked", report.moves_checked},
                {"mismatches", mismatches},
                {"elapsed_ms", report.elapsed.count()}}
               .dump(2)
        << '\n';
  } else {
    out << spec.rules_string() << " oracle=" << to_string(kind) << " max=" << a.max << ": "
        << report.mismatches.size() << " mismatches (" << report.positions_checked << " positions, "
        << report.moves_checked << " winning moves, " << report.elapsed.count() << " ms)\n";
    const std::size_t shown = std::min<std::size_t>(report.mismatches.size(), 20);
    for (std::size_t i = 0; i < shown; ++i) {
      const auto& m = report.mismatches[i];
      out << "  " << m.position.to_string() << ": oracle " << (m.oracle_p ? "P" : "N") << ", solver "
          << (m.solver_p ? "P" : "N");
      if (!m.detail.empty()) out << "; " << m.detail;
      out << '\n';
    }
    if (report.mismatches.size() > shown) out << "  ... " << report.mismatches.size() - shown << " more\n";
  }
  return report.ok() ? kOk : kCheckFailed;
}

int cmd_pcompare(const VerifyArgs& a, std::ostream& out) {
  const auto [spec, kind] = oracle_setup(a.spec, a.oracle);
  const auto table = outcome_table(spec, a.max);
  std::size_t differ = 0;
  out << "x1,x2,oracle,solver\n";
  table.index().for_each_lex([&](std::span<const HeapSize> p, std::uint64_t r) {
    if (table.at_rank(r) == Outcome::Illegal) return;
    const Position pos(std::vector<HeapSize>(p.begin(), p.end()));
    const bool oracle_p = oracle_is_p(spec, kind, pos);
    const bool solver_p = table.at_rank(r) == Outcome::P;
    if (!oracle_p && !solver_p) return;
    differ += oracle_p != solver_p;
    out << pos.to_string() << ',' << (oracle_p ? 'P' : 'N') << ',' << (solver_p ? 'P' : 'N') << '\n';
  });
  out << "# " << differ << " positions differ\n";
  return kOk;
}

int cmd_beatty(const std::string& beta_text, std::int64_t bound, bool summary, std::ostream& out) {
  const auto beta = QuadraticIrrational::parse(beta_text);
  const auto alpha = complement(beta);
  out << "beta = " << beta.to_string() << "\nalpha = " << alpha.to_string() << '\n';
  if (!summary) {
    for (const auto& [name, x] : {std::pair{"beta", beta}, std::pair{"alpha", alpha}}) {
      out << name << "-values:";
      for (const auto v : beatty_prefix(x, bound)) out << ' ' << v;
      out << '\n';
    }
  }
  const auto defects = verify_complementary(alpha, beta, bound);
  out << "complementarity on [1," << bound << "]: " << defects.size() << " defects\n";
  for (const auto& d : defects) out << "  " << d.value << " covered " << d.count << " times\n";
  return defects.empty() ? kOk : kCheckFailed;
}

int cmd_explore(const SolveArgs& a, bool p_only, std::ostream& out) {
  const auto spec = GameSpec::parse(a.spec, a.k);
  out << "# exploration run, no closed form known: " << spec.rules_string() << " k=" << a.k << " max=" << a.max
      << '\n';
  if (spec.is_partizan()) {
    const auto table = partizan_outcomes(*spec.coloring(), a.k, a.max);
    out << "# outcomes under normal play (last mover wins): P second player wins, L Left wins, R Right wins, "
           "N first player wins\n";
    std::array<std::uint64_t, 4> counts{};
    for (std::uint64_t r = 0; r < table.index().size(); ++r) ++counts[static_cast<int>(table.at_rank(r))];
    out << "# counts: P " << counts[0] << ", L " << counts[1] << ", R " << counts[2] << ", N " << counts[3] << '\n';
    out << to_csv(table);
    return kOk;
  }
  const auto table = grundy_table(spec, a.max);
  const auto p = table.p_positions();
  out << "# P-positions: " << p.size() << '\n';
  if (p_only) {
    for (int i = 1; i <= a.k; ++i) out << (i > 1 ? "," : "") << 'x' << i;
    out << '\n';
    for (const auto& pos : p) out << pos.to_string() << '\n';
    return kOk;
  }
  out << to_csv(table);
  return kOk;
}

int cmd_play(const std::string& spec_text, int k, const std::string& start, bool engine_first, std::istream& in,
             std::ostream& out) {
  const auto spec = GameSpec::parse(spec_text, k);
  if (spec.is_partizan()) throw std::invalid_argument("partizan rules cannot be played interactively");
  Position pos = Position::parse(start);
  if (static_cast<int>(pos.k()) != k) throw std::invalid_argument("start must have k heaps");
  if (!is_legal(spec, pos)) throw std::invalid_argument("position violates color rule");
  TableCache cache;
  bool human_turn = !engine_first;
  std::string last_mover;
  while (!legal_moves(spec, pos).empty()) {
    out << "position: " << pos.to_string() << '\n';
    if (!human_turn) {
      const auto m = engine_move(spec, pos, cache);
      out << "engine: " << m.lowered_heap_old << " -> " << m.lowered_heap_new << '\n';
      pos = m.to;
      last_mover = "engine";
      human_turn = true;
      continue;
    }
    out << "move (heap-size new-size, or quit)> " << std::flush;
    std::string line;
    if (!std::getline(in, line) || line == "quit") {
      out << "bye\n";
      return kOk;
    }
    std::istringstream fields(line);
    HeapSize from = 0;
    HeapSize to = 0;
    if (!(fields >> from >> to)) {
      out << "expected two integers\n";
      continue;
    }
    if (!pos.has_heap(from)) {
      out << "no heap of that size\n";
      continue;
    }
    if (to < 0 || to >= from) {
      out << "move must lower the heap\n";
      continue;
    }
    const auto target = pos.lowered(from, to);
    if (!is_legal(spec, target)) {
      out << (std::holds_alternative<BlackWhite>(spec.rules()) ? "target position has no black heap"
                                                               : "target position violates color rule")
          << '\n';
      continue;
    }
    pos = target;
    last_mover = "human";
    human_turn = false;
  }
  out << "position: " << pos.to_string() << '\n';
  const std::string winner = last_mover.empty() ? (human_turn ? "engine" : "human") : last_mover;
  out << winner << " wins\n";
  return kOk;
}

int cmd_serve(const std::string& host, int port, HeapSize bound, const std::string& snapshot, std::ostream& out) {
  ServiceOptions options;
  options.analysis_bound = bound;
  if (!snapshot.empty()) options.snapshot = snapshot;
  Service service(options);
  httplib::Server server;
  service.mount(server);
  out << "listening on " << host << ':' << port << std::endl;
  return server.listen(host, port) ? kOk : kUsage;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, std::istream& in) {
  CLI::App app{"Black & white Nim: solver, closed-form checks and play"};
  app.require_subcommand(1);

  SolveArgs solve_args;
  auto* solve = app.add_subcommand("solve", "Outcome and Grundy table for all positions in [0,max]^k");
  solve->add_option("--spec", solve_args.spec, "Rules, e.g. modular:3 or beatty:(1+1*sqrt(2))/1")->required();
  solve->add_option("--k", solve_args.k, "Number of heaps")->check(CLI::Range(1, 64));
  solve->add_option("--max", solve_args.max, "Largest heap size")->required()->check(CLI::NonNegativeNumber);
  solve->add_option("--format", solve_args.format)->check(CLI::IsMember({"csv", "json"}));
  solve->add_flag("--outcome-only", solve_args.outcome_only, "Skip Grundy values");

  VerifyArgs verify_args;
  auto* verify = app.add_subcommand("verify", "Compare a closed-form oracle with the solver on [0,max]^2");
  verify->add_option("--spec", verify_args.spec)->required();
  verify->add_option("--max", verify_args.max)->required()->check(CLI::NonNegativeNumber);
  verify->add_option("--oracle", verify_args.oracle, "modular, modular-positive-n, modular-pairing or beatty");
  verify->add_option("--format", verify_args.format)->check(CLI::IsMember({"text", "json"}));

  VerifyArgs pcompare_args;
  auto* pcompare = app.add_subcommand("pcompare", "P-positions from oracle and solver side by side");
  pcompare->add_option("--spec", pcompare_args.spec)->required();
  pcompare->add_option("--max", pcompare_args.max)->required()->check(CLI::NonNegativeNumber);
  pcompare->add_option("--oracle", pcompare_args.oracle);

  std::string beta_text;
  std::int64_t bound = 0;
  bool summary = false;
  auto* beatty = app.add_subcommand("beatty", "Beatty sequences of beta and its complement");
  beatty->add_option("--beta", beta_text, "(p+q*sqrt(d))/r")->required();
  beatty->add_option("--bound", bound)->required()->check(CLI::NonNegativeNumber);
  beatty->add_flag("--summary", summary, "Only the complementarity report");

  SolveArgs explore_args;
  bool p_only = false;
  auto* explore = app.add_subcommand("explore", "Tables for variants without a known closed form");
  explore->add_option("--spec", explore_args.spec)->required();
  explore->add_option("--k", explore_args.k)->check(CLI::Range(1, 64));
  explore->add_option("--max", explore_args.max)->required()->check(CLI::NonNegativeNumber);
  explore->add_flag("--p-only", p_only, "List P-positions only");

  std::string play_spec;
  int play_k = 2;
  std::string play_start;
  bool engine_first = false;
  auto* play = app.add_subcommand("play", "Play against the engine on the terminal");
  play->add_option("--spec", play_spec)->required();
  play->add_option("--k", play_k)->check(CLI::Range(1, 64));
  play->add_option("--start", play_start, "Heap sizes, e.g. 3,4")->required();
  play->add_flag("--engine-first", engine_first);

  std::string host = "127.0.0.1";
  int port = 8080;
  HeapSize serve_max = 200;
  std::string snapshot;
  auto* serve = app.add_subcommand("serve", "HTTP play and analysis service");
  serve->add_option("--host", host);
  serve->add_option("--port", port)->check(CLI::Range(0, 65535));
  serve->add_option("--max", serve_max, "Default analysis bound")->check(CLI::NonNegativeNumber);
  serve->add_option("--snapshot", snapshot, "JSON-lines file for session persistence");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (*solve) return cmd_solve(solve_args, out);
    if (*verify) return cmd_verify(verify_args, out);
    if (*pcompare) return cmd_pcompare(pcompare_args, out);
    if (*beatty) return cmd_beatty(beta_text, bound, summary, out);
    if (*explore) return cmd_explore(explore_args, p_only, out);
    if (*play) return cmd_play(play_spec, play_k, play_start, engine_first, in, out);
    if (*serve) return cmd_serve(host, port, serve_max, snapshot, out);
  } catch (const ResourceLimitError& e) {
    err << "error: " << e.what() << '\n';
    return kResourceLimit;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace bwnim::app
