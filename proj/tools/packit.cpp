// packit command-line frontend.

#include <CLI11.hpp>

#include <csignal>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "packit/arithmetic.hpp"
#include "packit/config.hpp"
#include "packit/encoding.hpp"
#include "packit/error.hpp"
#include "packit/json_io.hpp"
#include "packit/reduction.hpp"
#include "packit/search.hpp"
#include "packit/selection.hpp"
#include "packit/service.hpp"
#include "packit/text_format.hpp"

using namespace packit;
using nlohmann::json;

namespace {

constexpr int kNotPerfect = 3;

bool g_json = false;

std::chrono::milliseconds seconds_to_ms(double s) {
  return std::chrono::milliseconds(static_cast<std::int64_t>(s * 1000.0));
}

std::string read_all(const std::string& path) {
  if (path.empty() || path == "-") {
    std::ostringstream os;
    os << std::cin.rdbuf();
    return os.str();
  }
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidInput, "cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  out << text;
  if (!out) throw Error(ErrorCode::InvalidInput, "cannot write " + path);
}

std::vector<std::int64_t> parse_set(const std::string& text) {
  std::vector<std::int64_t> out;
  std::istringstream in(text);
  for (std::string item; std::getline(in, item, ',');) {
    std::size_t used = 0;
    std::int64_t value = 0;
    try {
      value = std::stoll(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) throw Error(ErrorCode::Parse, "bad set element `" + item + "`");
    out.push_back(value);
  }
  return out;
}

std::pair<int, int> parse_range(const std::string& text) {
  const auto dots = text.find("..");
  try {
    if (dots == std::string::npos) {
      const int n = std::stoi(text);
      return {n, n};
    }
    return {std::stoi(text.substr(0, dots)), std::stoi(text.substr(dots + 2))};
  } catch (const std::exception&) {
    throw Error(ErrorCode::Parse, "range must look like `5..50`, got `" + text + "`");
  }
}

std::string selection_header(const RectangleSelection& sel) {
  std::ostringstream os;
  os << "c packit grid " << sel.dims.rows << ' ' << sel.dims.cols << '\n';
  for (std::size_t k = 0; k < sel.rects.size(); ++k) {
    os << "c packit rect " << sel.first_turn + static_cast<int>(k) << ' ' << sel.rects[k].h << ' '
       << sel.rects[k].v << '\n';
  }
  return os.str();
}

/// Selection stored in `c packit` comments of a CNF written by `encode`.
std::optional<RectangleSelection> selection_from_cnf(const std::string& text, GridDims dims) {
  std::istringstream in(text);
  std::ostringstream rects;
  bool any = false;
  for (std::string line; std::getline(in, line);) {
    if (line.rfind("c packit grid ", 0) == 0) {
      std::istringstream words(line.substr(14));
      GridDims stored;
      words >> stored.rows >> stored.cols;
      if (!(stored == dims)) {
        throw Error(ErrorCode::InvalidInput, "CNF was encoded for a " + std::to_string(stored.rows) + "x" +
                                                 std::to_string(stored.cols) + " grid");
      }
    } else if (line.rfind("c packit rect ", 0) == 0) {
      rects << line.substr(14) << '\n';
      any = true;
    }
  }
  if (!any) return std::nullopt;
  std::istringstream sel_in(rects.str());
  return parse_selection(sel_in, dims);
}

void print_transcript_result(const PackingResult& r, GridDims dims, const std::string& out_path) {
  if (g_json) {
    json doc = to_json(r);
    doc["rows"] = dims.rows;
    doc["cols"] = dims.cols;
    std::cout << doc.dump(2) << '\n';
    if (!out_path.empty() && r.status == PackingStatus::Perfect) write_file(out_path, format_transcript(r.transcript));
    return;
  }
  std::ostringstream head;
  head << "# " << packing_status_name(r.status) << ' ' << dims.rows << 'x' << dims.cols << " in " << std::fixed
       << std::setprecision(2) << r.seconds << "s";
  if (!r.reason.empty()) head << ": " << r.reason;
  head << '\n';
  if (r.status != PackingStatus::Perfect) {
    std::cout << head.str();
    return;
  }
  if (out_path.empty()) {
    std::cout << head.str() << format_transcript(r.transcript);
  } else {
    write_file(out_path, head.str() + format_transcript(r.transcript));
    std::cout << head.str();
  }
}

int report_verify(const VerifyReport& rep) {
  if (g_json) {
    std::cout << json{{"valid", rep.valid},
                      {"perfect", rep.perfect},
                      {"failed_turn", rep.failed_turn ? json(*rep.failed_turn) : json(nullptr)},
                      {"failure", rep.failure}}
                     .dump(2)
              << '\n';
  } else if (rep.perfect) {
    std::cout << "perfect\n";
  } else if (rep.valid) {
    std::cout << "valid, not perfect\n";
  } else {
    std::cout << "invalid at turn " << *rep.failed_turn << ": " << rep.failure << '\n';
  }
  return rep.perfect ? 0 : kNotPerfect;
}

// ---------------------------------------------------------------------------

void play_loop(GameState state, bool two_player, double hint_budget) {
  std::cout << render_board(state);
  auto prompt = [&] {
    std::cout << "turn " << state.turn();
    if (two_player) std::cout << " (player " << static_cast<int>(two_player_status(state).mover) << ")";
    std::cout << "> " << std::flush;
  };
  std::vector<GameState> history;
  prompt();
  for (std::string line; std::getline(std::cin, line);) {
    std::istringstream words(line);
    std::vector<std::string> tok;
    for (std::string w; words >> w;) tok.push_back(w);
    if (tok.empty()) {
      prompt();
      continue;
    }
    const std::string& cmd = tok[0];
    try {
      if (cmd == "quit" || cmd == "q") {
        return;
      } else if (cmd == "board") {
        std::cout << render_board(state);
      } else if (cmd == "legal") {
        const auto legal = legal_placements(state);
        std::cout << legal.size() << " legal placements\n" << format_transcript(legal);
      } else if (cmd == "undo") {
        if (history.empty()) {
          std::cout << "nothing to undo\n";
        } else {
          state = history.back();
          history.pop_back();
          std::cout << render_board(state);
        }
      } else if (cmd == "hint") {
        CompletionOptions options;
        options.time_budget = seconds_to_ms(hint_budget);
        const Feasibility f = completion_query(state, options);
        std::cout << "hint: " << feasibility_name(f.answer);
        if (!f.witness.empty()) {
          const Placement& p = f.witness.front();
          std::cout << ", try " << p.h << ' ' << p.v << ' ' << p.x << ' ' << p.y;
        }
        std::cout << '\n';
      } else if (cmd == "help") {
        std::cout << "moves: `h v x y` or `t h v x y`; commands: board legal undo hint quit\n";
      } else {
        std::vector<int> nums;
        for (const std::string& w : tok) nums.push_back(std::stoi(w));
        Placement p;
        if (nums.size() == 4) {
          p = Placement{state.turn(), nums[0], nums[1], nums[2], nums[3]};
        } else if (nums.size() == 5) {
          p = Placement{nums[0], nums[1], nums[2], nums[3], nums[4]};
        } else {
          throw Error(ErrorCode::Parse, "expected `h v x y`; type help");
        }
        GameState next = apply_placement(state, p);
        history.push_back(state);
        state = std::move(next);
        std::cout << render_board(state);
        if (state.full()) {
          std::cout << "perfect game\n";
          return;
        }
        if (legal_placements(state).empty()) {
          if (two_player) {
            std::cout << "no legal move: player " << static_cast<int>(two_player_status(state).mover)
                      << " loses\n";
          } else {
            std::cout << "no legal move left, game over\n";
          }
          return;
        }
      }
    } catch (const Error& e) {
      std::cout << code_name(e.code()) << ": " << e.what() << '\n';
    } catch (const std::invalid_argument&) {
      std::cout << "unrecognized input; type help\n";
    } catch (const std::out_of_range&) {
      std::cout << "number out of range\n";
    }
    prompt();
  }
}

HttpServer* g_server = nullptr;

extern "C" void on_signal(int) {
  if (g_server != nullptr) g_server->stop();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"PackIt! engine: verdicts, packings, encodings and a JSON service"};
  app.require_subcommand(1);
  app.add_flag("--json", g_json, "Print JSON instead of text");

  // Shared option storage.
  std::int64_t m = 0, n = 0;
  int rows = 0;
  double budget = 600.0;
  int retries = 8;
  std::string out_path, cnf_path, model_path, grid_path, transcript_path, set_text, range_text, moves_path;
  std::string selection_path, config_path, host, data_dir;
  int port = -1;
  int count = 0;
  bool two_player = false, encode_only = false, full_witness = false;
  std::string report = "csv";

  auto* verdict_cmd = app.add_subcommand("verdict", "Arithmetic impossibility verdict for an m x n grid");
  verdict_cmd->add_option("m", m)->required()->check(CLI::Range(std::int64_t{1}, std::int64_t{1'000'000}));
  verdict_cmd->add_option("n", n)->required()->check(CLI::Range(std::int64_t{1}, std::int64_t{1'000'000}));

  auto* profile_cmd = app.add_subcommand("profile", "K, gap and prime census of an m x n grid");
  profile_cmd->add_option("m", m)->required()->check(CLI::Range(std::int64_t{1}, std::int64_t{1'000'000}));
  profile_cmd->add_option("n", n)->required()->check(CLI::Range(std::int64_t{1}, std::int64_t{1'000'000}));

  auto* solve_cmd = app.add_subcommand("solve", "Find a perfect game of the n x n (or rows x n) grid");
  solve_cmd->add_option("n", n)->required()->check(CLI::Range(1, 1000));
  solve_cmd->add_option("--rows", rows, "Row count, defaults to n")->check(CLI::Range(1, 1000));
  solve_cmd->add_option("--budget", budget, "Time budget in seconds")->check(CLI::PositiveNumber);
  solve_cmd->add_option("--retries", retries, "Extra selections/factorizations to try; -1 for no limit");
  solve_cmd->add_option("--out", out_path, "Write the transcript here");

  auto* encode_cmd = app.add_subcommand("encode", "Write the CNF of the first selection");
  encode_cmd->add_option("n", n)->required()->check(CLI::Range(1, 1000));
  encode_cmd->add_option("--rows", rows)->check(CLI::Range(1, 1000));
  encode_cmd->add_option("--out", out_path, "CNF file")->required();
  encode_cmd->add_option("--selection", selection_path, "Use this `t h v` selection instead of the DP one");

  auto* decode_cmd = app.add_subcommand("decode", "Turn a solver model into a transcript");
  decode_cmd->add_option("n", n)->required()->check(CLI::Range(1, 1000));
  decode_cmd->add_option("--rows", rows)->check(CLI::Range(1, 1000));
  decode_cmd->add_option("--cnf", cnf_path, "CNF written by encode")->required();
  decode_cmd->add_option("--model", model_path, "Solver output or literal list")->required();
  decode_cmd->add_option("--out", out_path, "Write the transcript here");

  auto* verify_cmd = app.add_subcommand("verify", "Replay a transcript; exit 3 unless perfect");
  std::vector<int> verify_dims;
  verify_cmd->add_option("dims", verify_dims, "m n (omit with --grid)")->expected(0, 2);
  verify_cmd->add_option("--transcript", transcript_path, "Transcript file, stdin by default");
  verify_cmd->add_option("--grid", grid_path, "Start from this partial grid");

  auto* play_cmd = app.add_subcommand("play", "Interactive game in the terminal");
  play_cmd->add_option("n", n)->required()->check(CLI::Range(1, 100));
  play_cmd->add_option("--rows", rows)->check(CLI::Range(1, 100));
  play_cmd->add_flag("--two-player", two_player, "Hot-seat two-player mode");
  play_cmd->add_option("--hint-budget", budget, "Seconds per hint")->check(CLI::PositiveNumber);

  auto* tworow_cmd = app.add_subcommand("tworow", "Perfect game of the 2 x n^2/2 grid by construction");
  tworow_cmd->add_option("n", n)->required();

  auto* reduce_cmd = app.add_subcommand("reduce", "Build the grid of a 4-restricted 3-partition instance");
  reduce_cmd->add_option("--set", set_text, "Comma-separated multiples of 4")->required();
  reduce_cmd->add_option("--out", out_path, "Partial grid file, stdout by default");
  reduce_cmd->add_option("--moves", moves_path, "Also write the forward packing here");

  auto* pell_cmd = app.add_subcommand("pell", "Gap-one square grids from the Pell family");
  pell_cmd->add_option("count", count)->required()->check(CLI::Range(1, 12));

  auto* bench_cmd = app.add_subcommand("bench", "Encoding size and solve time over a range of n");
  bench_cmd->add_option("range", range_text, "n or lo..hi")->required();
  bench_cmd->add_option("--report", report, "Report format")->check(CLI::IsMember({"csv"}));
  bench_cmd->add_option("--budget", budget, "Seconds per grid")->check(CLI::PositiveNumber);
  bench_cmd->add_flag("--encode-only", encode_only, "Skip the solver");
  bench_cmd->add_option("--out", out_path, "CSV file, stdout by default");

  auto* complete_cmd = app.add_subcommand("complete", "Can a partial grid still be filled perfectly?");
  complete_cmd->add_option("--grid", grid_path, "Partial grid file, stdin by default");
  complete_cmd->add_option("--budget", budget, "Seconds")->check(CLI::PositiveNumber);
  complete_cmd->add_flag("--full", full_witness, "Print the whole witness");

  auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP JSON service");
  serve_cmd->add_option("--config", config_path, "key = value config file");
  serve_cmd->add_option("--host", host);
  serve_cmd->add_option("--port", port)->check(CLI::Range(0, 65535));
  serve_cmd->add_option("--data-dir", data_dir, "Session log directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    const GridDims square{rows > 0 ? rows : static_cast<int>(n), static_cast<int>(n)};

    if (*verdict_cmd) {
      const Verdict v = verdict(m, n);
      if (g_json) {
        std::cout << to_json(v).dump(2) << '\n';
      } else {
        std::cout << verdict_name(v.kind) << ": " << v.witness << '\n';
      }
      return 0;
    }

    if (*profile_cmd) {
      const ArithmeticProfile p = profile(m, n);
      if (g_json) {
        std::cout << to_json(p).dump(2) << '\n';
        return 0;
      }
      std::cout << "grid        " << p.dims.rows << 'x' << p.dims.cols << '\n'
                << "rectangles  " << p.rectangles << '\n'
                << "gap         " << p.gap << '\n'
                << "primes      ";
      if (p.primes.empty()) std::cout << "none";
      for (std::size_t i = 0; i < p.primes.size(); ++i) std::cout << (i ? " " : "") << p.primes[i];
      std::cout << " (in (" << p.dims.cols << ", " << p.rectangles << "])\n"
                << "K+1 prime   " << (p.next_is_prime ? "yes" : "no")
                << (p.next_prime_blocked ? ", longer than the grid" : "") << '\n';
      return 0;
    }

    if (*solve_cmd) {
      SearchOptions options;
      options.time_budget = seconds_to_ms(budget);
      options.selection_retries = retries;
      print_transcript_result(solve_perfect(square, options), square, out_path);
      return 0;
    }

    if (*encode_cmd) {
      RectangleSelection sel;
      if (!selection_path.empty()) {
        std::istringstream in(read_all(selection_path));
        sel = parse_selection(in, square);
      } else {
        const auto found = extract_selection(dp_table(square.rows, square.cols));
        if (!found) throw Error(ErrorCode::InvalidInput, "no rectangle selection exists for this grid");
        sel = *found;
      }
      const Encoding enc = encode(square, sel);
      write_file(out_path, selection_header(sel) + emit_dimacs(enc.formula));
      const ClauseStats stats = clause_stats(enc.formula, enc.map);
      if (g_json) {
        std::cout << to_json(stats).dump(2) << '\n';
      } else {
        std::cout << "vars " << stats.vars << " clauses " << stats.clauses << '\n';
      }
      return 0;
    }

    if (*decode_cmd) {
      const std::string cnf_text = read_all(cnf_path);
      std::optional<RectangleSelection> sel = selection_from_cnf(cnf_text, square);
      if (!sel) sel = extract_selection(dp_table(square.rows, square.cols));
      if (!sel) throw Error(ErrorCode::InvalidInput, "no rectangle selection exists for this grid");
      const VariableMap map(square, *sel);
      std::istringstream cnf_in(cnf_text);
      const auto [vars, clauses] = read_dimacs_header(cnf_in);
      if (vars != map.total_vars()) {
        throw Error(ErrorCode::Decode, "CNF declares " + std::to_string(vars) + " variables, the selection needs " +
                                           std::to_string(map.total_vars()));
      }
      (void)clauses;
      const Model model = parse_model(read_all(model_path));
      const std::vector<Placement> moves = to_placements(map, decode_model(map, model));
      const VerifyReport rep = verify_transcript(square, moves);
      if (g_json) {
        std::cout << json{{"transcript", to_json(moves)}, {"perfect", rep.perfect}}.dump(2) << '\n';
      } else {
        write_file(out_path, format_transcript(moves));
      }
      return rep.perfect ? 0 : kNotPerfect;
    }

    if (*verify_cmd) {
      if (!grid_path.empty() && !verify_dims.empty()) {
        throw Error(ErrorCode::InvalidInput, "give either dims or --grid, not both");
      }
      if (grid_path.empty() && verify_dims.size() != 2) {
        throw Error(ErrorCode::InvalidInput, "verify needs `m n` or --grid");
      }
      const std::vector<Placement> moves = parse_transcript(read_all(transcript_path));
      if (!grid_path.empty()) {
        std::ifstream in(grid_path);
        if (!in) throw Error(ErrorCode::InvalidInput, "cannot open " + grid_path);
        return report_verify(verify_transcript(parse_partial_grid(in), moves));
      }
      return report_verify(verify_transcript(GridDims{verify_dims[0], verify_dims[1]}, moves));
    }

    if (*play_cmd) {
      play_loop(GameState(square), two_player, budget > 60 ? 10.0 : budget);
      return 0;
    }

    if (*tworow_cmd) {
      const std::vector<Placement> moves = construct_two_row(static_cast<int>(n));
      if (g_json) {
        std::cout << json{{"rows", 2}, {"cols", n * n / 2}, {"transcript", to_json(moves)}}.dump(2) << '\n';
      } else {
        std::cout << format_transcript(moves);
      }
      return 0;
    }

    if (*reduce_cmd) {
      const PartitionInstance inst = validate_partition_instance(parse_set(set_text));
      const ReducedInstance reduced = build_grid(inst);
      const GameState state = reduced.state();
      write_file(out_path, format_partial_grid(state));
      const auto partition = brute_force_three_partition(inst);
      if (!moves_path.empty()) {
        if (!partition) throw Error(ErrorCode::Partition, "instance has no 3-partition; no packing to write");
        write_file(moves_path, format_transcript(forward_pack(reduced, *partition)));
      }
      if (!out_path.empty() && out_path != "-") {
        if (g_json) {
          json gadgets = json::array();
          for (const Gadget& g : reduced.gadgets) {
            gadgets.push_back(json{{"kind", gadget_name(g.kind)}, {"alpha", g.alpha}, {"column", g.column}});
          }
          std::cout << json{{"side", reduced.dims.rows},
                            {"target", inst.target},
                            {"empty_cells", reduced.empty_cells()},
                            {"gadget_columns", reduced.gadget_columns},
                            {"gadgets", gadgets},
                            {"partition", partition ? json(*partition) : json(nullptr)}}
                           .dump(2)
                    << '\n';
        } else {
          std::cout << "grid " << reduced.dims.rows << 'x' << reduced.dims.cols << ", T " << inst.target
                    << ", " << reduced.empty_cells() << " empty cells, " << reduced.gadgets.size()
                    << " gadgets\n";
        }
      }
      return 0;
    }

    if (*pell_cmd) {
      const auto family = pell_gap_one_family(count);
      if (g_json) {
        json out = json::array();
        for (const auto& s : family) out.push_back(json{{"n", s.n}, {"t", s.t}, {"generation", s.generation}});
        std::cout << out.dump(2) << '\n';
      } else {
        for (const auto& s : family) std::cout << s.n << ' ' << s.t << '\n';
      }
      return 0;
    }

    if (*bench_cmd) {
      const auto [lo, hi] = parse_range(range_text);
      if (lo < 1 || hi < lo || hi > 1000) throw Error(ErrorCode::Range, "bench range must satisfy 1 <= lo <= hi <= 1000");
      std::ostringstream csv;
      csv << "n,vars,clauses,solve_seconds,status\n";
      std::ostream& sink = out_path.empty() ? std::cout : csv;
      if (out_path.empty()) std::cout << "n,vars,clauses,solve_seconds,status\n";
      for (int k = lo; k <= hi; ++k) {
        const auto sel = extract_selection(dp_table(k, k));
        if (!sel) {
          sink << k << ",,,," << packing_status_name(PackingStatus::ArithmeticallyImpossible) << '\n';
          continue;
        }
        const Encoding enc = encode(GridDims{k, k}, *sel);
        sink << k << ',' << enc.formula.num_vars() << ',' << enc.formula.num_clauses() << ',';
        if (encode_only) {
          sink << ",encoded\n";
        } else {
          SearchOptions options;
          options.time_budget = seconds_to_ms(budget);
          const PackingResult r = solve_perfect(GridDims{k, k}, options);
          sink << std::fixed << std::setprecision(2) << r.seconds << std::defaultfloat << ','
               << packing_status_name(r.status) << '\n';
        }
        sink.flush();
      }
      if (!out_path.empty()) write_file(out_path, csv.str());
      return 0;
    }

    if (*complete_cmd) {
      const GameState state = parse_partial_grid(read_all(grid_path));
      CompletionOptions options;
      options.time_budget = seconds_to_ms(budget);
      const Feasibility f = completion_query(state, options);
      if (g_json) {
        json doc = to_json(f);
        if (!full_witness && !f.witness.empty()) doc["witness"] = json::array({to_json(f.witness.front())});
        std::cout << doc.dump(2) << '\n';
      } else {
        std::cout << feasibility_name(f.answer) << '\n';
        if (!f.witness.empty()) {
          std::cout << format_transcript(full_witness ? f.witness : std::vector<Placement>{f.witness.front()});
        }
      }
      return 0;
    }

    if (*serve_cmd) {
      ServiceConfig config;
      if (!config_path.empty()) config = load_config(config_path, config);
      config = apply_environment(config);
      if (!host.empty()) config.host = host;
      if (port >= 0) config.port = port;
      if (!data_dir.empty()) config.data_dir = data_dir;
      Service service(config);
      for (const std::string& problem : service.load_errors()) std::cerr << "skipped session log " << problem << '\n';
      HttpServer server(service);
      const int bound = server.bind(config.host, config.port);
      if (bound < 0) throw Error(ErrorCode::InvalidInput, "cannot bind " + config.host + ":" + std::to_string(config.port));
      g_server = &server;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      std::cerr << "listening on http://" << config.host << ':' << bound << " (" << service.session_count()
                << " sessions)\n";
      server.serve();
      g_server = nullptr;
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << api_error(e).dump() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << api_error("internal", e.what()).dump() << '\n';
    return 1;
  }
  return 2;
}
