#include "packit/sat_solver.hpp"

#include <fcntl.h>
#include <signal.h>
#include <spawn.h>
#include <sys/stat.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cerrno>
#include <cstdlib>
#include <cstring>
#include <deque>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <thread>

#include "packit/error.hpp"

extern char** environ;

namespace packit {

namespace fs = std::filesystem;

SolverConfig solver_from_environment(SolverConfig base) {
  if (const char* path = std::getenv("PACKIT_SOLVER"); path != nullptr && *path != '\0') {
    base.path = path;
  }
  if (const char* args = std::getenv("PACKIT_SOLVER_ARGS"); args != nullptr) {
    base.extra_args.clear();
    std::istringstream in(args);
    for (std::string arg; in >> arg;) base.extra_args.push_back(arg);
  }
  return base;
}

std::optional<std::string> resolve_executable(const std::string& name) {
  if (name.empty()) return std::nullopt;
  auto executable = [](const fs::path& p) {
    std::error_code ec;
    return fs::is_regular_file(p, ec) && ::access(p.c_str(), X_OK) == 0;
  };
  if (name.find('/') != std::string::npos) {
    if (executable(name)) return name;
    return std::nullopt;
  }
  const char* path_env = std::getenv("PATH");
  std::istringstream dirs(path_env != nullptr ? path_env : "/usr/local/bin:/usr/bin:/bin");
  for (std::string dir; std::getline(dirs, dir, ':');) {
    if (dir.empty()) continue;
    fs::path candidate = fs::path(dir) / name;
    if (executable(candidate)) return candidate.string();
  }
  return std::nullopt;
}

namespace {

/// Temporary file pair removed on scope exit.
class ScratchFiles {
 public:
  ScratchFiles() {
    static std::atomic<unsigned> counter{0};
    std::random_device rd;
    std::ostringstream stem;
    stem << "packit-" << ::getpid() << '-' << counter.fetch_add(1) << '-' << std::hex << rd();
    const fs::path dir = fs::temp_directory_path();
    cnf_ = dir / (stem.str() + ".cnf");
    out_ = dir / (stem.str() + ".out");
  }
  ~ScratchFiles() {
    std::error_code ec;
    fs::remove(cnf_, ec);
    fs::remove(out_, ec);
  }
  ScratchFiles(const ScratchFiles&) = delete;
  ScratchFiles& operator=(const ScratchFiles&) = delete;

  const fs::path& cnf() const { return cnf_; }
  const fs::path& out() const { return out_; }

 private:
  fs::path cnf_;
  fs::path out_;
};

}  // namespace

SatSolver::SatSolver(SolverConfig config) : config_(std::move(config)) {}

bool SatSolver::available() const { return resolve_executable(config_.path).has_value(); }

SatOutcome SatSolver::solve(const CnfFormula& formula, std::chrono::milliseconds budget) const {
  using Clock = std::chrono::steady_clock;
  const auto exe = resolve_executable(config_.path);
  if (!exe) throw Error(ErrorCode::Solver, "SAT solver `" + config_.path + "` not found");

  ScratchFiles files;
  {
    std::ofstream cnf(files.cnf());
    write_dimacs(cnf, formula);
    if (!cnf) throw Error(ErrorCode::Solver, "cannot write " + files.cnf().string());
  }

  std::vector<std::string> args{*exe};
  args.insert(args.end(), config_.extra_args.begin(), config_.extra_args.end());
  args.push_back(files.cnf().string());
  std::vector<char*> argv;
  for (std::string& a : args) argv.push_back(a.data());
  argv.push_back(nullptr);

  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_addopen(&actions, STDOUT_FILENO, files.out().c_str(),
                                   O_WRONLY | O_CREAT | O_TRUNC, 0600);
  posix_spawn_file_actions_addopen(&actions, STDERR_FILENO, "/dev/null", O_WRONLY, 0);
  posix_spawn_file_actions_addopen(&actions, STDIN_FILENO, "/dev/null", O_RDONLY, 0);

  const auto start = Clock::now();
  pid_t pid = 0;
  const int rc = posix_spawn(&pid, exe->c_str(), &actions, nullptr, argv.data(), environ);
  posix_spawn_file_actions_destroy(&actions);
  if (rc != 0) throw Error(ErrorCode::Solver, "cannot start `" + *exe + "`: " + std::strerror(rc));

  SatOutcome outcome;
  int status = 0;
  bool exited = false;
  auto pause = std::chrono::milliseconds(1);
  while (true) {
    const pid_t done = ::waitpid(pid, &status, WNOHANG);
    if (done == pid) {
      exited = true;
      break;
    }
    if (done < 0 && errno != EINTR) break;
    if (Clock::now() - start >= budget) break;
    std::this_thread::sleep_for(pause);
    pause = std::min(pause * 2, std::chrono::milliseconds(25));
  }
  if (!exited) {
    ::kill(pid, SIGKILL);
    ::waitpid(pid, &status, 0);
    outcome.status = SatStatus::Timeout;
    outcome.seconds = std::chrono::duration<double>(Clock::now() - start).count();
    return outcome;
  }
  outcome.seconds = std::chrono::duration<double>(Clock::now() - start).count();

  std::ifstream out(files.out());
  std::ostringstream model_text;
  std::optional<SatStatus> reported;
  std::deque<std::string> stats;
  for (std::string line; std::getline(out, line);) {
    if (line.rfind("s ", 0) == 0) {
      if (line.find("UNSATISFIABLE") != std::string::npos) {
        reported = SatStatus::Unsat;
      } else if (line.find("SATISFIABLE") != std::string::npos) {
        reported = SatStatus::Sat;
      } else if (line.find("UNKNOWN") != std::string::npos) {
        reported = SatStatus::Timeout;
      }
    } else if (line.rfind("v ", 0) == 0) {
      model_text << line << '\n';
    } else if (line.rfind("c ", 0) == 0) {
      stats.push_back(line);
      if (stats.size() > 40) stats.pop_front();
    }
  }
  const int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  if (!reported) {
    if (code == 10) reported = SatStatus::Sat;
    if (code == 20) reported = SatStatus::Unsat;
  }
  if (!reported) {
    throw Error(ErrorCode::Solver, "solver `" + *exe + "` exited with code " + std::to_string(code) +
                                       " without a result line");
  }
  outcome.status = *reported;
  outcome.stats.assign(stats.begin(), stats.end());
  if (outcome.status == SatStatus::Sat) outcome.model = parse_model(model_text.str());
  return outcome;
}

}  // namespace packit
