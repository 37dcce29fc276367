#include <doctest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <string>

#ifndef PACKIT_CLI_PATH
#error "PACKIT_CLI_PATH must name the packit binary"
#endif

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string command = std::string(PACKIT_CLI_PATH) + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = ::popen(command.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf{};
  while (std::fgets(buf.data(), static_cast<int>(buf.size()), pipe) != nullptr) r.out += buf.data();
  const int status = ::pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("verdict and pell") {
  const Run six = run("verdict 6 6");
  CHECK(six.code == 0);
  CHECK(six.out.find("SmallGapImpossible") != std::string::npos);
  const Run json = run("--json verdict 18 18");
  CHECK(json.code == 0);
  CHECK(json.out.find("\"LargeGapImpossible\"") != std::string::npos);
  const Run pell = run("pell 2");
  CHECK(pell.out.find("11 31") != std::string::npos);
  CHECK(pell.out.find("64 181") != std::string::npos);
}

TEST_CASE("pipelines through verify") {
  CHECK(run("tworow 6 | " + std::string(PACKIT_CLI_PATH) + " verify 2 18").code == 0);
  CHECK(run("solve 5 | " + std::string(PACKIT_CLI_PATH) + " verify 5 5").code == 0);
  // The 2 x 8 transcript does not fill a 2 x 9 grid.
  CHECK(run("tworow 4 | " + std::string(PACKIT_CLI_PATH) + " verify 2 9").code == 3);
}

TEST_CASE("usage and engine errors") {
  CHECK(run("verdict").code == 2);
  CHECK(run("frobnicate").code == 2);
  CHECK(run("tworow 5").code == 1);
  CHECK(run("reduce --set 4,4,4").code == 1);
  CHECK(run("--help").code == 0);
}

}  // TEST_SUITE
