#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <string>
#include <vector>

#include "json.hpp"
#include "tlg/generate.hpp"

namespace tlg {

// One scorer subprocess per engine run, spoken to over a pair of pipes
// with one JSON object per line in each direction.
struct ExternalScorer::Impl {
  pid_t pid = -1;
  int to_child = -1;
  int from_child = -1;
  std::string buffer;

  explicit Impl(const std::string& command) {
    int in_pipe[2], out_pipe[2];
    if (pipe(in_pipe) != 0 || pipe(out_pipe) != 0)
      throw std::runtime_error("failed to create scorer pipes");
    pid = fork();
    if (pid < 0) throw std::runtime_error("failed to fork scorer process");
    if (pid == 0) {
      dup2(in_pipe[0], STDIN_FILENO);
      dup2(out_pipe[1], STDOUT_FILENO);
      close(in_pipe[0]);
      close(in_pipe[1]);
      close(out_pipe[0]);
      close(out_pipe[1]);
      execl("/bin/sh", "sh", "-c", command.c_str(), nullptr);
      _exit(127);
    }
    close(in_pipe[0]);
    close(out_pipe[1]);
    to_child = in_pipe[1];
    from_child = out_pipe[0];
  }

  ~Impl() {
    if (to_child >= 0) close(to_child);
    if (from_child >= 0) close(from_child);
    if (pid > 0) {
      int status = 0;
      waitpid(pid, &status, 0);
    }
  }

  void write_line(const std::string& line) {
    std::string data = line + "\n";
    std::size_t off = 0;
    while (off < data.size()) {
      ssize_t n = write(to_child, data.data() + off, data.size() - off);
      if (n < 0) {
        if (errno == EINTR) continue;
        throw ScorerError("scorer process closed its input", line);
      }
      off += static_cast<std::size_t>(n);
    }
  }

  std::string read_line() {
    while (true) {
      auto nl = buffer.find('\n');
      if (nl != std::string::npos) {
        std::string line = buffer.substr(0, nl);
        buffer.erase(0, nl + 1);
        return line;
      }
      char chunk[4096];
      ssize_t n = read(from_child, chunk, sizeof chunk);
      if (n < 0) {
        if (errno == EINTR) continue;
        throw ScorerError("error reading from scorer process", buffer);
      }
      if (n == 0)
        throw ScorerError("scorer process closed its output", buffer);
      buffer.append(chunk, static_cast<std::size_t>(n));
    }
  }
};

ExternalScorer::ExternalScorer(const std::string& command)
    : impl_(std::make_unique<Impl>(command)) {}

ExternalScorer::~ExternalScorer() = default;

std::vector<double> ExternalScorer::score(
    const GenState& s, const std::vector<ParserAction>& actions) {
  nlohmann::json req;
  req["state"] = nlohmann::json::parse(net_to_json(s.net));
  req["actions"] = nlohmann::json::array();
  for (const auto& a : actions)
    req["actions"].push_back(nlohmann::json::parse(action_to_json(a)));
  impl_->write_line(req.dump());
  std::string line = impl_->read_line();
  nlohmann::json resp;
  try {
    resp = nlohmann::json::parse(line);
  } catch (const std::exception&) {
    throw ScorerError("scorer reply is not valid JSON", line);
  }
  if (!resp.contains("weights") || !resp["weights"].is_array() ||
      resp["weights"].size() != actions.size())
    throw ScorerError("scorer reply lacks an aligned weights array", line);
  std::vector<double> out;
  for (const auto& w : resp["weights"]) {
    double v = w.get<double>();
    if (v < 0.0 || v > 1.0)
      throw ScorerError("scorer weight out of [0,1]", line);
    out.push_back(v);
  }
  return out;
}

}  // namespace tlg
