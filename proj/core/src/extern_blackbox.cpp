#include "falsify/extern_blackbox.hpp"

#include "falsify/error.hpp"

#include <cctype>
#include <cerrno>
#include <charconv>
#include <cstring>
#include <sstream>

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <spawn.h>
#include <sys/socket.h>
#include <sys/wait.h>
#include <unistd.h>

extern char** environ;

namespace falsify {

namespace {

void append_row(std::string& out, const std::vector<double>& row) {
  char buf[64];
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i) out += ' ';
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, row[i]);
    out.append(buf, ptr);
  }
  out += '\n';
}

std::vector<double> parse_row(std::string_view line, std::size_t line_no) {
  std::vector<double> row;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    if (i == line.size()) break;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    const char* first = line.data() + i;
    if (*first == '+') ++first;
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(first, line.data() + j, v);
    if (ec != std::errc{} || ptr != line.data() + j) {
      throw SimulationError("malformed extern output: line " + std::to_string(line_no) + " token '" +
                            std::string(line.substr(i, j - i)) + "' is not a number");
    }
    row.push_back(v);
    i = j;
  }
  return row;
}

class Fd {
 public:
  Fd() = default;
  explicit Fd(int fd) : fd_(fd) {}
  Fd(const Fd&) = delete;
  Fd& operator=(const Fd&) = delete;
  ~Fd() { reset(); }
  int get() const { return fd_; }
  void reset() {
    if (fd_ >= 0) ::close(fd_);
    fd_ = -1;
  }

 private:
  int fd_ = -1;
};

std::string errno_text(const char* what) { return std::string(what) + ": " + std::strerror(errno); }

}  // namespace

std::string encode_simulation_input(const SimulationInput& input) {
  std::string out;
  append_row(out, input.static_params);
  append_row(out, input.times);
  for (const auto& row : input.signal_values) append_row(out, row);
  return out;
}

SimulationOutput decode_simulation_output(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    const std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) {
      lines.push_back(text.substr(start));
      break;
    }
    lines.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  if (lines.empty()) throw SimulationError("malformed extern output: no timestamp line");
  SimulationOutput out;
  out.timestamps = parse_row(lines.front(), 1);
  if (out.timestamps.empty()) throw SimulationError("malformed extern output: empty timestamp line");
  std::size_t last = lines.size();
  // Blank trailing lines only count as states when a zero-dimensional state is expected.
  while (last > 1 + out.timestamps.size() && lines[last - 1].find_first_not_of(" \t\r") == std::string_view::npos) {
    --last;
  }
  for (std::size_t i = 1; i < last; ++i) out.trajectories.push_back(parse_row(lines[i], i + 1));
  return out;
}

ProcessResult run_process(const std::vector<std::string>& argv, std::string_view input,
                          std::chrono::duration<double> timeout) {
  if (argv.empty()) throw SimulationError("extern command is empty");

  // stdin is a socket so writes to a child that never reads fail with EPIPE
  // (MSG_NOSIGNAL) instead of raising SIGPIPE in this process.
  int in_pair[2], out_pipe[2], err_pipe[2];
  if (::socketpair(AF_UNIX, SOCK_STREAM | SOCK_CLOEXEC, 0, in_pair) != 0) throw SimulationError(errno_text("socketpair"));
  Fd in_parent(in_pair[0]), in_child(in_pair[1]);
  if (::pipe2(out_pipe, O_CLOEXEC) != 0) throw SimulationError(errno_text("pipe"));
  Fd out_parent(out_pipe[0]), out_child(out_pipe[1]);
  if (::pipe2(err_pipe, O_CLOEXEC) != 0) throw SimulationError(errno_text("pipe"));
  Fd err_parent(err_pipe[0]), err_child(err_pipe[1]);

  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_adddup2(&actions, in_child.get(), STDIN_FILENO);
  posix_spawn_file_actions_adddup2(&actions, out_child.get(), STDOUT_FILENO);
  posix_spawn_file_actions_adddup2(&actions, err_child.get(), STDERR_FILENO);

  std::vector<char*> args;
  for (const auto& a : argv) args.push_back(const_cast<char*>(a.c_str()));
  args.push_back(nullptr);

  pid_t pid = -1;
  const int rc = ::posix_spawnp(&pid, args[0], &actions, nullptr, args.data(), environ);
  posix_spawn_file_actions_destroy(&actions);
  if (rc != 0) {
    throw SimulationError("cannot start '" + argv[0] + "': " + std::strerror(rc));
  }
  in_child.reset();
  out_child.reset();
  err_child.reset();

  ::fcntl(in_parent.get(), F_SETFL, O_NONBLOCK);
  ::fcntl(out_parent.get(), F_SETFL, O_NONBLOCK);
  ::fcntl(err_parent.get(), F_SETFL, O_NONBLOCK);
  if (input.empty()) in_parent.reset();

  ProcessResult result;
  std::size_t written = 0;
  bool out_open = true, err_open = true;
  const auto deadline = std::chrono::steady_clock::now() + timeout;
  char buf[65536];

  while (out_open || err_open) {
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - std::chrono::steady_clock::now());
    if (left.count() <= 0) {
      ::kill(pid, SIGKILL);
      ::waitpid(pid, nullptr, 0);
      std::ostringstream msg;
      msg << "extern command '" << argv[0] << "' timed out after " << timeout.count() << " s";
      throw SimulationError(msg.str());
    }
    pollfd fds[3];
    nfds_t n = 0;
    int in_idx = -1, out_idx = -1, err_idx = -1;
    if (in_parent.get() >= 0) {
      in_idx = static_cast<int>(n);
      fds[n++] = {in_parent.get(), POLLOUT, 0};
    }
    if (out_open) {
      out_idx = static_cast<int>(n);
      fds[n++] = {out_parent.get(), POLLIN, 0};
    }
    if (err_open) {
      err_idx = static_cast<int>(n);
      fds[n++] = {err_parent.get(), POLLIN, 0};
    }
    const int ready = ::poll(fds, n, static_cast<int>(std::min<long long>(left.count(), 1000)));
    if (ready < 0) {
      if (errno == EINTR) continue;
      ::kill(pid, SIGKILL);
      ::waitpid(pid, nullptr, 0);
      throw SimulationError(errno_text("poll"));
    }
    if (in_idx >= 0 && fds[in_idx].revents) {
      const ssize_t k = ::send(in_parent.get(), input.data() + written, input.size() - written, MSG_NOSIGNAL);
      if (k > 0) written += static_cast<std::size_t>(k);
      if ((k < 0 && errno != EAGAIN && errno != EINTR) || written == input.size()) in_parent.reset();
    }
    auto drain = [&](int idx, const Fd& fd, std::string& sink, bool& open) {
      if (idx < 0 || !fds[idx].revents) return;
      const ssize_t k = ::read(fd.get(), buf, sizeof buf);
      if (k > 0) {
        sink.append(buf, static_cast<std::size_t>(k));
      } else if (k == 0 || (errno != EAGAIN && errno != EINTR)) {
        open = false;
      }
    };
    drain(out_idx, out_parent, result.out, out_open);
    drain(err_idx, err_parent, result.err, err_open);
  }
  in_parent.reset();

  int status = 0;
  while (::waitpid(pid, &status, 0) < 0 && errno == EINTR) {
  }
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : 128 + WTERMSIG(status);
  return result;
}

BlackboxFunction extern_blackbox(ExternCommand command) {
  if (command.argv.empty()) throw ValidationError("extern command is empty");
  if (!(command.timeout.count() > 0.0)) throw ValidationError("extern timeout must be positive");
  return [command = std::move(command)](const SimulationInput& input) {
    const auto proc = run_process(command.argv, encode_simulation_input(input), command.timeout);
    if (proc.exit_code != 0) {
      std::string err = proc.err;
      while (!err.empty() && std::isspace(static_cast<unsigned char>(err.back()))) err.pop_back();
      throw SimulationError("extern command '" + command.argv[0] + "' exited with status " +
                            std::to_string(proc.exit_code) + (err.empty() ? "" : ": " + err));
    }
    return decode_simulation_output(proc.out);
  };
}

}  // namespace falsify
