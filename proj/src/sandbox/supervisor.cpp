#include "hforge/sandbox/supervisor.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstring>
#include <mutex>

#include "hforge/core/errors.hpp"

extern char** environ;

namespace hforge::sandbox {

namespace {

using Clock = std::chrono::steady_clock;

constexpr std::size_t kStdoutCapBytes = 16 * 1024 * 1024;
constexpr auto kExitWait = std::chrono::milliseconds(500);

void ignore_sigpipe_once() {
  static std::once_flag flag;
  std::call_once(flag, [] { ::signal(SIGPIPE, SIG_IGN); });
}

struct Fd {
  int fd = -1;
  Fd() = default;
  explicit Fd(int f) : fd(f) {}
  Fd(const Fd&) = delete;
  Fd& operator=(const Fd&) = delete;
  ~Fd() { reset(); }
  void reset() {
    if (fd >= 0) ::close(fd);
    fd = -1;
  }
};

struct Pipe {
  Fd read, write;
  bool open() {
    int fds[2];
    if (::pipe2(fds, O_CLOEXEC) != 0) return false;
    read.fd = fds[0];
    write.fd = fds[1];
    return true;
  }
};

void set_nonblocking(int fd) { ::fcntl(fd, F_SETFL, ::fcntl(fd, F_GETFL) | O_NONBLOCK); }

// Reads what is available; returns false on EOF or error.
bool drain(int fd, std::string& into, std::size_t cap) {
  char buf[8192];
  for (;;) {
    const ssize_t n = ::read(fd, buf, sizeof buf);
    if (n > 0) {
      const auto room = cap > into.size() ? cap - into.size() : 0;
      into.append(buf, std::min<std::size_t>(room, static_cast<std::size_t>(n)));
      continue;
    }
    if (n == 0) return false;
    if (errno == EINTR) continue;
    return errno == EAGAIN || errno == EWOULDBLOCK;
  }
}

// True once the child has exited; leaves it unreaped so its pid (and thus the
// process group id) cannot be reused before the group is killed.
bool has_exited(pid_t pid) {
  siginfo_t info{};
  if (::waitid(P_PID, static_cast<id_t>(pid), &info, WEXITED | WNOHANG | WNOWAIT) != 0) return true;
  return info.si_pid == pid;
}

}  // namespace

SupervisorResult supervise(std::span<const std::string> argv, const WorkerRequest& request, double deadline_s) {
  if (argv.empty()) throw ContractViolation("worker command is empty");
  if (!(deadline_s > 0)) throw ContractViolation("deadline must be positive");
  ignore_sigpipe_once();

  SupervisorResult result;
  const auto start = Clock::now();
  const auto deadline = start + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(deadline_s));
  auto finish = [&](SupervisorKind kind, std::string detail) {
    result.kind = kind;
    result.detail = std::move(detail);
    result.wall_time_s = std::chrono::duration<double>(Clock::now() - start).count();
    return result;
  };

  Pipe in, out, err;
  if (!in.open() || !out.open() || !err.open()) {
    return finish(SupervisorKind::SpawnFailed, std::string("pipe: ") + std::strerror(errno));
  }

  posix_spawn_file_actions_t actions;
  posix_spawnattr_t attr;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_adddup2(&actions, in.read.fd, 0);
  posix_spawn_file_actions_adddup2(&actions, out.write.fd, 1);
  posix_spawn_file_actions_adddup2(&actions, err.write.fd, 2);
  posix_spawnattr_init(&attr);
  sigset_t defaults, empty;
  sigemptyset(&defaults);
  sigaddset(&defaults, SIGPIPE);
  sigemptyset(&empty);
  posix_spawnattr_setsigdefault(&attr, &defaults);
  posix_spawnattr_setsigmask(&attr, &empty);
  posix_spawnattr_setpgroup(&attr, 0);
  posix_spawnattr_setflags(&attr, POSIX_SPAWN_SETPGROUP | POSIX_SPAWN_SETSIGDEF | POSIX_SPAWN_SETSIGMASK);

  std::vector<char*> cargv;
  for (const auto& a : argv) cargv.push_back(const_cast<char*>(a.c_str()));
  cargv.push_back(nullptr);

  pid_t pid = -1;
  const int rc = ::posix_spawnp(&pid, cargv[0], &actions, &attr, cargv.data(), environ);
  posix_spawn_file_actions_destroy(&actions);
  posix_spawnattr_destroy(&attr);
  if (rc != 0) return finish(SupervisorKind::SpawnFailed, "cannot start '" + argv[0] + "': " + std::strerror(rc));

  in.read.reset();
  out.write.reset();
  err.write.reset();
  set_nonblocking(in.write.fd);
  set_nonblocking(out.read.fd);
  set_nonblocking(err.read.fd);

  std::string pending = to_json(request).dump() + "\n";
  std::size_t written = 0;
  std::string out_buf;
  bool out_open = true, err_open = true;
  std::optional<std::string> line;
  bool timed_out = false;

  while (!line && out_open) {
    const auto now = Clock::now();
    if (now >= deadline) {
      timed_out = true;
      break;
    }
    pollfd fds[3];
    nfds_t n = 0;
    const int out_idx = static_cast<int>(n);
    fds[n++] = {out.read.fd, POLLIN, 0};
    int err_idx = -1, in_idx = -1;
    if (err_open) {
      err_idx = static_cast<int>(n);
      fds[n++] = {err.read.fd, POLLIN, 0};
    }
    if (in.write.fd >= 0) {
      in_idx = static_cast<int>(n);
      fds[n++] = {in.write.fd, POLLOUT, 0};
    }
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now).count() + 1;
    if (::poll(fds, n, static_cast<int>(std::min<long long>(left, 100))) < 0 && errno != EINTR) break;

    if (in_idx >= 0 && (fds[in_idx].revents & (POLLOUT | POLLERR | POLLHUP))) {
      const ssize_t w = ::write(in.write.fd, pending.data() + written, pending.size() - written);
      if (w > 0) written += static_cast<std::size_t>(w);
      if ((w < 0 && errno != EAGAIN && errno != EINTR) || written == pending.size()) in.write.reset();
    }
    if (err_idx >= 0 && fds[err_idx].revents) err_open = drain(err.read.fd, result.stderr_text, kStderrCapBytes);
    if (fds[out_idx].revents) {
      out_open = drain(out.read.fd, out_buf, kStdoutCapBytes);
      if (auto nl = out_buf.find('\n'); nl != std::string::npos) {
        line = out_buf.substr(0, nl);
      } else if (out_buf.size() >= kStdoutCapBytes) {
        break;
      }
    }
  }
  in.write.reset();
  if (!line && !out_open && !out_buf.empty() && out_buf.size() < kStdoutCapBytes) line = out_buf;

  // Give a well-behaved worker a moment to exit, then take the whole group down.
  if (!timed_out) {
    const auto exit_by = std::min<Clock::time_point>(Clock::now() + kExitWait, deadline);
    while (!has_exited(pid) && Clock::now() < exit_by) {
      if (err_open) {
        pollfd p{err.read.fd, POLLIN, 0};
        if (::poll(&p, 1, 10) > 0) err_open = drain(err.read.fd, result.stderr_text, kStderrCapBytes);
      } else {
        ::usleep(2000);
      }
    }
  }
  ::kill(-pid, SIGKILL);
  int status = 0;
  while (::waitpid(pid, &status, 0) < 0 && errno == EINTR) {
  }
  if (err_open) drain(err.read.fd, result.stderr_text, kStderrCapBytes);
  if (WIFEXITED(status)) result.exit_code = WEXITSTATUS(status);
  if (WIFSIGNALED(status)) result.term_signal = WTERMSIG(status);

  if (timed_out) return finish(SupervisorKind::Timeout, "worker killed after " + std::to_string(deadline_s) + " s");
  if (!line) {
    if (out_buf.size() >= kStdoutCapBytes) return finish(SupervisorKind::Malformed, "malformed response: line too long");
    std::string why = "worker ended without a response";
    if (result.exit_code >= 0) why += " (exit code " + std::to_string(result.exit_code) + ")";
    if (result.term_signal) why += " (signal " + std::to_string(result.term_signal) + ")";
    return finish(SupervisorKind::Crashed, why);
  }
  try {
    result.response = parse_worker_response(*line);
  } catch (const ParseError& e) {
    return finish(SupervisorKind::Malformed, e.what());
  }
  if (result.exit_code > 0) {
    return finish(SupervisorKind::Crashed, "worker exited with code " + std::to_string(result.exit_code));
  }
  return finish(SupervisorKind::Ok, {});
}

}  // namespace hforge::sandbox
