#include "realize/solver_driver.hpp"

#include <chrono>
#include <csignal>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <mutex>
#include <optional>
#include <sstream>

#include <fcntl.h>
#include <poll.h>
#include <sys/wait.h>
#include <unistd.h>

namespace realize {

const char* to_string(SolverStatus s) {
  switch (s) {
    case SolverStatus::Sat: return "sat";
    case SolverStatus::Unsat: return "unsat";
    case SolverStatus::Unknown: return "unknown";
  }
  return "?";
}

std::string default_solver_cmd() {
  if (const char* env = std::getenv("REALIZE_SOLVER"); env && *env) return env;
  return "z3 -in";
}

namespace {

std::vector<std::string> split_cmd(const std::string& cmd) {
  std::vector<std::string> out;
  std::istringstream is(cmd);
  std::string word;
  while (is >> word) out.push_back(word);
  return out;
}

void ignore_sigpipe() {
  static std::once_flag once;
  std::call_once(once, [] { ::signal(SIGPIPE, SIG_IGN); });
}

void set_nonblocking(int fd) { ::fcntl(fd, F_SETFL, ::fcntl(fd, F_GETFL) | O_NONBLOCK); }

struct ChildProcess {
  pid_t pid = -1;
  int stdin_fd = -1;
  int stdout_fd = -1;
  int stderr_fd = -1;

  ~ChildProcess() {
    if (stdin_fd >= 0) ::close(stdin_fd);
    if (stdout_fd >= 0) ::close(stdout_fd);
    if (stderr_fd >= 0) ::close(stderr_fd);
    if (pid > 0) {
      ::kill(pid, SIGKILL);
      ::waitpid(pid, nullptr, 0);
    }
  }

  int wait() {
    int status = 0;
    ::waitpid(pid, &status, 0);
    pid = -1;
    return status;
  }

  void kill_now() {
    if (pid > 0) {
      ::kill(pid, SIGKILL);
      ::waitpid(pid, nullptr, 0);
      pid = -1;
    }
  }
};

ChildProcess spawn(const std::vector<std::string>& argv) {
  // O_CLOEXEC keeps concurrently spawned children from inheriting each
  // other's pipe ends, which would delay EOF on a sibling's stdin.
  int in_pipe[2], out_pipe[2], err_pipe[2];
  if (::pipe2(in_pipe, O_CLOEXEC) != 0 || ::pipe2(out_pipe, O_CLOEXEC) != 0 ||
      ::pipe2(err_pipe, O_CLOEXEC) != 0)
    throw SolverSpawnError("pipe2() failed: " + std::string(std::strerror(errno)));

  std::vector<char*> cargv;
  cargv.reserve(argv.size() + 1);
  for (const auto& a : argv) cargv.push_back(const_cast<char*>(a.c_str()));
  cargv.push_back(nullptr);

  pid_t pid = ::fork();
  if (pid < 0) throw SolverSpawnError("fork() failed: " + std::string(std::strerror(errno)));

  if (pid == 0) {
    ::dup2(in_pipe[0], STDIN_FILENO);
    ::dup2(out_pipe[1], STDOUT_FILENO);
    ::dup2(err_pipe[1], STDERR_FILENO);
    for (int fd : {in_pipe[0], in_pipe[1], out_pipe[0], out_pipe[1], err_pipe[0], err_pipe[1]})
      ::close(fd);
    ::execvp(cargv[0], cargv.data());
    const char msg[] = "exec failed\n";
    (void)!::write(STDERR_FILENO, msg, sizeof(msg) - 1);
    ::_exit(127);
  }

  ::close(in_pipe[0]);
  ::close(out_pipe[1]);
  ::close(err_pipe[1]);

  ChildProcess child;
  child.pid = pid;
  child.stdin_fd = in_pipe[1];
  child.stdout_fd = out_pipe[0];
  child.stderr_fd = err_pipe[0];
  set_nonblocking(child.stdin_fd);
  set_nonblocking(child.stdout_fd);
  set_nonblocking(child.stderr_fd);
  return child;
}

// Pumps the script into the child and drains stdout/stderr until EOF or
// the deadline. Returns false on timeout.
bool pump(ChildProcess& child, const std::string& input, long timeout_ms, std::string& out,
          std::string& err) {
  using Clock = std::chrono::steady_clock;
  auto deadline = Clock::now() + std::chrono::milliseconds(timeout_ms);
  std::size_t written = 0;

  while (true) {
    struct pollfd fds[3];
    int nfds = 0;
    int write_idx = -1, out_idx = -1, err_idx = -1;
    if (child.stdin_fd >= 0) {
      write_idx = nfds;
      fds[nfds++] = {child.stdin_fd, POLLOUT, 0};
    }
    if (child.stdout_fd >= 0) {
      out_idx = nfds;
      fds[nfds++] = {child.stdout_fd, POLLIN, 0};
    }
    if (child.stderr_fd >= 0) {
      err_idx = nfds;
      fds[nfds++] = {child.stderr_fd, POLLIN, 0};
    }
    if (out_idx < 0 && err_idx < 0) return true;  // both output streams closed

    auto remaining =
        std::chrono::duration_cast<std::chrono::milliseconds>(deadline - Clock::now()).count();
    if (remaining <= 0) return false;

    int rc = ::poll(fds, nfds, static_cast<int>(std::min<long>(remaining, 200)));
    if (rc < 0) {
      if (errno == EINTR) continue;
      throw SolverProtocolError("poll() failed: " + std::string(std::strerror(errno)));
    }

    if (write_idx >= 0 && (fds[write_idx].revents & (POLLOUT | POLLERR | POLLHUP))) {
      if (fds[write_idx].revents & (POLLERR | POLLHUP)) {
        ::close(child.stdin_fd);
        child.stdin_fd = -1;
      } else {
        ssize_t n = ::write(child.stdin_fd, input.data() + written, input.size() - written);
        if (n > 0) written += static_cast<std::size_t>(n);
        if (n < 0 && errno != EAGAIN && errno != EINTR) {
          ::close(child.stdin_fd);
          child.stdin_fd = -1;
        }
        if (written == input.size()) {
          ::close(child.stdin_fd);
          child.stdin_fd = -1;
        }
      }
    }

    char buf[4096];
    auto drain = [&](int idx, int& fd, std::string& sink) {
      if (idx < 0 || !(fds[idx].revents & (POLLIN | POLLHUP | POLLERR))) return;
      while (true) {
        ssize_t n = ::read(fd, buf, sizeof buf);
        if (n > 0) {
          sink.append(buf, static_cast<std::size_t>(n));
          continue;
        }
        if (n == 0 || (n < 0 && errno != EAGAIN && errno != EINTR)) {
          ::close(fd);
          fd = -1;
        }
        break;
      }
    };
    drain(out_idx, child.stdout_fd, out);
    drain(err_idx, child.stderr_fd, err);
  }
}

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::string tail_of(const std::string& s, std::size_t max = 500) {
  if (s.size() <= max) return s;
  return s.substr(s.size() - max);
}

// ---------------------------------------------------------------------------
// Model s-expressions

struct Sexp {
  std::string atom;           // non-empty iff leaf
  std::vector<Sexp> children;
  bool is_atom() const { return !atom.empty(); }
};

class SexpParser {
 public:
  explicit SexpParser(const std::string& text) : text_(text) {}

  std::vector<Sexp> parse_all() {
    std::vector<Sexp> out;
    skip_ws();
    while (pos_ < text_.size()) {
      out.push_back(parse_one());
      skip_ws();
    }
    return out;
  }

 private:
  Sexp parse_one() {
    skip_ws();
    if (pos_ >= text_.size()) throw ModelParseError("unexpected end of model text");
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Sexp list;
      skip_ws();
      while (pos_ < text_.size() && text_[pos_] != ')') {
        list.children.push_back(parse_one());
        skip_ws();
      }
      if (pos_ >= text_.size()) throw ModelParseError("unbalanced '(' in model");
      ++pos_;
      return list;
    }
    if (c == ')') throw ModelParseError("unexpected ')' in model");
    if (c == '"') {
      std::size_t start = pos_++;
      while (pos_ < text_.size() && text_[pos_] != '"') ++pos_;
      if (pos_ < text_.size()) ++pos_;
      Sexp s;
      s.atom = text_.substr(start, pos_ - start);
      return s;
    }
    std::size_t start = pos_;
    while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) &&
           text_[pos_] != '(' && text_[pos_] != ')')
      ++pos_;
    Sexp s;
    s.atom = text_.substr(start, pos_ - start);
    return s;
  }

  void skip_ws() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else if (c == ';') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  const std::string& text_;
  std::size_t pos_ = 0;
};

bool parse_decimal(const std::string& atom, Rational& out) {
  auto dot = atom.find('.');
  if (dot == std::string::npos) return false;
  try {
    std::string whole = atom.substr(0, dot);
    std::string frac = atom.substr(dot + 1);
    std::int64_t num = std::stoll(whole + frac);  // throws before den can overflow
    std::int64_t den = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
    out = Rational(num, den);
    return true;
  } catch (const std::exception&) {
    return false;
  }
}

Value value_from_sexp(const Sexp& s, Sort sort);

Rational rational_from_sexp(const Sexp& s) {
  if (s.is_atom()) {
    Rational r;
    if (parse_decimal(s.atom, r)) return r;
    return Rational(std::stoll(s.atom), 1);
  }
  if (s.children.size() == 2 && s.children[0].atom == "-")
    return -rational_from_sexp(s.children[1]);
  if (s.children.size() == 3 && s.children[0].atom == "/") {
    Rational n = rational_from_sexp(s.children[1]);
    Rational d = rational_from_sexp(s.children[2]);
    if (d.num == 0) throw ModelParseError("rational model value with zero denominator");
    return Rational(n.num * d.den, n.den * d.num);
  }
  throw ModelParseError("unsupported Real model value");
}

Value value_from_sexp(const Sexp& s, Sort sort) {
  try {
    switch (sort) {
      case Sort::Bool:
        if (s.is_atom() && s.atom == "true") return true;
        if (s.is_atom() && s.atom == "false") return false;
        throw ModelParseError("expected Bool model value, got '" + s.atom + "'");
      case Sort::Int:
        if (s.is_atom()) return static_cast<std::int64_t>(std::stoll(s.atom));
        if (s.children.size() == 2 && s.children[0].atom == "-")
          return -std::get<std::int64_t>(value_from_sexp(s.children[1], Sort::Int));
        throw ModelParseError("unsupported Int model value");
      case Sort::Real: return rational_from_sexp(s);
    }
  } catch (const ModelParseError&) {
    throw;
  } catch (const std::exception& e) {
    throw ModelParseError(std::string("malformed model value: ") + e.what());
  }
  throw ModelParseError("unsupported model value");
}

Value default_value(Sort sort) {
  switch (sort) {
    case Sort::Bool: return false;
    case Sort::Int: return static_cast<std::int64_t>(0);
    case Sort::Real: return Rational(0, 1);
  }
  return false;
}

}  // namespace

std::map<std::string, Value> parse_model(const std::string& model_text,
                                         const std::vector<ModelVar>& model_vars) {
  std::map<std::string, Sort> expected;
  for (const auto& mv : model_vars) expected.emplace(mv.smt_name, mv.sort);

  SexpParser parser(model_text);
  std::vector<Sexp> top = parser.parse_all();

  // Accept both a bare list of define-funs and the `(model ...)` /
  // wrapping-parens forms.
  std::vector<const Sexp*> entries;
  std::function<void(const Sexp&)> collect = [&](const Sexp& s) {
    if (s.is_atom()) return;
    if (!s.children.empty() && s.children[0].atom == "define-fun") {
      entries.push_back(&s);
      return;
    }
    for (const auto& ch : s.children) collect(ch);
  };
  for (const auto& s : top) collect(s);

  std::map<std::string, Value> model;
  for (const Sexp* e : entries) {
    // (define-fun name () Sort value)
    if (e->children.size() < 5) continue;
    const std::string& name = e->children[1].atom;
    auto it = expected.find(name);
    if (it == expected.end()) continue;
    model[name] = value_from_sexp(e->children[4], it->second);
  }
  return model;
}

SolverResult run_query(const SmtScript& script, const std::string& solver_cmd,
                       long timeout_ms) {
  ignore_sigpipe();
  auto argv = split_cmd(solver_cmd);
  if (argv.empty()) throw SolverSpawnError("empty solver command");

  auto start = std::chrono::steady_clock::now();
  ChildProcess child = spawn(argv);

  std::string out, err;
  bool finished = pump(child, script.text, timeout_ms, out, err);
  auto elapsed_ms = [&] {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::steady_clock::now() - start)
        .count();
  };

  SolverResult result;
  result.stderr_tail = tail_of(err);

  if (!finished) {
    child.kill_now();
    result.status = SolverStatus::Unknown;
    result.unknown_reason = "timeout";
    result.wall_time_ms = elapsed_ms();
    return result;
  }

  int status = child.wait();
  result.wall_time_ms = elapsed_ms();
  if (WIFEXITED(status) && WEXITSTATUS(status) == 127)
    throw SolverSpawnError("solver command not found: " + solver_cmd);

  // The status answer is the first line that is exactly sat/unsat/unknown.
  std::istringstream lines(out);
  std::string line;
  std::size_t model_start = std::string::npos;
  std::size_t consumed = 0;
  std::optional<SolverStatus> parsed;
  while (std::getline(lines, line)) {
    consumed += line.size() + 1;
    std::string t = trim(line);
    if (t == "sat") parsed = SolverStatus::Sat;
    else if (t == "unsat") parsed = SolverStatus::Unsat;
    else if (t == "unknown") parsed = SolverStatus::Unknown;
    if (parsed) {
      model_start = consumed;
      break;
    }
  }
  if (!parsed)
    throw SolverProtocolError("no sat/unsat/unknown in solver output; stdout: '" +
                              tail_of(trim(out), 200) + "', stderr: '" +
                              tail_of(trim(err), 200) + "'");

  result.status = *parsed;
  if (result.status == SolverStatus::Unknown) {
    result.unknown_reason = "solver reported unknown";
    return result;
  }
  if (result.status == SolverStatus::Sat) {
    std::string model_text =
        model_start < out.size() ? out.substr(model_start) : std::string();
    result.model = parse_model(model_text, script.model_vars);
    for (const auto& mv : script.model_vars) {
      if (result.model.count(mv.smt_name)) continue;
      result.model[mv.smt_name] = default_value(mv.sort);
      result.defaulted_vars.push_back(mv.smt_name);
    }
  }
  return result;
}

}  // namespace realize
