#include "algsat/external.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cstdlib>
#include <cstring>
#include <sstream>

#include "algsat/diag.hpp"

namespace algsat {

namespace {

struct RunOutput {
    std::string text;
    int  exit_code = -1;
    bool timed_out = false;
};

RunOutput run_with_timeout(const std::string& cmdline, double time_limit) {
    int pipefd[2];
    if (pipe(pipefd) != 0) throw Error("pipe() failed");
    pid_t pid = fork();
    if (pid < 0) throw Error("fork() failed");
    if (pid == 0) {
        dup2(pipefd[1], STDOUT_FILENO);
        dup2(pipefd[1], STDERR_FILENO);
        close(pipefd[0]);
        close(pipefd[1]);
        setpgid(0, 0);
        execl("/bin/sh", "sh", "-c", cmdline.c_str(), (char*)nullptr);
        _exit(127);
    }
    close(pipefd[1]);
    fcntl(pipefd[0], F_SETFL, O_NONBLOCK);

    RunOutput out;
    auto t0 = std::chrono::steady_clock::now();
    char buf[4096];
    bool child_done = false;
    while (true) {
        struct pollfd pfd{pipefd[0], POLLIN, 0};
        int pr = poll(&pfd, 1, 200);
        if (pr > 0) {
            ssize_t n;
            while ((n = read(pipefd[0], buf, sizeof buf)) > 0) out.text.append(buf, size_t(n));
            if (n == 0) break; // EOF
        }
        int status;
        pid_t w = waitpid(pid, &status, WNOHANG);
        if (w == pid) {
            child_done = true;
            out.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
            // drain remaining output
            ssize_t n;
            while ((n = read(pipefd[0], buf, sizeof buf)) > 0) out.text.append(buf, size_t(n));
            break;
        }
        if (time_limit > 0) {
            double el = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            if (el > time_limit) {
                kill(-pid, SIGKILL);
                out.timed_out = true;
                break;
            }
        }
    }
    close(pipefd[0]);
    if (!child_done) {
        int status;
        waitpid(pid, &status, 0);
        if (out.exit_code < 0 && WIFEXITED(status)) out.exit_code = WEXITSTATUS(status);
    }
    return out;
}

} // namespace

SolveResult solve_external(const Instance& inst, const std::string& command,
                           const SolveConfig& cfg) {
    auto t0 = std::chrono::steady_clock::now();
    SolveResult res;

    char tmpl[] = "/tmp/algsat-XXXXXX.cnf";
    int fd = mkstemps(tmpl, 4);
    if (fd < 0) throw Error("cannot create temporary CNF file");
    close(fd);
    std::string path = tmpl;
    inst.write_dimacs_file(path);

    RunOutput run = run_with_timeout(command + " " + path, cfg.time_limit);
    unlink(path.c_str());
    res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    if (run.timed_out) {
        res.status = Status::Unknown;
        res.unknown_reason = "timeout";
        return res;
    }

    bool saw_sat = false, saw_unsat = false;
    std::vector<Lit> vlits;
    std::istringstream ss(run.text);
    std::string line;
    while (std::getline(ss, line)) {
        if (line.rfind("s SATISFIABLE", 0) == 0) saw_sat = true;
        else if (line.rfind("s UNSATISFIABLE", 0) == 0) saw_unsat = true;
        else if (!line.empty() && line[0] == 'v') {
            std::istringstream vs(line.substr(1));
            Lit l;
            while (vs >> l)
                if (l != 0) vlits.push_back(l);
        }
    }
    if (saw_unsat) {
        res.status = Status::Unsat;
        return res;
    }
    if (!saw_sat) {
        res.status = Status::Unknown;
        res.unknown_reason = run.exit_code == 127 ? "external-failure: command not found"
                                                  : "external-failure: no status line";
        return res;
    }
    // model: default-false for unmentioned variables
    res.model.assign(size_t(inst.var_count()) + 1, 0);
    for (Lit l : vlits) {
        Var v = lit_var(l);
        if (v <= inst.var_count()) res.model[v] = uint8_t(l > 0);
    }
    // verify before reporting SAT
    auto holds = [&](Lit l) {
        return res.model[lit_var(l)] == uint8_t(l > 0);
    };
    for (Lit a : inst.assumptions)
        if (!holds(a)) throw Error("external solver model violates an assumption");
    for (const Clause& c : inst.base->clauses) {
        bool sat = false;
        for (Lit l : c)
            if (holds(l)) { sat = true; break; }
        if (!sat) throw Error("external solver model violates a template clause");
    }
    for (const Clause& c : inst.extra_clauses) {
        bool sat = false;
        for (Lit l : c)
            if (holds(l)) { sat = true; break; }
        if (!sat) throw Error("external solver model violates an instance clause");
    }
    res.status = Status::Sat;
    return res;
}

} // namespace algsat
