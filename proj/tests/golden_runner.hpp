#pragma once

// Runs the command-line golden corpus: each case directory holds `cmd` (the
// argument line), `exit` (expected status), `stdout` (expected bytes), the
// input files, and optionally `expected_<name>` files that the produced
// sibling <name> must match byte for byte.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

namespace golden {

struct CaseResult {
    std::string name;
    bool ok = true;
    std::string detail;
};

inline std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline std::string trimmed(std::string s) {
    while (!s.empty() && (s.back() == '\n' || s.back() == '\r' || s.back() == ' ')) s.pop_back();
    return s;
}

inline CaseResult run_case(const std::string& cli, const std::filesystem::path& dir) {
    namespace fs = std::filesystem;
    CaseResult r{dir.filename().string()};
    auto fail = [&](std::string why) {
        r.ok = false;
        if (!r.detail.empty()) r.detail += "; ";
        r.detail += std::move(why);
    };

    std::string args = trimmed(slurp(dir / "cmd"));
    int want_exit = std::stoi(trimmed(slurp(dir / "exit")));
    std::string want_out = slurp(dir / "stdout");

    std::string shell = "cd '" + dir.string() + "' && '" + cli + "' " + args + " 2>/dev/null";
    FILE* pipe = popen(shell.c_str(), "r");
    if (!pipe) {
        fail("could not launch the tool");
        return r;
    }
    std::string got_out;
    char buf[4096];
    size_t n;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) got_out.append(buf, n);
    int status = pclose(pipe);
    int got_exit = WIFEXITED(status) ? WEXITSTATUS(status) : -1;

    if (got_exit != want_exit)
        fail("exit " + std::to_string(got_exit) + ", expected " + std::to_string(want_exit));
    if (got_out != want_out) fail("stdout differs");

    for (const auto& entry : fs::directory_iterator(dir)) {
        std::string name = entry.path().filename().string();
        if (name.rfind("expected_", 0) != 0) continue;
        fs::path produced = dir / name.substr(9);
        if (!fs::exists(produced)) {
            fail(produced.filename().string() + " was not written");
            continue;
        }
        if (slurp(produced) != slurp(entry.path()))
            fail(produced.filename().string() + " differs");
        fs::remove(produced);
    }
    return r;
}

inline std::vector<CaseResult> run_all(const std::string& cli_path, const std::filesystem::path& root) {
    namespace fs = std::filesystem;
    std::string cli = fs::absolute(cli_path).string();
    std::vector<fs::path> dirs;
    for (const auto& entry : fs::directory_iterator(root))
        if (entry.is_directory()) dirs.push_back(entry.path());
    std::sort(dirs.begin(), dirs.end());
    std::vector<CaseResult> out;
    for (const auto& d : dirs) out.push_back(run_case(cli, d));
    return out;
}

}  // namespace golden
