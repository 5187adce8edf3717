#pragma once

#include <sys/wait.h>

#include <cstdio>
#include <string>

namespace support {

struct ForgeRun {
    int code = -1;
    std::string out;
};

// Runs the command-line binary with `args`, capturing standard output.
inline ForgeRun forge(const std::string& args) {
    std::string cmd = std::string(FORGE_BINARY) + " " + args + " 2>/dev/null";
    FILE* p = popen(cmd.c_str(), "r");
    ForgeRun r;
    if (!p) return r;
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
    int status = pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

}  // namespace support
