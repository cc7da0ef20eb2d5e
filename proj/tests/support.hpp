#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace testsupport {

// Instance generator for property tests. mt19937_64 output is fully
// specified by the standard; helpers avoid std::*_distribution, whose
// results vary across library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next() { return gen_(); }

    // Uniform in [0, n), n > 0.
    std::size_t index(std::size_t n) { return static_cast<std::size_t>(gen_() % n); }

    // Uniform integer in [lo, hi].
    int range(int lo, int hi) {
        return lo + static_cast<int>(gen_() % static_cast<std::uint64_t>(hi - lo + 1));
    }

    // Uniform in [0, 1).
    double unit() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    // Uniform float coordinate in [-1, 1).
    float coord() { return static_cast<float>(unit() * 2.0 - 1.0); }

private:
    std::mt19937_64 gen_;
};

// Brute-force AP oracle: precision at every rank holding a positive.
inline std::optional<double> oracle_average_precision(const std::vector<int>& ranked,
                                                      int query_entity) {
    std::size_t positives = 0;
    for (int e : ranked)
        if (e == query_entity) ++positives;
    if (positives == 0) return std::nullopt;
    double sum = 0.0;
    std::size_t seen = 0;
    for (std::size_t r = 0; r < ranked.size(); ++r) {
        if (ranked[r] == query_entity) {
            ++seen;
            sum += static_cast<double>(seen) / static_cast<double>(r + 1);
        }
    }
    return sum / static_cast<double>(positives);
}

// 1-based rank of the first positive, 0 when there is none.
inline std::size_t oracle_first_match_rank(const std::vector<int>& ranked, int query_entity) {
    for (std::size_t r = 0; r < ranked.size(); ++r)
        if (ranked[r] == query_entity) return r + 1;
    return 0;
}

// Tie-aware Spearman rank correlation (average ranks for ties).
inline double spearman(const std::vector<double>& xs, const std::vector<double>& ys) {
    auto ranks = [](const std::vector<double>& v) {
        std::vector<std::size_t> order(v.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
        std::vector<double> r(v.size());
        std::size_t i = 0;
        while (i < order.size()) {
            std::size_t j = i;
            while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
            const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
            for (std::size_t k = i; k <= j; ++k) r[order[k]] = avg;
            i = j + 1;
        }
        return r;
    };
    const std::vector<double> rx = ranks(xs);
    const std::vector<double> ry = ranks(ys);
    const double n = static_cast<double>(xs.size());
    const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
    const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
    double num = 0.0, dx = 0.0, dy = 0.0;
    for (std::size_t i = 0; i < rx.size(); ++i) {
        num += (rx[i] - mx) * (ry[i] - my);
        dx += (rx[i] - mx) * (rx[i] - mx);
        dy += (ry[i] - my) * (ry[i] - my);
    }
    return num / std::sqrt(dx * dy);
}

class TempDir {
public:
    TempDir() {
        std::string tmpl = (std::filesystem::temp_directory_path() / "reidbench_test_XXXXXX").string();
        if (!mkdtemp(tmpl.data())) throw std::runtime_error("mkdtemp failed");
        path_ = tmpl;
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

inline std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
    std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << text;
    if (!out.flush()) throw std::runtime_error("cannot write " + path.string());
}

struct CommandResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

inline std::string shell_quote(const std::string& s) {
    std::string q = "'";
    for (char c : s) {
        if (c == '\'')
            q += "'\\''";
        else
            q += c;
    }
    q += "'";
    return q;
}

// Runs an executable with arguments in the given working directory,
// capturing both streams and the exit code.
inline CommandResult run_command(const std::vector<std::string>& argv,
                                 const std::filesystem::path& cwd) {
    const std::filesystem::path out_file = cwd / ".cmd_stdout";
    const std::filesystem::path err_file = cwd / ".cmd_stderr";
    std::string cmd = "cd " + shell_quote(cwd.string()) + " &&";
    for (const std::string& arg : argv) cmd += " " + shell_quote(arg);
    cmd += " > " + shell_quote(out_file.string()) + " 2> " + shell_quote(err_file.string());
    const int status = std::system(cmd.c_str());
    CommandResult result;
    result.exit_code = (status >= 0 && status <= 255) ? status : ((status >> 8) & 0xff);
    result.out = read_text(out_file);
    result.err = read_text(err_file);
    std::filesystem::remove(out_file);
    std::filesystem::remove(err_file);
    return result;
}

}  // namespace testsupport
