#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "nqueens/errors.hpp"
#include "nqueens/scheduler.hpp"

namespace nqueens {

// Bumped if the subproblem emission order ever changes; checkpoints index
// into that order, so they are only valid within one version.
inline constexpr const char* kGenerationOrderVersion = "gen-v1";

// Self-describing text checkpoint: header, one line per worker, trailing
// whole-file checksum. Human-inspectable after a weeks-long run.
struct Checkpoint {
    int version = 1;
    std::string identity;
    int n = 0;
    int pre_rows = 0;
    KernelVariant kernel = KernelVariant::lastrow;
    PartitionStrategy strategy = PartitionStrategy::weighted;
    std::vector<double> weights;
    std::string config_name;
    int worker_count = 0;
    std::uint64_t task_count = 0;
    double elapsed_ms = 0;

    struct WorkerState {
        std::uint64_t range_first = 0;
        std::uint64_t range_last = 0;
        std::uint64_t next_index = 0;  // all owned indices below it are done
        std::uint64_t partial_sum = 0;
    };
    std::vector<WorkerState> workers;

    bool complete() const {
        for (const auto& w : workers)
            if (w.next_index < w.range_last) return false;
        return !workers.empty();
    }
};

namespace ckptdetail {

inline std::uint64_t fnv1a(std::string_view data, std::uint64_t seed = 0xcbf29ce484222325ull) {
    std::uint64_t h = seed;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

inline std::string hex64(std::uint64_t v) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

}  // namespace ckptdetail

// Hash tying a checkpoint to the run it belongs to. The partition shape and
// task count are included beyond the obvious keys because the per-worker
// indices only make sense for the same ranges.
inline std::string run_identity(int n, int pre_rows, KernelVariant kernel,
                                PartitionStrategy strategy, const std::vector<double>& weights,
                                int worker_count, std::uint64_t task_count) {
    std::ostringstream canon;
    canon << kGenerationOrderVersion << '|' << n << '|' << pre_rows << '|'
          << to_string(kernel) << '|' << to_string(strategy) << '|' << worker_count << '|'
          << task_count << '|';
    canon.precision(17);
    for (double w : weights) canon << w << ',';
    return ckptdetail::hex64(ckptdetail::fnv1a(canon.str()));
}

inline std::string serialize(const Checkpoint& ck) {
    std::ostringstream body;
    body << "nqueens-checkpoint " << ck.version << '\n';
    body << "identity " << ck.identity << '\n';
    body << "n " << ck.n << '\n';
    body << "pre_rows " << ck.pre_rows << '\n';
    body << "kernel " << to_string(ck.kernel) << '\n';
    body << "strategy " << to_string(ck.strategy) << '\n';
    body << "config " << ck.config_name << '\n';
    body << "weights ";
    if (ck.weights.empty()) {
        body << '-';
    } else {
        body.precision(17);
        for (std::size_t i = 0; i < ck.weights.size(); ++i)
            body << (i ? "," : "") << ck.weights[i];
    }
    body << '\n';
    body << "workers " << ck.worker_count << '\n';
    body << "task_count " << ck.task_count << '\n';
    char ms[32];
    std::snprintf(ms, sizeof(ms), "%.3f", ck.elapsed_ms);
    body << "elapsed_ms " << ms << '\n';
    for (std::size_t i = 0; i < ck.workers.size(); ++i) {
        const auto& w = ck.workers[i];
        body << "worker " << i << ' ' << w.range_first << ' ' << w.range_last << ' '
             << w.next_index << ' ' << w.partial_sum << '\n';
    }
    const std::string text = body.str();
    return text + "checksum " + ckptdetail::hex64(ckptdetail::fnv1a(text)) + "\n";
}

inline Checkpoint parse_checkpoint(const std::string& text) {
    const auto checksum_pos = text.rfind("checksum ");
    if (checksum_pos == std::string::npos)
        throw checkpoint_error("checkpoint has no checksum line");
    const std::string body = text.substr(0, checksum_pos);
    std::istringstream tail(text.substr(checksum_pos));
    std::string tag, stored;
    tail >> tag >> stored;
    if (stored != ckptdetail::hex64(ckptdetail::fnv1a(body)))
        throw checkpoint_error("checkpoint checksum mismatch (file corrupt)");

    Checkpoint ck;
    std::istringstream in(body);
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string key;
        ls >> key;
        if (key == "nqueens-checkpoint") {
            ls >> ck.version;
            if (ck.version != 1)
                throw checkpoint_error("unsupported checkpoint version " +
                                       std::to_string(ck.version));
        } else if (key == "identity") {
            ls >> ck.identity;
        } else if (key == "n") {
            ls >> ck.n;
        } else if (key == "pre_rows") {
            ls >> ck.pre_rows;
        } else if (key == "kernel") {
            std::string v;
            ls >> v;
            ck.kernel = v == "lastrow" ? KernelVariant::lastrow : KernelVariant::iterative;
        } else if (key == "strategy") {
            std::string v;
            ls >> v;
            ck.strategy = partition_strategy_from(v);
        } else if (key == "config") {
            ls >> ck.config_name;
        } else if (key == "weights") {
            std::string v;
            ls >> v;
            if (v != "-") {
                std::istringstream ws(v);
                std::string tok;
                while (std::getline(ws, tok, ',')) ck.weights.push_back(std::stod(tok));
            }
        } else if (key == "workers") {
            ls >> ck.worker_count;
        } else if (key == "task_count") {
            ls >> ck.task_count;
        } else if (key == "elapsed_ms") {
            ls >> ck.elapsed_ms;
        } else if (key == "worker") {
            std::size_t i;
            Checkpoint::WorkerState w;
            ls >> i >> w.range_first >> w.range_last >> w.next_index >> w.partial_sum;
            if (ls.fail() || i != ck.workers.size())
                throw checkpoint_error("malformed worker line in checkpoint");
            ck.workers.push_back(w);
        }
    }
    if (static_cast<int>(ck.workers.size()) != ck.worker_count)
        throw checkpoint_error("checkpoint worker lines do not match worker count");
    return ck;
}

// Atomic write: temp file in the same directory, then rename.
inline void save_checkpoint(const Checkpoint& ck, const std::filesystem::path& path) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) throw checkpoint_error("cannot write checkpoint file " + tmp.string());
        out << serialize(ck);
    }
    std::filesystem::rename(tmp, path);
}

inline Checkpoint load_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw checkpoint_error("cannot read checkpoint file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_checkpoint(buf.str());
}

}  // namespace nqueens
