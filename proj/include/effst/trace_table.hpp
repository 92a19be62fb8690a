#pragma once

// Complete per-prime trace tables up to a cutoff, parallel construction,
// and the CSV cache format (`p,reduction,a_p`; angles are derived data and
// recomputed on load).

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "effst/counting.hpp"
#include "effst/curve.hpp"
#include "effst/primes.hpp"

namespace effst {

struct TraceRecord {
    u64 p = 0;
    bool good = false;
    i64 a_p = 0;     // valid iff good
    double theta = 0; // valid iff good
};

struct TraceTable {
    std::string label;
    std::string curve_key; // canonical minimal-model coefficients
    double cutoff = 0;
    std::vector<TraceRecord> records; // one per prime p <= cutoff, ascending
};

struct BuildOptions {
    unsigned threads = 0;                       // 0: hardware concurrency
    u64 memory_budget_bytes = 512ull << 20;     // table + sieve estimate cap
    TraceStrategy strategy = TraceStrategy::automatic;
};

inline u64 estimate_table_bytes(double x) {
    double lx = std::log(std::max(x, 8.0));
    double primes = x / (lx - 1.1) + 64;
    return static_cast<u64>(primes * sizeof(TraceRecord) + x / 8.0);
}

// Largest cutoff fitting the budget (for the resumable-range hint).
inline u64 max_cutoff_for_budget(u64 budget_bytes) {
    u64 lo = 2, hi = u64(1) << 40;
    while (lo < hi) {
        u64 mid = lo + (hi - lo + 1) / 2;
        if (estimate_table_bytes(static_cast<double>(mid)) <= budget_bytes)
            lo = mid;
        else
            hi = mid - 1;
    }
    return lo;
}

namespace detail {

inline void fill_records(const CurveQ& E, std::vector<TraceRecord>& recs,
                         const std::vector<u64>& primes, std::size_t begin,
                         std::size_t out_offset, const BuildOptions& opt) {
    const std::size_t n = primes.size() - begin;
    std::atomic<std::size_t> next{0};
    unsigned nthreads = opt.threads ? opt.threads : std::max(1u, std::thread::hardware_concurrency());
    if (nthreads > n) nthreads = static_cast<unsigned>(std::max<std::size_t>(n, 1));
    auto worker = [&] {
        constexpr std::size_t block = 64;
        while (true) {
            std::size_t i0 = next.fetch_add(block);
            if (i0 >= n) break;
            std::size_t i1 = std::min(i0 + block, n);
            for (std::size_t i = i0; i < i1; ++i) {
                u64 p = primes[begin + i];
                TraceRecord r;
                r.p = p;
                if (reduction_type(E, p) == Reduction::bad) {
                    r.good = false;
                } else {
                    r.good = true;
                    r.a_p = trace_of_frobenius(E, p, opt.strategy);
                    r.theta = frobenius_angle(r.a_p, p);
                }
                recs[out_offset + i] = r;
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < nthreads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
}

} // namespace detail

inline TraceTable build_trace_table(const CurveQ& E, double x, const BuildOptions& opt = {}) {
    if (x < 2) throw std::invalid_argument("build_trace_table: cutoff x must be >= 2");
    if (estimate_table_bytes(x) > opt.memory_budget_bytes) {
        std::ostringstream os;
        os << "build_trace_table: cutoff x=" << x << " exceeds the memory budget ("
           << opt.memory_budget_bytes << " bytes); build up to x=" << max_cutoff_for_budget(opt.memory_budget_bytes)
           << " first, then extend the cached table in ranges";
        throw std::length_error(os.str());
    }
    std::vector<u64> ps = primes_up_to(static_cast<u64>(x));
    TraceTable t;
    t.label = E.label;
    t.curve_key = E.key();
    t.cutoff = x;
    t.records.resize(ps.size());
    detail::fill_records(E, t.records, ps, 0, 0, opt);
    return t;
}

// Extend an existing table to a larger cutoff in place.
inline void extend_trace_table(TraceTable& t, const CurveQ& E, double x, const BuildOptions& opt = {}) {
    if (E.key() != t.curve_key) throw std::invalid_argument("extend_trace_table: table belongs to a different curve");
    if (x <= t.cutoff) { t.cutoff = std::max(t.cutoff, x); return; }
    if (estimate_table_bytes(x) > opt.memory_budget_bytes)
        throw std::length_error("extend_trace_table: target cutoff exceeds the memory budget");
    std::vector<u64> ps = primes_up_to(static_cast<u64>(x));
    std::size_t have = t.records.size();
    if (ps.size() > have) {
        t.records.resize(ps.size());
        detail::fill_records(E, t.records, ps, have, have, opt);
    }
    t.cutoff = x;
}

inline u64 curve_checksum(const std::string& curve_key) { return fnv1a64(curve_key); }

inline void save_trace_table_csv(const TraceTable& t, const std::string& path) {
    std::filesystem::path target(path);
    std::filesystem::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream os(tmp);
        if (!os) throw std::runtime_error("save_trace_table_csv: cannot open " + tmp.string());
        char buf[32];
        std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(curve_checksum(t.curve_key)));
        os << "# effst-trace-cache v1 curve=" << t.curve_key << " sum=" << buf
           << " cutoff=" << static_cast<u64>(t.cutoff) << " label=" << t.label << "\n";
        os << "p,reduction,a_p\n";
        for (const TraceRecord& r : t.records) {
            if (r.good)
                os << r.p << ",good," << r.a_p << "\n";
            else
                os << r.p << ",bad,\n";
        }
        if (!os) throw std::runtime_error("save_trace_table_csv: write failed");
    }
    std::filesystem::rename(tmp, target);
}

// Loads and revalidates a cache file; a checksum mismatch with the expected
// curve is rejected (nullopt), never silently reused. Angles are recomputed.
inline std::optional<TraceTable> load_trace_table_csv(const std::string& path, const std::string& expected_curve_key) {
    std::ifstream is(path);
    if (!is) return std::nullopt;
    std::string header;
    if (!std::getline(is, header)) return std::nullopt;
    TraceTable t;
    {
        std::istringstream hs(header);
        std::string tag1, tag2, field;
        hs >> tag1 >> tag2;
        if (tag1 != "#" || tag2 != "effst-trace-cache") return std::nullopt;
        std::string version;
        hs >> version;
        std::string curve, sum, cutoff, label;
        while (hs >> field) {
            if (field.rfind("curve=", 0) == 0) curve = field.substr(6);
            else if (field.rfind("sum=", 0) == 0) sum = field.substr(4);
            else if (field.rfind("cutoff=", 0) == 0) cutoff = field.substr(7);
            else if (field.rfind("label=", 0) == 0) label = field.substr(6);
        }
        if (curve != expected_curve_key) return std::nullopt;
        char buf[32];
        std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(curve_checksum(curve)));
        if (sum != buf) return std::nullopt;
        t.curve_key = curve;
        t.label = label;
        t.cutoff = cutoff.empty() ? 0.0 : std::stod(cutoff);
    }
    std::string line;
    if (!std::getline(is, line) || line != "p,reduction,a_p") return std::nullopt;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::size_t c1 = line.find(','), c2 = line.find(',', c1 + 1);
        if (c1 == std::string::npos || c2 == std::string::npos) return std::nullopt;
        TraceRecord r;
        r.p = std::stoull(line.substr(0, c1));
        std::string redn = line.substr(c1 + 1, c2 - c1 - 1);
        if (redn == "good") {
            r.good = true;
            r.a_p = std::stoll(line.substr(c2 + 1));
            r.theta = frobenius_angle(r.a_p, r.p);
        } else if (redn == "bad") {
            r.good = false;
        } else {
            return std::nullopt;
        }
        if (!t.records.empty() && t.records.back().p >= r.p) return std::nullopt; // must be ascending
        t.records.push_back(r);
    }
    return t;
}

// Number of good records with p <= x.
inline u64 good_prime_count(const TraceTable& t, double x) {
    u64 n = 0;
    for (const TraceRecord& r : t.records) {
        if (static_cast<double>(r.p) > x) break;
        if (r.good) ++n;
    }
    return n;
}

} // namespace effst
