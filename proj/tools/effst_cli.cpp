// effst command-line surface: trace tables, Frobenius angles, kernel audits,
// discrepancy reports, and smallest-distinguishing-prime searches.
//
// Exit codes: 0 success, 2 validation error, 3 computation error.
// Failures emit a machine-readable JSON object on stderr.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "effst/effst.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace effst;

namespace {

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Intervals are given in units of pi, e.g. "0.25:0.5" means [pi/4, pi/2].
std::pair<double, double> parse_interval(const std::string& s) {
    std::size_t c = s.find(':');
    if (c == std::string::npos) throw std::invalid_argument("interval must be lo:hi in units of pi");
    double lo = std::stod(s.substr(0, c)) * M_PI;
    double hi = std::stod(s.substr(c + 1)) * M_PI;
    if (lo < 0 || hi > M_PI + 1e-12 || lo > hi)
        throw std::invalid_argument("interval must satisfy 0 <= lo <= hi <= 1 (units of pi)");
    return {lo, hi};
}

void write_atomic(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        return;
    }
    fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary);
        os << content;
        if (!os) throw std::runtime_error("cannot write " + path);
    }
    fs::rename(tmp, target);
}

struct Options {
    std::string curve, curve2;
    double x = 1e4;
    std::string interval = "0:1", interval2 = "0:1";
    u64 ell = 0;
    std::string conductor, conductor2;
    std::string format = "json";
    std::string out;
    unsigned threads = 0;
    std::string cache_dir;
    double A = 0.1, B = 0.35, Delta = 0.05;
    int r = 1;
    u64 M = 200;
    double N = 1;
    int degree = 1;
};

CurveQ load_curve(const std::string& text, const std::string& conductor_override) {
    CurveQ E = parse_curve(text);
    if (!conductor_override.empty()) {
        E.conductor = bigint(conductor_override);
        if (E.conductor < 1) throw std::invalid_argument("conductor must be >= 1");
        E.conductor_supplied = true;
    }
    return E;
}

// Cached trace table keyed by the minimal-model coefficient checksum; a
// stale or mismatching cache is discarded and rebuilt, and a short cache is
// extended in place.
TraceTable table_for(const CurveQ& E, double x, const Options& opt) {
    BuildOptions bo;
    bo.threads = opt.threads;
    if (opt.cache_dir.empty()) return build_trace_table(E, x, bo);
    fs::create_directories(opt.cache_dir);
    char name[32];
    std::snprintf(name, sizeof name, "%016llx.csv", static_cast<unsigned long long>(curve_checksum(E.key())));
    std::string path = (fs::path(opt.cache_dir) / name).string();
    std::optional<TraceTable> cached = load_trace_table_csv(path, E.key());
    TraceTable t;
    if (cached && cached->cutoff >= x) {
        t = std::move(*cached);
    } else if (cached) {
        t = std::move(*cached);
        extend_trace_table(t, E, x, bo);
        save_trace_table_csv(t, path);
    } else {
        t = build_trace_table(E, x, bo);
        save_trace_table_csv(t, path);
    }
    return t;
}

json report_json(const DiscrepancyReport& r) {
    return json{{"type", "discrepancy"},
                {"curve", r.label},
                {"x", r.x},
                {"interval", {r.a / M_PI, r.b / M_PI}},
                {"observed", r.observed},
                {"main_term", r.main_term},
                {"difference", r.difference},
                {"normalizer", r.normalizer},
                {"ratio", r.ratio},
                {"delta_used", r.delta_used},
                {"M_used", r.M_used},
                {"in_regime", r.in_regime},
                {"conductor_mode", r.conductor_supplied ? "supplied" : "approximated"},
                {"cm_warning", r.cm_warning},
                {"bad_primes_dropped", r.bad_dropped}};
}

json report_json(const JointDiscrepancyReport& r) {
    return json{{"type", "joint-discrepancy"},
                {"curve1", r.label1},
                {"curve2", r.label2},
                {"x", r.x},
                {"interval1", {r.a1 / M_PI, r.b1 / M_PI}},
                {"interval2", {r.a2 / M_PI, r.b2 / M_PI}},
                {"observed", r.observed},
                {"main_term", r.main_term},
                {"difference", r.difference},
                {"normalizer", r.normalizer},
                {"ratio", r.ratio},
                {"delta_used", r.delta_used},
                {"M_used", r.M_used},
                {"in_regime", r.in_regime},
                {"conductor_mode", r.conductor_supplied ? "supplied" : "approximated"},
                {"cm_warning", r.cm_warning},
                {"bad_primes_dropped", r.bad_dropped}};
}

json result_json(const DistinguishResult& r) {
    json j{{"type", "distinguish"},
           {"criterion", r.criterion},
           {"searched_to", r.searched_to},
           {"bound_value", r.bound_value}};
    if (r.found) {
        j["p_star"] = r.p_star;
        j["a_p"] = {r.a_p1, r.a_p2};
        j["within_bound"] = r.within_bound;
    } else {
        j["p_star"] = "not found <= " + fmt_double(r.searched_to);
    }
    return j;
}

std::string csv_summary(const DiscrepancyReport& r) {
    std::ostringstream os;
    os << "x,observed,main,diff,ratio\n"
       << fmt_double(r.x) << ',' << r.observed << ',' << fmt_double(r.main_term) << ','
       << fmt_double(r.difference) << ',' << fmt_double(r.ratio) << "\n";
    return os.str();
}

int run(int argc, char** argv) {
    CLI::App app{"Frobenius-angle statistics and effective Sato-Tate checks for rational elliptic curves"};
    app.require_subcommand(1);
    Options o;

    auto add_common = [&](CLI::App* sub, bool two_curves) {
        sub->add_option("--curve", o.curve, "curve: a1,a2,a3,a4,a6 or a4,a6")->required();
        sub->add_option("--x", o.x, "prime cutoff");
        sub->add_option("--conductor", o.conductor, "conductor override for --curve");
        sub->add_option("--format", o.format, "csv|json")->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--out", o.out, "output path (default stdout)");
        sub->add_option("--threads", o.threads, "worker threads for table builds");
        sub->add_option("--cache-dir", o.cache_dir, "trace-table cache directory");
        if (two_curves) {
            sub->add_option("--curve2", o.curve2, "second curve")->required();
            sub->add_option("--conductor2", o.conductor2, "conductor override for --curve2");
        }
    };

    CLI::App* ap = app.add_subcommand("ap", "trace of Frobenius table");
    add_common(ap, false);
    CLI::App* angles = app.add_subcommand("angles", "Frobenius angles table");
    add_common(angles, false);

    CLI::App* kc = app.add_subcommand("kernel-check", "audit kernel Fourier coefficients: CSV m,a_m,b_m,bound");
    kc->add_option("--A", o.A, "window start (period-1 circle)")->required();
    kc->add_option("--B", o.B, "window end")->required();
    kc->add_option("--delta", o.Delta, "smoothing width")->required();
    kc->add_option("--r", o.r, "smoothing order");
    kc->add_option("--M", o.M, "largest coefficient index");
    kc->add_option("--out", o.out, "output path (default stdout)");

    CLI::App* disc = app.add_subcommand("discrepancy", "single-curve discrepancy report");
    add_common(disc, false);
    disc->add_option("--interval", o.interval, "interval lo:hi in units of pi");

    CLI::App* joint = app.add_subcommand("joint", "two-curve joint discrepancy report");
    add_common(joint, true);
    joint->add_option("--interval", o.interval, "interval for curve 1 (units of pi)");
    joint->add_option("--interval2", o.interval2, "interval for curve 2 (units of pi)");

    CLI::App* dist = app.add_subcommand("distinguish", "smallest distinguishing primes for a curve pair");
    add_common(dist, true);
    dist->add_option("--ell", o.ell, "auxiliary prime for the mod-ell criterion");

    CLI::App* bounds = app.add_subcommand("bounds", "balancing parameters (Delta, M) at a given x");
    bounds->add_option("--x", o.x, "cutoff")->required();
    bounds->add_option("--N", o.N, "conductor (product, for pairs)");
    bounds->add_option("--degree", o.degree, "field degree [K:Q]");
    bounds->add_option("--out", o.out, "output path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (app.exit(e) == 0) return 0;
        json err{{"error", "argument parsing failed"}, {"detail", e.what()}};
        std::cerr << err.dump() << "\n";
        return 2;
    }

    if (ap->parsed() || angles->parsed()) {
        CurveQ E = load_curve(o.curve, o.conductor);
        TraceTable t = table_for(E, o.x, o);
        bool with_angles = angles->parsed();
        if (o.format == "csv") {
            std::ostringstream os;
            os << (with_angles ? "p,reduction,a_p,theta_p\n" : "p,reduction,a_p\n");
            for (const TraceRecord& r : t.records) {
                os << r.p << ',' << (r.good ? "good" : "bad") << ',';
                if (r.good) os << r.a_p;
                if (with_angles) {
                    os << ',';
                    if (r.good) os << fmt_double(r.theta);
                }
                os << "\n";
            }
            write_atomic(o.out, os.str());
        } else {
            json rows = json::array();
            for (const TraceRecord& r : t.records) {
                json row{{"p", r.p}, {"reduction", r.good ? "good" : "bad"}};
                if (r.good) {
                    row["a_p"] = r.a_p;
                    if (with_angles) row["theta_p"] = r.theta;
                }
                rows.push_back(std::move(row));
            }
            json outj{{"type", with_angles ? "angles" : "ap"}, {"curve", E.key()}, {"x", o.x}, {"records", rows}};
            write_atomic(o.out, outj.dump(2) + "\n");
        }
        return 0;
    }

    if (kc->parsed()) {
        KernelParams k = validate_params(o.A, o.B, o.Delta, o.r);
        std::ostringstream os;
        os << "m,a_m,b_m,bound\n";
        for (u64 m = 0; m <= o.M; ++m) {
            FourierCoefficient c = fourier_coefficient(k, m);
            os << m << ',' << fmt_double(c.a) << ',' << fmt_double(c.b) << ','
               << fmt_double(coefficient_bound(k, m)) << "\n";
        }
        write_atomic(o.out, os.str());
        return 0;
    }

    if (disc->parsed()) {
        CurveQ E = load_curve(o.curve, o.conductor);
        auto [a, b] = parse_interval(o.interval);
        TraceTable t = table_for(E, o.x, o);
        DiscrepancyReport r = discrepancy_report(t, E, a, b, o.x);
        write_atomic(o.out, o.format == "csv" ? csv_summary(r) : report_json(r).dump(2) + "\n");
        return 0;
    }

    if (joint->parsed()) {
        CurveQ E1 = load_curve(o.curve, o.conductor);
        CurveQ E2 = load_curve(o.curve2, o.conductor2);
        auto [a1, b1] = parse_interval(o.interval);
        auto [a2, b2] = parse_interval(o.interval2);
        TraceTable t1 = table_for(E1, o.x, o);
        TraceTable t2 = table_for(E2, o.x, o);
        JointDiscrepancyReport r = joint_discrepancy_report(t1, t2, E1, E2, a1, b1, a2, b2, o.x);
        write_atomic(o.out, report_json(r).dump(2) + "\n");
        return 0;
    }

    if (dist->parsed()) {
        CurveQ E1 = load_curve(o.curve, o.conductor);
        CurveQ E2 = load_curve(o.curve2, o.conductor2);
        TraceTable t1 = table_for(E1, o.x, o);
        TraceTable t2 = table_for(E2, o.x, o);
        std::ostringstream os;
        os << result_json(find_unequal(t1, t2, E1, E2)).dump() << "\n";
        os << result_json(find_opposite_sign(t1, t2, E1, E2)).dump() << "\n";
        if (o.ell) os << result_json(find_mod_l(t1, t2, E1, E2, o.ell)).dump() << "\n";
        write_atomic(o.out, os.str());
        return 0;
    }

    if (bounds->parsed()) {
        BalancingParams s = single_params(o.x, o.N, o.degree);
        BalancingParams j = joint_params(o.x, o.N, o.degree);
        BalancingParams d = distinguish_params(o.x, o.N, o.degree);
        json outj{{"type", "bounds"},
                  {"x", o.x},
                  {"N", o.N},
                  {"degree", o.degree},
                  {"single", {{"Delta", s.Delta}, {"M", s.M}, {"in_regime", s.in_regime}}},
                  {"joint", {{"Delta", j.Delta}, {"M", j.M}, {"in_regime", j.in_regime}}},
                  {"distinguish", {{"Delta", d.Delta}, {"M", d.M}, {"in_regime", d.in_regime}}}};
        write_atomic(o.out, outj.dump(2) + "\n");
        return 0;
    }

    return 2;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const std::invalid_argument& e) {
        std::cerr << json{{"error", "validation"}, {"detail", e.what()}}.dump() << "\n";
        return 2;
    } catch (const std::length_error& e) {
        std::cerr << json{{"error", "validation"}, {"detail", e.what()}}.dump() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << json{{"error", "computation"}, {"detail", e.what()}}.dump() << "\n";
        return 3;
    }
}
