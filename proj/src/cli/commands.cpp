#include "spt/bounds.hpp"
#include "spt/cli.hpp"
#include "spt/matrix_io.hpp"
#include "spt/shift.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <ostream>
#include <thread>

namespace spt::cli {

namespace {

struct Task {
    std::size_t index{0};  // stream id for trial_rng
    std::size_t dim{0};
    int n{1};
    int trial{0};
};

struct Instance {
    HermitianOperator h0;
    HermitianOperator v;
};

// dims x orders x trials in that nesting; a fixed matrix pair collapses dims and trials.
std::vector<Task> make_tasks(const ExperimentConfig& cfg, const std::vector<int>& orders) {
    std::vector<Task> tasks;
    const std::vector<std::size_t> dims = cfg.h0_file ? std::vector<std::size_t>{0} : cfg.dims;
    const int trials = cfg.h0_file ? 1 : cfg.trials;
    for (std::size_t dim : dims) {
        for (int n : orders) {
            for (int t = 0; t < trials; ++t) {
                tasks.push_back({tasks.size(), dim, n, t});
            }
        }
    }
    return tasks;
}

Interval spectrum_window(const ExperimentConfig& cfg) {
    const double half = cfg.spectrum_fraction * cfg.function.radius;
    return Interval::closed(cfg.function.center - half, cfg.function.center + half);
}

Instance draw(const ExperimentConfig& cfg, const Task& task) {
    if (cfg.h0_file) {
        auto h0 = load_hermitian(*cfg.h0_file);
        auto v = load_hermitian(*cfg.v_file);
        if (h0.dim() != v.dim()) {
            throw ConfigError("h0_file and v_file have different dimensions");
        }
        return {h0, v};
    }
    auto rng = trial_rng(cfg.seed, task.index);
    auto h0 = random_hermitian(rng, task.dim, spectrum_window(cfg));
    auto v = random_perturbation(rng, task.dim).scaled(cfg.v_norm);
    return {h0, v};
}

// Runs fn(i) for i < count on `jobs` threads; results land at their own index.
template <typename R, typename Fn>
std::vector<R> run_pool(std::size_t count, int jobs, Fn fn) {
    std::vector<R> out(count);
    if (jobs <= 0) {
        jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    }
    const auto workers = std::min<std::size_t>(static_cast<std::size_t>(jobs), std::max<std::size_t>(count, 1));
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto work = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                out[i] = fn(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) {
                    error = std::current_exception();
                }
            }
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back(work);
        }
        for (auto& t : pool) {
            t.join();
        }
    }
    if (error) {
        std::rethrow_exception(error);
    }
    return out;
}

std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::filesystem::path out_path(const ExperimentConfig& cfg, const std::string& name) {
    std::filesystem::create_directories(cfg.out_dir);
    return std::filesystem::path(cfg.out_dir) / name;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    out << text;
}

int verdict(std::size_t failures) { return failures == 0 ? kPass : kFail; }

ScalarFunction build_function(const ExperimentConfig& cfg) { return cfg.function.build(); }

// ---------------------------------------------------------------------------

struct ExpandRow {
    Task task;
    ExpansionReport report;
    double identity_residual{0.0};
    double operator_residual{0.0};
    bool pass{false};
};

}  // namespace

int cmd_expand(const ExperimentConfig& cfg, int jobs, std::ostream& log) {
    const auto f = build_function(cfg);
    const auto tasks = make_tasks(cfg, cfg.orders);
    const double tol = cfg.tol("identity");
    const auto rows = run_pool<ExpandRow>(tasks.size(), jobs, [&](std::size_t i) {
        const auto inst = draw(cfg, tasks[i]);
        ExpandRow row{tasks[i], expand(f, inst.h0, inst.v, tasks[i].n)};
        row.task.dim = inst.h0.dim();
        const auto& r = row.report;
        double sum = r.base_trace + r.remainder_trace;
        for (double t : r.terms) {
            sum += t;
        }
        const double scale = 1.0 + std::abs(r.base_trace) + std::abs(r.perturbed_trace);
        row.identity_residual = std::abs(r.perturbed_trace - sum);
        row.operator_residual = std::abs(r.operator_remainder_trace - r.remainder_trace);
        row.pass = row.identity_residual <= tol * scale && row.operator_residual <= tol * scale;
        return row;
    });

    std::string csv =
        "seed,trial,dim,n,base_trace,perturbed_trace,remainder_trace,operator_remainder_trace,"
        "operator_remainder_trace_norm,identity_residual,operator_residual,pass\n";
    auto reports = nlohmann::json::array();
    std::size_t failures = 0;
    for (const auto& row : rows) {
        const auto& r = row.report;
        csv += std::to_string(cfg.seed) + "," + std::to_string(row.task.trial) + "," + std::to_string(row.task.dim) +
               "," + std::to_string(r.n) + "," + num(r.base_trace) + "," + num(r.perturbed_trace) + "," +
               num(r.remainder_trace) + "," + num(r.operator_remainder_trace) + "," +
               num(r.operator_remainder_trace_norm) + "," + num(row.identity_residual) + "," +
               num(row.operator_residual) + "," + (row.pass ? "1" : "0") + "\n";
        reports.push_back({{"seed", cfg.seed},
                           {"trial", row.task.trial},
                           {"dim", row.task.dim},
                           {"n", r.n},
                           {"base_trace", r.base_trace},
                           {"perturbed_trace", r.perturbed_trace},
                           {"terms", r.terms},
                           {"remainder_trace", r.remainder_trace},
                           {"operator_remainder_trace", r.operator_remainder_trace},
                           {"operator_remainder_trace_norm", r.operator_remainder_trace_norm},
                           {"pass", row.pass}});
        failures += row.pass ? 0 : 1;
    }
    write_text(out_path(cfg, "expand.csv"), csv);
    write_text(out_path(cfg, "expand.json"), reports.dump(2) + "\n");
    log << "expand: " << rows.size() - failures << "/" << rows.size() << " trials pass the identities\n";
    return verdict(failures);
}

// ---------------------------------------------------------------------------

namespace {

struct SweepRow {
    Task task;
    std::vector<double> remainders;
    std::vector<double> bound_compact;
    std::vector<double> bound_hs;
    double slope{std::nan("")};
    std::string note;
    bool bounds_pass{true};
};

}  // namespace

int cmd_sweep(const ExperimentConfig& cfg, int jobs, std::ostream& log) {
    if (cfg.epsilon_grid.empty()) {
        throw ConfigError("sweep: epsilon_grid is empty");
    }
    const auto f = build_function(cfg);
    std::map<int, SignedConstants> signed_by_n;
    std::map<int, double> hs_by_n;
    for (int n : cfg.orders) {
        signed_by_n.emplace(n, signed_constants(f, n));
        hs_by_n[n] = hs_constant(f, n);
    }
    const auto tasks = make_tasks(cfg, cfg.orders);
    const auto rows = run_pool<SweepRow>(tasks.size(), jobs, [&](std::size_t i) {
        const auto inst = draw(cfg, tasks[i]);
        SweepRow row;
        row.task = tasks[i];
        row.task.dim = inst.h0.dim();
        const int n = tasks[i].n;
        for (double eps : cfg.epsilon_grid) {
            const auto v = inst.v.scaled(eps);
            const auto compact = remainder_bound_compact(signed_by_n.at(n), f, inst.h0, v);
            const auto hs = remainder_bound_hs(hs_by_n.at(n), f, inst.h0, v, n);
            row.remainders.push_back(compact.lhs);
            row.bound_compact.push_back(compact.rhs);
            row.bound_hs.push_back(hs.rhs);
            row.bounds_pass = row.bounds_pass && compact.passed() && hs.passed();
        }
        try {
            row.slope = scaling_exponent(f, inst.h0, inst.v, n, cfg.epsilon_grid, cfg.noise_floor).slope;
        } catch (const InsufficientData& e) {
            row.note = e.what();
        }
        return row;
    });

    std::string csv = "seed,dim,n,epsilon,remainder_abs,bound_compact,bound_hs,slope,trial\n";
    std::size_t failures = 0;
    std::map<int, double> min_slope;
    for (const auto& row : rows) {
        for (std::size_t k = 0; k < cfg.epsilon_grid.size(); ++k) {
            csv += std::to_string(cfg.seed) + "," + std::to_string(row.task.dim) + "," + std::to_string(row.task.n) +
                   "," + num(cfg.epsilon_grid[k]) + "," + num(row.remainders[k]) + "," + num(row.bound_compact[k]) +
                   "," + num(row.bound_hs[k]) + "," + num(row.slope) + "," + std::to_string(row.task.trial) + "\n";
        }
        const bool slope_ok = !std::isnan(row.slope) && row.slope >= row.task.n - cfg.tol("slope");
        if (!slope_ok || !row.bounds_pass) {
            ++failures;
            log << "sweep: FAIL dim=" << row.task.dim << " n=" << row.task.n << " trial=" << row.task.trial
                << " slope=" << num(row.slope) << (row.bounds_pass ? "" : " (bound violated)")
                << (row.note.empty() ? "" : " " + row.note) << "\n";
        }
        auto& m = min_slope.try_emplace(row.task.n, INFINITY).first->second;
        m = std::isnan(row.slope) ? m : std::min(m, row.slope);
    }
    write_text(out_path(cfg, "sweep.csv"), csv);
    for (const auto& [n, s] : min_slope) {
        log << "sweep: n=" << n << " min slope " << num(s) << "\n";
    }
    log << "sweep: " << rows.size() - failures << "/" << rows.size() << " fits pass\n";
    return verdict(failures);
}

// ---------------------------------------------------------------------------

namespace {

struct CertifyRow {
    Task task;
    std::vector<BoundCertificate> certs;
};

// The a_n knob acts linearly through C; the scale knob multiplies every bound.
void apply_knobs(const ExperimentConfig& cfg, BoundCertificate& cert, std::int64_t an) {
    if (cfg.a_offset != 0 && (cert.kind == "compact" || cert.kind == "compact_remainder")) {
        cert.rhs *= static_cast<double>(an + cfg.a_offset) / static_cast<double>(an);
        cert.ingredients["a_offset"] = cfg.a_offset;
    }
    if (cfg.constant_scale != 1.0) {
        cert.rhs *= cfg.constant_scale;
        cert.ingredients["constant_scale"] = cfg.constant_scale;
    }
}

}  // namespace

int cmd_certify(const ExperimentConfig& cfg, int jobs, std::ostream& log) {
    const auto f = build_function(cfg);
    std::map<int, RootConstants> roots;
    std::map<int, SignedConstants> signed_by_n;
    std::map<int, double> hs_by_n;
    for (int n : cfg.orders) {
        try {
            roots.emplace(n, root_constants(f, n));
        } catch (const std::exception& e) {
            throw ConfigError(std::string("certify: the trace-norm bound needs a nonnegative function with "
                                          "closed dyadic roots: ") +
                              e.what());
        }
        signed_by_n.emplace(n, signed_constants(f, n));
        hs_by_n[n] = hs_constant(f, n);
    }
    const auto tasks = make_tasks(cfg, cfg.orders);
    const int first_order = cfg.orders.front();
    const auto rows = run_pool<CertifyRow>(tasks.size(), jobs, [&](std::size_t i) {
        const auto inst = draw(cfg, tasks[i]);
        CertifyRow row{tasks[i], {}};
        row.task.dim = inst.h0.dim();
        const int n = tasks[i].n;
        const std::int64_t an = a_sequence(n);
        const auto d0 = decompose(inst.h0);
        row.certs.push_back(compact_trace_norm_bound(roots.at(n), f, d0, inst.v.matrix()));
        row.certs.push_back(remainder_bound_compact(signed_by_n.at(n), f, inst.h0, inst.v));
        row.certs.push_back(remainder_bound_hs(hs_by_n.at(n), f, inst.h0, inst.v, n));
        if (n == first_order) {
            row.certs.push_back(eta_l1_bound_check(inst.h0, inst.v, default_window(inst.h0, inst.v)));
        }
        for (auto& c : row.certs) {
            apply_knobs(cfg, c, an);
        }
        return row;
    });

    auto out = nlohmann::json::array();
    std::map<std::string, std::pair<std::size_t, std::size_t>> tally;  // kind -> (passed, total)
    std::size_t failures = 0;
    for (const auto& row : rows) {
        auto certs = nlohmann::json::array();
        for (const auto& c : row.certs) {
            certs.push_back(c.to_json());
            auto& t = tally[c.kind];
            ++t.second;
            if (c.passed()) {
                ++t.first;
            } else {
                ++failures;
            }
        }
        out.push_back({{"seed", cfg.seed},
                       {"trial", row.task.trial},
                       {"dim", row.task.dim},
                       {"n", row.task.n},
                       {"certificates", certs}});
    }
    write_text(out_path(cfg, "certificates.json"), out.dump(2) + "\n");
    for (const auto& [kind, t] : tally) {
        log << "certify: " << kind << " " << t.first << "/" << t.second << " pass\n";
    }
    return verdict(failures);
}

// ---------------------------------------------------------------------------

namespace {

struct ShiftRow {
    Task task;
    Interval window;
    double first{0.0};
    double second{0.0};
    BoundCertificate eta_cert;
    nlohmann::json data;
};

}  // namespace

int cmd_shift(const ExperimentConfig& cfg, int jobs, std::ostream& log) {
    const auto f = build_function(cfg);
    const auto tasks = make_tasks(cfg, {2});
    const auto rows = run_pool<ShiftRow>(tasks.size(), jobs, [&](std::size_t i) {
        const auto inst = draw(cfg, tasks[i]);
        ShiftRow row;
        row.task = tasks[i];
        row.window = default_window(inst.h0, inst.v, f.support());
        row.task.dim = inst.h0.dim();
        row.first = first_order_check(f, inst.h0, inst.v, row.window);
        row.second = second_order_check(f, inst.h0, inst.v, row.window);
        row.eta_cert = eta_l1_bound_check(inst.h0, inst.v, row.window);
        row.data = shift_data(inst.h0, inst.v, row.window).to_json();
        return row;
    });

    auto out = nlohmann::json::array();
    std::size_t failures = 0;
    for (const auto& row : rows) {
        const bool pass = row.first <= cfg.tol("first_order") && row.second <= cfg.tol("second_order") &&
                          row.eta_cert.passed();
        failures += pass ? 0 : 1;
        out.push_back({{"seed", cfg.seed},
                       {"trial", row.task.trial},
                       {"dim", row.task.dim},
                       {"window", {row.window.lo, row.window.hi}},
                       {"first_order_residual", row.first},
                       {"second_order_residual", row.second},
                       {"eta_l1", row.eta_cert.to_json()},
                       {"shift", row.data},
                       {"pass", pass}});
    }
    write_text(out_path(cfg, "shift.json"), out.dump(2) + "\n");
    log << "shift: " << rows.size() - failures << "/" << rows.size() << " trials pass\n";
    return verdict(failures);
}

}  // namespace spt::cli
