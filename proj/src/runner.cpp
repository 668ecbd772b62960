#include "vweb/runner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>

#include "vweb/complexify.hpp"
#include "vweb/corpus.hpp"
#include "vweb/error.hpp"
#include "vweb/rng.hpp"
#include "vweb/web.hpp"

namespace vweb {

namespace {

using Clock = std::chrono::steady_clock;

// Runs fn(0..count-1) on worker_count() threads; any thrown exception is
// rethrown on the caller after all workers join.  Deterministic as long
// as fn(i) writes only to slot i of some preallocated output.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn) {
    const unsigned workers = std::min<std::size_t>(worker_count(), count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> cursor{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto body = [&] {
        for (;;) {
            const std::size_t i = cursor.fetch_add(1);
            if (i >= count) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(body);
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

Json points_json(const std::vector<ProjPoint>& pts) {
    Json arr = Json::array();
    for (const auto& p : pts) arr.push_back(p.str());
    return arr;
}

VeroneseCurve load_curve(const std::filesystem::path& path) {
    if (path.empty()) throw PreconditionError("no input curve given");
    return curve_from_json(read_json_file(path));
}

RunResult finish(const RunConfig& cfg, const std::function<RunResult(Json&)>& body) {
    const auto start = Clock::now();
    RunResult res;
    Json head;
    head["command"] = cfg.command;
    if (!cfg.curve_path.empty()) head["input"] = cfg.curve_path.string();
    head["seed"] = cfg.seed;
    try {
        res = body(head);
    } catch (const Error& e) {
        res.exit_code = 2;
        res.report = std::move(head);
        res.report["error"] = e.what();
    } catch (const std::exception& e) {
        res.exit_code = 2;
        res.report = std::move(head);
        res.report["error"] = e.what();
    }
    res.report["exit"] = res.exit_code;
    const double ms =
        std::chrono::duration<double, std::milli>(Clock::now() - start).count();
    res.report["volatile"] = Json{{"elapsed_ms", ms}};
    if (!cfg.out_path.empty()) {
        try {
            write_json_file(cfg.out_path, res.report);
        } catch (const Error& e) {
            res.exit_code = 2;
            res.report["error"] = e.what();
            res.report["exit"] = 2;
        }
    }
    return res;
}

// Deterministic parameter list 0, 1, -1, 2, -2, ... of the given size.
std::vector<ProjPoint> default_params(std::size_t count) {
    std::vector<ProjPoint> pts;
    pts.push_back(ProjPoint::finite(Rat(0)));
    for (long j = 1; pts.size() < count; ++j) {
        pts.push_back(ProjPoint::finite(rat(j)));
        if (pts.size() < count) pts.push_back(ProjPoint::finite(rat(-j)));
    }
    pts.resize(count);
    return pts;
}

std::vector<ProjPoint> draw_distinct_points(DetRng& rng, std::size_t count) {
    std::vector<ProjPoint> pts;
    while (pts.size() < count) {
        const ProjPoint q = rng.below(8) == 0 ? ProjPoint::infinity()
                                              : ProjPoint::finite(rng.small_rat(9, 4));
        if (std::find(pts.begin(), pts.end(), q) == pts.end()) pts.push_back(q);
    }
    return pts;
}

RunResult check_body(const RunConfig& cfg, Json& head) {
    const VeroneseCurve curve = load_curve(cfg.curve_path);
    head["mode"] = cfg.mode;
    IntegrabilityReport rep;
    if (cfg.mode == "full") {
        rep = check_full(curve);
    } else if (cfg.mode == "sparse") {
        rep = check_sparse(curve, cfg.points);
    } else if (cfg.mode == "naive") {
        const std::size_t needed = curve.n() * (curve.k() + 1) + 1;
        rep = check_naive(curve, cfg.points.empty() ? default_params(needed) : cfg.points);
    } else if (cfg.mode == "random") {
        rep = randomized_check(curve, cfg.samples, cfg.seed);
    } else {
        throw PreconditionError("unknown check mode '" + cfg.mode + "'");
    }
    Json inner = report_to_json(rep);
    RunResult res;
    res.exit_code = rep.passed() ? 0 : 1;
    res.report = std::move(head);
    res.report["report"] = std::move(inner);
    return res;
}

RunResult theorem_body(const RunConfig& cfg, Json& head) {
    const VeroneseCurve curve = load_curve(cfg.curve_path);
    head["trials"] = cfg.trials;
    const IntegrabilityReport full = check_full(curve);
    const bool full_pass = full.verdict == Verdict::IntegrableEverywhere;
    const std::size_t draw = curve.n() + 3;

    struct Trial {
        bool sparse_pass = false;
        std::vector<ProjPoint> points;
    };
    std::vector<Trial> trials(cfg.trials);
    parallel_for(cfg.trials, [&](std::size_t i) {
        DetRng rng(cfg.seed ^ (0x9e3779b97f4a7c15ULL * (i + 1)));
        Trial t;
        t.points = draw_distinct_points(rng, draw);
        t.sparse_pass = check_sparse(curve, t.points).passed();
        trials[i] = std::move(t);
    });

    unsigned sparse_passes = 0;
    Json disagreements = Json::array();
    for (std::size_t i = 0; i < trials.size(); ++i) {
        if (trials[i].sparse_pass) ++sparse_passes;
        if (trials[i].sparse_pass && !full_pass) {
            Json row;
            row["trial"] = i;
            row["points"] = points_json(trials[i].points);
            disagreements.push_back(std::move(row));
        }
    }
    RunResult res;
    res.exit_code = disagreements.empty() ? 0 : 1;
    res.report = std::move(head);
    res.report["full_verdict"] = verdict_str(full.verdict);
    res.report["sparse_passes"] = sparse_passes;
    res.report["disagreements"] = std::move(disagreements);
    return res;
}

RunResult complexify_body(const RunConfig& cfg, Json& head) {
    const VeroneseCurve curve = load_curve(cfg.curve_path);
    if (cfg.anchors.empty()) throw PreconditionError("no anchors given");
    const std::vector<ProjPoint> ts = cfg.sample_ts.empty()
                                          ? std::vector<ProjPoint>{ProjPoint::finite(Rat(0)),
                                                                   ProjPoint::finite(Rat(1)),
                                                                   ProjPoint::finite(Rat(-1)),
                                                                   ProjPoint::finite(Rat(5)),
                                                                   ProjPoint::infinity()}
                                          : cfg.sample_ts;
    head["anchors"] = points_json(cfg.anchors);
    head["sample_ts"] = points_json(ts);

    for (const auto& a : cfg.anchors)
        if (!check_at(curve, a))
            throw PreconditionError("curve is not integrable at anchor " + a.str());

    // The core construction wants finite anchors; an infinite one is
    // moved by the substitution t -> 1/(t - c) with c outside the anchor
    // set, and every reported parameter is mapped back afterwards.
    const bool has_infinite_anchor =
        std::any_of(cfg.anchors.begin(), cfg.anchors.end(),
                    [](const ProjPoint& p) { return p.is_infinity(); });
    Moebius normalize = Moebius::identity();
    if (has_infinite_anchor) {
        Rat c(0);
        auto taken = [&](const Rat& v) {
            return std::any_of(cfg.anchors.begin(), cfg.anchors.end(), [&](const ProjPoint& p) {
                return !p.is_infinity() && p.value() == v;
            });
        };
        while (taken(c)) c += 1;
        const Moebius shift = Moebius::of(Rat(1), Rat(0), -c, Rat(1));
        const Moebius swap = Moebius::of(Rat(0), Rat(1), Rat(1), Rat(0));
        normalize = shift.compose(swap);
        head["normalization"] = Json::array({normalize.a.get_str(), normalize.b.get_str(),
                                             normalize.c.get_str(), normalize.d.get_str()});
    } else {
        head["normalization"] = nullptr;
    }

    ComplexifyReport rep;
    if (has_infinite_anchor) {
        const Moebius back = normalize.inverse();
        std::vector<FormPencil> moved;
        moved.reserve(curve.pencils().size());
        for (const auto& p : curve.pencils()) moved.push_back(moebius_transform(p, back));
        const VeroneseCurve turned(curve.k(), curve.n(), curve.chart(), std::move(moved),
                                   curve.basepoint());
        std::vector<ProjPoint> anchors2, ts2;
        for (const auto& a : cfg.anchors) anchors2.push_back(normalize.apply(a));
        for (const auto& t : ts) ts2.push_back(normalize.apply(t));
        rep = check_complexification(turned, anchors2, ts2);
        // report parameters in the caller's coordinates
        rep.anchors = cfg.anchors;
        for (auto& item : rep.items)
            for (auto& entry : item) entry.t = back.apply(entry.t);
    } else {
        rep = check_complexification(curve, cfg.anchors, ts);
    }

    Json inner = complexify_report_to_json(rep);
    RunResult res;
    res.exit_code = rep.all_pass() ? 0 : 1;
    res.report = std::move(head);
    res.report["report"] = std::move(inner);
    return res;
}

std::vector<Poly> parse_poly_list(const ChartPtr& chart, const std::string& text,
                                  char separator) {
    std::vector<Poly> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find(separator, start);
        if (end == std::string::npos) end = text.size();
        out.push_back(poly_parse(chart, std::string_view(text).substr(start, end - start)));
        start = end + 1;
    }
    return out;
}

VeroneseCurve build_family(const RunConfig& cfg) {
    if (cfg.family == "flat") return gen_flat(cfg.k, cfg.n);

    const VeroneseCurve base =
        cfg.base_path.empty() ? gen_flat(cfg.k, cfg.n) : load_curve(cfg.base_path);
    const auto& chart = base.chart();

    if (cfg.family == "rescaled") {
        if (cfg.scale.empty())
            throw PreconditionError("rescaled family needs --scale");
        std::vector<std::vector<Poly>> rows;
        std::size_t start = 0;
        const std::string& text = cfg.scale;
        while (start <= text.size()) {
            std::size_t end = text.find(';', start);
            if (end == std::string::npos) end = text.size();
            rows.push_back(parse_poly_list(chart, text.substr(start, end - start), ','));
            start = end + 1;
        }
        return gen_rescaled(base, rows, cfg.seed);
    }
    if (cfg.family == "pullback") {
        if (cfg.map.empty()) throw PreconditionError("pullback family needs --map");
        return gen_pullback(base, parse_poly_list(chart, cfg.map, ','), cfg.seed);
    }
    if (cfg.family == "moebius") {
        if (cfg.matrix.empty()) throw PreconditionError("moebius family needs --matrix");
        std::vector<Rat> entries;
        std::size_t start = 0;
        while (start <= cfg.matrix.size()) {
            std::size_t end = cfg.matrix.find(',', start);
            if (end == std::string::npos) end = cfg.matrix.size();
            entries.push_back(rat_parse(cfg.matrix.substr(start, end - start)));
            start = end + 1;
        }
        if (entries.size() != 4)
            throw PreconditionError("--matrix needs four entries a,b,c,d");
        return gen_moebius(base, Moebius::of(entries[0], entries[1], entries[2], entries[3]),
                           cfg.seed);
    }
    if (cfg.family == "perturbed") {
        const std::string expr =
            cfg.beta.empty() ? chart->vars[chart->dim() - 1] : cfg.beta;
        DForm beta(chart, 1);
        const Poly coeff = poly_parse(chart, expr);
        if (cfg.beta_on >= chart->dim())
            throw PreconditionError("--beta-on index out of range");
        beta.add_term({cfg.beta_on}, coeff);
        return gen_perturbed(base, cfg.gen_points, cfg.pencil, beta, cfg.seed);
    }
    throw PreconditionError("unknown family '" + cfg.family + "'");
}

RunResult gen_body(const RunConfig& cfg, Json& head) {
    head["family"] = cfg.family;
    if (cfg.family == "corpus") {
        const auto curves = standard_corpus(cfg.seed);
        const auto entries = write_corpus(cfg.out_dir, curves);
        const std::string index_hash = json_hash(read_json_file(cfg.out_dir / "index.json"));
        RunResult res;
        res.exit_code = 0;
        res.report = std::move(head);
        res.report["out_dir"] = cfg.out_dir.string();
        res.report["count"] = entries.size();
        res.report["index_file"] = "index.json";
        res.report["index_hash"] = index_hash;
        return res;
    }

    const VeroneseCurve curve = build_family(cfg);
    const GroundTruth& truth = *curve.manifest();
    const std::string name = truth.generator + "_k" + std::to_string(curve.k()) + "_n" +
                             std::to_string(curve.n()) + "_s" + std::to_string(truth.seed);
    std::filesystem::create_directories(cfg.out_dir);
    const Json cj = curve_to_json(curve);
    const Json mj = manifest_to_json(truth);
    const std::string curve_file = name + ".curve.json";
    const std::string manifest_file = name + ".manifest.json";
    write_json_file(cfg.out_dir / curve_file, cj);
    write_json_file(cfg.out_dir / manifest_file, mj);

    RunResult res;
    res.exit_code = 0;
    res.report = std::move(head);
    res.report["k"] = curve.k();
    res.report["n"] = curve.n();
    res.report["name"] = name;
    res.report["out_dir"] = cfg.out_dir.string();
    res.report["curve_file"] = curve_file;
    res.report["manifest_file"] = manifest_file;
    res.report["curve_hash"] = json_hash(cj);
    res.report["manifest_hash"] = json_hash(mj);
    if (truth.locus_all)
        res.report["locus"] = "all";
    else
        res.report["locus"] = points_json(truth.locus);
    res.report["absorbed"] = truth.absorbed;
    return res;
}

} // namespace

unsigned worker_count() {
    if (const char* env = std::getenv("VWEB_WORKERS")) {
        char* end = nullptr;
        const unsigned long v = std::strtoul(env, &end, 10);
        if (end != env && *end == '\0' && v >= 1 && v <= 1024)
            return static_cast<unsigned>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
}

RunResult cmd_check(const RunConfig& cfg) {
    return finish(cfg, [&](Json& head) { return check_body(cfg, head); });
}

RunResult cmd_theorem(const RunConfig& cfg) {
    return finish(cfg, [&](Json& head) { return theorem_body(cfg, head); });
}

RunResult cmd_complexify(const RunConfig& cfg) {
    return finish(cfg, [&](Json& head) { return complexify_body(cfg, head); });
}

RunResult cmd_gen(const RunConfig& cfg) {
    return finish(cfg, [&](Json& head) { return gen_body(cfg, head); });
}

RunResult run_command(const RunConfig& cfg) {
    if (cfg.command == "check") return cmd_check(cfg);
    if (cfg.command == "theorem") return cmd_theorem(cfg);
    if (cfg.command == "complexify") return cmd_complexify(cfg);
    if (cfg.command == "gen") return cmd_gen(cfg);
    RunResult res;
    res.exit_code = 2;
    res.report["command"] = cfg.command;
    res.report["error"] = "unknown command '" + cfg.command + "'";
    res.report["exit"] = 2;
    return res;
}

} // namespace vweb
